// Test double for the external scorer protocol.
//
// Modes: echo, ramp (valence = id/10 mod 1, arousal = -valence), range
// (valence 1.2), badid, error, hang, silent, badhello, exit3, garbage.

#include <chrono>
#include <iostream>
#include <string>
#include <thread>

#include "json.hpp"

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "echo";
  if (mode == "silent") return 1;
  if (mode == "badhello") {
    std::cout << R"({"protocol":"other","version":1})" << std::endl;
  } else {
    std::cout << R"({"protocol":"poemotion-scorer","version":1})" << std::endl;
  }

  std::string line;
  while (std::getline(std::cin, line)) {
    const auto req = nlohmann::json::parse(line);
    const std::uint64_t id = req.at("id").get<std::uint64_t>();
    nlohmann::json resp = {{"id", id}};
    if (mode == "hang") {
      std::this_thread::sleep_for(std::chrono::seconds(30));
      return 0;
    } else if (mode == "garbage") {
      std::cout << "not json" << std::endl;
      continue;
    } else if (mode == "range") {
      resp["valence"] = 1.2;
      resp["arousal"] = 0.0;
    } else if (mode == "badid") {
      resp["id"] = id + 1;
      resp["valence"] = 0.0;
      resp["arousal"] = 0.0;
    } else if (mode == "error") {
      resp = {{"id", id}, {"error", "model failed"}};
    } else if (mode == "ramp") {
      const double v = static_cast<double>(id % 10) / 10.0;
      resp["valence"] = v;
      resp["arousal"] = -v;
    } else {
      resp["valence"] = 0.0;
      resp["arousal"] = 0.0;
    }
    std::cout << resp.dump() << std::endl;
  }
  return mode == "exit3" ? 3 : 0;
}

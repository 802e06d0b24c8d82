#pragma once

// End-to-end analysis: sentences -> segment pool -> TextRank selection ->
// valence/arousal -> quadrant and intensity -> stroke match -> SVG + report.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "poemotion/compose.hpp"
#include "poemotion/conllu.hpp"
#include "poemotion/emotion.hpp"
#include "poemotion/error.hpp"
#include "poemotion/extract.hpp"
#include "poemotion/rank.hpp"
#include "poemotion/scorer_client.hpp"
#include "poemotion/strokedb.hpp"
#include "poemotion/text_ingest.hpp"

namespace poemotion {

inline constexpr int kReportVersion = 1;
inline constexpr std::size_t kDefaultPerQuadrant = 64;

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Inputs disagree with each other (e.g. parse count vs sentence count).
class InputError : public Error {
 public:
  using Error::Error;
};

enum class ScorerKind { Lexicon, External };

struct PipelineConfig {
  std::string input_path = "-";  // "-" reads standard input
  std::optional<std::string> conllu_path;
  std::optional<std::string> lexicon_path;
  ScorerKind scorer = ScorerKind::Lexicon;
  std::optional<std::string> scorer_cmd;
  double scorer_timeout_s = 30.0;
  double keep_ratio = 0.5;
  double damping = 0.85;
  // Without a database directory one is built next to the output with
  // db_seed = seed.
  std::optional<std::string> db_dir;
  std::string out_path;
  std::optional<std::string> report_path;  // default: out_path with .json extension
  std::uint64_t seed = 42;

  void validate() const {
    if (scorer == ScorerKind::Lexicon && !lexicon_path)
      throw ConfigError("--scorer lexicon requires --lexicon");
    if (scorer == ScorerKind::External && !scorer_cmd)
      throw ConfigError("--scorer external requires --scorer-cmd");
    if (out_path.empty()) throw ConfigError("--out is required");
    if (!(keep_ratio > 0.0 && keep_ratio <= 1.0)) throw ConfigError("--keep-ratio must lie in (0, 1]");
    if (!(damping > 0.0 && damping < 1.0)) throw ConfigError("--damping must lie in (0, 1)");
    if (!(scorer_timeout_s > 0.0)) throw ConfigError("--scorer-timeout must be positive");
  }

  std::filesystem::path resolved_report_path() const {
    if (report_path) return *report_path;
    std::filesystem::path p(out_path);
    return p.replace_extension(".json");
  }

  std::filesystem::path resolved_db_dir() const {
    if (db_dir) return *db_dir;
    std::filesystem::path p(out_path);
    return p.parent_path() / (p.stem().string() + ".strokes");
  }
};

struct PipelineOutput {
  std::string svg;
  std::string report;
  Composition composition;
  std::size_t pool_size = 0;
};

namespace detail {

inline std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  return read_file(path);
}

inline std::vector<SemanticSegment> build_pool(const Document& doc,
                                               const std::optional<std::string>& conllu_path) {
  std::vector<SemanticSegment> pool;
  if (conllu_path) {
    std::ifstream in(*conllu_path, std::ios::binary);
    if (!in) throw IoError("cannot read " + *conllu_path);
    const auto parses = parse_conllu(in);
    if (parses.size() != doc.sentences.size())
      throw InputError(*conllu_path + " holds " + std::to_string(parses.size()) +
                       " sentences but the poem segments into " +
                       std::to_string(doc.sentences.size()));
    for (std::size_t i = 0; i < parses.size(); ++i)
      for (auto& seg : extract_segments(parses[i], i)) pool.push_back(std::move(seg));
  } else {
    for (const auto& s : doc.sentences) pool.push_back(whole_sentence_segment(s));
  }
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i].id = i;
  return pool;
}

inline nlohmann::ordered_json segment_json(const SemanticSegment& s, double rank_score) {
  nlohmann::ordered_json j;
  j["id"] = s.id;
  j["text"] = s.text;
  j["kind"] = std::string(to_string(s.kind));
  j["sentence_id"] = s.sentence_id;
  j["token_ids"] = s.token_ids;
  j["rank_score"] = rank_score;
  return j;
}

}  // namespace detail

/// Runs the whole analysis without writing the SVG or report. May build the
/// stroke database when the config names none and it does not exist yet.
inline PipelineOutput analyze(const PipelineConfig& config) {
  config.validate();

  const std::string text = detail::read_input(config.input_path);
  Document doc = segment_sentences(text);
  std::vector<SemanticSegment> pool = detail::build_pool(doc, config.conllu_path);
  if (pool.empty()) throw EmptyPool("no semantic segments found in the input");

  const SegmentGraph graph = build_graph(pool);
  const TextRankResult ranking = textrank_scores(graph, {.damping = config.damping});
  RankedPool ranked;
  for (std::size_t i = 0; i < pool.size(); ++i) ranked.push_back({pool[i], ranking.scores[i]});
  std::vector<ScoredSegment> selected = select_top(ranked, config.keep_ratio);
  std::vector<std::size_t> rank_of(pool.size(), 0);
  for (std::size_t r = 0; r < selected.size(); ++r) rank_of[selected[r].segment.id] = r + 1;
  std::sort(selected.begin(), selected.end(), [](const ScoredSegment& a, const ScoredSegment& b) {
    return a.segment.id < b.segment.id;
  });

  std::vector<VadValue> vad;
  if (config.scorer == ScorerKind::Lexicon) {
    std::ifstream in(*config.lexicon_path, std::ios::binary);
    if (!in) throw IoError("cannot read lexicon " + *config.lexicon_path);
    const VadLexicon lexicon = load_lexicon(in);
    for (const auto& s : selected) vad.push_back(score_segment_lexicon(s.segment, lexicon));
  } else {
    std::vector<SemanticSegment> segs;
    for (const auto& s : selected) segs.push_back(s.segment);
    vad = score_segments_external(segs, *config.scorer_cmd, config.scorer_timeout_s);
  }

  const std::filesystem::path db_dir = config.resolved_db_dir();
  StrokeIndex index;
  if (!config.db_dir && !std::filesystem::exists(db_dir / "index.json"))
    index = build_database(kDefaultPerQuadrant, config.seed, db_dir);
  else
    index = load_database(db_dir);

  PipelineOutput out;
  out.pool_size = pool.size();
  Composition& comp = out.composition;
  comp.title = config.input_path == "-" ? std::string("stdin")
                                        : std::filesystem::path(config.input_path).stem().string();
  for (std::size_t i = 0; i < selected.size(); ++i) {
    Annotation a;
    a.segment = selected[i].segment;
    a.score = make_emotion_score(vad[i].valence, vad[i].arousal);
    if (a.score.quadrant != Quadrant::Neutral) {
      a.stroke = match_stroke(index, a.score.quadrant, a.score.normalized_intensity);
      a.outline = load_outline(db_dir, *a.stroke);
    }
    comp.annotations.push_back(std::move(a));
  }
  comp.poem = std::move(doc);
  out.svg = compose_svg(comp);

  nlohmann::ordered_json report;
  report["version"] = kReportVersion;
  report["input"] = config.input_path;
  report["seed"] = std::to_string(config.seed);
  report["scorer"] = config.scorer == ScorerKind::Lexicon ? "lexicon" : "external";
  report["keep_ratio"] = config.keep_ratio;
  report["damping"] = config.damping;
  report["sentence_count"] = comp.poem.sentences.size();
  report["pool_size"] = pool.size();
  report["selected_count"] = selected.size();
  report["textrank"] = {{"iterations", ranking.iterations},
                        {"converged", ranking.converged},
                        {"last_delta", ranking.last_delta}};
  report["stroke_db"] = {{"dir", db_dir.string()},
                         {"db_seed", std::to_string(index.db_seed)},
                         {"records", index.records.size()}};
  report["pool"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < pool.size(); ++i)
    report["pool"].push_back(detail::segment_json(pool[i], ranking.scores[i]));

  std::size_t stroked = 0;
  report["segments"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const Annotation& a = comp.annotations[i];
    auto j = detail::segment_json(a.segment, selected[i].score);
    j["rank"] = rank_of[a.segment.id];
    j["valence"] = a.score.valence;
    j["arousal"] = a.score.arousal;
    j["intensity"] = a.score.intensity;
    j["normalized_intensity"] = a.score.normalized_intensity;
    j["quadrant"] = std::string(to_string(a.score.quadrant));
    if (a.stroke) {
      ++stroked;
      j["stroke_id"] = a.stroke->id;
      j["stroke_normalized_complexity"] = a.stroke->normalized_complexity;
    } else {
      j["stroke_id"] = nullptr;
      j["stroke_normalized_complexity"] = nullptr;
    }
    report["segments"].push_back(std::move(j));
  }
  report["stroked_count"] = stroked;
  out.report = report.dump(2) + "\n";
  return out;
}

/// analyze() followed by writing the SVG and the JSON report. Nothing is
/// written when analysis fails.
inline PipelineOutput run_pipeline(const PipelineConfig& config) {
  PipelineOutput out = analyze(config);
  detail::write_file(config.out_path, out.svg);
  detail::write_file(config.resolved_report_path(), out.report);
  return out;
}

/// Process exit status for a pipeline failure.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ScorerError*>(&e)) return 3;
  if (dynamic_cast<const EmptyPool*>(&e)) return 4;
  if (dynamic_cast<const Error*>(&e)) return 2;
  return 1;
}

}  // namespace poemotion

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "poemotion/pipeline.hpp"
#include "test_util.hpp"

namespace poemotion {
namespace {

using testing::count_occurrences;
using testing::kDataDir;
using testing::slurp;
using testing::spit;
using testing::TempDir;

const std::string kCli = POEMOTION_CLI;
const std::string kFake = POEMOTION_FAKE_SCORER;

PipelineConfig fixture_config(const TempDir& dir) {
  PipelineConfig cfg;
  cfg.input_path = (kDataDir / "poem.txt").string();
  cfg.conllu_path = (kDataDir / "poem.conllu").string();
  cfg.lexicon_path = (kDataDir / "lexicon.tsv").string();
  cfg.out_path = (dir / "poem.svg").string();
  cfg.seed = 42;
  return cfg;
}

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Pipeline, FixtureRunMatchesReport) {
  TempDir dir;
  const auto out = run_pipeline(fixture_config(dir));
  const auto report = nlohmann::json::parse(slurp(dir / "poem.json"));
  EXPECT_EQ(report["sentence_count"], 10);
  EXPECT_EQ(report["pool_size"], out.pool_size);
  const std::size_t pool = report["pool_size"];
  EXPECT_EQ(report["selected_count"], keep_count(pool, 0.5));
  std::size_t non_neutral = 0;
  for (const auto& s : report["segments"]) {
    if (s["quadrant"] != "neutral") {
      ++non_neutral;
      EXPECT_FALSE(s["stroke_id"].is_null());
    } else {
      EXPECT_TRUE(s["stroke_id"].is_null());
    }
  }
  EXPECT_GT(non_neutral, 0u);
  EXPECT_EQ(count_occurrences(slurp(dir / "poem.svg"), "<path "), non_neutral);
  EXPECT_EQ(report["stroked_count"], non_neutral);
  EXPECT_TRUE(std::filesystem::exists(dir / "poem.strokes" / "index.json"));
}

TEST(Pipeline, ByteIdenticalRuns) {
  TempDir a;
  auto cfg = fixture_config(a);
  run_pipeline(cfg);
  const std::string svg1 = slurp(a / "poem.svg"), rep1 = slurp(a / "poem.json");
  run_pipeline(cfg);
  EXPECT_EQ(slurp(a / "poem.svg"), svg1);
  EXPECT_EQ(slurp(a / "poem.json"), rep1);
}

TEST(Pipeline, KeepEverything) {
  TempDir dir;
  auto cfg = fixture_config(dir);
  cfg.keep_ratio = 1.0;
  const auto out = run_pipeline(cfg);
  EXPECT_EQ(out.composition.annotations.size(), out.pool_size);
}

TEST(Pipeline, SegmentsInDocumentOrder) {
  TempDir dir;
  const auto out = run_pipeline(fixture_config(dir));
  const auto& anns = out.composition.annotations;
  for (std::size_t i = 1; i < anns.size(); ++i)
    EXPECT_LT(anns[i - 1].segment.id, anns[i].segment.id);
}

TEST(Pipeline, PlainTextFallback) {
  TempDir dir;
  auto cfg = fixture_config(dir);
  cfg.conllu_path.reset();
  const auto out = analyze(cfg);
  EXPECT_EQ(out.pool_size, 10u);
  for (const auto& a : out.composition.annotations) EXPECT_EQ(a.segment.kind, SegmentKind::NounPhrase);
}

TEST(Pipeline, ParseCountMismatch) {
  TempDir dir;
  auto cfg = fixture_config(dir);
  spit(dir / "short.txt", "One line only.\n");
  cfg.input_path = (dir / "short.txt").string();
  EXPECT_THROW(analyze(cfg), InputError);
}

TEST(Pipeline, EmptyPoem) {
  TempDir dir;
  auto cfg = fixture_config(dir);
  cfg.conllu_path.reset();
  spit(dir / "empty.txt", "\n\n");
  cfg.input_path = (dir / "empty.txt").string();
  EXPECT_THROW(analyze(cfg), EmptyPool);
}

TEST(Pipeline, ExternalEchoScorerGivesNeutralRows) {
  TempDir dir;
  auto cfg = fixture_config(dir);
  cfg.scorer = ScorerKind::External;
  cfg.scorer_cmd = kFake + " echo";
  const auto out = analyze(cfg);
  for (const auto& a : out.composition.annotations) EXPECT_FALSE(a.stroke);
  EXPECT_EQ(count_occurrences(out.svg, "<path "), 0u);
}

TEST(Pipeline, ConfigInvariants) {
  PipelineConfig cfg;
  cfg.out_path = "x.svg";
  EXPECT_THROW(cfg.validate(), ConfigError);  // lexicon scorer without a lexicon
  cfg.scorer = ScorerKind::External;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.scorer_cmd = "true";
  EXPECT_NO_THROW(cfg.validate());
  cfg.keep_ratio = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Cli, AnalyzeWritesOutputs) {
  TempDir dir;
  const std::string args = "analyze --input " + (kDataDir / "poem.txt").string() + " --conllu " +
                           (kDataDir / "poem.conllu").string() + " --lexicon " +
                           (kDataDir / "lexicon.tsv").string() + " --out " +
                           (dir / "o.svg").string() + " --report " + (dir / "r.json").string() +
                           " --seed 42";
  EXPECT_EQ(run(args), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "o.svg"));
  EXPECT_TRUE(std::filesystem::exists(dir / "r.json"));
}

TEST(Cli, MissingLexiconExits2WithoutOutput) {
  TempDir dir;
  EXPECT_EQ(run("analyze --input " + (kDataDir / "poem.txt").string() +
                " --lexicon /nonexistent.tsv --out " + (dir / "o.svg").string()),
            2);
  EXPECT_FALSE(std::filesystem::exists(dir / "o.svg"));
  EXPECT_EQ(run("analyze --input " + (kDataDir / "poem.txt").string() + " --out " +
                (dir / "o.svg").string()),
            2);
}

TEST(Cli, ScorerFailureExits3) {
  TempDir dir;
  EXPECT_EQ(run("analyze --input " + (kDataDir / "poem.txt").string() +
                " --scorer external --scorer-cmd '" + kFake + " range' --out " +
                (dir / "o.svg").string()),
            3);
  EXPECT_FALSE(std::filesystem::exists(dir / "o.svg"));
}

TEST(Cli, EmptyPoolExits4) {
  TempDir dir;
  spit(dir / "blank.txt", "   \n");
  EXPECT_EQ(run("analyze --input " + (dir / "blank.txt").string() + " --lexicon " +
                (kDataDir / "lexicon.tsv").string() + " --out " + (dir / "o.svg").string()),
            4);
}

TEST(Cli, StdinInputAndBuildDb) {
  TempDir dir;
  EXPECT_EQ(run("build-db --out " + (dir / "db").string() + " --per-quadrant 3 --seed 9"), 0);
  EXPECT_EQ(load_database(dir / "db").records.size(), 12u);
  const int status = std::system(("printf 'soft rain\\nold pond\\n' | " + kCli + " analyze --lexicon " +
                                  (kDataDir / "lexicon.tsv").string() + " --db " +
                                  (dir / "db").string() + " --out " + (dir / "s.svg").string() +
                                  " >/dev/null 2>&1")
                                     .c_str());
  EXPECT_EQ(WEXITSTATUS(status), 0);
  const auto report = nlohmann::json::parse(slurp(dir / "s.json"));
  EXPECT_EQ(report["pool_size"], 2);
  EXPECT_EQ(report["stroke_db"]["db_seed"], "9");
}

TEST(Cli, BadFlagsExit2) {
  EXPECT_EQ(run("analyze --keep-ratio"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("--help"), 0);
}

}  // namespace
}  // namespace poemotion

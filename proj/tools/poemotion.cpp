// poemotion command-line tool: build-db and analyze.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "poemotion/pipeline.hpp"
#include "poemotion/strokedb.hpp"

namespace {

template <typename T>
void set_if(std::optional<T>& dst, const std::string& src) {
  if (!src.empty()) dst = src;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Annotate poems with emotion-driven calligraphic strokes"};
  app.require_subcommand(1);

  std::string db_out;
  std::size_t per_quadrant = poemotion::kDefaultPerQuadrant;
  std::uint64_t db_seed = 42;
  auto* build = app.add_subcommand("build-db", "Synthesize and index a stroke database");
  build->add_option("--out", db_out, "Output directory")->required();
  build->add_option("--per-quadrant", per_quadrant, "Strokes per emotion quadrant")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  build->add_option("--seed", db_seed, "Database seed")->capture_default_str();

  poemotion::PipelineConfig cfg;
  std::string conllu, lexicon, scorer_cmd, db_dir, report;
  std::string scorer = "lexicon";
  auto* analyze = app.add_subcommand("analyze", "Run the full poem-to-SVG pipeline");
  analyze->add_option("--input", cfg.input_path, "Poem text file, or - for stdin")->capture_default_str();
  analyze->add_option("--conllu", conllu, "Dependency parses (CoNLL-U), one per sentence");
  analyze->add_option("--lexicon", lexicon, "Valence/arousal lexicon TSV");
  analyze->add_option("--scorer", scorer, "Scoring backend")
      ->check(CLI::IsMember({"lexicon", "external"}))
      ->capture_default_str();
  analyze->add_option("--scorer-cmd", scorer_cmd, "Command launching an external scorer");
  analyze->add_option("--scorer-timeout", cfg.scorer_timeout_s, "Seconds to wait on the scorer")
      ->capture_default_str();
  analyze->add_option("--keep-ratio", cfg.keep_ratio, "Fraction of ranked segments to keep")
      ->capture_default_str();
  analyze->add_option("--damping", cfg.damping, "TextRank damping factor")->capture_default_str();
  analyze->add_option("--db", db_dir, "Stroke database directory");
  analyze->add_option("--out", cfg.out_path, "Output SVG path")->required();
  analyze->add_option("--report", report, "Output report JSON path (default: <out>.json)");
  analyze->add_option("--seed", cfg.seed, "Seed for the database built when --db is absent")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) {
      const auto index = poemotion::build_database(per_quadrant, db_seed, db_out);
      std::cout << "wrote " << index.records.size() << " strokes to " << db_out << "\n";
      return 0;
    }
    set_if(cfg.conllu_path, conllu);
    set_if(cfg.lexicon_path, lexicon);
    set_if(cfg.scorer_cmd, scorer_cmd);
    set_if(cfg.db_dir, db_dir);
    set_if(cfg.report_path, report);
    cfg.scorer = scorer == "external" ? poemotion::ScorerKind::External : poemotion::ScorerKind::Lexicon;
    const auto out = poemotion::run_pipeline(cfg);
    std::size_t stroked = 0;
    for (const auto& a : out.composition.annotations) stroked += a.stroke ? 1 : 0;
    std::cout << "pool " << out.pool_size << ", selected " << out.composition.annotations.size()
              << ", stroked " << stroked << "\nwrote " << cfg.out_path << " and "
              << cfg.resolved_report_path().string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "poemotion: " << e.what() << "\n";
    return poemotion::exit_code_for(e);
  }
}

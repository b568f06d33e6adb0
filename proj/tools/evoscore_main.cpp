#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "evoscore/charts.hpp"
#include "evoscore/report.hpp"
#include "evoscore/server.hpp"

namespace fs = std::filesystem;
using namespace evoscore;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

ConceptConfigs load_configs(const std::string& config_file) {
  ConceptConfigs configs = default_concept_configs();
  if (config_file.empty()) return configs;
  const auto overrides = nlohmann::json::parse(slurp(config_file));
  for (const auto& [name, body] : overrides.items()) {
    const auto concept_id = concept_from_name(name);
    if (!concept_id) {
      throw std::runtime_error("config file: unknown concept '" + name + "'");
    }
    configs[concept_index(*concept_id)] = config_from_json(body);
  }
  return configs;
}

struct TrainingFlags {
  std::string corpus_file;
  std::string config_file;
  std::uint64_t seed = 42;
  int folds = 10;
  SmoParams params;

  void attach(CLI::App* cmd) {
    cmd->add_option("--corpus", corpus_file, "training corpus CSV")->required();
    cmd->add_option("--seed", seed, "fold-shuffle seed");
    cmd->add_option("--folds", folds, "cross-validation folds");
    cmd->add_option("--c", params.c, "soft-margin penalty");
    cmd->add_option("--tolerance", params.kkt_tolerance, "KKT tolerance");
    cmd->add_option("--config", config_file,
                    "JSON file with per-concept feature-config overrides");
  }
};

void write_scoring_outputs(const fs::path& out_dir,
                           const std::vector<ResultRow>& rows) {
  fs::create_directories(out_dir / "charts");
  spill(out_dir / "results.csv", write_result_csv(rows));
  const Report report = generate_report(rows);
  spill(out_dir / "report.json", report_to_json(report).dump(2) + "\n");
  spill(out_dir / "charts/bar.svg", render_bar_chart(report.overall));
  spill(out_dir / "charts/pie.svg", render_pie_chart(report.overall));
  spill(out_dir / "charts/bubble.svg", render_bubble_chart(report.overall));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concept scoring engine for written explanations"};
  app.require_subcommand(1);

  // train
  auto* train_cmd =
      app.add_subcommand("train", "build a model set and publish it");
  TrainingFlags train_flags;
  std::string train_registry;
  train_flags.attach(train_cmd);
  train_cmd->add_option("--registry", train_registry, "model registry directory")
      ->required();

  // validate
  auto* validate_cmd =
      app.add_subcommand("validate", "cross-validation report only");
  TrainingFlags validate_flags;
  std::string validate_out;
  validate_flags.attach(validate_cmd);
  validate_cmd->add_option("--out", validate_out,
                           "write the JSON report here (default stdout)");

  // score
  auto* score_cmd = app.add_subcommand("score", "score a batch CSV");
  std::string score_batch_file, score_registry, score_out;
  int score_version = 0;
  score_cmd->add_option("--batch", score_batch_file, "batch CSV")->required();
  score_cmd->add_option("--registry", score_registry, "model registry directory")
      ->required();
  score_cmd->add_option("--model-version", score_version,
                        "model set version (default: active)");
  score_cmd->add_option("--out", score_out, "output directory")->required();

  // report
  auto* report_cmd =
      app.add_subcommand("report", "rebuild report and charts from a result CSV");
  std::string report_results, report_out;
  report_cmd->add_option("--results", report_results, "result CSV")->required();
  report_cmd->add_option("--out", report_out, "output directory")->required();

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "start the HTTP service");
  std::string serve_registry, serve_data, serve_host = "0.0.0.0";
  int serve_port = 8080;
  std::size_t serve_workers = 4;
  TrainingFlags serve_flags;  // admin-build defaults
  serve_cmd->add_option("--registry", serve_registry, "model registry directory")
      ->required();
  serve_cmd->add_option("--data", serve_data, "run/job data directory")->required();
  serve_cmd->add_option("--host", serve_host, "bind address");
  serve_cmd->add_option("--port", serve_port, "port (0 picks one)");
  serve_cmd->add_option("--workers", serve_workers, "scoring worker threads");
  serve_cmd->add_option("--seed", serve_flags.seed, "admin-build default seed");
  serve_cmd->add_option("--folds", serve_flags.folds, "admin-build default folds");
  serve_cmd->add_option("--c", serve_flags.params.c, "admin-build default penalty");
  serve_cmd->add_option("--tolerance", serve_flags.params.kkt_tolerance,
                        "admin-build default KKT tolerance");
  serve_cmd->add_option("--config", serve_flags.config_file,
                        "admin-build default per-concept config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) {
      const TrainingCorpus corpus =
          parse_training_corpus(slurp(train_flags.corpus_file));
      const ConceptConfigs configs = load_configs(train_flags.config_file);
      const ModelSet set =
          build_model_set(corpus, configs, train_flags.params,
                          train_flags.folds, train_flags.seed);
      ModelRegistry registry(train_registry);
      const int version = registry.publish(set);
      std::cout << "published version " << version << "\n";
      for (ConceptId c : all_concepts()) {
        const auto& bundle = set.bundle(c);
        const auto& pooled = bundle.cv_after_removal
                                 ? bundle.cv_after_removal->pooled
                                 : bundle.cv.pooled;
        std::cout << "  " << concept_name(c) << ": kappa=" << pooled.kappa
                  << " agreement=" << pooled.agreement_pct << "%"
                  << (bundle.passed ? " [pass]" : " [below threshold]") << "\n";
      }
      return 0;
    }

    if (*validate_cmd) {
      const TrainingCorpus corpus =
          parse_training_corpus(slurp(validate_flags.corpus_file));
      const ConceptConfigs configs = load_configs(validate_flags.config_file);
      std::vector<ConceptValidation> validations;
      for (ConceptId c : all_concepts()) {
        ConceptModel model = train_concept_model(
            corpus, c, configs[concept_index(c)], validate_flags.params,
            validate_flags.folds, validate_flags.seed);
        validations.push_back(std::move(model.validation));
      }
      const nlohmann::json report = validation_report_json(
          validations, validate_flags.params, validate_flags.folds,
          validate_flags.seed, corpus.responses.size(),
          corpus_fingerprint(corpus));
      if (validate_out.empty()) {
        std::cout << report.dump(2) << "\n";
      } else {
        spill(validate_out, report.dump(2) + "\n");
      }
      return 0;
    }

    if (*score_cmd) {
      const ResponseBatch batch = parse_response_batch(slurp(score_batch_file));
      const ModelRegistry registry(score_registry);
      const ModelSet set = score_cmd->count("--model-version")
                               ? registry.load(score_version)
                               : registry.load_active();
      const std::vector<ResultRow> rows = score_batch(batch, set);
      if (rows.empty()) throw std::runtime_error("batch contained no scorable answers");
      write_scoring_outputs(score_out, rows);
      std::cout << "scored " << rows.size() << " answers with model version "
                << set.version << " -> " << score_out << "\n";
      return 0;
    }

    if (*report_cmd) {
      const std::vector<ResultRow> rows = parse_result_csv(slurp(report_results));
      fs::create_directories(fs::path(report_out) / "charts");
      const Report report = generate_report(rows);
      spill(fs::path(report_out) / "report.json",
            report_to_json(report).dump(2) + "\n");
      spill(fs::path(report_out) / "charts/bar.svg", render_bar_chart(report.overall));
      spill(fs::path(report_out) / "charts/pie.svg", render_pie_chart(report.overall));
      spill(fs::path(report_out) / "charts/bubble.svg",
            render_bubble_chart(report.overall));
      std::cout << "report written to " << report_out << "\n";
      return 0;
    }

    if (*serve_cmd) {
      ServerConfig config;
      config.registry_dir = serve_registry;
      config.data_dir = serve_data;
      config.workers = serve_workers;
      if (const char* token = std::getenv("ADMIN_TOKEN")) config.admin_token = token;
      config.build_defaults.configs = load_configs(serve_flags.config_file);
      config.build_defaults.params = serve_flags.params;
      config.build_defaults.folds = serve_flags.folds;
      config.build_defaults.seed = serve_flags.seed;
      ScoringServer server(std::move(config));
      if (serve_port == 0) {
        const int port = server.start(serve_host);
        std::cout << "listening on " << serve_host << ":" << port << std::endl;
        for (;;) std::this_thread::sleep_for(std::chrono::hours(24));
      }
      std::cout << "listening on " << serve_host << ":" << serve_port << std::endl;
      if (!server.listen(serve_host, serve_port)) {
        throw std::runtime_error("failed to listen on " + serve_host + ":" +
                                 std::to_string(serve_port));
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

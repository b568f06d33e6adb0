#pragma once

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "evoscore/modelset.hpp"
#include "evoscore/scoring.hpp"

namespace evoscore {

enum class RunStatus { pending, scoring, reporting, done, failed };

std::string_view run_status_name(RunStatus s);

struct RunRecord {
  std::string run_id;
  RunStatus status = RunStatus::pending;
  int model_version = 0;
  std::string error;  // set when failed
};

// Background scoring jobs on a bounded worker pool. Each run is isolated:
// workers share only the immutable registry. Artifacts are persisted under
// <data_dir>/runs/<run_id>/ and served only once a run is done.
class RunManager {
 public:
  RunManager(std::filesystem::path data_dir, const ModelRegistry& registry,
             std::size_t workers);
  ~RunManager();

  // Parses and validates the batch synchronously (throws on bad input or
  // unknown model version), then queues the scoring work.
  std::string submit(std::string_view batch_csv,
                     std::optional<int> model_version);

  std::optional<RunRecord> info(const std::string& run_id) const;

  // name is one of: results.csv, report.json, charts/bar.svg,
  // charts/pie.svg, charts/bubble.svg. Empty until the run is done.
  std::optional<std::string> artifact(const std::string& run_id,
                                      const std::string& name) const;

  // Blocks until every queued run has finished.
  void wait_all();

 private:
  struct Run {
    RunRecord record;
    ResponseBatch batch;
  };

  void worker_loop();
  void execute(const std::string& run_id);
  void set_status(const std::string& run_id, RunStatus status,
                  const std::string& error = "");
  std::filesystem::path run_dir(const std::string& run_id) const;

  std::filesystem::path data_dir_;
  const ModelRegistry& registry_;

  mutable std::mutex mu_;
  std::condition_variable work_cv_;
  std::condition_variable idle_cv_;
  std::deque<std::string> queue_;
  std::map<std::string, Run> runs_;
  std::size_t active_ = 0;
  bool stopping_ = false;
  std::uint64_t id_counter_ = 0;
  std::uint64_t id_nonce_ = 0;

  std::vector<std::thread> workers_;
};

enum class BuildStatus { pending, training, done, failed };

std::string_view build_status_name(BuildStatus s);

struct BuildRecord {
  std::string build_id;
  BuildStatus status = BuildStatus::pending;
  std::optional<int> version;  // assigned when published
  std::string error;
  nlohmann::json validation;   // full validation report once done
};

struct BuildOptions {
  ConceptConfigs configs = default_concept_configs();
  SmoParams params;
  int folds = 10;
  std::uint64_t seed = 42;
};

// Admin training jobs; trainings are heavy, so they run one at a time.
class BuildManager {
 public:
  explicit BuildManager(ModelRegistry& registry);
  ~BuildManager();

  std::string submit(TrainingCorpus corpus, BuildOptions options);
  std::optional<BuildRecord> info(const std::string& build_id) const;
  void wait_all();

 private:
  struct Build {
    BuildRecord record;
    TrainingCorpus corpus;
    BuildOptions options;
  };

  void worker_loop();

  ModelRegistry& registry_;
  mutable std::mutex mu_;
  std::condition_variable work_cv_;
  std::condition_variable idle_cv_;
  std::deque<std::string> queue_;
  std::map<std::string, Build> builds_;
  bool busy_ = false;
  bool stopping_ = false;
  std::uint64_t id_counter_ = 0;
  std::uint64_t id_nonce_ = 0;
  std::thread worker_;
};

}  // namespace evoscore

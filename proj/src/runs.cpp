#include "evoscore/runs.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "evoscore/charts.hpp"
#include "evoscore/report.hpp"

namespace evoscore {

namespace fs = std::filesystem;

namespace {

std::string read_file_or_throw(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_or_throw(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string make_job_id(char prefix, std::uint64_t nonce, std::uint64_t count) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%c%012llx%04llx", prefix,
                static_cast<unsigned long long>(nonce & 0xFFFFFFFFFFFFULL),
                static_cast<unsigned long long>(count & 0xFFFFULL));
  return buf;
}

std::uint64_t fresh_nonce() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace

std::string_view run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::pending: return "pending";
    case RunStatus::scoring: return "scoring";
    case RunStatus::reporting: return "reporting";
    case RunStatus::done: return "done";
    case RunStatus::failed: return "failed";
  }
  return "unknown";
}

std::string_view build_status_name(BuildStatus s) {
  switch (s) {
    case BuildStatus::pending: return "pending";
    case BuildStatus::training: return "training";
    case BuildStatus::done: return "done";
    case BuildStatus::failed: return "failed";
  }
  return "unknown";
}

RunManager::RunManager(fs::path data_dir, const ModelRegistry& registry,
                       std::size_t workers)
    : data_dir_(std::move(data_dir)),
      registry_(registry),
      id_nonce_(fresh_nonce()) {
  fs::create_directories(data_dir_ / "runs");
  if (workers == 0) workers = 1;
  workers_.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i) {
    workers_.emplace_back([this] { worker_loop(); });
  }
}

RunManager::~RunManager() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  work_cv_.notify_all();
  for (auto& t : workers_) t.join();
}

fs::path RunManager::run_dir(const std::string& run_id) const {
  return data_dir_ / "runs" / run_id;
}

std::string RunManager::submit(std::string_view batch_csv,
                               std::optional<int> model_version) {
  ResponseBatch batch = parse_response_batch(batch_csv);

  int version;
  if (model_version) {
    version = *model_version;
    // Surface an unknown version at submission, not mid-run.
    registry_.load(version);
  } else {
    const auto active = registry_.active_version();
    if (!active) throw std::runtime_error("no active model set");
    version = *active;
  }

  std::string run_id;
  {
    std::lock_guard lock(mu_);
    run_id = make_job_id('r', id_nonce_, id_counter_++);
    Run run;
    run.record.run_id = run_id;
    run.record.status = RunStatus::pending;
    run.record.model_version = version;
    run.batch = std::move(batch);
    runs_.emplace(run_id, std::move(run));
    queue_.push_back(run_id);
  }
  fs::create_directories(run_dir(run_id) / "charts");
  set_status(run_id, RunStatus::pending);
  work_cv_.notify_one();
  return run_id;
}

std::optional<RunRecord> RunManager::info(const std::string& run_id) const {
  std::lock_guard lock(mu_);
  const auto it = runs_.find(run_id);
  if (it == runs_.end()) return std::nullopt;
  return it->second.record;
}

std::optional<std::string> RunManager::artifact(const std::string& run_id,
                                                const std::string& name) const {
  {
    std::lock_guard lock(mu_);
    const auto it = runs_.find(run_id);
    if (it == runs_.end() || it->second.record.status != RunStatus::done) {
      return std::nullopt;
    }
  }
  static const char* kNames[] = {"results.csv", "report.json", "charts/bar.svg",
                                 "charts/pie.svg", "charts/bubble.svg"};
  const bool known = std::any_of(std::begin(kNames), std::end(kNames),
                                 [&](const char* n) { return name == n; });
  if (!known) return std::nullopt;
  return read_file_or_throw(run_dir(run_id) / name);
}

void RunManager::wait_all() {
  std::unique_lock lock(mu_);
  idle_cv_.wait(lock, [this] { return queue_.empty() && active_ == 0; });
}

void RunManager::set_status(const std::string& run_id, RunStatus status,
                            const std::string& error) {
  nlohmann::json j;
  {
    std::lock_guard lock(mu_);
    auto& record = runs_.at(run_id).record;
    record.status = status;
    record.error = error;
    j = nlohmann::json{{"run_id", record.run_id},
                       {"status", std::string(run_status_name(status))},
                       {"model_version", record.model_version}};
    if (!error.empty()) j["error"] = error;
  }
  write_file_or_throw(run_dir(run_id) / "status.json", j.dump(2) + "\n");
}

void RunManager::worker_loop() {
  while (true) {
    std::string run_id;
    {
      std::unique_lock lock(mu_);
      work_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_ && queue_.empty()) return;
      run_id = queue_.front();
      queue_.pop_front();
      ++active_;
    }
    try {
      execute(run_id);
    } catch (const std::exception& e) {
      try {
        set_status(run_id, RunStatus::failed, e.what());
      } catch (...) {
        // status file write failed; in-memory record still says failed
      }
    }
    {
      std::lock_guard lock(mu_);
      --active_;
    }
    idle_cv_.notify_all();
  }
}

void RunManager::execute(const std::string& run_id) {
  ResponseBatch batch;
  int version;
  {
    std::lock_guard lock(mu_);
    const Run& run = runs_.at(run_id);
    batch = run.batch;
    version = run.record.model_version;
  }

  set_status(run_id, RunStatus::scoring);
  const ModelSet set = registry_.load(version);
  const std::vector<ResultRow> rows = score_batch(batch, set);
  if (rows.empty()) {
    throw std::runtime_error("batch contained no scorable answers");
  }

  set_status(run_id, RunStatus::reporting);
  const std::string result_csv = write_result_csv(rows);

  // Result-file persistence and report generation run in parallel; the run
  // is done only after both have finished.
  std::exception_ptr persist_error;
  std::thread persister([&] {
    try {
      write_file_or_throw(run_dir(run_id) / "results.csv", result_csv);
    } catch (...) {
      persist_error = std::current_exception();
    }
  });

  std::string report_json, bar, pie, bubble;
  std::exception_ptr report_error;
  try {
    const Report report = generate_report(rows);
    report_json = report_to_json(report).dump(2) + "\n";
    bar = render_bar_chart(report.overall);
    pie = render_pie_chart(report.overall);
    bubble = render_bubble_chart(report.overall);
  } catch (...) {
    report_error = std::current_exception();
  }
  persister.join();
  if (persist_error) std::rethrow_exception(persist_error);
  if (report_error) std::rethrow_exception(report_error);

  write_file_or_throw(run_dir(run_id) / "report.json", report_json);
  write_file_or_throw(run_dir(run_id) / "charts/bar.svg", bar);
  write_file_or_throw(run_dir(run_id) / "charts/pie.svg", pie);
  write_file_or_throw(run_dir(run_id) / "charts/bubble.svg", bubble);
  set_status(run_id, RunStatus::done);
}

BuildManager::BuildManager(ModelRegistry& registry)
    : registry_(registry), id_nonce_(fresh_nonce()) {
  worker_ = std::thread([this] { worker_loop(); });
}

BuildManager::~BuildManager() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  work_cv_.notify_all();
  worker_.join();
}

std::string BuildManager::submit(TrainingCorpus corpus, BuildOptions options) {
  options.params.validate();
  for (const auto& config : options.configs) config.validate();
  std::string build_id;
  {
    std::lock_guard lock(mu_);
    build_id = make_job_id('b', id_nonce_, id_counter_++);
    Build build;
    build.record.build_id = build_id;
    build.corpus = std::move(corpus);
    build.options = options;
    builds_.emplace(build_id, std::move(build));
    queue_.push_back(build_id);
  }
  work_cv_.notify_one();
  return build_id;
}

std::optional<BuildRecord> BuildManager::info(const std::string& build_id) const {
  std::lock_guard lock(mu_);
  const auto it = builds_.find(build_id);
  if (it == builds_.end()) return std::nullopt;
  return it->second.record;
}

void BuildManager::wait_all() {
  std::unique_lock lock(mu_);
  idle_cv_.wait(lock, [this] { return queue_.empty() && !busy_; });
}

void BuildManager::worker_loop() {
  while (true) {
    std::string build_id;
    TrainingCorpus corpus;
    BuildOptions options;
    {
      std::unique_lock lock(mu_);
      work_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_ && queue_.empty()) return;
      build_id = queue_.front();
      queue_.pop_front();
      busy_ = true;
      Build& build = builds_.at(build_id);
      build.record.status = BuildStatus::training;
      corpus = build.corpus;
      options = build.options;
    }
    try {
      std::vector<ConceptValidation> validations;
      ModelSet set = build_model_set(corpus, options.configs, options.params,
                                     options.folds, options.seed, &validations);
      const int version = registry_.publish(set);
      std::lock_guard lock(mu_);
      auto& record = builds_.at(build_id).record;
      record.status = BuildStatus::done;
      record.version = version;
      record.validation = validation_report_json(
          validations, options.params, options.folds, options.seed,
          corpus.responses.size(), set.corpus_fingerprint);
    } catch (const std::exception& e) {
      std::lock_guard lock(mu_);
      auto& record = builds_.at(build_id).record;
      record.status = BuildStatus::failed;
      record.error = e.what();
    }
    {
      std::lock_guard lock(mu_);
      busy_ = false;
    }
    idle_cv_.notify_all();
  }
}

}  // namespace evoscore

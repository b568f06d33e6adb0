#include "evoscore/modelset.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evoscore {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

CvSummary summarize(const CvOutcome& cv) {
  return CvSummary{cv.fold_reports, cv.pooled, cv.misclassified_ids.size()};
}

nlohmann::json cv_summary_to_json(const CvSummary& cv) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& fold : cv.fold_reports) folds.push_back(agreement_to_json(fold));
  return nlohmann::json{
      {"folds", std::move(folds)},
      {"pooled", agreement_to_json(cv.pooled)},
      {"misclassified_count", cv.misclassified_count},
  };
}

AgreementReport agreement_from_json(const nlohmann::json& j) {
  AgreementReport r;
  r.kappa = j.at("kappa").get<double>();
  r.agreement_pct = j.at("agreement_pct").get<double>();
  if (!j.at("precision").is_null()) r.precision = j.at("precision").get<double>();
  if (!j.at("recall").is_null()) r.recall = j.at("recall").get<double>();
  if (!j.at("f1").is_null()) r.f1 = j.at("f1").get<double>();
  r.n = j.at("n").get<std::uint64_t>();
  return r;
}

CvSummary cv_summary_from_json(const nlohmann::json& j) {
  CvSummary cv;
  for (const auto& fold : j.at("folds")) {
    cv.fold_reports.push_back(agreement_from_json(fold));
  }
  cv.pooled = agreement_from_json(j.at("pooled"));
  cv.misclassified_count = j.at("misclassified_count").get<std::size_t>();
  return cv;
}

// Unique-enough staging suffix for concurrent publishers in one process.
std::atomic<std::uint64_t> g_stage_counter{0};

}  // namespace

ConceptConfigs default_concept_configs() {
  ConceptConfigs configs;
  const auto set = [&](ConceptId c, bool bigrams, bool stopwords,
                       bool remove_misclassified) {
    FeatureConfig config;
    config.use_bigrams = bigrams;
    config.use_stemming = true;
    config.remove_stopwords = stopwords;
    config.min_corpus_frequency = 2;
    config.remove_misclassified = remove_misclassified;
    configs[concept_index(c)] = config;
  };
  set(ConceptId::variation, false, true, true);
  set(ConceptId::heritability, true, true, true);
  set(ConceptId::competition, false, true, false);
  set(ConceptId::limited_resources, false, true, true);
  set(ConceptId::differential_survival, true, true, false);
  set(ConceptId::non_adaptive, false, true, false);
  set(ConceptId::needs_goals, true, false, true);
  set(ConceptId::use_disuse, true, true, false);
  set(ConceptId::adapt_acclimation, true, true, true);
  return configs;
}

std::string corpus_fingerprint(const TrainingCorpus& corpus) {
  const std::string bytes = write_training_corpus_csv(corpus);
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

std::string iso8601_utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ModelSet build_model_set(const TrainingCorpus& corpus,
                         const ConceptConfigs& configs, const SmoParams& params,
                         int k, std::uint64_t seed,
                         std::vector<ConceptValidation>* validations_out) {
  ModelSet set;
  set.corpus_fingerprint = corpus_fingerprint(corpus);
  set.seed = seed;
  set.folds = k;
  set.params = params;
  set.created_at = iso8601_utc_now();
  if (validations_out) validations_out->clear();
  for (ConceptId c : all_concepts()) {
    ConceptModel model = train_concept_model(corpus, c, configs[concept_index(c)],
                                             params, k, seed);
    ConceptBundle& bundle = set.bundles[concept_index(c)];
    bundle.config = model.validation.config;
    bundle.dictionary = std::move(model.dictionary);
    bundle.classifier = std::move(model.classifier);
    bundle.passed = model.validation.passed;
    bundle.cv = summarize(model.validation.cv);
    if (model.validation.cv_after_removal) {
      bundle.cv_after_removal = summarize(*model.validation.cv_after_removal);
    }
    if (validations_out) validations_out->push_back(std::move(model.validation));
  }
  return set;
}

nlohmann::json model_set_meta_json(const ModelSet& set) {
  nlohmann::json concepts = nlohmann::json::object();
  for (ConceptId c : all_concepts()) {
    const auto& bundle = set.bundle(c);
    const std::string name(concept_name(c));
    nlohmann::json entry{
        {"config", config_to_json(bundle.config)},
        {"passed", bundle.passed},
        {"cv", cv_summary_to_json(bundle.cv)},
        {"dictionary_file", name + ".dict.tsv"},
        {"classifier_file", name + ".clf.tsv"},
    };
    entry["cv_after_removal"] = bundle.cv_after_removal
                                    ? cv_summary_to_json(*bundle.cv_after_removal)
                                    : nlohmann::json(nullptr);
    concepts[name] = std::move(entry);
  }
  return nlohmann::json{
      {"version", set.version},
      {"created_at", set.created_at},
      {"corpus_fingerprint", set.corpus_fingerprint},
      {"seed", set.seed},
      {"folds", set.folds},
      {"params",
       {{"c", set.params.c},
        {"kkt_tolerance", set.params.kkt_tolerance},
        {"alpha_epsilon", set.params.alpha_epsilon},
        {"max_epochs", set.params.max_epochs}}},
      {"concepts", std::move(concepts)},
  };
}

ModelRegistry::ModelRegistry(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "versions");
}

fs::path ModelRegistry::version_dir(int version) const {
  return root_ / "versions" / ("v" + std::to_string(version));
}

std::vector<int> ModelRegistry::versions() const {
  std::vector<int> out;
  const fs::path dir = root_ / "versions";
  if (!fs::exists(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 1 && name[0] == 'v' && entry.is_directory()) {
      try {
        out.push_back(std::stoi(name.substr(1)));
      } catch (const std::exception&) {
        // foreign directory, ignore
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int ModelRegistry::publish(const ModelSet& set) {
  const auto existing = versions();
  const int version = existing.empty() ? 1 : existing.back() + 1;

  const fs::path stage =
      root_ / "versions" /
      (".stage-" + std::to_string(version) + "-" +
       std::to_string(g_stage_counter.fetch_add(1)));
  fs::create_directories(stage);

  ModelSet stamped = set;
  stamped.version = version;
  write_file(stage / "modelset.json", model_set_meta_json(stamped).dump(2) + "\n");
  for (ConceptId c : all_concepts()) {
    const std::string name(concept_name(c));
    write_file(stage / (name + ".dict.tsv"), stamped.bundle(c).dictionary.save());
    write_file(stage / (name + ".clf.tsv"),
               save_classifier(stamped.bundle(c).classifier));
  }

  const fs::path target = version_dir(version);
  if (fs::exists(target)) {
    fs::remove_all(stage);
    throw std::runtime_error("model registry: version " +
                             std::to_string(version) + " already exists");
  }
  std::error_code ec;
  fs::rename(stage, target, ec);
  if (ec) {
    fs::remove_all(stage);
    throw std::runtime_error("model registry: publish failed: " + ec.message());
  }

  // Activation is also write-then-rename so readers never see a torn file.
  const fs::path active_tmp =
      root_ / (".ACTIVE.tmp-" + std::to_string(g_stage_counter.fetch_add(1)));
  write_file(active_tmp, std::to_string(version) + "\n");
  fs::rename(active_tmp, root_ / "ACTIVE", ec);
  if (ec) {
    throw std::runtime_error("model registry: activation failed: " + ec.message());
  }
  return version;
}

std::optional<int> ModelRegistry::active_version() const {
  const fs::path active = root_ / "ACTIVE";
  if (!fs::exists(active)) return std::nullopt;
  const std::string text = read_file(active);
  try {
    return std::stoi(text);
  } catch (const std::exception&) {
    throw std::runtime_error("model registry: corrupt ACTIVE file");
  }
}

ModelSet ModelRegistry::load(int version) const {
  const fs::path dir = version_dir(version);
  if (!fs::exists(dir / "modelset.json")) {
    throw std::runtime_error("model registry: no version " + std::to_string(version));
  }
  const nlohmann::json meta = nlohmann::json::parse(read_file(dir / "modelset.json"));

  ModelSet set;
  set.version = meta.at("version").get<int>();
  set.created_at = meta.at("created_at").get<std::string>();
  set.corpus_fingerprint = meta.at("corpus_fingerprint").get<std::string>();
  set.seed = meta.at("seed").get<std::uint64_t>();
  set.folds = meta.at("folds").get<int>();
  const auto& params = meta.at("params");
  set.params.c = params.at("c").get<double>();
  set.params.kkt_tolerance = params.at("kkt_tolerance").get<double>();
  set.params.alpha_epsilon = params.at("alpha_epsilon").get<double>();
  set.params.max_epochs = params.at("max_epochs").get<int>();

  for (ConceptId c : all_concepts()) {
    const std::string name(concept_name(c));
    const auto& entry = meta.at("concepts").at(name);
    ConceptBundle& bundle = set.bundles[concept_index(c)];
    bundle.config = config_from_json(entry.at("config"));
    bundle.passed = entry.at("passed").get<bool>();
    bundle.cv = cv_summary_from_json(entry.at("cv"));
    if (!entry.at("cv_after_removal").is_null()) {
      bundle.cv_after_removal = cv_summary_from_json(entry.at("cv_after_removal"));
    }
    bundle.dictionary = FeatureDictionary::load(
        read_file(dir / entry.at("dictionary_file").get<std::string>()));
    bundle.classifier = load_classifier(
        read_file(dir / entry.at("classifier_file").get<std::string>()));
    if (bundle.classifier.weights.size() != bundle.dictionary.size()) {
      throw std::runtime_error("model registry: " + name +
                               " classifier/dictionary size mismatch");
    }
    if (bundle.config != bundle.dictionary.config()) {
      throw std::runtime_error("model registry: " + name +
                               " config/dictionary mismatch");
    }
  }
  return set;
}

ModelSet ModelRegistry::load_active() const {
  const auto version = active_version();
  if (!version) throw std::runtime_error("model registry: no active model set");
  return load(*version);
}

}  // namespace evoscore

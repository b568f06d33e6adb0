#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evoscore/crossval.hpp"

namespace evoscore {

// Cross-validation provenance kept with a published bundle; the full
// misclassified-id lists live in validation reports, not here.
struct CvSummary {
  std::vector<AgreementReport> fold_reports;
  AgreementReport pooled;
  std::size_t misclassified_count = 0;
};

struct ConceptBundle {
  FeatureConfig config;
  FeatureDictionary dictionary;
  BinaryClassifier classifier;
  bool passed = false;
  CvSummary cv;
  std::optional<CvSummary> cv_after_removal;
};

// A nine-classifier bundle with its training provenance.
struct ModelSet {
  int version = 0;  // assigned at publish
  std::array<ConceptBundle, kConceptCount> bundles;
  std::string corpus_fingerprint;
  std::uint64_t seed = 0;
  int folds = 0;
  SmoParams params;
  std::string created_at;  // ISO-8601 UTC, informational only

  const ConceptBundle& bundle(ConceptId c) const {
    return bundles[concept_index(c)];
  }
};

using ConceptConfigs = std::array<FeatureConfig, kConceptCount>;

// The per-concept feature settings the scoring models ship with.
ConceptConfigs default_concept_configs();

// FNV-1a over the corpus in canonical CSV form, as 16 hex digits.
std::string corpus_fingerprint(const TrainingCorpus& corpus);

std::string iso8601_utc_now();

// Trains all nine concept models. Below-threshold concepts are flagged, not
// blocked; a zero-variance concept aborts naming the concept. When
// validations_out is given it receives the full per-concept validation
// outcomes (including misclassified ids) in canonical concept order.
ModelSet build_model_set(const TrainingCorpus& corpus,
                         const ConceptConfigs& configs, const SmoParams& params,
                         int k, std::uint64_t seed,
                         std::vector<ConceptValidation>* validations_out = nullptr);

// Versioned on-disk store:
//   <root>/versions/v<N>/modelset.json + <concept>.dict.tsv + <concept>.clf.tsv
//   <root>/ACTIVE holds the active version number.
// Publication is atomic (staging directory + rename); prior versions are
// retained and loadable.
class ModelRegistry {
 public:
  explicit ModelRegistry(std::filesystem::path root);

  // Persists the set as the next version and makes it active. Returns the
  // assigned version.
  int publish(const ModelSet& set);

  ModelSet load(int version) const;
  ModelSet load_active() const;
  std::optional<int> active_version() const;
  std::vector<int> versions() const;  // ascending

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path version_dir(int version) const;
  std::filesystem::path root_;
};

nlohmann::json model_set_meta_json(const ModelSet& set);

}  // namespace evoscore

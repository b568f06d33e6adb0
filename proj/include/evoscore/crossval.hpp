#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "evoscore/corpus.hpp"
#include "evoscore/metrics.hpp"
#include "evoscore/svm.hpp"
#include "evoscore/textpipe.hpp"

namespace evoscore {

struct CvOutcome {
  std::vector<AgreementReport> fold_reports;
  AgreementReport pooled;  // over all held-out predictions
  std::vector<std::string> misclassified_ids;
};

// Fisher-Yates with a seeded mt19937_64 and modulo draws, so fold layouts
// are identical across platforms.
void deterministic_shuffle(std::vector<std::size_t>& indices,
                           std::uint64_t seed);

// Shuffle-then-round-robin assignment: disjoint folds covering 0..n-1 with
// sizes differing by at most one. Each fold's indices are sorted.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, int k,
                                                 std::uint64_t seed);

// k-fold cross-validation of one concept. Every fold's dictionary and
// classifier are built from the other k-1 folds only. fold_dictionaries,
// when given, receives each fold's training dictionary (leakage audits).
CvOutcome cross_validate(const TrainingCorpus& corpus, ConceptId concept_id,
                         const FeatureConfig& config, const SmoParams& params,
                         int k, std::uint64_t seed,
                         std::vector<FeatureDictionary>* fold_dictionaries = nullptr);

TrainingCorpus remove_misclassified(const TrainingCorpus& corpus,
                                    std::span<const std::string> ids);

struct ConceptValidation {
  ConceptId concept_id;
  FeatureConfig config;
  CvOutcome cv;
  std::optional<CvOutcome> cv_after_removal;
  bool passed = false;

  const CvOutcome& final_cv() const { return cv_after_removal ? *cv_after_removal : cv; }
};

struct ConceptModel {
  FeatureDictionary dictionary;
  BinaryClassifier classifier;
  ConceptValidation validation;
};

// Cross-validates, optionally removes misclassified responses and validates
// once more, then fits the published dictionary/classifier on the full
// (possibly reduced) corpus. passed reflects the final pooled report.
ConceptModel train_concept_model(const TrainingCorpus& corpus,
                                 ConceptId concept_id,
                                 const FeatureConfig& config,
                                 const SmoParams& params, int k,
                                 std::uint64_t seed);

nlohmann::json agreement_to_json(const AgreementReport& report);
nlohmann::json config_to_json(const FeatureConfig& config);
FeatureConfig config_from_json(const nlohmann::json& j);
nlohmann::json cv_outcome_to_json(const CvOutcome& cv);

// The reproducible validation report: per-concept config, per-fold and
// pooled metrics, misclassified ids, pass flags, seed and parameters.
nlohmann::json validation_report_json(
    std::span<const ConceptValidation> concepts, const SmoParams& params,
    int k, std::uint64_t seed, std::size_t corpus_size,
    const std::string& corpus_fingerprint);

}  // namespace evoscore

#include "evoscore/crossval.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace evoscore {

void deterministic_shuffle(std::vector<std::size_t>& indices,
                           std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  for (std::size_t i = indices.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(gen() % i);
    std::swap(indices[i - 1], indices[j]);
  }
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, int k,
                                                 std::uint64_t seed) {
  if (k < 2) throw std::runtime_error("cross-validation requires k >= 2");
  if (n < static_cast<std::size_t>(k)) {
    throw std::runtime_error("corpus smaller than fold count");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  deterministic_shuffle(order, seed);
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  for (std::size_t p = 0; p < n; ++p) {
    folds[p % static_cast<std::size_t>(k)].push_back(order[p]);
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

namespace {

int label_sign(const LabeledResponse& r, ConceptId concept_id) {
  return r.labels[concept_id] ? 1 : -1;
}

void require_label_variance(const TrainingCorpus& corpus, ConceptId concept_id) {
  bool has_pos = false, has_neg = false;
  for (const auto& r : corpus.responses) {
    (r.labels[concept_id] ? has_pos : has_neg) = true;
    if (has_pos && has_neg) return;
  }
  throw std::runtime_error("zero-variance concept: " +
                           std::string(concept_name(concept_id)));
}

}  // namespace

CvOutcome cross_validate(const TrainingCorpus& corpus, ConceptId concept_id,
                         const FeatureConfig& config, const SmoParams& params,
                         int k, std::uint64_t seed,
                         std::vector<FeatureDictionary>* fold_dictionaries) {
  config.validate();
  params.validate();
  require_label_variance(corpus, concept_id);
  const auto folds = make_folds(corpus.responses.size(), k, seed);

  CvOutcome outcome;
  if (fold_dictionaries) fold_dictionaries->clear();
  std::vector<int> pooled_pred, pooled_gold;
  for (const auto& holdout : folds) {
    std::unordered_set<std::size_t> held(holdout.begin(), holdout.end());

    std::vector<std::string> train_texts;
    std::vector<int> train_labels;
    train_texts.reserve(corpus.responses.size() - holdout.size());
    for (std::size_t i = 0; i < corpus.responses.size(); ++i) {
      if (held.contains(i)) continue;
      train_texts.push_back(corpus.responses[i].text);
      train_labels.push_back(label_sign(corpus.responses[i], concept_id));
    }

    const FeatureDictionary dict = FeatureDictionary::build(train_texts, config);
    if (fold_dictionaries) fold_dictionaries->push_back(dict);
    std::vector<FeatureVector> train_vectors;
    train_vectors.reserve(train_texts.size());
    for (const auto& text : train_texts) {
      train_vectors.push_back(vectorize(text, dict));
    }
    const BinaryClassifier clf = train_smo(train_vectors, train_labels, params);

    std::vector<int> fold_pred, fold_gold;
    for (std::size_t i : holdout) {
      const auto& resp = corpus.responses[i];
      const bool present = predict_present(clf, vectorize(resp.text, dict));
      fold_pred.push_back(present ? 1 : 0);
      fold_gold.push_back(resp.labels[concept_id]);
      if ((present ? 1 : 0) != resp.labels[concept_id]) {
        outcome.misclassified_ids.push_back(resp.response_id);
      }
    }
    outcome.fold_reports.push_back(
        AgreementReport::from(confusion(fold_pred, fold_gold)));
    pooled_pred.insert(pooled_pred.end(), fold_pred.begin(), fold_pred.end());
    pooled_gold.insert(pooled_gold.end(), fold_gold.begin(), fold_gold.end());
  }
  outcome.pooled = AgreementReport::from(confusion(pooled_pred, pooled_gold));
  return outcome;
}

TrainingCorpus remove_misclassified(const TrainingCorpus& corpus,
                                    std::span<const std::string> ids) {
  std::unordered_set<std::string_view> to_remove;
  for (const auto& id : ids) to_remove.insert(id);
  for (const auto& id : to_remove) {
    const bool known = std::any_of(
        corpus.responses.begin(), corpus.responses.end(),
        [&](const LabeledResponse& r) { return r.response_id == id; });
    if (!known) {
      throw std::runtime_error("remove_misclassified: unknown response_id '" +
                               std::string(id) + "'");
    }
  }
  TrainingCorpus reduced;
  reduced.responses.reserve(corpus.responses.size() - to_remove.size());
  for (const auto& r : corpus.responses) {
    if (!to_remove.contains(r.response_id)) reduced.responses.push_back(r);
  }
  return reduced;
}

ConceptModel train_concept_model(const TrainingCorpus& corpus,
                                 ConceptId concept_id,
                                 const FeatureConfig& config,
                                 const SmoParams& params, int k,
                                 std::uint64_t seed) {
  ConceptModel model;
  model.validation.concept_id = concept_id;
  model.validation.config = config;
  model.validation.cv = cross_validate(corpus, concept_id, config, params, k, seed);

  const TrainingCorpus* final_corpus = &corpus;
  TrainingCorpus reduced;
  if (config.remove_misclassified && !model.validation.cv.misclassified_ids.empty()) {
    reduced = remove_misclassified(corpus, model.validation.cv.misclassified_ids);
    model.validation.cv_after_removal =
        cross_validate(reduced, concept_id, config, params, k, seed);
    final_corpus = &reduced;
  }
  model.validation.passed = meets_thresholds(model.validation.final_cv().pooled);

  std::vector<std::string> texts;
  std::vector<int> labels;
  texts.reserve(final_corpus->responses.size());
  for (const auto& r : final_corpus->responses) {
    texts.push_back(r.text);
    labels.push_back(label_sign(r, concept_id));
  }
  model.dictionary = FeatureDictionary::build(texts, config);
  std::vector<FeatureVector> vectors;
  vectors.reserve(texts.size());
  for (const auto& text : texts) vectors.push_back(vectorize(text, model.dictionary));
  model.classifier = train_smo(vectors, labels, params);
  return model;
}

nlohmann::json agreement_to_json(const AgreementReport& report) {
  nlohmann::json j;
  j["kappa"] = report.kappa;
  j["agreement_pct"] = report.agreement_pct;
  j["precision"] = report.precision ? nlohmann::json(*report.precision)
                                    : nlohmann::json(nullptr);
  j["recall"] =
      report.recall ? nlohmann::json(*report.recall) : nlohmann::json(nullptr);
  j["f1"] = report.f1 ? nlohmann::json(*report.f1) : nlohmann::json(nullptr);
  j["n"] = report.n;
  return j;
}

nlohmann::json config_to_json(const FeatureConfig& config) {
  return nlohmann::json{
      {"use_bigrams", config.use_bigrams},
      {"use_stemming", config.use_stemming},
      {"remove_stopwords", config.remove_stopwords},
      {"min_corpus_frequency", config.min_corpus_frequency},
      {"remove_misclassified", config.remove_misclassified},
  };
}

FeatureConfig config_from_json(const nlohmann::json& j) {
  FeatureConfig config;
  if (j.contains("use_bigrams")) config.use_bigrams = j.at("use_bigrams").get<bool>();
  if (j.contains("use_stemming")) {
    config.use_stemming = j.at("use_stemming").get<bool>();
  }
  if (j.contains("remove_stopwords")) {
    config.remove_stopwords = j.at("remove_stopwords").get<bool>();
  }
  if (j.contains("min_corpus_frequency")) {
    config.min_corpus_frequency = j.at("min_corpus_frequency").get<std::uint32_t>();
  }
  if (j.contains("remove_misclassified")) {
    config.remove_misclassified = j.at("remove_misclassified").get<bool>();
  }
  config.validate();
  return config;
}

nlohmann::json cv_outcome_to_json(const CvOutcome& cv) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& fold : cv.fold_reports) folds.push_back(agreement_to_json(fold));
  return nlohmann::json{
      {"folds", std::move(folds)},
      {"pooled", agreement_to_json(cv.pooled)},
      {"misclassified_ids", cv.misclassified_ids},
  };
}

nlohmann::json validation_report_json(
    std::span<const ConceptValidation> concepts, const SmoParams& params,
    int k, std::uint64_t seed, std::size_t corpus_size,
    const std::string& corpus_fingerprint) {
  nlohmann::json by_concept = nlohmann::json::object();
  for (const auto& cv : concepts) {
    nlohmann::json entry{
        {"config", config_to_json(cv.config)},
        {"cross_validation", cv_outcome_to_json(cv.cv)},
        {"passed", cv.passed},
    };
    entry["cross_validation_after_removal"] =
        cv.cv_after_removal ? cv_outcome_to_json(*cv.cv_after_removal)
                            : nlohmann::json(nullptr);
    by_concept[std::string(concept_name(cv.concept_id))] = std::move(entry);
  }
  return nlohmann::json{
      {"corpus_size", corpus_size},
      {"corpus_fingerprint", corpus_fingerprint},
      {"folds", k},
      {"seed", seed},
      {"params",
       {{"c", params.c},
        {"kkt_tolerance", params.kkt_tolerance},
        {"alpha_epsilon", params.alpha_epsilon},
        {"max_epochs", params.max_epochs}}},
      {"concepts", std::move(by_concept)},
  };
}

}  // namespace evoscore

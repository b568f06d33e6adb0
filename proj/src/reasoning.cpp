#include "evoscore/reasoning.hpp"

#include <array>

namespace evoscore {

int key_concept_total(const ConceptScores& s) {
  int total = 0;
  for (std::size_t i = 0; i < kKeyConceptCount; ++i) total += s.present[i];
  return total;
}

int naive_total(const ConceptScores& s) {
  int total = 0;
  for (std::size_t i = kKeyConceptCount; i < kConceptCount; ++i) {
    total += s.present[i];
  }
  return total;
}

ReasoningModel classify_model(const ConceptScores& s) {
  const bool key = key_concept_total(s) > 0;
  const bool naive = naive_total(s) > 0;
  if (key && !naive) return ReasoningModel::scientific;
  if (key && naive) return ReasoningModel::mixed;
  if (naive) return ReasoningModel::naive;
  return ReasoningModel::no_model;
}

namespace {
constexpr std::array<std::string_view, kReasoningModelCount> kModelNames = {
    "scientific", "mixed", "naive", "no_model"};
}

std::string_view model_name(ReasoningModel m) {
  return kModelNames[static_cast<std::size_t>(m)];
}

std::optional<ReasoningModel> model_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kModelNames.size(); ++i) {
    if (kModelNames[i] == name) return static_cast<ReasoningModel>(i);
  }
  return std::nullopt;
}

}  // namespace evoscore

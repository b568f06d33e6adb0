#include "evoscore/concepts.hpp"

namespace evoscore {

namespace {
constexpr std::array<std::string_view, kConceptCount> kNames = {
    "variation",    "heritability",          "competition",
    "limited_resources", "differential_survival", "non_adaptive",
    "needs_goals",  "use_disuse",            "adapt_acclimation"};
}  // namespace

std::string_view concept_name(ConceptId c) { return kNames[concept_index(c)]; }

std::optional<ConceptId> concept_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kConceptCount; ++i) {
    if (kNames[i] == name) return static_cast<ConceptId>(i);
  }
  return std::nullopt;
}

}  // namespace evoscore

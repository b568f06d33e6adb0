#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace evoscore {

// The nine concepts scored per written explanation: six normative key
// concepts followed by three naive ideas, in the canonical column order
// used everywhere (CSV files, reports, model bundles).
enum class ConceptId : std::uint8_t {
  variation = 0,
  heritability,
  competition,
  limited_resources,
  differential_survival,
  non_adaptive,
  needs_goals,
  use_disuse,
  adapt_acclimation,
};

inline constexpr std::size_t kConceptCount = 9;
inline constexpr std::size_t kKeyConceptCount = 6;
inline constexpr std::size_t kNaiveIdeaCount = 3;

enum class ConceptKind : std::uint8_t { key_concept, naive_idea };

constexpr std::array<ConceptId, kConceptCount> all_concepts() {
  return {ConceptId::variation,
          ConceptId::heritability,
          ConceptId::competition,
          ConceptId::limited_resources,
          ConceptId::differential_survival,
          ConceptId::non_adaptive,
          ConceptId::needs_goals,
          ConceptId::use_disuse,
          ConceptId::adapt_acclimation};
}

constexpr std::size_t concept_index(ConceptId c) {
  return static_cast<std::size_t>(c);
}

constexpr ConceptKind concept_kind(ConceptId c) {
  return concept_index(c) < kKeyConceptCount ? ConceptKind::key_concept
                                             : ConceptKind::naive_idea;
}

std::string_view concept_name(ConceptId c);
std::optional<ConceptId> concept_from_name(std::string_view name);

// Binary presence/absence flags for all nine concepts. This is the unit of
// both human labels and machine predictions.
struct ConceptScores {
  std::array<std::uint8_t, kConceptCount> present{};

  std::uint8_t& operator[](ConceptId c) { return present[concept_index(c)]; }
  std::uint8_t operator[](ConceptId c) const {
    return present[concept_index(c)];
  }

  bool operator==(const ConceptScores&) const = default;
};

}  // namespace evoscore

#pragma once

#include <optional>
#include <string_view>

#include "evoscore/concepts.hpp"

namespace evoscore {

// Holistic four-way classification of one scored response.
enum class ReasoningModel : std::uint8_t {
  scientific,  // key concepts only
  mixed,       // both kinds present
  naive,       // naive ideas only
  no_model,    // nothing detected
};

inline constexpr std::size_t kReasoningModelCount = 4;

int key_concept_total(const ConceptScores& s);  // 0..6
int naive_total(const ConceptScores& s);        // 0..3

ReasoningModel classify_model(const ConceptScores& s);

// Serialized exactly as "scientific", "mixed", "naive", "no_model".
std::string_view model_name(ReasoningModel m);
std::optional<ReasoningModel> model_from_name(std::string_view name);

}  // namespace evoscore

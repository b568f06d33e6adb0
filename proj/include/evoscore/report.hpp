#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evoscore/scoring.hpp"

namespace evoscore {

struct BubbleCell {
  int key_total = 0;
  int naive_total = 0;
  std::size_t count = 0;

  bool operator==(const BubbleCell&) const = default;
};

// Aggregates over one set of result rows.
struct ReportSection {
  std::size_t n_responses = 0;
  std::array<double, kConceptCount> concept_presence_pct{};
  std::array<std::size_t, kReasoningModelCount> model_counts{};
  std::vector<BubbleCell> bubble;  // nonzero cells, sorted by (key, naive)

  bool operator==(const ReportSection&) const = default;
};

struct Report {
  ReportSection overall;
  // Per-item sub-reports in first-appearance order of item_id.
  std::vector<std::pair<std::string, ReportSection>> per_item;

  bool operator==(const Report&) const = default;
};

Report generate_report(std::span<const ResultRow> rows);

nlohmann::json report_to_json(const Report& report);

}  // namespace evoscore

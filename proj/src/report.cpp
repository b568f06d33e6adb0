#include "evoscore/report.hpp"

#include <map>
#include <stdexcept>

namespace evoscore {

namespace {

ReportSection build_section(std::span<const ResultRow* const> rows) {
  ReportSection section;
  section.n_responses = rows.size();
  std::array<std::size_t, kConceptCount> present_counts{};
  std::map<std::pair<int, int>, std::size_t> bubble;
  for (const ResultRow* row : rows) {
    for (std::size_t c = 0; c < kConceptCount; ++c) {
      present_counts[c] += row->scores.present[c];
    }
    ++section.model_counts[static_cast<std::size_t>(row->model)];
    ++bubble[{row->key_total, row->naive_total}];
  }
  for (std::size_t c = 0; c < kConceptCount; ++c) {
    section.concept_presence_pct[c] = 100.0 *
                                      static_cast<double>(present_counts[c]) /
                                      static_cast<double>(rows.size());
  }
  for (const auto& [cell, count] : bubble) {
    section.bubble.push_back({cell.first, cell.second, count});
  }
  return section;
}

}  // namespace

Report generate_report(std::span<const ResultRow> rows) {
  if (rows.empty()) throw std::runtime_error("generate_report: no rows");

  Report report;
  std::vector<const ResultRow*> all;
  all.reserve(rows.size());
  for (const ResultRow& row : rows) all.push_back(&row);
  report.overall = build_section(all);

  std::vector<std::string> item_order;
  std::map<std::string, std::vector<const ResultRow*>> by_item;
  for (const ResultRow& row : rows) {
    auto [it, inserted] = by_item.try_emplace(row.item_id);
    if (inserted) item_order.push_back(row.item_id);
    it->second.push_back(&row);
  }
  for (const std::string& item : item_order) {
    report.per_item.emplace_back(item, build_section(by_item.at(item)));
  }
  return report;
}

namespace {

nlohmann::json section_to_json(const ReportSection& section) {
  nlohmann::json presence = nlohmann::json::object();
  for (ConceptId c : all_concepts()) {
    presence[std::string(concept_name(c))] =
        section.concept_presence_pct[concept_index(c)];
  }
  nlohmann::json models = nlohmann::json::object();
  for (std::size_t m = 0; m < kReasoningModelCount; ++m) {
    models[std::string(model_name(static_cast<ReasoningModel>(m)))] =
        section.model_counts[m];
  }
  nlohmann::json bubble = nlohmann::json::array();
  for (const BubbleCell& cell : section.bubble) {
    bubble.push_back({{"key_total", cell.key_total},
                      {"naive_total", cell.naive_total},
                      {"count", cell.count}});
  }
  return nlohmann::json{
      {"n_responses", section.n_responses},
      {"concept_presence_pct", std::move(presence)},
      {"model_distribution", std::move(models)},
      {"bubble", std::move(bubble)},
  };
}

}  // namespace

nlohmann::json report_to_json(const Report& report) {
  nlohmann::json j = section_to_json(report.overall);
  nlohmann::json per_item = nlohmann::json::array();
  for (const auto& [item, section] : report.per_item) {
    nlohmann::json entry = section_to_json(section);
    entry["item_id"] = item;
    per_item.push_back(std::move(entry));
  }
  j["per_item"] = std::move(per_item);
  return j;
}

}  // namespace evoscore

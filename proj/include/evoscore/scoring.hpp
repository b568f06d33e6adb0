#pragma once

#include <span>
#include <string>
#include <vector>

#include "evoscore/corpus.hpp"
#include "evoscore/modelset.hpp"
#include "evoscore/reasoning.hpp"

namespace evoscore {

// One scored answer in the comprehensive result file. The totals and model
// columns are redundant with the nine scores and must always agree.
struct ResultRow {
  std::string student_id;
  std::string item_id;
  ConceptScores scores;
  int key_total = 0;
  int naive_total = 0;
  ReasoningModel model = ReasoningModel::no_model;

  bool operator==(const ResultRow&) const = default;
};

ResultRow make_result_row(std::string student_id, std::string item_id,
                          ConceptScores scores);

// Scores every non-empty answer with all nine classifiers. The batch is
// split per item and the per-item results merged back in (input row, item)
// order.
std::vector<ResultRow> score_batch(const ResponseBatch& batch,
                                   const ModelSet& set);

// Fixed header:
// student_id,item_id,<nine concepts>,key_total,naive_total,model_type
std::string write_result_csv(std::span<const ResultRow> rows);

// Strict inverse of write_result_csv; verifies the redundant columns.
std::vector<ResultRow> parse_result_csv(std::string_view bytes);

}  // namespace evoscore

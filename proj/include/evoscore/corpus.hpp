#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evoscore/concepts.hpp"

namespace evoscore {

// One human-scored written explanation.
struct LabeledResponse {
  std::string response_id;
  std::string item_id;
  std::string text;
  ConceptScores labels;

  bool operator==(const LabeledResponse&) const = default;
};

struct TrainingCorpus {
  std::vector<LabeledResponse> responses;

  bool operator==(const TrainingCorpus&) const = default;
};

// One uploaded row: a student identifier plus one optional answer per item
// column. Absent entries mean the cell was empty (skipped at scoring).
struct BatchRow {
  std::string student_id;
  std::vector<std::optional<std::string>> answers;  // aligned with item_ids
};

struct ResponseBatch {
  std::vector<std::string> item_ids;  // 1..8 columns, header order
  std::vector<BatchRow> rows;
};

inline constexpr std::size_t kMaxBatchItems = 8;

// Training CSV header: response_id,item_id,text followed by the nine concept
// columns in canonical order. Label cells must be exactly "0" or "1".
// Errors carry the 1-based file row (header = row 1).
TrainingCorpus parse_training_corpus(std::string_view bytes);

// Inverse of parse_training_corpus; parse(write(c)) == c field-by-field.
std::string write_training_corpus_csv(const TrainingCorpus& corpus);

// Batch CSV header: student_id then 1..8 item-identifier columns.
ResponseBatch parse_response_batch(std::string_view bytes);

struct ItemResponse {
  std::size_t row_index;  // position in ResponseBatch::rows
  std::string student_id;
  std::string text;
};

struct ItemResponses {
  std::string item_id;
  std::vector<ItemResponse> entries;
};

// Partitions the batch into one per-item response list, preserving row
// order and omitting empty cells.
std::vector<ItemResponses> split_by_item(const ResponseBatch& batch);

}  // namespace evoscore

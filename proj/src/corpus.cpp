#include "evoscore/corpus.hpp"

#include <stdexcept>
#include <unordered_set>

#include "evoscore/csv.hpp"

namespace evoscore {

namespace {

std::string trimmed(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n'))
    ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' ||
                   s[e - 1] == '\n'))
    --e;
  return std::string(s.substr(b, e - b));
}

bool blank_record(const std::vector<std::string>& rec) {
  return rec.size() == 1 && rec[0].empty();
}

[[noreturn]] void row_error(std::size_t row, const std::string& what) {
  throw std::runtime_error("row " + std::to_string(row) + ": " + what);
}

// Drops blank records at the end of the file; a blank record anywhere else
// is reported against its row number.
std::vector<std::vector<std::string>> records_without_trailing_blanks(
    std::string_view bytes) {
  auto records = csv::parse(bytes);
  while (!records.empty() && blank_record(records.back())) records.pop_back();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (blank_record(records[i])) row_error(i + 1, "blank row");
  }
  return records;
}

}  // namespace

TrainingCorpus parse_training_corpus(std::string_view bytes) {
  const auto records = records_without_trailing_blanks(bytes);
  if (records.empty()) throw std::runtime_error("empty file: header row missing");

  constexpr std::size_t kColumns = 3 + kConceptCount;
  const auto& header = records[0];
  std::vector<std::string> expected = {"response_id", "item_id", "text"};
  for (ConceptId c : all_concepts()) expected.emplace_back(concept_name(c));
  if (header.size() != kColumns) {
    row_error(1, "expected " + std::to_string(kColumns) + " header columns, got " +
                     std::to_string(header.size()));
  }
  for (std::size_t i = 0; i < kColumns; ++i) {
    if (header[i] != expected[i]) {
      row_error(1, "header column " + std::to_string(i + 1) + " must be '" +
                       expected[i] + "', got '" + header[i] + "'");
    }
  }

  TrainingCorpus corpus;
  std::unordered_set<std::string> seen_ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const std::size_t row = r + 1;
    const auto& rec = records[r];
    if (rec.size() != kColumns) {
      row_error(row, "expected " + std::to_string(kColumns) + " columns, got " +
                         std::to_string(rec.size()));
    }
    LabeledResponse resp;
    resp.response_id = trimmed(rec[0]);
    resp.item_id = trimmed(rec[1]);
    resp.text = trimmed(rec[2]);
    if (resp.response_id.empty()) row_error(row, "empty response_id");
    if (resp.text.empty()) row_error(row, "empty text");
    if (!seen_ids.insert(resp.response_id).second) {
      row_error(row, "duplicate response_id '" + resp.response_id + "'");
    }
    for (std::size_t c = 0; c < kConceptCount; ++c) {
      const std::string& cell = rec[3 + c];
      if (cell == "0") {
        resp.labels.present[c] = 0;
      } else if (cell == "1") {
        resp.labels.present[c] = 1;
      } else {
        row_error(row, "column '" + expected[3 + c] + "': label must be 0 or 1, got '" +
                           cell + "'");
      }
    }
    corpus.responses.push_back(std::move(resp));
  }
  return corpus;
}

std::string write_training_corpus_csv(const TrainingCorpus& corpus) {
  std::vector<std::string> header = {"response_id", "item_id", "text"};
  for (ConceptId c : all_concepts()) header.emplace_back(concept_name(c));
  std::string out = csv::write_record(header);
  for (const auto& resp : corpus.responses) {
    std::vector<std::string> rec = {resp.response_id, resp.item_id, resp.text};
    for (std::size_t c = 0; c < kConceptCount; ++c) {
      rec.emplace_back(resp.labels.present[c] ? "1" : "0");
    }
    out += csv::write_record(rec);
  }
  return out;
}

ResponseBatch parse_response_batch(std::string_view bytes) {
  const auto records = records_without_trailing_blanks(bytes);
  if (records.empty()) throw std::runtime_error("empty file: header row missing");

  const auto& header = records[0];
  if (header.empty() || trimmed(header[0]) != "student_id") {
    row_error(1, "first header column must be 'student_id'");
  }
  const std::size_t item_count = header.size() - 1;
  if (item_count == 0) row_error(1, "no item columns");
  if (item_count > kMaxBatchItems) row_error(1, "item count exceeds 8");

  ResponseBatch batch;
  for (std::size_t i = 1; i < header.size(); ++i) {
    std::string id = trimmed(header[i]);
    if (id.empty()) row_error(1, "empty item id in header column " + std::to_string(i + 1));
    batch.item_ids.push_back(std::move(id));
  }

  for (std::size_t r = 1; r < records.size(); ++r) {
    const std::size_t row = r + 1;
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      row_error(row, "expected " + std::to_string(header.size()) + " columns, got " +
                         std::to_string(rec.size()));
    }
    BatchRow brow;
    brow.student_id = trimmed(rec[0]);
    if (brow.student_id.empty()) row_error(row, "empty student_id");
    bool any_answer = false;
    for (std::size_t i = 0; i < item_count; ++i) {
      std::string text = trimmed(rec[1 + i]);
      if (text.empty()) {
        brow.answers.emplace_back(std::nullopt);
      } else {
        brow.answers.emplace_back(std::move(text));
        any_answer = true;
      }
    }
    if (!any_answer) {
      row_error(row, "all answers empty for " + brow.student_id);
    }
    batch.rows.push_back(std::move(brow));
  }
  return batch;
}

std::vector<ItemResponses> split_by_item(const ResponseBatch& batch) {
  std::vector<ItemResponses> out;
  out.reserve(batch.item_ids.size());
  for (std::size_t i = 0; i < batch.item_ids.size(); ++i) {
    ItemResponses ir;
    ir.item_id = batch.item_ids[i];
    for (std::size_t r = 0; r < batch.rows.size(); ++r) {
      const auto& answer = batch.rows[r].answers[i];
      if (answer) ir.entries.push_back({r, batch.rows[r].student_id, *answer});
    }
    out.push_back(std::move(ir));
  }
  return out;
}

}  // namespace evoscore

#include "evoscore/scoring.hpp"

#include <stdexcept>

#include "evoscore/csv.hpp"
#include "evoscore/svm.hpp"

namespace evoscore {

ResultRow make_result_row(std::string student_id, std::string item_id,
                          ConceptScores scores) {
  ResultRow row;
  row.student_id = std::move(student_id);
  row.item_id = std::move(item_id);
  row.scores = scores;
  row.key_total = key_concept_total(scores);
  row.naive_total = naive_total(scores);
  row.model = classify_model(scores);
  return row;
}

std::vector<ResultRow> score_batch(const ResponseBatch& batch,
                                   const ModelSet& set) {
  const std::size_t n_items = batch.item_ids.size();

  // Scores keyed by (row, item); filled one item at a time, merged after.
  std::vector<std::vector<std::optional<ConceptScores>>> cells(
      batch.rows.size(),
      std::vector<std::optional<ConceptScores>>(n_items));

  const auto per_item = split_by_item(batch);
  for (std::size_t item = 0; item < per_item.size(); ++item) {
    for (const ItemResponse& entry : per_item[item].entries) {
      ConceptScores scores;
      for (ConceptId c : all_concepts()) {
        const ConceptBundle& bundle = set.bundle(c);
        const FeatureVector v = vectorize(entry.text, bundle.dictionary);
        scores[c] = predict_present(bundle.classifier, v) ? 1 : 0;
      }
      cells[entry.row_index][item] = scores;
    }
  }

  std::vector<ResultRow> rows;
  for (std::size_t r = 0; r < batch.rows.size(); ++r) {
    for (std::size_t item = 0; item < n_items; ++item) {
      if (!cells[r][item]) continue;
      rows.push_back(make_result_row(batch.rows[r].student_id,
                                     batch.item_ids[item], *cells[r][item]));
    }
  }
  return rows;
}

namespace {

std::vector<std::string> result_header() {
  std::vector<std::string> header = {"student_id", "item_id"};
  for (ConceptId c : all_concepts()) header.emplace_back(concept_name(c));
  header.emplace_back("key_total");
  header.emplace_back("naive_total");
  header.emplace_back("model_type");
  return header;
}

}  // namespace

std::string write_result_csv(std::span<const ResultRow> rows) {
  if (rows.empty()) throw std::runtime_error("write_result_csv: no rows");
  std::string out = csv::write_record(result_header());
  for (const ResultRow& row : rows) {
    std::vector<std::string> rec = {row.student_id, row.item_id};
    for (std::size_t c = 0; c < kConceptCount; ++c) {
      rec.emplace_back(row.scores.present[c] ? "1" : "0");
    }
    rec.emplace_back(std::to_string(row.key_total));
    rec.emplace_back(std::to_string(row.naive_total));
    rec.emplace_back(model_name(row.model));
    out += csv::write_record(rec);
  }
  return out;
}

std::vector<ResultRow> parse_result_csv(std::string_view bytes) {
  const auto records = csv::parse(bytes);
  if (records.empty()) throw std::runtime_error("result CSV: missing header");
  const auto expected = result_header();
  if (records[0] != expected) {
    throw std::runtime_error("result CSV: unexpected header row");
  }
  std::vector<ResultRow> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() == 1 && rec[0].empty() && r + 1 == records.size()) break;
    if (rec.size() != expected.size()) {
      throw std::runtime_error("result CSV: row " + std::to_string(r + 1) +
                               " has " + std::to_string(rec.size()) + " columns");
    }
    ConceptScores scores;
    for (std::size_t c = 0; c < kConceptCount; ++c) {
      const std::string& cell = rec[2 + c];
      if (cell != "0" && cell != "1") {
        throw std::runtime_error("result CSV: row " + std::to_string(r + 1) +
                                 ": score must be 0 or 1");
      }
      scores.present[c] = cell == "1" ? 1 : 0;
    }
    ResultRow row = make_result_row(rec[0], rec[1], scores);
    const auto model = model_from_name(rec[13]);
    if (rec[11] != std::to_string(row.key_total) ||
        rec[12] != std::to_string(row.naive_total) || !model ||
        *model != row.model) {
      throw std::runtime_error("result CSV: row " + std::to_string(r + 1) +
                               ": totals/model disagree with concept scores");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("result CSV: no data rows");
  return rows;
}

}  // namespace evoscore

#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace evoscore {

// Human-vs-machine correspondence counts; positive class = concept present.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t n() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const int> predictions,
                          std::span<const int> gold);

// Cohen's kappa. When chance agreement is 1 (both raters constant), returns
// 1 if observed agreement is 1 and 0 otherwise.
double kappa(const ConfusionMatrix& cm);

struct PrecisionRecallF1 {
  std::optional<double> precision;  // empty on zero denominator
  std::optional<double> recall;
  std::optional<double> f1;
};

PrecisionRecallF1 precision_recall_f1(const ConfusionMatrix& cm);

struct AgreementReport {
  double kappa = 0.0;
  double agreement_pct = 0.0;  // 100 * (tp+tn) / n
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::uint64_t n = 0;

  static AgreementReport from(const ConfusionMatrix& cm);
};

// Spearman's rank correlation: Pearson correlation of average ranks, ties
// receiving the mean of the rank positions they occupy. Throws on length
// mismatch, length < 2, or a constant list.
double spearman(std::span<const double> xs, std::span<const double> ys);

// Publication gate: agreement >= 90% and kappa >= 0.8, both inclusive.
bool meets_thresholds(const AgreementReport& report);

}  // namespace evoscore

#include "evoscore/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace evoscore {

ConfusionMatrix confusion(std::span<const int> predictions,
                          std::span<const int> gold) {
  if (predictions.size() != gold.size()) {
    throw std::runtime_error("confusion: prediction/gold length mismatch");
  }
  if (predictions.empty()) throw std::runtime_error("confusion: empty input");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool p = predictions[i] != 0;
    const bool g = gold[i] != 0;
    if (p && g) ++cm.tp;
    else if (p && !g) ++cm.fp;
    else if (!p && g) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

double kappa(const ConfusionMatrix& cm) {
  const double n = static_cast<double>(cm.n());
  if (n == 0.0) throw std::runtime_error("kappa: empty confusion matrix");
  const double tp = static_cast<double>(cm.tp);
  const double fp = static_cast<double>(cm.fp);
  const double fn = static_cast<double>(cm.fn);
  const double tn = static_cast<double>(cm.tn);
  const double p0 = (tp + tn) / n;
  const double pe = ((tp + fn) * (tp + fp) + (fp + tn) * (fn + tn)) / (n * n);
  if (pe >= 1.0) return p0 >= 1.0 ? 1.0 : 0.0;
  return (p0 - pe) / (1.0 - pe);
}

PrecisionRecallF1 precision_recall_f1(const ConfusionMatrix& cm) {
  if (cm.n() == 0) throw std::runtime_error("precision_recall_f1: empty matrix");
  PrecisionRecallF1 out;
  const double tp = static_cast<double>(cm.tp);
  if (cm.tp + cm.fp > 0) out.precision = tp / static_cast<double>(cm.tp + cm.fp);
  if (cm.tp + cm.fn > 0) out.recall = tp / static_cast<double>(cm.tp + cm.fn);
  if (out.precision && out.recall && *out.precision + *out.recall > 0.0) {
    out.f1 = 2.0 * *out.precision * *out.recall /
             (*out.precision + *out.recall);
  }
  return out;
}

AgreementReport AgreementReport::from(const ConfusionMatrix& cm) {
  AgreementReport report;
  report.n = cm.n();
  report.kappa = evoscore::kappa(cm);
  report.agreement_pct =
      100.0 * static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.n());
  const auto prf = precision_recall_f1(cm);
  report.precision = prf.precision;
  report.recall = prf.recall;
  report.f1 = prf.f1;
  return report;
}

namespace {

// Average ranks, 1-based; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::runtime_error("spearman: length mismatch");
  }
  if (xs.size() < 2) throw std::runtime_error("spearman: need at least 2 points");
  const auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(),
                       [&](double x) { return x == v.front(); });
  };
  if (constant(xs) || constant(ys)) {
    throw std::runtime_error("spearman: correlation undefined for a constant list");
  }
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(xs.size());
  const double mean_x = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double mean_y = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean_x;
    const double dy = ry[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

bool meets_thresholds(const AgreementReport& report) {
  return report.agreement_pct >= 90.0 && report.kappa >= 0.8;
}

}  // namespace evoscore

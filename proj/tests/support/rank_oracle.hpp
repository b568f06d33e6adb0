#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace evoscore::testsupport {

// Independent Spearman oracle: ranks by pairwise counting (no sorting),
// then Pearson on the ranks via raw moment sums.
inline double spearman_counting_oracle(std::span<const double> xs,
                                       std::span<const double> ys) {
  const std::size_t n = xs.size();
  const auto ranks = [n](std::span<const double> v) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t smaller = 0, equal = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (v[j] < v[i]) ++smaller;
        if (j != i && v[j] == v[i]) ++equal;
      }
      r[i] = static_cast<double>(smaller) + 1.0 + static_cast<double>(equal) / 2.0;
    }
    return r;
  };
  const auto rx = ranks(xs);
  const auto ry = ranks(ys);
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += rx[i];
    sy += ry[i];
    sxx += rx[i] * rx[i];
    syy += ry[i] * ry[i];
    sxy += rx[i] * ry[i];
  }
  const double dn = static_cast<double>(n);
  const double cov = sxy - sx * sy / dn;
  const double vx = sxx - sx * sx / dn;
  const double vy = syy - sy * sy / dn;
  return cov / std::sqrt(vx * vy);
}

}  // namespace evoscore::testsupport

#include "evoscore/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "evoscore/textpipe.hpp"

namespace evoscore {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s, const char* what) {
  std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (end != tmp.c_str() + tmp.size() || tmp.empty()) {
    throw std::runtime_error(std::string("classifier: bad ") + what + " '" +
                             tmp + "'");
  }
  return v;
}

// The solver state for one training run.
class SmoSolver {
 public:
  SmoSolver(std::span<const FeatureVector> x, std::span<const int> y,
            const SmoParams& params)
      : x_(x),
        y_(y),
        c_(params.c),
        tol_(params.kkt_tolerance),
        eps_(params.alpha_epsilon),
        max_epochs_(params.max_epochs),
        n_(x.size()),
        dim_(x.empty() ? 0 : x[0].dict_size),
        alphas_(x.size(), 0.0),
        weights_(dim_, 0.0),
        bias_(0.0) {
    diag_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) diag_.push_back(sparse_dot(x_[i], x_[i]));
  }

  BinaryClassifier solve() {
    bool converged = false;
    bool examine_all = true;
    bool stalled_after_recentre = false;
    int epoch = 0;
    while (epoch < max_epochs_) {
      ++epoch;
      std::size_t changed = 0;
      if (examine_all) {
        for (std::size_t i = 0; i < n_; ++i) changed += examine(i);
      } else {
        for (std::size_t i = 0; i < n_; ++i) {
          if (is_free(alphas_[i])) changed += examine(i);
        }
      }
      if (examine_all) {
        if (changed == 0) {
          // Candidate optimum: recentre the bias on the boundary support
          // vectors, then certify KKT under that bias before declaring
          // convergence.
          recompute_bias();
          if (kkt_satisfied()) {
            converged = true;
            break;
          }
          if (stalled_after_recentre) break;  // no further progress possible
          stalled_after_recentre = true;
          continue;  // stay in full-scan mode with the new bias
        }
        stalled_after_recentre = false;
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    if (!converged) recompute_bias();

    BinaryClassifier clf;
    clf.weights = std::move(weights_);
    clf.bias = bias_;
    clf.alphas = std::move(alphas_);
    clf.converged = converged;
    clf.training_size = n_;
    clf.c = c_;
    return clf;
  }

 private:
  bool is_free(double a) const { return a > 0.0 && a < c_; }

  double raw_score(std::size_t i) const {
    double s = bias_;
    for (const auto& [idx, cnt] : x_[i].entries) s += weights_[idx] * cnt;
    return s;
  }

  double error(std::size_t i) const { return raw_score(i) - y_[i]; }

  std::size_t examine(std::size_t i2) {
    const double y2 = y_[i2];
    const double alph2 = alphas_[i2];
    const double e2 = error(i2);
    const double r2 = e2 * y2;
    const bool violates =
        (r2 < -tol_ && alph2 < c_) || (r2 > tol_ && alph2 > 0.0);
    if (!violates) return 0;

    // Heuristic 1: partner with the largest |E1-E2| among free examples.
    std::size_t best = n_;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == i2 || !is_free(alphas_[i])) continue;
      const double gap = std::abs(error(i) - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best < n_ && take_step(best, i2)) return 1;

    // Heuristic 2: all free examples in index order.
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == i2 || !is_free(alphas_[i])) continue;
      if (take_step(i, i2)) return 1;
    }
    // Heuristic 3: every example in index order.
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == i2 || is_free(alphas_[i])) continue;
      if (take_step(i, i2)) return 1;
    }
    return 0;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double alph1 = alphas_[i1];
    const double alph2 = alphas_[i2];
    const double y1 = y_[i1];
    const double y2 = y_[i2];
    const double e1 = error(i1);
    const double e2 = error(i2);
    const double s = y1 * y2;

    double low, high;
    if (y1 != y2) {
      low = std::max(0.0, alph2 - alph1);
      high = std::min(c_, c_ + alph2 - alph1);
    } else {
      low = std::max(0.0, alph1 + alph2 - c_);
      high = std::min(c_, alph1 + alph2);
    }
    if (low >= high) return false;

    const double k11 = diag_[i1];
    const double k22 = diag_[i2];
    const double k12 = sparse_dot(x_[i1], x_[i2]);
    const double eta = k11 + k22 - 2.0 * k12;

    double a2;
    if (eta > 0.0) {
      a2 = alph2 + y2 * (e1 - e2) / eta;
      a2 = std::clamp(a2, low, high);
    } else {
      // Flat or concave direction: evaluate the dual at both clip ends and
      // move to the strictly better one.
      const double obj_low = pair_objective(i1, i2, low);
      const double obj_high = pair_objective(i1, i2, high);
      const double margin = std::max(eps_, 1e-12);
      if (obj_low > obj_high + margin) {
        a2 = low;
      } else if (obj_high > obj_low + margin) {
        a2 = high;
      } else {
        return false;
      }
    }
    if (a2 == alph2) return false;
    // Sub-epsilon moves are rejected unless they land exactly on a box
    // bound; without that exception a multiplier can sit a rounding error
    // away from its bound and stall the whole solve.
    if (std::abs(a2 - alph2) < eps_ * (a2 + alph2 + eps_) && a2 != 0.0 &&
        a2 != c_) {
      return false;
    }

    double a1 = alph1 + s * (alph2 - a2);
    if (a1 < 0.0) {
      a2 += s * a1;
      a1 = 0.0;
    } else if (a1 > c_) {
      a2 += s * (a1 - c_);
      a1 = c_;
    }

    const double d1 = a1 - alph1;
    const double d2 = a2 - alph2;

    // Threshold so the updated example with a free multiplier sits on its
    // margin: f(x) = w.x + b.
    const double b1 = bias_ - e1 - y1 * d1 * k11 - y2 * d2 * k12;
    const double b2 = bias_ - e2 - y1 * d1 * k12 - y2 * d2 * k22;
    if (a1 > 0.0 && a1 < c_) {
      bias_ = b1;
    } else if (a2 > 0.0 && a2 < c_) {
      bias_ = b2;
    } else {
      bias_ = 0.5 * (b1 + b2);
    }

    for (const auto& [idx, cnt] : x_[i1].entries) weights_[idx] += y1 * d1 * cnt;
    for (const auto& [idx, cnt] : x_[i2].entries) weights_[idx] += y2 * d2 * cnt;
    alphas_[i1] = a1;
    alphas_[i2] = a2;
    return true;
  }

  // Dual objective restricted to the (i1, i2) pair as a function of a2,
  // with a1 determined by the equality constraint. Larger is better.
  double pair_objective(std::size_t i1, std::size_t i2, double a2) const {
    const double y1 = y_[i1];
    const double y2 = y_[i2];
    const double s = y1 * y2;
    const double alph1 = alphas_[i1];
    const double alph2 = alphas_[i2];
    const double a1 = alph1 + s * (alph2 - a2);
    const double k11 = diag_[i1];
    const double k22 = diag_[i2];
    const double k12 = sparse_dot(x_[i1], x_[i2]);
    // v_i = w.x_i excluding the pair's own contribution
    const double wx1 = raw_score(i1) - bias_;
    const double wx2 = raw_score(i2) - bias_;
    const double v1 = wx1 - y1 * alph1 * k11 - y2 * alph2 * k12;
    const double v2 = wx2 - y1 * alph1 * k12 - y2 * alph2 * k22;
    return a1 + a2 -
           0.5 * k11 * a1 * a1 - 0.5 * k22 * a2 * a2 - s * k12 * a1 * a2 -
           y1 * a1 * v1 - y2 * a2 * v2;
  }

  // Average margin of the free support vectors; midpoint of the feasible
  // KKT interval when none are free.
  void recompute_bias() {
    double sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!is_free(alphas_[i])) continue;
      sum += y_[i] - (raw_score(i) - bias_);
      ++free_count;
    }
    if (free_count > 0) {
      bias_ = sum / static_cast<double>(free_count);
      return;
    }
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
      const double wx = raw_score(i) - bias_;
      const bool at_zero = alphas_[i] <= 0.0;
      const bool at_c = alphas_[i] >= c_;
      if ((at_zero && y_[i] > 0) || (at_c && y_[i] < 0)) {
        lower = std::max(lower, y_[i] - wx);
      }
      if ((at_zero && y_[i] < 0) || (at_c && y_[i] > 0)) {
        upper = std::min(upper, y_[i] - wx);
      }
    }
    if (std::isfinite(lower) && std::isfinite(upper)) {
      bias_ = 0.5 * (lower + upper);
    } else if (std::isfinite(lower)) {
      bias_ = lower;
    } else if (std::isfinite(upper)) {
      bias_ = upper;
    }
  }

  bool kkt_satisfied() const {
    for (std::size_t i = 0; i < n_; ++i) {
      const double r = error(i) * y_[i];
      if ((r < -tol_ && alphas_[i] < c_) || (r > tol_ && alphas_[i] > 0.0)) {
        return false;
      }
    }
    return true;
  }

  std::span<const FeatureVector> x_;
  std::span<const int> y_;
  double c_;
  double tol_;
  double eps_;
  int max_epochs_;
  std::size_t n_;
  std::size_t dim_;
  std::vector<double> alphas_;
  std::vector<double> weights_;
  double bias_;
  std::vector<double> diag_;
};

}  // namespace

void SmoParams::validate() const {
  if (c <= 0.0) throw std::runtime_error("SmoParams: c must be positive");
  if (kkt_tolerance <= 0.0 || kkt_tolerance >= 1.0) {
    throw std::runtime_error("SmoParams: kkt_tolerance must be in (0, 1)");
  }
  if (alpha_epsilon <= 0.0 || alpha_epsilon >= kkt_tolerance) {
    throw std::runtime_error(
        "SmoParams: alpha_epsilon must be positive and below kkt_tolerance");
  }
  if (max_epochs < 1) throw std::runtime_error("SmoParams: max_epochs must be >= 1");
}

double sparse_dot(const FeatureVector& a, const FeatureVector& b) {
  double sum = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum += static_cast<double>(ia->second) * static_cast<double>(ib->second);
      ++ia;
      ++ib;
    }
  }
  return sum;
}

BinaryClassifier train_smo(std::span<const FeatureVector> vectors,
                           std::span<const int> labels,
                           const SmoParams& params) {
  params.validate();
  if (vectors.empty()) throw std::runtime_error("train_smo: empty training set");
  if (vectors.size() != labels.size()) {
    throw std::runtime_error("train_smo: vector/label length mismatch");
  }
  const std::size_t dim = vectors[0].dict_size;
  for (const auto& v : vectors) {
    if (v.dict_size != dim) {
      throw std::runtime_error("train_smo: vectors from different dictionaries");
    }
  }
  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y == 1) {
      has_pos = true;
    } else if (y == -1) {
      has_neg = true;
    } else {
      throw std::runtime_error("train_smo: labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) {
    // Degenerate single-class input: a constant classifier.
    BinaryClassifier clf;
    clf.weights.assign(dim, 0.0);
    clf.bias = has_pos ? 1.0 : -1.0;
    clf.alphas.assign(vectors.size(), 0.0);
    clf.converged = true;
    clf.training_size = vectors.size();
    clf.c = params.c;
    return clf;
  }
  return SmoSolver(vectors, labels, params).solve();
}

double decision_value(const BinaryClassifier& clf, const FeatureVector& v) {
  double sum = clf.bias;
  for (const auto& [idx, cnt] : v.entries) {
    if (idx >= clf.weights.size()) {
      throw std::runtime_error("decision_value: vector index " +
                               std::to_string(idx) + " out of range for " +
                               std::to_string(clf.weights.size()) + " weights");
    }
    sum += clf.weights[idx] * static_cast<double>(cnt);
  }
  return sum;
}

bool predict_present(const BinaryClassifier& clf, const FeatureVector& v) {
  return decision_value(clf, v) > 0.0;
}

double dual_objective(std::span<const FeatureVector> vectors,
                      std::span<const int> labels,
                      std::span<const double> alphas) {
  const std::size_t n = vectors.size();
  double linear = 0.0;
  for (double a : alphas) linear += a;
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (alphas[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (alphas[j] == 0.0) continue;
      quad += alphas[i] * alphas[j] * labels[i] * labels[j] *
              sparse_dot(vectors[i], vectors[j]);
    }
  }
  return linear - 0.5 * quad;
}

std::string save_classifier(const BinaryClassifier& clf) {
  std::string out = "evoscore.svm\tv1\tdim=" + std::to_string(clf.weights.size());
  out += "\tbias=" + fmt17(clf.bias);
  out += "\tc=" + fmt17(clf.c);
  out += "\tconverged=";
  out += clf.converged ? "1" : "0";
  out.push_back('\n');
  for (std::size_t i = 0; i < clf.weights.size(); ++i) {
    if (clf.weights[i] == 0.0) continue;
    out += std::to_string(i);
    out.push_back('\t');
    out += fmt17(clf.weights[i]);
    out.push_back('\n');
  }
  return out;
}

BinaryClassifier load_classifier(std::string_view bytes) {
  std::size_t pos = 0;
  const auto next_line = [&]() -> std::string_view {
    if (pos >= bytes.size()) return {};
    const std::size_t nl = bytes.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? bytes.substr(pos)
                                : bytes.substr(pos, nl - pos);
    pos = nl == std::string_view::npos ? bytes.size() : nl + 1;
    return line;
  };

  const std::string_view header = next_line();
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = header.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(header.substr(start));
      break;
    }
    fields.push_back(header.substr(start, tab - start));
    start = tab + 1;
  }
  if (fields.size() != 6 || fields[0] != "evoscore.svm" || fields[1] != "v1") {
    throw std::runtime_error("classifier: bad header line");
  }
  const auto expect = [](std::string_view f, std::string_view key) {
    if (f.size() < key.size() + 1 || f.substr(0, key.size()) != key ||
        f[key.size()] != '=') {
      throw std::runtime_error("classifier: expected '" + std::string(key) +
                               "=' field");
    }
    return f.substr(key.size() + 1);
  };

  BinaryClassifier clf;
  const auto dim_text = expect(fields[2], "dim");
  const std::size_t dim = std::strtoull(std::string(dim_text).c_str(), nullptr, 10);
  clf.weights.assign(dim, 0.0);
  clf.bias = parse_double(expect(fields[3], "bias"), "bias");
  clf.c = parse_double(expect(fields[4], "c"), "c");
  const auto conv = expect(fields[5], "converged");
  if (conv == "1") {
    clf.converged = true;
  } else if (conv == "0") {
    clf.converged = false;
  } else {
    throw std::runtime_error("classifier: converged flag must be 0 or 1");
  }

  while (pos < bytes.size()) {
    const std::string_view line = next_line();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw std::runtime_error("classifier: bad weight line");
    }
    const std::size_t idx =
        std::strtoull(std::string(line.substr(0, tab)).c_str(), nullptr, 10);
    if (idx >= dim) throw std::runtime_error("classifier: weight index out of range");
    clf.weights[idx] = parse_double(line.substr(tab + 1), "weight");
  }
  return clf;
}

}  // namespace evoscore

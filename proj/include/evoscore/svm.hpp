#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evoscore/textpipe.hpp"

namespace evoscore {

struct SmoParams {
  double c = 1.0;                // soft-margin penalty
  double kkt_tolerance = 1e-3;   // KKT violation slack
  double alpha_epsilon = 1e-12;  // minimum meaningful dual update
  int max_epochs = 1000;         // full passes before abort

  void validate() const;
};

// One trained soft-margin linear decision function: f(x) = w.x + bias.
struct BinaryClassifier {
  std::vector<double> weights;  // dense over dictionary indices
  double bias = 0.0;
  std::vector<double> alphas;   // per-training-example dual variables
  bool converged = false;
  std::size_t training_size = 0;
  double c = 1.0;
};

// Sequential Minimal Optimization on the linear-kernel soft-margin dual.
// Pair selection is deterministic: the outer loop alternates full scans and
// non-bound scans; the inner partner maximizes |E1-E2| with ties broken by
// lowest index. Single-class input yields a constant classifier.
BinaryClassifier train_smo(std::span<const FeatureVector> vectors,
                           std::span<const int> labels,
                           const SmoParams& params);

double decision_value(const BinaryClassifier& clf, const FeatureVector& v);

// present iff decision_value > 0; exactly 0 maps to absent.
bool predict_present(const BinaryClassifier& clf, const FeatureVector& v);

// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j <x_i,x_j>,
// evaluated for a trained classifier against its training set.
double dual_objective(std::span<const FeatureVector> vectors,
                      std::span<const int> labels,
                      std::span<const double> alphas);

double sparse_dot(const FeatureVector& a, const FeatureVector& b);

// Header (dimension, bias, c, converged) plus one index<TAB>value line per
// nonzero weight, values at 17 significant digits. Round-trips preserve
// predictions exactly. Dual variables are not persisted.
std::string save_classifier(const BinaryClassifier& clf);
BinaryClassifier load_classifier(std::string_view bytes);

}  // namespace evoscore

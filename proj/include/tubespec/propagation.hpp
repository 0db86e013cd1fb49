#pragma once

#include "tubespec/fourier.hpp"
#include "tubespec/operator.hpp"

#include <string>
#include <utility>
#include <vector>

namespace tubespec {

/// Product of arcs U = prod_k (a_k, b_k) in T^n, 0 < b_k - a_k <= 2 pi.
struct LocalWindow {
  std::vector<std::pair<double, double>> intervals;
  void validate(int n) const;
};

/// (2 pi)^{-n} int_U e^{i k.t} dt, in closed form.
cd window_integral(const LocalWindow& U, const Freq& k);

/// ||(F_lambda u)|_{U x G}|| per shell, computed exactly from the arc Gram matrix.
DecayProfile local_decay_profile(const ProductFunction& u, const LocalWindow& U, long lambda_max);

/// Smallest C with ||psi||^2_{T} <= C (||psi||^2_U + ||d psi||^2_T) over
/// trigonometric polynomials psi of degree <= `degree`. Non-increasing in U.
double poincare_window_constant(const LocalWindow& U, long degree);

enum class PropagationOutcome { SmoothEverywhere, Inconclusive };
std::string to_string(PropagationOutcome o);

struct PropagationReport {
  PropagationOutcome outcome = PropagationOutcome::Inconclusive;
  DecayProfile pu_profile;
  DecayProfile local_profile;
  DecayProfile global_profile;
  DecayVerdict pu;
  DecayVerdict local;
  DecayVerdict global;
  /// |local slope - global slope| (infinite when either fit is missing).
  double slope_gap = 0.0;
  std::string note;
};

PropagationReport propagation_verdict(const OperatorSpec& spec, const ProductFunction& u, const LocalWindow& U,
                                      long lambda_max, const DecayThresholds& thresholds = {});

}  // namespace tubespec

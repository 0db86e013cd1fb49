#pragma once

#include "tubespec/fourier.hpp"

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tubespec {

/// Exact half-integer k/2, stored as k.
struct HalfInt {
  long twice = 0;

  static HalfInt from_string(const std::string& s);
  bool is_integer() const { return twice % 2 == 0; }
  HalfInt abs() const { return {twice < 0 ? -twice : twice}; }
  std::string str() const;
  friend auto operator<=>(const HalfInt&, const HalfInt&) = default;
};

/// Weight data of one SU(2) eigenspace E_lambda, lambda = l(l+1).
struct Su2Spectrum {
  HalfInt l;
  mpq_class lambda;
  std::vector<std::pair<HalfInt, long>> weights;  // (gamma, multiplicity 2l+1)
  long c_lambda = 0;                              // dimension of the zero-weight part
  long dimension() const;
};

std::vector<Su2Spectrum> su2_spectrum(HalfInt l_max);

struct Su2AghReport {
  std::optional<HalfInt> min_nonzero_gamma;
  std::string C = "1/2";
  double rho = 0.0;
  bool holds = true;
  /// min over sampled phi in (ker X)^perp of ||X phi||^2 / ||phi||^2.
  double sampled_min_ratio = 0.0;
};

Su2AghReport su2_agh_check(HalfInt l_max, std::uint64_t seed = 0, int samples_per_level = 8);

struct KernelGrowthPoint {
  HalfInt l;
  mpq_class lambda;
  long c_lambda = 0;
  long cumulative = 0;
};

std::vector<KernelGrowthPoint> su2_kernel_growth(HalfInt l_max);

/// sum_{l <= L} (2l + 1)^2 over half-integers l, in closed form.
long peter_weyl_count(HalfInt L);

/// Solution of (1 - e^{ix}) u = f on the circle via u^(k) - u^(k-1) = f^(k).
struct S1Solve {
  std::map<long, cd> u;   // coefficients for k in [k_min, K]
  bool finite = false;    // true iff f(0) = 0, i.e. u is a trigonometric polynomial
  double interior_residual = 0.0;
  double cut_residual = 0.0;  // mismatch at k = K + 1 caused by truncation
  cd f_at_zero = 0.0;
};

S1Solve s1_solve(const std::map<long, cd>& f_hat, long K);

/// Norms of {u^(k), u^(-k)} per shell lambda = k^2.
DecayProfile s1_profile(const std::map<long, cd>& coeffs, long K);

struct S1Report {
  long K = 0;
  S1Solve smooth_case;  // f = 1 - e^{ix}
  DecayVerdict smooth_class;
  S1Solve distribution_case;  // f = 1
  DecayVerdict distribution_class;
  std::string cinfty_constraint = "f(0)=0";
  std::string distr_constraint = "none";
};

S1Report s1_counterexample(long K = 64);

}  // namespace tubespec

#include "tubespec/propagation.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tubespec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cd arc_integral(double a, double b, long k) {
  if (k == 0) return (b - a) / kTwoPi;
  const cd i(0.0, 1.0);
  const double kd = static_cast<double>(k);
  return (std::exp(i * (kd * b)) - std::exp(i * (kd * a))) / (kTwoPi * i * kd);
}

// Hermitian form psi -> ||psi||^2_U on the coefficient vector, indexed by `basis`.
Eigen::MatrixXcd window_gram(const LocalWindow& U, const std::vector<Freq>& basis) {
  const auto s = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd G(s, s);
  for (Eigen::Index r = 0; r < s; ++r) {
    for (Eigen::Index c = 0; c < s; ++c) G(r, c) = window_integral(U, sub(basis[c], basis[r]));
  }
  return G;
}

double local_norm_sq(const TrigPolyd& p, const LocalWindow& U) {
  double s = 0.0;
  for (const auto& [e1, c1] : p.coeffs()) {
    for (const auto& [e2, c2] : p.coeffs()) s += (c1 * std::conj(c2) * window_integral(U, sub(e1, e2))).real();
  }
  return std::max(s, 0.0);
}

}  // namespace

void LocalWindow::validate(int n) const {
  if (static_cast<int>(intervals.size()) != n) {
    throw std::invalid_argument("window needs one interval per t-axis");
  }
  for (const auto& [a, b] : intervals) {
    if (!(b > a) || b - a > kTwoPi + 1e-12) throw std::invalid_argument("window intervals must satisfy 0 < b - a <= 2 pi");
  }
}

cd window_integral(const LocalWindow& U, const Freq& k) {
  cd out = 1.0;
  for (std::size_t j = 0; j < k.size(); ++j) out *= arc_integral(U.intervals[j].first, U.intervals[j].second, k[j]);
  return out;
}

DecayProfile local_decay_profile(const ProductFunction& u, const LocalWindow& U, long lambda_max) {
  U.validate(u.n());
  std::map<long, double> shells;
  for (const auto& shell : shells_up_to(u.m(), lambda_max)) shells[shell.lambda] = 0.0;
  for (const auto& [xi, p] : u.modes()) {
    const long lam = norm_sq(xi);
    if (lam > lambda_max) continue;
    shells[lam] += local_norm_sq(p, U);
  }
  DecayProfile prof;
  for (const auto& [lam, s] : shells) prof.points.push_back({lam, std::sqrt(s)});
  return prof;
}

double poincare_window_constant(const LocalWindow& U, long degree) {
  if (degree < 0) throw std::invalid_argument("degree must be non-negative");
  U.validate(static_cast<int>(U.intervals.size()));
  const int n = static_cast<int>(U.intervals.size());
  const auto basis = enumerate_ball(n, static_cast<double>(degree));
  Eigen::MatrixXcd A = window_gram(U, basis);
  for (std::size_t r = 0; r < basis.size(); ++r) A(r, r) += static_cast<double>(norm_sq(basis[r]));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / lo;
}

std::string to_string(PropagationOutcome o) {
  return o == PropagationOutcome::SmoothEverywhere ? "SmoothEverywhere" : "Inconclusive";
}

PropagationReport propagation_verdict(const OperatorSpec& spec, const ProductFunction& u, const LocalWindow& U,
                                      long lambda_max, const DecayThresholds& thresholds) {
  PropagationReport rep;
  rep.pu_profile = decay_profile(apply_P(spec, u), lambda_max);
  rep.pu = classify_in_place(rep.pu_profile, thresholds);
  rep.local_profile = local_decay_profile(u, U, lambda_max);
  rep.local = classify_in_place(rep.local_profile, thresholds);
  rep.global_profile = decay_profile(u, lambda_max);
  rep.global = classify_in_place(rep.global_profile, thresholds);

  const bool fits = rep.local.points_used > 0 && rep.global.points_used > 0;
  rep.slope_gap = fits ? std::abs(rep.local.slope - rep.global.slope) : std::numeric_limits<double>::infinity();
  if (rep.local.finite_support && rep.global.finite_support) rep.slope_gap = 0.0;

  const bool smooth = rep.pu.classification == Smoothness::Smooth && rep.local.classification == Smoothness::Smooth &&
                      rep.global.classification == Smoothness::Smooth;
  rep.outcome = smooth ? PropagationOutcome::SmoothEverywhere : PropagationOutcome::Inconclusive;
  if (smooth) {
    rep.note = "Pu and u restricted to U x G decay rapidly; the global decay agrees, consistent with smoothness "
               "propagating from the window to the whole tube.";
  } else if (rep.pu.classification != Smoothness::Smooth) {
    rep.note = "Pu is not classified smooth; propagation does not apply.";
  } else if (rep.local.classification != Smoothness::Smooth) {
    rep.note = "u on the window is not classified smooth; nothing to propagate.";
  } else {
    rep.note = "local data smooth but global decay not confirmed in this window; increase lambda_max.";
  }
  return rep;
}

}  // namespace tubespec

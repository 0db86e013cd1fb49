#include "tubespec/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace tubespec {

namespace {

std::string describe(const std::vector<Violation>& v) {
  std::string s = "compatibility violated at";
  for (const auto& x : v) {
    s += " xi=(";
    for (std::size_t i = 0; i < x.xi.size(); ++i) s += (i ? "," : "") + std::to_string(x.xi[i]);
    s += ")";
  }
  return s;
}

double max_abs_eigen(const Eigen::VectorXd& ev) { return ev.cwiseAbs().maxCoeff(); }

/// P psi for a single mode, as a TrigPoly (exact, no truncation).
TrigPolyd apply_mode(const OperatorSpec& spec, const Freq& xi, const TrigPolyd& psi) {
  ProductFunction u(spec.n, spec.m);
  u.add_mode(xi, psi);
  return apply_P(spec, u).mode(xi);
}

void fill_residuals(const OperatorSpec& spec, const ModeMatrix& mm, const TrigPolyd& f_xi, ModeSolve& out) {
  const TrigPolyd ppsi = apply_mode(spec, mm.xi, out.psi);
  TrigPolyd diff = ppsi + cd(-1.0) * f_xi;
  out.residual = l2_norm(diff);
  double leak = 0.0;
  for (const auto& [eta, c] : ppsi.coeffs()) {
    if (mm.index_of(eta) == mm.basis.size()) leak += std::norm(c);
  }
  out.truncation_leak = std::sqrt(leak);
  const Eigen::VectorXcd r = mm.entries * to_vector(out.psi, mm.basis) - to_vector(f_xi, mm.basis);
  double ir = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (mm.interior[static_cast<std::size_t>(i)]) ir += std::norm(r(i));
  }
  out.interior_residual = std::sqrt(ir);
}

void check_support(const OperatorSpec& spec, const TrigPolyd& f_xi, long K) {
  const double reach = std::sqrt(static_cast<double>(f_xi.degree_sq()));
  if (reach > static_cast<double>(K) - spec.degree_t() + 1e-12) {
    throw std::invalid_argument("datum exceeds the t-truncation: need |eta| <= K - deg_t");
  }
}

// Modes beyond R carry zero data, so u vanishes there; the profile may extend
// past R to give the classifier enough shells.
constexpr long kMinDecayWindow = 64;

void assemble(double R, SolveResult& res, const DecayThresholds& thresholds) {
  double sq = 0.0;
  for (const auto& ms : res.per_mode) sq += ms.residual * ms.residual;
  res.total_residual = std::sqrt(sq);
  res.decay = decay_profile(res.u, std::max(radius_to_lambda(R), kMinDecayWindow));
  res.classification = classify_in_place(res.decay, thresholds);
}

}  // namespace

CompatibilityViolated::CompatibilityViolated(std::vector<Violation> v)
    : std::runtime_error(describe(v)), violations_(std::move(v)) {}

std::string to_string(SolverBranch b) { return b == SolverBranch::GammaMode ? "GammaMode" : "ElatticeMode"; }

std::vector<ProductFunction> kernel_basis(const OperatorSpec& spec, const GammaLattice& gamma, double R) {
  std::vector<ProductFunction> out;
  const Freq zero(static_cast<std::size_t>(spec.n), 0);
  for (const auto& xi : enumerate_ball(spec.m, R)) {
    if (!gamma_member(gamma, xi)) continue;
    ProductFunction k(spec.n, spec.m);
    k.set(zero, xi, 1.0);
    if (apply_P(spec, k).l2_norm() > 1e-12) {
      throw std::logic_error("kernel candidate is not annihilated by P");
    }
    out.push_back(std::move(k));
  }
  return out;
}

CompatibilityReport compatibility_check(const ProductFunction& f, const GammaLattice& gamma, double tol) {
  CompatibilityReport rep;
  const Freq zero(static_cast<std::size_t>(f.n()), 0);
  for (const auto& [key, c] : f.coeffs()) {
    if (key.eta != zero || !gamma_member(gamma, key.xi)) continue;
    if (std::abs(c) > tol) rep.violations.push_back({key.xi, c});
  }
  rep.ok = rep.violations.empty();
  return rep;
}

ModeSolve solve_mode(const OperatorSpec& spec, const Freq& xi, bool xi_in_gamma, const TrigPolyd& f_xi, long K) {
  check_support(spec, f_xi, K);
  const ModeMatrix mm = mode_matrix(spec, xi, K);
  ModeSolve out;
  out.xi = xi;
  const Eigen::VectorXcd rhs = to_vector(f_xi, mm.basis);
  const auto dim = static_cast<Eigen::Index>(mm.basis.size());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(mm.entries, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, max_abs_eigen(eig.eigenvalues()));

  if (xi_in_gamma) {
    out.branch = SolverBranch::GammaMode;
    const Freq zero(static_cast<std::size_t>(spec.n), 0);
    const auto z = static_cast<Eigen::Index>(mm.index_of(zero));
    if (std::abs(rhs(z)) > 1e-12 * std::max(1.0, rhs.norm())) {
      throw CompatibilityViolated({{xi, rhs(z)}});
    }
    // ker P~ must be exactly the constants: the eta = 0 column vanishes and
    // the remaining block is positive definite.
    if (mm.entries.col(z).norm() > 1e-12 * scale) {
      throw std::logic_error("Gamma-mode matrix does not annihilate constants");
    }
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (i != z) keep.push_back(i);
    }
    const auto kd = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXcd reduced(kd, kd);
    Eigen::VectorXcd rr(kd);
    for (Eigen::Index a = 0; a < kd; ++a) {
      rr(a) = rhs(keep[static_cast<std::size_t>(a)]);
      for (Eigen::Index b = 0; b < kd; ++b) reduced(a, b) = mm.entries(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]);
    }
    Eigen::LLT<Eigen::MatrixXcd> llt(reduced);
    if (llt.info() != Eigen::Success) throw std::logic_error("P~ restricted to mean-zero modes is not positive definite");
    const Eigen::VectorXcd x = llt.solve(rr);
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(dim);
    for (Eigen::Index a = 0; a < kd; ++a) full(keep[static_cast<std::size_t>(a)]) = x(a);
    out.psi = from_vector(full, mm.basis, spec.n);
    // Smallest nonzero eigenvalue (the constant is the only null direction).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> red_eig(reduced, Eigen::EigenvaluesOnly);
    out.sigma_min = red_eig.eigenvalues().cwiseAbs().minCoeff();
  } else {
    out.branch = SolverBranch::ElatticeMode;
    out.sigma_min = eig.eigenvalues().cwiseAbs().minCoeff();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(mm.entries);
    const Eigen::VectorXcd x = cod.solve(rhs);
    out.psi = from_vector(x, mm.basis, spec.n);
  }
  out.ill_conditioned = out.sigma_min < 1e-10 * scale;
  fill_residuals(spec, mm, f_xi, out);
  return out;
}

SolveResult solve_global(const OperatorSpec& spec, const GammaLattice& gamma, const ProductFunction& f, long K,
                         double R, const SolveOptions& options) {
  if (static_cast<double>(f.xi_degree_sq()) > R * R * (1.0 + 1e-12)) {
    throw std::invalid_argument("R is smaller than the xi-support of the datum");
  }
  SolveResult res;
  ProductFunction datum = f;
  const auto compat = compatibility_check(f, gamma);
  if (!compat.ok) {
    if (!options.force) throw CompatibilityViolated(compat.violations);
    const Freq zero(static_cast<std::size_t>(spec.n), 0);
    double removed = 0.0;
    for (const auto& v : compat.violations) {
      removed += std::norm(v.value);
      datum.set(zero, v.xi, 0.0);
    }
    res.kernel_component_removed = std::sqrt(removed);
  } else {
    double tiny = 0.0;
    const Freq zero(static_cast<std::size_t>(spec.n), 0);
    for (const auto& [key, c] : f.coeffs()) {
      if (key.eta == zero && gamma_member(gamma, key.xi)) {
        tiny += std::norm(c);
        datum.set(zero, key.xi, 0.0);
      }
    }
    res.kernel_component_removed = std::sqrt(tiny);
  }

  res.u = ProductFunction(spec.n, spec.m, f.real());
  for (const auto& [xi, f_xi] : datum.modes()) {
    ModeSolve ms = solve_mode(spec, xi, gamma_member(gamma, xi), f_xi, K);
    res.u.add_mode(xi, ms.psi);
    res.per_mode.push_back(std::move(ms));
  }
  assemble(R, res, options.thresholds);
  return res;
}

SolveResult oracle_solve(const OperatorSpec& spec, const ProductFunction& f, long K, double R) {
  if (static_cast<double>(f.xi_degree_sq()) > R * R * (1.0 + 1e-12)) {
    throw std::invalid_argument("R is smaller than the xi-support of the datum");
  }
  SolveResult res;
  res.u = ProductFunction(spec.n, spec.m, f.real());
  for (const auto& [xi, f_xi] : f.modes()) {
    check_support(spec, f_xi, K);
    const ModeMatrix mm = mode_matrix(spec, xi, K);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(mm.entries);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double cutoff = 1e-12 * std::max(1.0, max_abs_eigen(ev));
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
    double smin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (std::abs(ev(i)) > cutoff) {
        inv(i) = 1.0 / ev(i);
        smin = std::min(smin, std::abs(ev(i)));
      }
    }
    const Eigen::MatrixXcd& V = eig.eigenvectors();
    const Eigen::VectorXcd x = V * (inv.cast<cd>().asDiagonal() * (V.adjoint() * to_vector(f_xi, mm.basis)));
    ModeSolve ms;
    ms.xi = xi;
    ms.psi = from_vector(x, mm.basis, spec.n);
    ms.sigma_min = smin;
    ms.branch = (ev.array().abs() <= cutoff).any() ? SolverBranch::GammaMode : SolverBranch::ElatticeMode;
    fill_residuals(spec, mm, f_xi, ms);
    res.u.add_mode(xi, ms.psi);
    res.per_mode.push_back(std::move(ms));
  }
  assemble(R, res, {});
  return res;
}

AprioriProbe apriori_probe(const OperatorSpec& spec, const GammaLattice& gamma, long K, long lambda_max,
                           const AghVerdict* verdict) {
  AprioriProbe probe;
  for (const auto& shell : shells_up_to(spec.m, lambda_max)) {
    ProbePoint best{shell.lambda, std::numeric_limits<double>::infinity(), {}};
    for (const auto& xi : shell.members) {
      if (gamma_member(gamma, xi)) continue;
      const ModeMatrix mm = mode_matrix(spec, xi, K);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(mm.entries, Eigen::EigenvaluesOnly);
      const double s = eig.eigenvalues().cwiseAbs().minCoeff();
      if (s < best.sigma_min) {
        best.sigma_min = s;
        best.argmin = xi;
      }
    }
    if (std::isfinite(best.sigma_min)) probe.points.push_back(best);
  }
  double running = std::numeric_limits<double>::infinity();
  for (const auto& p : probe.points) {
    if (p.sigma_min < running) {
      running = p.sigma_min;
      probe.records.push_back(p);
    }
  }
  if (probe.records.size() >= 3) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(probe.records.size());
    for (const auto& r : probe.records) {
      const double x = std::log1p(std::sqrt(static_cast<double>(r.lambda)));
      const double y = std::log(r.sigma_min);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    const double slope = denom > 0 ? (n * sxy - sx * sy) / denom : 0.0;
    probe.rho = std::max(0.0, -slope);
  }
  probe.C = std::numeric_limits<double>::infinity();
  for (const auto& p : probe.points) {
    probe.C = std::min(probe.C, p.sigma_min * std::pow(1.0 + std::sqrt(static_cast<double>(p.lambda)), probe.rho));
  }
  if (!std::isfinite(probe.C)) probe.C = 0.0;
  if (verdict && verdict->mode == AghMode::ExactCertificate) {
    probe.rho_bound = 2.0 * verdict->rho + 1.0;
    probe.within_bound = probe.rho <= *probe.rho_bound;
  }
  return probe;
}

KernelScan kernel_scan(const OperatorSpec& spec, long K, double R, double cutoff) {
  KernelScan scan;
  scan.next_sigma = std::numeric_limits<double>::infinity();
  for (const auto& xi : enumerate_ball(spec.m, R)) {
    const ModeMatrix mm = mode_matrix(spec, xi, K);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(mm.entries, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
      const double s = std::abs(eig.eigenvalues()(i));
      if (s <= cutoff) {
        ++scan.dimension;
        scan.kernel_modes.push_back(xi);
        scan.largest_kernel_sigma = std::max(scan.largest_kernel_sigma, s);
      } else {
        scan.next_sigma = std::min(scan.next_sigma, s);
      }
    }
  }
  return scan;
}

}  // namespace tubespec

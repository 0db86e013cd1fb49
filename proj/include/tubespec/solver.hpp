#pragma once

#include "tubespec/field.hpp"
#include "tubespec/fourier.hpp"
#include "tubespec/invariant_system.hpp"
#include "tubespec/operator.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tubespec {

struct Violation {
  Freq xi;
  cd value;  // <f, 1 (x) e^{i x xi}>
};

class CompatibilityViolated : public std::runtime_error {
 public:
  explicit CompatibilityViolated(std::vector<Violation> v);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

struct CompatibilityReport {
  bool ok = true;
  std::vector<Violation> violations;
};

/// {1 (x) e^{i x xi} : xi in Gamma, |xi| <= R}; each is checked against apply_P.
std::vector<ProductFunction> kernel_basis(const OperatorSpec& spec, const GammaLattice& gamma, double R);

/// f must have no mass at (eta = 0, xi in Gamma).
CompatibilityReport compatibility_check(const ProductFunction& f, const GammaLattice& gamma, double tol = 1e-12);

enum class SolverBranch { GammaMode, ElatticeMode };
std::string to_string(SolverBranch b);

struct ModeSolve {
  Freq xi;
  TrigPolyd psi;
  SolverBranch branch = SolverBranch::ElatticeMode;
  double residual = 0.0;           // ||P psi - f_xi|| including leakage past K
  double interior_residual = 0.0;  // Galerkin residual on interior rows
  double truncation_leak = 0.0;    // part of P psi outside |eta| <= K
  double sigma_min = 0.0;
  bool ill_conditioned = false;
};

/// Solves P psi = f_xi on one xi-mode with t-frequencies |eta| <= K.
/// Gamma modes: mean-zero solution of the reduced P~ system (throws
/// CompatibilityViolated on a nonzero mean). Other modes: minimal-norm
/// least-squares solution of the Hermitian mode system.
ModeSolve solve_mode(const OperatorSpec& spec, const Freq& xi, bool xi_in_gamma, const TrigPolyd& f_xi, long K);

struct SolveResult {
  ProductFunction u;
  std::vector<ModeSolve> per_mode;
  double total_residual = 0.0;
  DecayProfile decay;
  DecayVerdict classification;
  double kernel_component_removed = 0.0;
};

struct SolveOptions {
  bool force = false;  // project f onto the compatible subspace instead of failing
  DecayThresholds thresholds;
};

SolveResult solve_global(const OperatorSpec& spec, const GammaLattice& gamma, const ProductFunction& f, long K,
                         double R, const SolveOptions& options = {});

/// Dense eigen-decomposition with a minimal-norm pseudo-inverse on every
/// mode; uses no knowledge of Gamma.
SolveResult oracle_solve(const OperatorSpec& spec, const ProductFunction& f, long K, double R);

struct ProbePoint {
  long lambda = 0;
  double sigma_min = 0.0;
  Freq argmin;
};

/// Smallest singular value of P on A_lambda^perp modes, per shell.
struct AprioriProbe {
  std::vector<ProbePoint> points;
  std::vector<ProbePoint> records;
  double C = 0.0;
  double rho = 0.0;
  std::optional<double> rho_bound;  // 2 rho0 + 1 when certified
  bool within_bound = true;
};

AprioriProbe apriori_probe(const OperatorSpec& spec, const GammaLattice& gamma, long K, long lambda_max,
                           const AghVerdict* verdict = nullptr);

/// Dense kernel of the truncated operator over all xi with |xi| <= R.
struct KernelScan {
  std::size_t dimension = 0;
  std::vector<Freq> kernel_modes;  // one entry per kernel vector
  double largest_kernel_sigma = 0.0;
  double next_sigma = 0.0;  // smallest singular value above the cutoff
};

KernelScan kernel_scan(const OperatorSpec& spec, long K, double R, double cutoff = 1e-10);

}  // namespace tubespec

#pragma once

#include "tubespec/field.hpp"
#include "tubespec/hp.hpp"
#include "tubespec/operator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tubespec {

/// Basis L_p = d/dx_{j_p} + sum_q lambda_qp d/dx_{i_q} of one subspace L_l.
struct SubsystemBasis {
  int m_ell = 0;
  std::vector<int> j_idx;  // pivot columns (0-based)
  std::vector<int> i_idx;  // remaining columns (0-based)
  /// lambda[q][p], d_ell x m_ell; exact fields only.
  std::vector<std::vector<QuadScalar>> lambda_exact;
  std::vector<std::vector<HpReal>> lambda_hp;
};

/// One linear form xi -> xi_{j_p} + sum_q lambda_qp xi_{i_q}, as dense coefficients.
struct LinearForm {
  int ell = 0;
  int p = 0;
  std::vector<QuadScalar> exact;  // empty in float mode
  std::vector<HpReal> hp;
  std::vector<double> dbl;
};

struct SystemBasis {
  int m = 0;
  bool exact = true;
  /// Float mode only: a rank decision fell within 10x of the tolerance.
  bool ambiguous = false;
  std::vector<SubsystemBasis> per_ell;
  std::vector<LinearForm> forms;
};

SystemBasis build_system(const OperatorSpec& spec);

/// Gamma = integer solutions of every form. In float mode the forms cannot be
/// decided exactly and Gamma = {0} is returned with the numeric flag set.
GammaLattice gamma_of(const SystemBasis& system);

double gap(const SystemBasis& system, const Freq& xi);
/// Exact form values (exact mode only).
std::vector<QuadScalar> form_values(const SystemBasis& system, const Freq& xi);
HpReal gap_hp(const SystemBasis& system, const Freq& xi);

enum class AghMode { ExactCertificate, EmpiricalFit, Refuted, Undecided };
std::string to_string(AghMode mode);

struct GapWitness {
  Freq xi;
  double gap = 0.0;
  std::string gap_hp;  // high-precision rendering
};

struct ShellMinimum {
  long lambda = 0;
  double min_gap = 0.0;
  Freq argmin;
};

struct AghOptions {
  double rho_max = 10.0;
  int witness_digits = 50;
  /// Explicit extra witnesses evaluated at high precision.
  std::vector<Freq> extra_witnesses;
};

/// Outcome of testing gap(xi) >= C (1 + |xi|)^-rho on Z^m \ Gamma.
struct AghVerdict {
  AghMode mode = AghMode::Undecided;
  double C = 0.0;
  std::string C_exact;  // exact rendering when certified
  double rho = 0.0;
  bool numeric = false;
  std::string certificate;
  std::vector<GapWitness> witnesses;
  std::size_t shells_scanned = 0;
  std::size_t points_scanned = 0;
  // Empirical lower-envelope fit, always reported.
  double fitted_rho = 0.0;
  double fitted_C = 0.0;
  std::size_t fit_points = 0;
  std::vector<ShellMinimum> shell_minima;
  std::vector<ShellMinimum> records;
  std::string note;
};

AghVerdict agh_scan(const SystemBasis& system, const GammaLattice& gamma, double R, const AghOptions& options = {});

std::vector<GapWitness> witness_gap(const SystemBasis& system, const std::vector<Freq>& xs, int digits = 50);

/// Convergent witnesses (p, -q) for a single binary form x_a + lambda x_b with
/// q <= 10^(digits/3).
std::vector<Freq> convergent_witnesses(const SystemBasis& system, int digits);

/// The unique form when every form equals x_a + lambda x_b; nullopt otherwise.
struct BinaryForm {
  int a = 0;
  int b = 0;
  LinearForm form;
};
std::optional<BinaryForm> single_binary_form(const SystemBasis& system);

}  // namespace tubespec

#pragma once

#include "tubespec/field.hpp"
#include "tubespec/fourier.hpp"
#include "tubespec/hp.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace tubespec {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scalar field over which the coefficient functions are given.
struct ScalarField {
  enum class Kind { Rational, Quadratic, Float };
  Kind kind = Kind::Rational;
  long d = 0;         // radicand for Quadratic
  double tol = 1e-12; // zero tolerance for Float

  bool exact() const { return kind != Kind::Float; }
};

/// P = Delta_T - sum_l (sum_j a_lj(t) d/dx_j + W_l)^2 on T^n x T^m, with
/// constant skew fields W_l = sum_k c_lk d/dt_k.
///
/// Coefficients are kept in up to three representations: exact (for exact
/// fields), high precision (always) and double (always).
struct OperatorSpec {
  int n = 1;
  int m = 1;
  int N = 1;
  ScalarField field;
  std::vector<std::vector<TrigPoly<QuadComplex>>> a_exact;  // N x m, exact fields only
  std::vector<std::vector<TrigPoly<HpComplex>>> a_hp;       // N x m
  std::vector<std::vector<TrigPolyd>> a;                    // N x m
  std::vector<std::vector<double>> W;                       // N x n

  /// max over l, j of the largest |eta| in supp a_lj.
  double degree_t() const;
};

/// Fills a_hp and a from a_exact.
void derive_numeric_coefficients(OperatorSpec& spec);
/// Fills a from a_hp.
void derive_double_coefficients(OperatorSpec& spec);

/// Checks dimensions and real-valuedness. Exact coefficients must be exactly
/// conjugate-symmetric; float coefficients are symmetrized when the defect is
/// within the field tolerance and rejected otherwise.
OperatorSpec validate_spec(OperatorSpec spec);

/// Real symbol b_l(t) = sum_j a_lj(t) xi_j for every l.
std::vector<TrigPolyd> mode_symbols(const OperatorSpec& spec, const Freq& xi);

/// Pu, exactly on trigonometric polynomials.
ProductFunction apply_P(const OperatorSpec& spec, const ProductFunction& u);

/// Galerkin matrix of P restricted to one xi-mode and the t-frequencies |eta| <= K.
struct ModeMatrix {
  Freq xi;
  long K = 0;
  std::vector<Freq> basis;     // canonical (lexicographic) eta order
  Eigen::MatrixXcd entries;    // entries(r, c) = <P e_c, e_r>
  std::vector<bool> interior;  // rows whose P-stencil stays inside the ball
  bool undersized = false;     // K < deg_t + 1

  std::size_t index_of(const Freq& eta) const;
};

ModeMatrix mode_matrix(const OperatorSpec& spec, const Freq& xi, long K);
ModeMatrix tilde_p_matrix(const OperatorSpec& spec, long K);

/// Coefficient vector of p in the ordering of `basis` (entries outside are dropped).
Eigen::VectorXcd to_vector(const TrigPolyd& p, const std::vector<Freq>& basis);
TrigPolyd from_vector(const Eigen::VectorXcd& v, const std::vector<Freq>& basis, int dim);

}  // namespace tubespec

#pragma once

#include "tubespec/hp.hpp"
#include "tubespec/lattice.hpp"

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tubespec {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

bool is_square_free(long d);

/// Parses "a", "-a/b" or a plain decimal "12.375" into an exact rational.
mpq_class parse_rational(std::string_view text);

/// Exact element p + q*sqrt(d) of Q(sqrt d); d is square-free, or 0 for Q.
///
/// Elements with q == 0 are plain rationals and combine with any d.
/// Mixing two genuinely quadratic elements of different fields throws.
class QuadScalar {
 public:
  QuadScalar() = default;
  QuadScalar(long v) : p_(v) {}  // NOLINT(google-explicit-constructor)
  QuadScalar(const mpq_class& p) : p_(p) { p_.canonicalize(); }  // NOLINT
  QuadScalar(const mpq_class& p, const mpq_class& q, long d);

  const mpq_class& rational_part() const { return p_; }
  const mpq_class& irrational_part() const { return q_; }
  long radicand() const { return d_; }

  bool is_zero() const { return sgn(p_) == 0 && sgn(q_) == 0; }
  bool is_rational() const { return sgn(q_) == 0; }
  int sign() const;

  QuadScalar conjugate() const;
  /// Field norm p^2 - q^2 d.
  mpq_class norm() const;
  QuadScalar inverse() const;

  double to_double() const;
  HpReal to_hp() const;
  std::string str() const;

  QuadScalar operator-() const;
  QuadScalar& operator+=(const QuadScalar& o);
  QuadScalar& operator-=(const QuadScalar& o);
  QuadScalar& operator*=(const QuadScalar& o);
  QuadScalar& operator/=(const QuadScalar& o);

  friend QuadScalar operator+(QuadScalar a, const QuadScalar& b) { return a += b; }
  friend QuadScalar operator-(QuadScalar a, const QuadScalar& b) { return a -= b; }
  friend QuadScalar operator*(QuadScalar a, const QuadScalar& b) { return a *= b; }
  friend QuadScalar operator/(QuadScalar a, const QuadScalar& b) { return a /= b; }

  friend bool operator==(const QuadScalar& a, const QuadScalar& b) { return (a - b).is_zero(); }
  friend std::strong_ordering operator<=>(const QuadScalar& a, const QuadScalar& b) {
    const int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

 private:
  static long common_radicand(const QuadScalar& a, const QuadScalar& b);

  mpq_class p_ = 0;
  mpq_class q_ = 0;
  long d_ = 0;
};

QuadScalar abs(const QuadScalar& x);
/// Largest integer <= x, decided exactly.
mpz_class floor(const QuadScalar& x);

/// Complex number with exact real and imaginary parts.
struct QuadComplex {
  QuadScalar re;
  QuadScalar im;

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  QuadComplex conj() const { return {re, -im}; }
  friend QuadComplex operator+(const QuadComplex& a, const QuadComplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend QuadComplex operator-(const QuadComplex& a, const QuadComplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend QuadComplex operator*(const QuadComplex& a, const QuadComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const QuadComplex& a, const QuadComplex& b) { return a.re == b.re && a.im == b.im; }
};

/// Integer lattice Gamma, basis rows in Hermite normal form.
struct GammaLattice {
  int m = 0;
  std::vector<Freq> basis;
  /// True when built from floating-point forms (not a certificate).
  bool numeric = false;

  int rank() const { return static_cast<int>(basis.size()); }
};

using IntMatrix = std::vector<std::vector<mpz_class>>;

/// Row-style Hermite normal form: echelon, positive pivots, entries above a
/// pivot reduced into [0, pivot). Zero rows are dropped.
IntMatrix hermite_normal_form(IntMatrix rows, std::size_t cols);

/// Basis of {v in Z^cols : A v = 0}, computed with unimodular column operations.
IntMatrix integer_kernel_basis(IntMatrix a, std::size_t cols);

/// Integer kernel of a family of Q(sqrt d)-linear forms on Z^m.
GammaLattice integer_kernel(const std::vector<std::vector<QuadScalar>>& forms, int m);

bool gamma_member(const GammaLattice& lattice, const Freq& xi);

/// Continued fraction of a real quadratic irrational or a rational.
/// For irrationals the expansion is eventually periodic: terms[period_start..]
/// repeats forever.
struct ContinuedFraction {
  std::vector<mpz_class> terms;
  std::size_t period_start = 0;
  bool periodic = false;  // false: finite expansion of a rational
};

ContinuedFraction continued_fraction(const QuadScalar& x, std::size_t max_terms = 100000);

}  // namespace tubespec

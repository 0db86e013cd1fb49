#pragma once

#include "tubespec/lattice.hpp"

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tubespec {

using cd = std::complex<double>;

inline bool coeff_is_zero(const cd& c) { return c == cd(0.0, 0.0); }
template <class C>
bool coeff_is_zero(const C& c) {
  return c.is_zero();
}

inline cd coeff_conj(const cd& c) { return std::conj(c); }
template <class C>
C coeff_conj(const C& c) {
  return c.conj();
}

/// Finite Fourier series sum_eta c_eta e^{i eta.t} on the n-torus, with
/// coefficients of type Coeff (std::complex<double>, or an exact complex type).
template <class Coeff>
class TrigPoly {
 public:
  using Map = std::map<Freq, Coeff>;

  explicit TrigPoly(int dim = 1) : dim_(dim) {}
  TrigPoly(int dim, Map coeffs) : dim_(dim), coeffs_(std::move(coeffs)) { prune(); }

  int dim() const { return dim_; }
  const Map& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }

  Coeff coeff(const Freq& eta) const {
    auto it = coeffs_.find(eta);
    return it == coeffs_.end() ? Coeff{} : it->second;
  }

  void add_to(const Freq& eta, const Coeff& c) {
    auto [it, inserted] = coeffs_.try_emplace(eta, c);
    if (!inserted) it->second = it->second + c;
    if (coeff_is_zero(it->second)) coeffs_.erase(it);
  }

  /// Largest |eta|^2 in the support (0 for an empty polynomial).
  long degree_sq() const {
    long d = 0;
    for (const auto& [eta, c] : coeffs_) d = std::max(d, norm_sq(eta));
    return d;
  }

  /// c(-eta) == conj(c(eta)) for every eta, exactly.
  bool is_conjugate_symmetric() const {
    for (const auto& [eta, c] : coeffs_) {
      if (!(coeff(negate(eta)) == coeff_conj(c))) return false;
    }
    return true;
  }

  template <class F>
  auto map_coeffs(F&& f) const {
    using Out = decltype(f(std::declval<const Coeff&>()));
    TrigPoly<Out> out(dim_);
    for (const auto& [eta, c] : coeffs_) out.add_to(eta, f(c));
    return out;
  }

  friend TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly out = a;
    for (const auto& [eta, c] : b.coeffs_) out.add_to(eta, c);
    return out;
  }

  friend TrigPoly operator*(const Coeff& s, const TrigPoly& a) {
    TrigPoly out(a.dim_);
    for (const auto& [eta, c] : a.coeffs_) out.add_to(eta, s * c);
    return out;
  }

  /// Pointwise product, i.e. convolution of coefficient sequences.
  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly out(a.dim_);
    for (const auto& [ea, ca] : a.coeffs_) {
      for (const auto& [eb, cb] : b.coeffs_) out.add_to(add(ea, eb), ca * cb);
    }
    return out;
  }

 private:
  void prune() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
      it = coeff_is_zero(it->second) ? coeffs_.erase(it) : std::next(it);
    }
  }

  int dim_ = 1;
  Map coeffs_;
};

using TrigPolyd = TrigPoly<cd>;

cd evaluate(const TrigPolyd& p, const std::vector<double>& t);
/// L2 norm w.r.t. normalized measure dt/(2 pi)^n (Parseval).
double l2_norm(const TrigPolyd& p);
/// Max over eta of |c(-eta) - conj c(eta)|.
double conjugate_symmetry_defect(const TrigPolyd& p);

/// Uniform samples on a grid with `points` nodes per axis, row-major in axis order.
std::vector<cd> sample_grid(const TrigPolyd& p, int points);
/// Recovers coefficients with |eta_k| <= max_freq from grid samples by a
/// discrete Fourier sum; exact when points >= 2*max_freq + 1.
TrigPolyd from_grid(const std::vector<cd>& samples, int dim, int points, long max_freq);

/// Fourier key on T x G, ordered by xi first so that modes are contiguous.
struct ModeKey {
  Freq xi;
  Freq eta;
  friend auto operator<=>(const ModeKey&, const ModeKey&) = default;
};

/// Finite Fourier series on T^n x T^m.
class ProductFunction {
 public:
  ProductFunction() = default;
  ProductFunction(int n, int m, bool real = false) : n_(n), m_(m), real_(real) {}

  int n() const { return n_; }
  int m() const { return m_; }
  bool real() const { return real_; }
  void set_real(bool r) { real_ = r; }
  const std::map<ModeKey, cd>& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }

  cd coeff(const Freq& eta, const Freq& xi) const;
  void add_to(const Freq& eta, const Freq& xi, const cd& c);
  void set(const Freq& eta, const Freq& xi, const cd& c);

  /// Coefficients grouped by xi.
  std::map<Freq, TrigPolyd> modes() const;
  /// Restriction to a single xi (empty if absent).
  TrigPolyd mode(const Freq& xi) const;
  void add_mode(const Freq& xi, const TrigPolyd& p);

  double l2_norm() const;
  /// Largest |xi|^2 and |eta|^2 in the support.
  long xi_degree_sq() const;
  long eta_degree_sq() const;

  /// Max over keys of |c(-eta,-xi) - conj c(eta,xi)|.
  double conjugate_symmetry_defect() const;

  friend ProductFunction operator+(const ProductFunction& a, const ProductFunction& b);
  friend ProductFunction operator-(const ProductFunction& a, const ProductFunction& b);
  friend ProductFunction operator*(const cd& s, const ProductFunction& a);

 private:
  int n_ = 1;
  int m_ = 1;
  bool real_ = false;
  std::map<ModeKey, cd> coeffs_;
};

/// <f, g> = sum f(k) conj(g(k)) (normalized measure).
cd inner(const ProductFunction& f, const ProductFunction& g);

/// The xi-modes of f with |xi|^2 == lambda.
std::map<Freq, TrigPolyd> partial_projection(const ProductFunction& f, long lambda);

/// Blocks of f grouped by (mu, lambda) = (|eta|^2, |xi|^2).
std::map<std::pair<long, long>, ProductFunction> bispectral_blocks(const ProductFunction& f);
/// Blocks of f grouped by alpha = |eta|^2 + |xi|^2.
std::map<long, ProductFunction> total_from_partials(const ProductFunction& f);

/// (sum (1+mu)^{2j} (1+lambda)^{2k} |c|^2)^{1/2}.
double mixed_sobolev_norm(const ProductFunction& f, int j, int k);
/// (sum (1+mu+lambda)^{2k} |c|^2)^{1/2}.
double sobolev_norm(const ProductFunction& f, int k);

struct DecayPoint {
  long lambda = 0;
  double norm = 0.0;
};

struct DecayProfile {
  std::vector<DecayPoint> points;  // sorted by lambda
  double fitted_slope = 0.0;
  double fitted_intercept = 0.0;
};

/// ||F_lambda f|| for every lambda in the spectrum of the m-torus up to lambda_max.
DecayProfile decay_profile(const ProductFunction& f, long lambda_max);

enum class Smoothness { Smooth, Distribution, Undecided };
std::string to_string(Smoothness s);

struct DecayThresholds {
  double s_min = 3.0;
  double residual_tol = 1.0;  // RMS of the log-log fit
  std::size_t min_points = 5;
};

struct DecayVerdict {
  Smoothness classification = Smoothness::Undecided;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  std::size_t points_used = 0;
  bool finite_support = false;
  std::string diagnostic;
};

/// Heuristic smooth/distribution call from a finite window of shell norms.
/// Fits log(norm) against log(1 + lambda) on the upper half of the nonzero
/// points. A window whose upper half is identically zero is finitely supported
/// and therefore Smooth.
DecayVerdict decay_classify(const DecayProfile& profile, std::optional<std::pair<long, long>> window = std::nullopt,
                            const DecayThresholds& thresholds = {});

/// Convenience: classify and store the fit in the profile.
DecayVerdict classify_in_place(DecayProfile& profile, const DecayThresholds& thresholds = {});

/// (1 + lambda) <= (1 + mu)^theta.
bool lambda_theta_member(long mu, long lambda, double theta);

}  // namespace tubespec

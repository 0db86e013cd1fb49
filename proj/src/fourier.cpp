#include "tubespec/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tubespec {

cd evaluate(const TrigPolyd& p, const std::vector<double>& t) {
  cd sum = 0.0;
  for (const auto& [eta, c] : p.coeffs()) {
    double phase = 0.0;
    for (std::size_t k = 0; k < eta.size(); ++k) phase += static_cast<double>(eta[k]) * t[k];
    sum += c * std::polar(1.0, phase);
  }
  return sum;
}

double l2_norm(const TrigPolyd& p) {
  double s = 0.0;
  for (const auto& [eta, c] : p.coeffs()) s += std::norm(c);
  return std::sqrt(s);
}

double conjugate_symmetry_defect(const TrigPolyd& p) {
  double worst = 0.0;
  for (const auto& [eta, c] : p.coeffs()) worst = std::max(worst, std::abs(p.coeff(negate(eta)) - std::conj(c)));
  return worst;
}

namespace {

std::size_t grid_size(int dim, int points) {
  std::size_t total = 1;
  for (int k = 0; k < dim; ++k) total *= static_cast<std::size_t>(points);
  return total;
}

std::vector<long> grid_index(std::size_t flat, int dim, int points) {
  std::vector<long> idx(static_cast<std::size_t>(dim));
  for (int k = dim - 1; k >= 0; --k) {
    idx[static_cast<std::size_t>(k)] = static_cast<long>(flat % static_cast<std::size_t>(points));
    flat /= static_cast<std::size_t>(points);
  }
  return idx;
}

}  // namespace

std::vector<cd> sample_grid(const TrigPolyd& p, int points) {
  if (points < 1) throw std::invalid_argument("grid needs at least one point per axis");
  const double h = 2.0 * std::numbers::pi / points;
  std::vector<cd> out(grid_size(p.dim(), points));
  for (std::size_t f = 0; f < out.size(); ++f) {
    const auto idx = grid_index(f, p.dim(), points);
    std::vector<double> t(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) t[k] = h * static_cast<double>(idx[k]);
    out[f] = evaluate(p, t);
  }
  return out;
}

TrigPolyd from_grid(const std::vector<cd>& samples, int dim, int points, long max_freq) {
  if (samples.size() != grid_size(dim, points)) throw std::invalid_argument("sample count does not match grid");
  if (points < 2 * max_freq + 1) throw std::invalid_argument("grid too coarse for the requested frequencies");
  const double h = 2.0 * std::numbers::pi / points;
  TrigPolyd out(dim);
  // Every eta in the cube [-max_freq, max_freq]^dim.
  Freq eta(static_cast<std::size_t>(dim), -max_freq);
  for (;;) {
    cd acc = 0.0;
    for (std::size_t f = 0; f < samples.size(); ++f) {
      const auto idx = grid_index(f, dim, points);
      double phase = 0.0;
      for (std::size_t k = 0; k < idx.size(); ++k) phase -= h * static_cast<double>(idx[k] * eta[k]);
      acc += samples[f] * std::polar(1.0, phase);
    }
    acc /= static_cast<double>(samples.size());
    if (std::abs(acc) > 1e-14) out.add_to(eta, acc);
    std::size_t k = eta.size();
    while (k > 0) {
      --k;
      if (eta[k] < max_freq) {
        ++eta[k];
        break;
      }
      eta[k] = -max_freq;
      if (k == 0) return out;
    }
    if (eta.empty()) return out;
  }
}

// --- ProductFunction --------------------------------------------------------

cd ProductFunction::coeff(const Freq& eta, const Freq& xi) const {
  auto it = coeffs_.find(ModeKey{xi, eta});
  return it == coeffs_.end() ? cd(0.0) : it->second;
}

void ProductFunction::add_to(const Freq& eta, const Freq& xi, const cd& c) {
  auto [it, inserted] = coeffs_.try_emplace(ModeKey{xi, eta}, c);
  if (!inserted) it->second += c;
  if (it->second == cd(0.0)) coeffs_.erase(it);
}

void ProductFunction::set(const Freq& eta, const Freq& xi, const cd& c) {
  if (c == cd(0.0)) {
    coeffs_.erase(ModeKey{xi, eta});
  } else {
    coeffs_[ModeKey{xi, eta}] = c;
  }
}

std::map<Freq, TrigPolyd> ProductFunction::modes() const {
  std::map<Freq, TrigPolyd> out;
  for (const auto& [key, c] : coeffs_) {
    auto it = out.try_emplace(key.xi, TrigPolyd(n_)).first;
    it->second.add_to(key.eta, c);
  }
  return out;
}

TrigPolyd ProductFunction::mode(const Freq& xi) const {
  TrigPolyd out(n_);
  for (auto it = coeffs_.lower_bound(ModeKey{xi, {}}); it != coeffs_.end() && it->first.xi == xi; ++it) {
    out.add_to(it->first.eta, it->second);
  }
  return out;
}

void ProductFunction::add_mode(const Freq& xi, const TrigPolyd& p) {
  for (const auto& [eta, c] : p.coeffs()) add_to(eta, xi, c);
}

double ProductFunction::l2_norm() const {
  double s = 0.0;
  for (const auto& [k, c] : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

long ProductFunction::xi_degree_sq() const {
  long d = 0;
  for (const auto& [k, c] : coeffs_) d = std::max(d, norm_sq(k.xi));
  return d;
}

long ProductFunction::eta_degree_sq() const {
  long d = 0;
  for (const auto& [k, c] : coeffs_) d = std::max(d, norm_sq(k.eta));
  return d;
}

double ProductFunction::conjugate_symmetry_defect() const {
  double worst = 0.0;
  for (const auto& [k, c] : coeffs_) {
    worst = std::max(worst, std::abs(coeff(negate(k.eta), negate(k.xi)) - std::conj(c)));
  }
  return worst;
}

ProductFunction operator+(const ProductFunction& a, const ProductFunction& b) {
  ProductFunction out = a;
  out.real_ = a.real_ && b.real_;
  for (const auto& [k, c] : b.coeffs_) out.add_to(k.eta, k.xi, c);
  return out;
}

ProductFunction operator-(const ProductFunction& a, const ProductFunction& b) {
  return a + cd(-1.0) * b;
}

ProductFunction operator*(const cd& s, const ProductFunction& a) {
  ProductFunction out(a.n_, a.m_, a.real_ && s.imag() == 0.0);
  for (const auto& [k, c] : a.coeffs_) out.add_to(k.eta, k.xi, s * c);
  return out;
}

cd inner(const ProductFunction& f, const ProductFunction& g) {
  cd s = 0.0;
  for (const auto& [k, c] : f.coeffs()) s += c * std::conj(g.coeff(k.eta, k.xi));
  return s;
}

std::map<Freq, TrigPolyd> partial_projection(const ProductFunction& f, long lambda) {
  std::map<Freq, TrigPolyd> out;
  for (auto& [xi, p] : f.modes()) {
    if (norm_sq(xi) == lambda) out.emplace(xi, std::move(p));
  }
  return out;
}

std::map<std::pair<long, long>, ProductFunction> bispectral_blocks(const ProductFunction& f) {
  std::map<std::pair<long, long>, ProductFunction> out;
  for (const auto& [k, c] : f.coeffs()) {
    auto key = std::make_pair(norm_sq(k.eta), norm_sq(k.xi));
    auto it = out.try_emplace(key, ProductFunction(f.n(), f.m(), f.real())).first;
    it->second.add_to(k.eta, k.xi, c);
  }
  return out;
}

std::map<long, ProductFunction> total_from_partials(const ProductFunction& f) {
  std::map<long, ProductFunction> out;
  for (const auto& [mu_lambda, block] : bispectral_blocks(f)) {
    const long alpha = mu_lambda.first + mu_lambda.second;
    auto it = out.try_emplace(alpha, ProductFunction(f.n(), f.m(), f.real())).first;
    it->second = it->second + block;
  }
  return out;
}

double mixed_sobolev_norm(const ProductFunction& f, int j, int k) {
  if (j < 0 || k < 0) throw std::invalid_argument("Sobolev orders must be non-negative");
  double s = 0.0;
  for (const auto& [key, c] : f.coeffs()) {
    const double mu = static_cast<double>(norm_sq(key.eta));
    const double lam = static_cast<double>(norm_sq(key.xi));
    s += std::pow(1.0 + mu, 2 * j) * std::pow(1.0 + lam, 2 * k) * std::norm(c);
  }
  return std::sqrt(s);
}

double sobolev_norm(const ProductFunction& f, int k) {
  if (k < 0) throw std::invalid_argument("Sobolev order must be non-negative");
  double s = 0.0;
  for (const auto& [key, c] : f.coeffs()) {
    const double alpha = static_cast<double>(norm_sq(key.eta) + norm_sq(key.xi));
    s += std::pow(1.0 + alpha, 2 * k) * std::norm(c);
  }
  return std::sqrt(s);
}

DecayProfile decay_profile(const ProductFunction& f, long lambda_max) {
  std::map<long, double> sq;
  for (const auto& [k, c] : f.coeffs()) {
    const long lam = norm_sq(k.xi);
    if (lam <= lambda_max) sq[lam] += std::norm(c);
  }
  DecayProfile prof;
  for (long lam = 0; lam <= lambda_max; ++lam) {
    if (shell_size(f.m(), lam) == 0) continue;
    auto it = sq.find(lam);
    prof.points.push_back({lam, it == sq.end() ? 0.0 : std::sqrt(it->second)});
  }
  return prof;
}

std::string to_string(Smoothness s) {
  switch (s) {
    case Smoothness::Smooth: return "Smooth";
    case Smoothness::Distribution: return "Distribution";
    case Smoothness::Undecided: return "Undecided";
  }
  return "Undecided";
}

DecayVerdict decay_classify(const DecayProfile& profile, std::optional<std::pair<long, long>> window,
                            const DecayThresholds& thresholds) {
  std::vector<DecayPoint> pts;
  for (const auto& p : profile.points) {
    if (!window || (p.lambda >= window->first && p.lambda <= window->second)) pts.push_back(p);
  }
  DecayVerdict v;
  if (pts.empty()) {
    v.diagnostic = "no shells in window";
    return v;
  }
  std::size_t last_nonzero = pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].norm > 0.0) last_nonzero = i;
  }
  if (last_nonzero == pts.size() || (pts.size() >= 2 && last_nonzero < pts.size() / 2)) {
    v.classification = Smoothness::Smooth;
    v.finite_support = true;
    v.diagnostic = "upper half of the window vanishes identically (finite xi-support)";
    return v;
  }
  std::vector<DecayPoint> nz;
  for (const auto& p : pts) {
    if (p.norm > 0.0) nz.push_back(p);
  }
  if (nz.size() < thresholds.min_points) {
    v.diagnostic = "too few nonzero shells for a decay fit (" + std::to_string(nz.size()) + ")";
    return v;
  }
  const std::size_t use = std::max(thresholds.min_points, nz.size() - nz.size() / 2);
  const std::size_t first = nz.size() - std::min(use, nz.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double cnt = static_cast<double>(nz.size() - first);
  for (std::size_t i = first; i < nz.size(); ++i) {
    const double x = std::log1p(static_cast<double>(nz[i].lambda));
    const double y = std::log(nz[i].norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = cnt * sxx - sx * sx;
  v.points_used = static_cast<std::size_t>(cnt);
  v.slope = denom > 0 ? (cnt * sxy - sx * sy) / denom : 0.0;
  v.intercept = (sy - v.slope * sx) / cnt;
  double rss = 0.0;
  for (std::size_t i = first; i < nz.size(); ++i) {
    const double r = std::log(nz[i].norm) - (v.intercept + v.slope * std::log1p(static_cast<double>(nz[i].lambda)));
    rss += r * r;
  }
  v.residual = std::sqrt(rss / cnt);
  if (v.residual > thresholds.residual_tol) {
    v.diagnostic = "log-log fit residual above tolerance";
    return v;
  }
  v.classification = v.slope <= -thresholds.s_min ? Smoothness::Smooth : Smoothness::Distribution;
  v.diagnostic = v.classification == Smoothness::Smooth ? "norms decay faster than (1+lambda)^-s_min"
                                                        : "norms bounded by a polynomial-growth fit";
  return v;
}

DecayVerdict classify_in_place(DecayProfile& profile, const DecayThresholds& thresholds) {
  auto v = decay_classify(profile, std::nullopt, thresholds);
  profile.fitted_slope = v.finite_support ? -std::numeric_limits<double>::infinity() : v.slope;
  profile.fitted_intercept = v.intercept;
  return v;
}

bool lambda_theta_member(long mu, long lambda, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
  return 1.0 + static_cast<double>(lambda) <= std::pow(1.0 + static_cast<double>(mu), theta);
}

}  // namespace tubespec

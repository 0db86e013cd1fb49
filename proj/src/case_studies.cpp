#include "tubespec/case_studies.hpp"

#include "tubespec/field.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace tubespec {

HalfInt HalfInt::from_string(const std::string& s) {
  const mpq_class q = parse_rational(s);
  const mpq_class twice = q * 2;
  if (twice.get_den() != 1) throw std::invalid_argument("'" + s + "' is not a half-integer");
  return {twice.get_num().get_si()};
}

std::string HalfInt::str() const {
  if (twice % 2 == 0) return std::to_string(twice / 2);
  return std::to_string(twice) + "/2";
}

long Su2Spectrum::dimension() const {
  long d = 0;
  for (const auto& [g, mult] : weights) d += mult;
  return d;
}

std::vector<Su2Spectrum> su2_spectrum(HalfInt l_max) {
  if (l_max.twice < 0) throw std::invalid_argument("l_max must be non-negative");
  std::vector<Su2Spectrum> out;
  for (long tl = 0; tl <= l_max.twice; ++tl) {
    Su2Spectrum s;
    s.l = {tl};
    s.lambda = mpq_class(tl * (tl + 2), 4);
    s.lambda.canonicalize();
    for (long tm = -tl; tm <= tl; tm += 2) {
      s.weights.emplace_back(HalfInt{tm}, tl + 1);
      if (tm == 0) s.c_lambda += tl + 1;
    }
    out.push_back(std::move(s));
  }
  return out;
}

Su2AghReport su2_agh_check(HalfInt l_max, std::uint64_t seed, int samples_per_level) {
  Su2AghReport rep;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  rep.sampled_min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& level : su2_spectrum(l_max)) {
    for (const auto& [g, mult] : level.weights) {
      if (g.twice == 0) continue;
      if (!rep.min_nonzero_gamma || g.abs() < *rep.min_nonzero_gamma) rep.min_nonzero_gamma = g.abs();
    }
    // Random phi orthogonal to ker X: coefficients only on nonzero weights.
    for (int s = 0; s < samples_per_level; ++s) {
      double num = 0.0, den = 0.0;
      for (const auto& [g, mult] : level.weights) {
        if (g.twice == 0) continue;
        const double gamma = static_cast<double>(g.twice) / 2.0;
        for (long k = 0; k < mult; ++k) {
          const double c2 = std::norm(cd(gauss(rng), gauss(rng)));
          num += c2 * gamma * gamma;
          den += c2;
        }
      }
      if (den > 0.0) rep.sampled_min_ratio = std::min(rep.sampled_min_ratio, num / den);
    }
  }
  if (!std::isfinite(rep.sampled_min_ratio)) rep.sampled_min_ratio = 0.0;
  rep.holds = !rep.min_nonzero_gamma || rep.min_nonzero_gamma->twice >= 1;
  return rep;
}

std::vector<KernelGrowthPoint> su2_kernel_growth(HalfInt l_max) {
  std::vector<KernelGrowthPoint> out;
  long cum = 0;
  for (const auto& level : su2_spectrum(l_max)) {
    cum += level.c_lambda;
    out.push_back({level.l, level.lambda, level.c_lambda, cum});
  }
  return out;
}

long peter_weyl_count(HalfInt L) {
  const long n = L.twice + 1;  // sum_{k=1}^{n} k^2
  return n * (n + 1) * (2 * n + 1) / 6;
}

S1Solve s1_solve(const std::map<long, cd>& f_hat, long K) {
  S1Solve out;
  if (f_hat.empty()) return out;
  const long k_min = f_hat.begin()->first;
  const long k_max = f_hat.rbegin()->first;
  if (k_max > K) throw std::invalid_argument("datum exceeds the truncation K");
  cd running = 0.0;
  for (long k = k_min; k <= K; ++k) {
    auto it = f_hat.find(k);
    if (it != f_hat.end()) running += it->second;
    out.u[k] = running;
  }
  out.f_at_zero = running;
  out.finite = std::abs(running) <= 1e-14 * std::max(1.0, std::abs(f_hat.begin()->second));
  if (out.finite) {
    for (auto it = out.u.begin(); it != out.u.end();) {
      it = std::abs(it->second) == 0.0 || it->first > k_max ? out.u.erase(it) : std::next(it);
    }
  }
  auto uc = [&](long k) {
    auto it = out.u.find(k);
    return it == out.u.end() ? cd(0.0) : it->second;
  };
  double ir = 0.0;
  for (long k = k_min; k <= K; ++k) {
    auto it = f_hat.find(k);
    const cd fk = it == f_hat.end() ? cd(0.0) : it->second;
    ir += std::norm(uc(k) - uc(k - 1) - fk);
  }
  out.interior_residual = std::sqrt(ir);
  out.cut_residual = std::abs(uc(K));
  return out;
}

DecayProfile s1_profile(const std::map<long, cd>& coeffs, long K) {
  DecayProfile prof;
  for (long k = 0; k <= K; ++k) {
    double s = 0.0;
    if (auto it = coeffs.find(k); it != coeffs.end()) s += std::norm(it->second);
    if (k != 0) {
      if (auto it = coeffs.find(-k); it != coeffs.end()) s += std::norm(it->second);
    }
    prof.points.push_back({k * k, std::sqrt(s)});
  }
  return prof;
}

S1Report s1_counterexample(long K) {
  S1Report rep;
  rep.K = K;
  rep.smooth_case = s1_solve({{0, 1.0}, {1, -1.0}}, K);
  auto p1 = s1_profile(rep.smooth_case.u, K);
  rep.smooth_class = classify_in_place(p1);
  rep.distribution_case = s1_solve({{0, 1.0}}, K);
  auto p2 = s1_profile(rep.distribution_case.u, K);
  rep.distribution_class = classify_in_place(p2);
  return rep;
}

}  // namespace tubespec

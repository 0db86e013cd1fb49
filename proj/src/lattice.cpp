#include "tubespec/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>

namespace tubespec {

Freq negate(const Freq& v) {
  Freq out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
  return out;
}

Freq add(const Freq& a, const Freq& b) {
  Freq out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Freq sub(const Freq& a, const Freq& b) {
  Freq out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

std::size_t max_points() {
  if (const char* env = std::getenv("TUBESPEC_MAX_POINTS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return 100'000'000;
}

double unit_ball_volume(int dim) {
  const double d = dim;
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double ball_count_estimate(int dim, long lambda_max) {
  // Points of a radius-r ball lie inside the radius r + sqrt(dim)/2 ball of cubes.
  const double r = std::sqrt(static_cast<double>(lambda_max)) + std::sqrt(dim) / 2.0;
  return unit_ball_volume(dim) * std::pow(r, dim);
}

void check_ball_size(int dim, long lambda_max) {
  const double est = ball_count_estimate(dim, lambda_max);
  if (est > static_cast<double>(max_points())) {
    throw ResourceError("lattice ball of radius^2 " + std::to_string(lambda_max) + " in dimension " +
                        std::to_string(dim) + " exceeds the point cap of " + std::to_string(max_points()));
  }
}

long radius_to_lambda(double R) {
  if (!(R >= 0.0)) throw std::invalid_argument("radius must be non-negative");
  long lam = static_cast<long>(std::floor(R * R));
  while (static_cast<double>(lam + 1) <= R * R * (1.0 + 1e-14)) ++lam;
  while (lam > 0 && static_cast<double>(lam) > R * R * (1.0 + 1e-14)) --lam;
  return lam;
}

std::vector<Freq> enumerate_ball_sq(int dim, long lambda_max) {
  std::vector<Freq> out;
  for_each_in_ball(dim, lambda_max, [&](const Freq& v) { out.push_back(v); });
  return out;
}

std::vector<Freq> enumerate_ball(int dim, double R) {
  if (dim < 1) throw std::invalid_argument("lattice dimension must be >= 1");
  return enumerate_ball_sq(dim, radius_to_lambda(R));
}

std::vector<Shell> shells_up_to(int dim, long lambda_max) {
  if (lambda_max < 0) throw std::invalid_argument("lambda_max must be >= 0");
  std::map<long, std::vector<Freq>> buckets;
  for_each_in_ball(dim, lambda_max, [&](const Freq& v) { buckets[norm_sq(v)].push_back(v); });
  std::vector<Shell> shells;
  shells.reserve(buckets.size());
  for (auto& [lam, members] : buckets) shells.push_back(Shell{lam, std::move(members)});
  return shells;
}

std::size_t shell_size(int dim, long lambda) {
  if (lambda < 0) return 0;
  if (dim == 1) {
    if (lambda == 0) return 1;
    const long r = std::lround(std::sqrt(static_cast<double>(lambda)));
    return r * r == lambda ? 2 : 0;
  }
  std::size_t total = 0;
  long r = 0;
  while ((r + 1) * (r + 1) <= lambda) ++r;
  for (long c = -r; c <= r; ++c) total += shell_size(dim - 1, lambda - c * c);
  return total;
}

WeylReport weyl_check(int dim, long lambda_max) {
  if (lambda_max < 16) throw std::invalid_argument("weyl_check requires lambda_max >= 16");
  WeylReport rep;
  rep.lambda_max = lambda_max;
  for_each_in_ball(dim, lambda_max, [&](const Freq&) { ++rep.count; });
  rep.volume_term = unit_ball_volume(dim) * std::pow(static_cast<double>(lambda_max), dim / 2.0);
  rep.ratio = static_cast<double>(rep.count) / rep.volume_term;
  return rep;
}

}  // namespace tubespec

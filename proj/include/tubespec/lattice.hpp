#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tubespec {

/// Integer lattice point; used both for t-frequencies (eta, length n) and
/// x-frequencies (xi, length m).
using Freq = std::vector<long>;

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline long norm_sq(const Freq& v) {
  long s = 0;
  for (long c : v) s += c * c;
  return s;
}

Freq negate(const Freq& v);
Freq add(const Freq& a, const Freq& b);
Freq sub(const Freq& a, const Freq& b);

/// Lattice point cap. Defaults to 1e8; overridden by TUBESPEC_MAX_POINTS.
std::size_t max_points();

/// Rough upper estimate of #{v in Z^dim : |v|^2 <= lambda_max}.
double ball_count_estimate(int dim, long lambda_max);

/// Throws ResourceError if the ball would exceed max_points().
void check_ball_size(int dim, long lambda_max);

/// Largest integer lambda with lambda <= R^2 (guards against R*R rounding).
long radius_to_lambda(double R);

/// Visits every v with |v|^2 <= lambda_max in lexicographic order.
template <class Visitor>
void for_each_in_ball(int dim, long lambda_max, Visitor&& visit);

std::vector<Freq> enumerate_ball(int dim, double R);
std::vector<Freq> enumerate_ball_sq(int dim, long lambda_max);

struct Shell {
  long lambda = 0;
  std::vector<Freq> members;
};

std::vector<Shell> shells_up_to(int dim, long lambda_max);

/// Number of lattice points on the sphere |v|^2 = lambda.
std::size_t shell_size(int dim, long lambda);

struct WeylReport {
  long lambda_max = 0;
  std::size_t count = 0;
  double volume_term = 0.0;  // vol(unit ball) * lambda^{dim/2}
  double ratio = 0.0;
};

WeylReport weyl_check(int dim, long lambda_max);

double unit_ball_volume(int dim);

// ---------------------------------------------------------------------------

namespace detail {

template <class Visitor>
void ball_recurse(int dim, int axis, long remaining, Freq& v, Visitor& visit) {
  long r = 0;
  while ((r + 1) * (r + 1) <= remaining) ++r;
  for (long c = -r; c <= r; ++c) {
    v[axis] = c;
    if (axis + 1 == dim) {
      visit(static_cast<const Freq&>(v));
    } else {
      ball_recurse(dim, axis + 1, remaining - c * c, v, visit);
    }
  }
}

}  // namespace detail

template <class Visitor>
void for_each_in_ball(int dim, long lambda_max, Visitor&& visit) {
  if (dim < 1) throw std::invalid_argument("lattice dimension must be >= 1");
  if (lambda_max < 0) return;
  check_ball_size(dim, lambda_max);
  Freq v(static_cast<std::size_t>(dim), 0);
  detail::ball_recurse(dim, 0, lambda_max, v, visit);
}

}  // namespace tubespec

#include "tubespec/builtin.hpp"
#include "tubespec/propagation.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace tubespec;

namespace {

constexpr double kPi = std::numbers::pi;

ProductFunction cos_t_cos_x() {
  ProductFunction f(1, 1, true);
  for (long e : {-1L, 1L}) {
    for (long x : {-1L, 1L}) f.set({e}, {x}, 0.25);
  }
  return f;
}

// Midpoint rule for int_a^b |p(t)|^2 dt / (2 pi).
double quadrature(const TrigPolyd& p, double a, double b, int n = 20000) {
  double s = 0.0;
  const double h = (b - a) / n;
  for (int i = 0; i < n; ++i) s += std::norm(evaluate(p, {a + (i + 0.5) * h}));
  return s * h / (2 * kPi);
}

}  // namespace

TEST_CASE("window integrals") {
  const LocalWindow full{{{0.0, 2 * kPi}}};
  CHECK(std::abs(window_integral(full, {0}) - 1.0) < 1e-15);
  CHECK(std::abs(window_integral(full, {3})) < 1e-15);
  CHECK_THROWS(LocalWindow{{{1.0, 1.0}}}.validate(1));
  CHECK_THROWS(LocalWindow{{{0.0, 1.0}}}.validate(2));
}

TEST_CASE("local shell norm of cos t cos x on a quarter circle") {
  const LocalWindow U{{{0.0, kPi / 2}}};
  const auto p = local_decay_profile(cos_t_cos_x(), U, 4);
  REQUIRE(p.points.size() >= 2);
  CHECK(p.points[0].norm == 0.0);
  CHECK(p.points[1].lambda == 1);
  CHECK(p.points[1].norm * p.points[1].norm == doctest::Approx(1.0 / 16).epsilon(1e-14));
}

TEST_CASE("local norms match quadrature") {
  TrigPolyd p(1);
  p.add_to({0}, cd(0.3, 0.1));
  p.add_to({2}, cd(-0.7, 0.2));
  p.add_to({-3}, cd(0.4, -0.5));
  ProductFunction u(1, 1);
  u.add_mode({0}, p);
  for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{0.5, 4.0}, std::pair{-1.0, 2.0}}) {
    const auto prof = local_decay_profile(u, LocalWindow{{{a, b}}}, 0);
    CHECK(prof.points[0].norm * prof.points[0].norm == doctest::Approx(quadrature(p, a, b)).epsilon(1e-8));
  }
}

TEST_CASE("window Poincare constant") {
  CHECK(poincare_window_constant(LocalWindow{{{0.0, 2 * kPi}}}, 8) == doctest::Approx(1.0).epsilon(1e-12));
  const double half = poincare_window_constant(LocalWindow{{{0.0, kPi}}}, 8);
  CHECK(half > 1.0);
  CHECK(half < 50.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double len : {0.3, 0.8, 1.5, 3.0, 5.0, 2 * kPi}) {
    const double c = poincare_window_constant(LocalWindow{{{0.0, len}}}, 8);
    CHECK(c <= prev * (1 + 1e-12));
    prev = c;
  }
}

TEST_CASE("propagation verdicts") {
  const OperatorSpec e1 = builtin_operator("E1");
  ProductFunction u(1, 1, true);
  for (long k = -24; k <= 24; ++k) {
    const double w = std::pow(1.0 + static_cast<double>(k * k), -6.0);
    u.add_to({0}, {k}, w);
    u.add_to({1}, {k}, w / 2);
    u.add_to({-1}, {k}, w / 2);
  }
  const auto r = propagation_verdict(e1, u, LocalWindow{{{0.0, kPi / 2}}}, 576);
  CHECK(r.outcome == PropagationOutcome::SmoothEverywhere);
  CHECK(r.slope_gap <= 1.0);

  ProductFunction rough(1, 1, true);
  for (long k = -24; k <= 24; ++k) rough.add_to({0}, {k}, 1.0);
  const auto q = propagation_verdict(e1, rough, LocalWindow{{{0.0, kPi / 2}}}, 576);
  CHECK(q.outcome == PropagationOutcome::Inconclusive);
  CHECK_FALSE(q.note.empty());
}

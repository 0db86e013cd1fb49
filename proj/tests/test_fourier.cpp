#include "tubespec/fourier.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace tubespec;

namespace {

ProductFunction cos_t_cos_x() {
  ProductFunction f(1, 1, true);
  for (long e : {-1L, 1L}) {
    for (long x : {-1L, 1L}) f.set({e}, {x}, 0.25);
  }
  return f;
}

ProductFunction random_function(std::mt19937_64& rng, int n, int m, int terms, long range) {
  std::uniform_int_distribution<long> k(-range, range);
  std::normal_distribution<double> g;
  ProductFunction f(n, m);
  for (int i = 0; i < terms; ++i) {
    Freq eta(static_cast<std::size_t>(n)), xi(static_cast<std::size_t>(m));
    for (auto& v : eta) v = k(rng);
    for (auto& v : xi) v = k(rng);
    f.add_to(eta, xi, cd(g(rng), g(rng)));
  }
  return f;
}

DecayProfile synthetic(double power) {
  DecayProfile p;
  for (long l = 1; l <= 100; ++l) p.points.push_back({l, std::pow(1.0 + l, power)});
  return p;
}

}  // namespace

TEST_CASE("trig polynomial product is convolution") {
  TrigPolyd s(1);  // sin t
  s.add_to({1}, cd(0, -0.5));
  s.add_to({-1}, cd(0, 0.5));
  const TrigPolyd s2 = s * s;  // 1/2 - cos(2t)/2
  CHECK(std::abs(s2.coeff({0}) - 0.5) < 1e-15);
  CHECK(std::abs(s2.coeff({2}) + 0.25) < 1e-15);
  CHECK(std::abs(s2.coeff({-2}) + 0.25) < 1e-15);
  CHECK(s2.coeffs().size() == 3);
  for (double t : {0.1, 1.3, 2.9}) CHECK(std::abs(evaluate(s2, {t}) - std::sin(t) * std::sin(t)) < 1e-14);
}

TEST_CASE("grid sampling recovers coefficients exactly") {
  std::mt19937_64 rng(0);
  std::normal_distribution<double> g;
  for (int dim : {1, 2}) {
    TrigPolyd p(dim);
    for (const auto& eta : enumerate_ball_sq(dim, 9)) p.add_to(eta, cd(g(rng), g(rng)));
    const int points = 2 * 3 + 1;
    const TrigPolyd back = from_grid(sample_grid(p, points), dim, points, 3);
    for (const auto& [eta, c] : p.coeffs()) CHECK(std::abs(back.coeff(eta) - c) < 1e-12);
  }
}

TEST_CASE("Parseval on the circle") {
  std::mt19937_64 rng(0);
  std::normal_distribution<double> g;
  TrigPolyd p(1);
  for (long k = -5; k <= 5; ++k) p.add_to({k}, cd(g(rng), g(rng)));
  const int M = 64;
  double quad = 0.0;
  for (int i = 0; i < M; ++i) quad += std::norm(evaluate(p, {2.0 * std::numbers::pi * i / M})) / M;
  CHECK(l2_norm(p) == doctest::Approx(std::sqrt(quad)).epsilon(1e-13));
}

TEST_CASE("partial projection of cos t cos x") {
  const auto f = cos_t_cos_x();
  const auto p1 = partial_projection(f, 1);
  REQUIRE(p1.size() == 2);
  for (const auto& [xi, poly] : p1) {
    CHECK(std::abs(poly.coeff({1}) - 0.25) < 1e-15);  // (1/2) cos t
    CHECK(std::abs(poly.coeff({-1}) - 0.25) < 1e-15);
  }
  CHECK(partial_projection(f, 4).empty());
}

TEST_CASE("total blocks group by mu + lambda") {
  CHECK(total_from_partials(cos_t_cos_x()).size() == 1);
  CHECK(total_from_partials(cos_t_cos_x()).count(2) == 1);
  ProductFunction g(1, 1, true);
  g.set({1}, {0}, 0.5);
  g.set({-1}, {0}, 0.5);
  g.set({0}, {1}, 0.5);
  g.set({0}, {-1}, 0.5);
  const auto blocks = total_from_partials(g);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks.begin()->first == 1);
  CHECK(blocks.begin()->second.coeffs().size() == 4);
}

TEST_CASE("mixed Sobolev norms") {
  ProductFunction one(1, 1, true);
  one.set({0}, {0}, 1.0);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) CHECK(mixed_sobolev_norm(one, j, k) == doctest::Approx(1.0));
  }
  // Four coefficients of modulus 1/4, each weighted by (1+1)^2 (1+1)^2.
  CHECK(mixed_sobolev_norm(cos_t_cos_x(), 1, 1) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("Parseval, projections and Sobolev sandwich on random functions") {
  std::mt19937_64 rng(0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_function(rng, 1 + trial % 2, 1 + trial % 3, 20, 4);
    double direct = 0.0;
    for (const auto& [k, c] : f.coeffs()) direct += std::norm(c);
    CHECK(f.l2_norm() * f.l2_norm() == doctest::Approx(direct).epsilon(1e-12));
    CHECK(mixed_sobolev_norm(f, 0, 0) == doctest::Approx(f.l2_norm()).epsilon(1e-12));

    double shells = 0.0;
    ProductFunction rebuilt(f.n(), f.m());
    for (const auto& pt : decay_profile(f, f.xi_degree_sq()).points) shells += pt.norm * pt.norm;
    for (const auto& sh : shells_up_to(f.m(), f.xi_degree_sq())) {
      for (const auto& [xi, poly] : partial_projection(f, sh.lambda)) rebuilt.add_mode(xi, poly);
    }
    CHECK(shells == doctest::Approx(direct).epsilon(1e-12));
    CHECK((rebuilt - f).l2_norm() == 0.0);

    double alpha = 0.0;
    for (const auto& [a, block] : total_from_partials(f)) alpha += block.l2_norm() * block.l2_norm();
    CHECK(alpha == doctest::Approx(direct).epsilon(1e-12));

    for (int k = 0; k <= 3; ++k) CHECK(sobolev_norm(f, k) <= mixed_sobolev_norm(f, k, k) * (1 + 1e-12));
    for (int j = 0; j <= 2; ++j) {
      for (int k = 0; k <= 2; ++k) CHECK(mixed_sobolev_norm(f, j, k) <= sobolev_norm(f, j + k) * (1 + 1e-12));
    }
  }
}

TEST_CASE("conjugate symmetry of real functions") {
  CHECK(cos_t_cos_x().conjugate_symmetry_defect() == 0.0);
  ProductFunction f(1, 1);
  f.set({1}, {0}, cd(0, 1));
  CHECK(f.conjugate_symmetry_defect() > 0.5);
}

TEST_CASE("decay classification on synthetic profiles") {
  CHECK(decay_classify(synthetic(-10.0)).classification == Smoothness::Smooth);
  CHECK(decay_classify(synthetic(2.0)).classification == Smoothness::Distribution);
  CHECK(decay_classify(synthetic(0.0)).classification == Smoothness::Distribution);
  const auto v = decay_classify(synthetic(-10.0));
  CHECK(v.slope == doctest::Approx(-10.0).epsilon(1e-9));

  DecayProfile few;
  for (long l = 1; l <= 3; ++l) few.points.push_back({l, 1.0});
  const auto u = decay_classify(few);
  CHECK(u.classification == Smoothness::Undecided);
  CHECK_FALSE(u.diagnostic.empty());

  DecayProfile noisy;
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> e(-8.0, 8.0);
  for (long l = 1; l <= 100; ++l) noisy.points.push_back({l, std::exp(e(rng))});
  CHECK(decay_classify(noisy).classification == Smoothness::Undecided);
}

TEST_CASE("finitely supported profiles are smooth") {
  DecayProfile p;
  for (long l = 0; l <= 64; ++l) p.points.push_back({l, l <= 1 ? 1.0 : 0.0});
  const auto v = decay_classify(p);
  CHECK(v.classification == Smoothness::Smooth);
  CHECK(v.finite_support);
}

TEST_CASE("lambda_theta membership") {
  CHECK(lambda_theta_member(99, 0, 0.5));
  CHECK_FALSE(lambda_theta_member(99, 15, 0.5));
  CHECK(lambda_theta_member(0, 0, 0.3));
  CHECK_THROWS(lambda_theta_member(1, 1, 1.0));
}

#include "tubespec/case_studies.hpp"

#include <doctest.h>

#include <cmath>

using namespace tubespec;

TEST_CASE("half-integers") {
  CHECK(HalfInt::from_string("21/2").twice == 21);
  CHECK(HalfInt::from_string("3").twice == 6);
  CHECK(HalfInt::from_string("1.5").twice == 3);
  CHECK_THROWS(HalfInt::from_string("1/3"));
  CHECK(HalfInt{5}.str() == "5/2");
  CHECK(HalfInt{4}.str() == "2");
}

TEST_CASE("SU(2) spectrum") {
  const auto spec = su2_spectrum(HalfInt{40});
  REQUIRE(spec.size() == 41);
  for (const auto& s : spec) {
    const long twice_l = s.l.twice;
    mpq_class want(twice_l * (twice_l + 2), 4);
    want.canonicalize();
    CHECK(s.lambda == want);
    CHECK(static_cast<long>(s.weights.size()) == twice_l + 1);
    CHECK(s.dimension() == (twice_l + 1) * (twice_l + 1));
    CHECK(s.c_lambda == (s.l.is_integer() ? twice_l + 1 : 0));
    for (const auto& [g, mult] : s.weights) {
      CHECK(mult == twice_l + 1);
      CHECK(std::abs(g.twice) <= twice_l);
      CHECK((g.twice - twice_l) % 2 == 0);
    }
  }
}

TEST_CASE("SU(2) gap bound") {
  const auto r = su2_agh_check(HalfInt{40});
  REQUIRE(r.min_nonzero_gamma);
  CHECK(r.min_nonzero_gamma->twice == 1);
  CHECK(r.holds);
  CHECK(r.C == "1/2");
  CHECK(r.sampled_min_ratio >= 0.25);
  CHECK_FALSE(su2_agh_check(HalfInt{0}).min_nonzero_gamma);
}

TEST_CASE("SU(2) kernel growth") {
  CHECK(su2_kernel_growth(HalfInt{0}).back().cumulative == 1);
  for (long t = 0; t <= 40; ++t) {
    const auto g = su2_kernel_growth(HalfInt{t});
    CHECK(g.back().cumulative == (t / 2 + 1) * (t / 2 + 1));
    long total = 0;
    for (const auto& s : su2_spectrum(HalfInt{t})) total += s.dimension();
    CHECK(total == peter_weyl_count(HalfInt{t}));
  }
}

TEST_CASE("circle: smooth solvability requires f(0) = 0") {
  const auto s = s1_solve({{0, 1.0}, {1, -1.0}}, 32);
  CHECK(s.finite);
  CHECK(s.interior_residual == 0.0);
  CHECK(s.u.size() == 1);
  CHECK(s.u.at(0) == cd(1.0));

  const auto d = s1_solve({{0, 1.0}}, 32);
  CHECK_FALSE(d.finite);
  CHECK(d.interior_residual == 0.0);
  CHECK(d.cut_residual == doctest::Approx(1.0));
  for (long k = 0; k <= 32; ++k) CHECK(d.u.at(k) == cd(1.0));
}

TEST_CASE("circle report") {
  const S1Report r = s1_counterexample(64);
  CHECK(r.smooth_class.classification == Smoothness::Smooth);
  CHECK(r.distribution_class.classification == Smoothness::Distribution);
  CHECK(r.cinfty_constraint == "f(0)=0");
  CHECK(r.distr_constraint == "none");
}

TEST_CASE("circle solver on random data with f(0) = 0") {
  std::map<long, cd> f;
  double sum = 0.0;
  for (long k = -4; k <= 3; ++k) {
    f[k] = 0.1 * static_cast<double>(k * k - 3);
    sum += f[k].real();
  }
  f[4] = -sum;
  const auto s = s1_solve(f, 40);
  CHECK(s.finite);
  CHECK(s.interior_residual < 1e-14);
}

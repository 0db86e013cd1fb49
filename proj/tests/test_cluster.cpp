#include "tubespec/builtin.hpp"
#include "tubespec/cluster.hpp"
#include "tubespec/invariant_system.hpp"

#include <doctest.h>

#include <random>

using namespace tubespec;

namespace {

GammaLattice gamma_for(const std::string& name) { return gamma_of(build_system(builtin_operator(name))); }

}  // namespace

TEST_CASE("cluster partitions") {
  const auto p = cluster_partition(gamma_for("E4"), 5);
  CHECK(p.shell_dimension() == 8);
  CHECK(p.c_lambda() == 2);
  CHECK(p.in_gamma == std::vector<Freq>{{-1, 2}, {1, -2}});
  CHECK(cluster_partition(gamma_for("E1"), 1).c_lambda() == 0);
}

TEST_CASE("projection onto the cluster") {
  const GammaLattice g = gamma_for("E4");
  ProductFunction f(1, 2);
  f.set({0}, {1, -2}, 1.0);
  f.set({0}, {1, 0}, 1.0);
  const ProductFunction a = project_cluster(f, g, ClusterSide::A);
  CHECK(a.coeffs().size() == 1);
  CHECK(a.coeff({0}, {1, -2}) == cd(1.0));
}

TEST_CASE("cluster projectors are complementary orthogonal idempotents") {
  std::mt19937_64 rng(0);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<long> k(-4, 4);
  const GammaLattice g = gamma_for("E6");
  for (int trial = 0; trial < 20; ++trial) {
    ProductFunction f(1, 3);
    for (int i = 0; i < 40; ++i) f.add_to({k(rng)}, {k(rng), k(rng), k(rng)}, cd(gauss(rng), gauss(rng)));
    const auto a = project_cluster(f, g, ClusterSide::A);
    const auto b = project_cluster(f, g, ClusterSide::Aperp);
    CHECK((a + b - f).l2_norm() == 0.0);
    CHECK((project_cluster(a, g, ClusterSide::A) - a).l2_norm() == 0.0);
    CHECK((project_cluster(b, g, ClusterSide::Aperp) - b).l2_norm() == 0.0);
    CHECK(inner(a, b) == cd(0.0));
  }
}

TEST_CASE("P commutes with the cluster projector") {
  CHECK(invariance_defect(builtin_operator("E1"), gamma_for("E1"), 4, 4.0) <= 1e-14);
  CHECK(invariance_defect(builtin_operator("E4"), gamma_for("E4"), 6, 6.0) <= 1e-14);
}

TEST_CASE("any x-support projector commutes with P") {
  // Coefficients do not depend on x, so P preserves each xi-mode.
  const OperatorSpec e4 = builtin_operator("E4");
  CHECK(invariance_defect_for(e4, [](const Freq& xi) { return xi[0] > 0; }, 5, 3.0) <= 1e-14);
}

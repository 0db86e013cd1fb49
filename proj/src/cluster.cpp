#include "tubespec/cluster.hpp"

#include <cmath>

namespace tubespec {

ClusterPartition cluster_partition(const GammaLattice& gamma, long lambda) {
  if (lambda < 0) throw std::invalid_argument("lambda must be non-negative");
  ClusterPartition part;
  part.lambda = lambda;
  const long r = static_cast<long>(std::floor(std::sqrt(static_cast<double>(lambda)))) + 1;
  for_each_in_ball(gamma.m, r * r, [&](const Freq& xi) {
    if (norm_sq(xi) != lambda) return;
    (gamma_member(gamma, xi) ? part.in_gamma : part.out_gamma).push_back(xi);
  });
  return part;
}

ProductFunction project_cluster(const ProductFunction& f, const GammaLattice& gamma, ClusterSide side) {
  const bool want = side == ClusterSide::A;
  return project_support(f, [&](const Freq& xi) { return gamma_member(gamma, xi) == want; });
}

double invariance_defect(const OperatorSpec& spec, const GammaLattice& gamma, long K, double R) {
  return invariance_defect_for(spec, [&](const Freq& xi) { return gamma_member(gamma, xi); }, K, R);
}

}  // namespace tubespec

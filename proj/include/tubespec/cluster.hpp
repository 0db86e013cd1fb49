#pragma once

#include "tubespec/field.hpp"
#include "tubespec/fourier.hpp"
#include "tubespec/operator.hpp"

#include <vector>

namespace tubespec {

/// Split of the shell |xi|^2 = lambda into Gamma and non-Gamma frequencies.
struct ClusterPartition {
  long lambda = 0;
  std::vector<Freq> in_gamma;   // spans A_lambda
  std::vector<Freq> out_gamma;  // spans the orthogonal complement
  std::size_t c_lambda() const { return in_gamma.size(); }
  std::size_t shell_dimension() const { return in_gamma.size() + out_gamma.size(); }
};

ClusterPartition cluster_partition(const GammaLattice& gamma, long lambda);

enum class ClusterSide { A, Aperp };

/// Keeps the coefficients with xi in Gamma (A) or outside it (Aperp).
ProductFunction project_cluster(const ProductFunction& f, const GammaLattice& gamma, ClusterSide side);

/// Same, for an arbitrary frequency selector; used to probe commutation with
/// projectors that are not built from Gamma.
template <class Pred>
ProductFunction project_support(const ProductFunction& f, Pred&& keep_xi) {
  ProductFunction out(f.n(), f.m(), f.real());
  for (const auto& [k, c] : f.coeffs()) {
    if (keep_xi(k.xi)) out.add_to(k.eta, k.xi, c);
  }
  return out;
}

/// max over basis functions e^{i eta t} e^{i xi x} (|eta| <= K, |xi| <= R,
/// interior rows) of ||(P pi - pi P) b|| / ||P b||.
double invariance_defect(const OperatorSpec& spec, const GammaLattice& gamma, long K, double R);

template <class Pred>
double invariance_defect_for(const OperatorSpec& spec, Pred&& keep_xi, long K, double R) {
  double worst = 0.0;
  const double deg = spec.degree_t();
  const auto etas = enumerate_ball_sq(spec.n, K * K);
  for (const auto& xi : enumerate_ball(spec.m, R)) {
    for (const auto& eta : etas) {
      if (std::sqrt(static_cast<double>(norm_sq(eta))) + 2.0 * deg > static_cast<double>(K)) continue;
      ProductFunction b(spec.n, spec.m);
      b.set(eta, xi, 1.0);
      const ProductFunction pb = apply_P(spec, b);
      const ProductFunction lhs = apply_P(spec, project_support(b, keep_xi));
      const ProductFunction rhs = project_support(pb, keep_xi);
      const double denom = pb.l2_norm();
      const double num = (lhs - rhs).l2_norm();
      if (denom == 0.0) {
        if (num != 0.0) worst = std::max(worst, num);
        continue;
      }
      worst = std::max(worst, num / denom);
    }
  }
  return worst;
}

}  // namespace tubespec

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "tubespec/builtin.hpp"
#include "tubespec/case_studies.hpp"
#include "tubespec/cluster.hpp"
#include "tubespec/invariant_system.hpp"
#include "tubespec/propagation.hpp"
#include "tubespec/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace tubespec;

namespace {

// Pinned tolerances.
constexpr double kAnnihilationTol = 1e-12;
constexpr double kNextSigmaMin = 1e-3;
constexpr double kManufacturedTol = 1e-8;
constexpr double kOracleTol = 1e-9;
constexpr double kClusterTol = 1e-12;
constexpr double kRhoFlat = 0.2;
constexpr double kRhoE2 = 3.0;
constexpr double kSobolevTol = 1e-12;
constexpr double kSlopeAgreement = 1.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

GammaLattice gamma_for(const OperatorSpec& s) { return gamma_of(build_system(s)); }

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

ProductFunction without_kernel_mass(const ProductFunction& f, const GammaLattice& g) {
  ProductFunction out = f;
  for (const auto& v : compatibility_check(f, g).violations) out.set(Freq(static_cast<std::size_t>(f.n()), 0), v.xi, 0.0);
  return out;
}

// 1. Gamma is exact and agrees with a brute-force scan.
void c1(Outcome& o) {
  const std::vector<std::pair<std::string, std::vector<Freq>>> expected = {
      {"E1", {}}, {"E2", {}}, {"E4", {{1, -2}}}, {"E6", {{1, 1, -1}}}};
  for (const auto& [name, basis] : expected) {
    const SystemBasis s = build_system(builtin_operator(name));
    const GammaLattice g = gamma_of(s);
    o.require(g.basis == basis, name + " basis");
    std::size_t members = 0;
    for (const auto& xi : enumerate_ball(s.m, 10.0)) {
      bool zero = true;
      for (const auto& v : form_values(s, xi)) zero = zero && v.is_zero();
      o.require(zero == gamma_member(g, xi), name + " membership");
      members += zero ? 1 : 0;
    }
    o.detail << " " << name << ":rank " << g.rank() << "/" << members << " pts";
  }
}

// 2. SU(2) weights, kernel multiplicities and growth.
void c2(Outcome& o) {
  const HalfInt l_max{40};
  const auto agh = su2_agh_check(l_max);
  o.require(agh.min_nonzero_gamma && agh.min_nonzero_gamma->twice == 1, "min |gamma| = 1/2");
  for (const auto& s : su2_spectrum(l_max)) {
    o.require(s.c_lambda == (s.l.is_integer() ? s.l.twice + 1 : 0), "c_lambda at l=" + s.l.str());
  }
  for (long t = 0; t <= l_max.twice; ++t) {
    const long fl = t / 2;
    o.require(su2_kernel_growth(HalfInt{t}).back().cumulative == (fl + 1) * (fl + 1), "cumulative kernel");
  }
  o.detail << " min|gamma|=" << (agh.min_nonzero_gamma ? agh.min_nonzero_gamma->str() : "none")
           << " cumulative(20)=" << su2_kernel_growth(l_max).back().cumulative;
}

// 3. Diophantine fits and witnesses.
void c3(Outcome& o) {
  const SystemBasis e2 = build_system(builtin_operator("E2"));
  const AghVerdict v = agh_scan(e2, gamma_of(e2), 2000.0);
  o.require(v.fitted_rho >= 0.8 && v.fitted_rho <= 1.2, "fitted rho in [0.8, 1.2]");
  o.detail << " fitted_rho=" << v.fitted_rho;

  std::vector<long> F = {0, 1, 1};  // F[k] is the k-th Fibonacci number
  while (F.size() <= 16) F.push_back(F[F.size() - 1] + F[F.size() - 2]);
  std::vector<Freq> fib;
  std::vector<long> fk;
  for (std::size_t k = 5; k <= 15; ++k) {
    fib.push_back({F[k + 1], -F[k]});
    fk.push_back(F[k]);
  }
  double lo = 1.0, hi = 0.0;
  const auto w = witness_gap(e2, fib, 50);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double p = w[i].gap * static_cast<double>(fk[i]);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  o.require(fib.size() == 11 && fk.front() == 5 && fk.back() == 610, "Fibonacci indices 5..15");
  o.require(lo >= 0.40 && hi <= 0.50, "gap*F_k in [0.40, 0.50]");
  o.detail << " gap*F_k in [" << lo << ", " << hi << "]";

  const SystemBasis liou = build_system(builtin_operator("liouville"));
  const auto lw = witness_gap(liou, {{11, -100}, {110001, -1000000}}, 50);
  o.require(lw[0].gap <= 1e-3, "q=1e2 gap <= 1e-3");
  o.require(lw[1].gap <= 1e-17, "q=1e6 gap <= 1e-17");
  o.detail << " liouville gaps " << lw[0].gap << ", " << lw[1].gap;
}

// 4. Rational certificate.
void c4(Outcome& o) {
  const SystemBasis s = build_system(builtin_operator("E4"));
  const GammaLattice g = gamma_of(s);
  const AghVerdict v = agh_scan(s, g, 40.0);
  o.require(v.mode == AghMode::ExactCertificate, "ExactCertificate");
  o.require(v.C_exact == "1/2" && v.rho == 0.0, "C = 1/2, rho = 0");
  std::size_t checked = 0;
  for (const auto& xi : enumerate_ball(s.m, 40.0)) {
    for (const auto& val : form_values(s, xi)) {
      if (val.is_zero()) continue;
      const QuadScalar twice = val * QuadScalar(2);
      o.require(twice.is_rational() && twice.rational_part().get_den() == 1, "gap multiple of 1/2");
      ++checked;
    }
  }
  o.detail << " mode=" << to_string(v.mode) << " C=" << v.C_exact << " checked=" << checked;
}

// 5. Kernel characterization.
void c5(Outcome& o) {
  for (const std::string name : {"E1", "E4"}) {
    const OperatorSpec spec = builtin_operator(name);
    const GammaLattice g = gamma_for(spec);
    const auto basis = kernel_basis(spec, g, 8.0);
    double worst = 0.0;
    for (const auto& k : basis) worst = std::max(worst, apply_P(spec, k).l2_norm());
    o.require(worst <= kAnnihilationTol, name + " annihilation");
    const KernelScan scan = kernel_scan(spec, 8, 8.0);
    o.require(scan.dimension == basis.size(), name + " kernel dimension");
    for (const auto& xi : scan.kernel_modes) o.require(gamma_member(g, xi), name + " kernel mode in Gamma");
    o.require(scan.next_sigma >= kNextSigmaMin, name + " spectral gap above the kernel");
    o.detail << " " << name << ":dim " << scan.dimension << "/" << basis.size() << " next_sigma=" << scan.next_sigma;
  }
}

// 6. Manufactured solution.
void c6(Outcome& o) {
  const OperatorSpec e1 = builtin_operator("E1");
  ProductFunction ustar(1, 1, true);
  for (long e : {-1L, 1L}) {
    for (long x : {-1L, 1L}) ustar.set({e}, {x}, 0.25);
  }
  const ProductFunction f = apply_P(e1, ustar);
  const GammaLattice g = gamma_for(e1);
  const SolveResult r = solve_global(e1, g, f, 32, 1.0);
  // Compare modulo ker P = constants in t on Gamma modes.
  const ProductFunction diff = without_kernel_mass(r.u - ustar, g);
  const double err = diff.l2_norm() / ustar.l2_norm();
  const double res = (apply_P(e1, r.u) - f).l2_norm();
  o.require(err <= kManufacturedTol, "relative error");
  o.require(res <= kManufacturedTol, "residual");
  o.detail << " rel_err=" << err << " residual=" << res;
}

// 7. Oracle equivalence.
void c7(Outcome& o) {
  std::mt19937_64 rng(0);
  for (const std::string name : {"E1", "E4"}) {
    const OperatorSpec spec = builtin_operator(name);
    const GammaLattice g = gamma_for(spec);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const ProductFunction f = without_kernel_mass(random_function(rng, spec.n, spec.m, 30, 3), g);
      const SolveResult a = solve_global(spec, g, f, 8, 8.0);
      const SolveResult b = oracle_solve(spec, f, 8, 8.0);
      worst = std::max(worst, (a.u - b.u).l2_norm() / std::max(b.u.l2_norm(), 1e-300));
    }
    o.require(worst <= kOracleTol, name + " agreement");
    o.detail << " " << name << ":" << worst;
  }
}

// 8. Cluster algebra.
void c8(Outcome& o) {
  std::mt19937_64 rng(0);
  double worst_defect = 0.0, worst_tilde = 0.0;
  for (const std::string name : {"E1", "E2", "E3", "E4", "E5", "E6"}) {
    const OperatorSpec spec = builtin_operator(name);
    const GammaLattice g = gamma_for(spec);
    for (int trial = 0; trial < 10; ++trial) {
      const ProductFunction f = random_function(rng, spec.n, spec.m, 40, 4);
      const auto a = project_cluster(f, g, ClusterSide::A);
      const auto b = project_cluster(f, g, ClusterSide::Aperp);
      o.require((a + b - f).l2_norm() == 0.0, name + " sum");
      o.require((project_cluster(a, g, ClusterSide::A) - a).l2_norm() == 0.0, name + " idempotent");
      o.require(inner(a, b) == cd(0.0), name + " orthogonal");
    }
    worst_defect = std::max(worst_defect, invariance_defect(spec, g, 6, 3.0));
    const Freq zero_xi(static_cast<std::size_t>(spec.m), 0);
    for (const auto& xi : enumerate_ball(spec.m, 6.0)) {
      if (!gamma_member(g, xi)) continue;
      for (const auto& eta : enumerate_ball(spec.n, 3.0)) {
        ProductFunction b(spec.n, spec.m), b0(spec.n, spec.m);
        b.set(eta, xi, 1.0);
        b0.set(eta, zero_xi, 1.0);
        const ProductFunction pb = apply_P(spec, b);
        const ProductFunction pb0 = apply_P(spec, b0);
        ProductFunction shifted(spec.n, spec.m);
        for (const auto& [k, c] : pb0.coeffs()) shifted.add_to(k.eta, xi, c);
        worst_tilde = std::max(worst_tilde, (pb - shifted).l2_norm() / std::max(1.0, shifted.l2_norm()));
      }
    }
  }
  o.require(worst_defect <= kClusterTol, "invariance defect");
  o.require(worst_tilde <= kClusterTol, "reduced-operator identity on Gamma modes");
  o.detail << " defect=" << worst_defect << " identity=" << worst_tilde;
}

// 9. A priori probe.
void c9(Outcome& o) {
  for (const auto& [name, bound] : std::vector<std::pair<std::string, double>>{{"E1", kRhoFlat}, {"E4", kRhoFlat}, {"E2", kRhoE2}}) {
    const OperatorSpec spec = builtin_operator(name);
    const SystemBasis s = build_system(spec);
    const GammaLattice g = gamma_of(s);
    const AghVerdict v = agh_scan(s, g, 50.0);
    const AprioriProbe p = apriori_probe(spec, g, 16, name == "E2" ? 400 : 100, &v);
    o.require(p.rho <= bound, name + " fitted rho");
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& pt : p.points) lo = std::min(lo, pt.sigma_min);
    o.require(lo > 0.0, name + " positive sigma_min");
    o.detail << " " << name << ":rho=" << p.rho << " min_sigma=" << lo;
  }
}

// 10. Sobolev sandwich and Parseval.
void c10(Outcome& o) {
  std::mt19937_64 rng(0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const ProductFunction f = random_function(rng, 1 + trial % 2, 1 + trial % 3, 25, 5);
    double direct = 0.0;
    for (const auto& [k, c] : f.coeffs()) direct += std::norm(c);
    double shells = 0.0;
    for (const auto& pt : decay_profile(f, f.xi_degree_sq()).points) shells += pt.norm * pt.norm;
    worst = std::max(worst, std::abs(shells - direct) / direct);
    worst = std::max(worst, std::abs(f.l2_norm() * f.l2_norm() - direct) / direct);
    for (int k = 0; k <= 3; ++k) {
      const double lhs = sobolev_norm(f, k), rhs = mixed_sobolev_norm(f, k, k);
      o.require(lhs <= rhs * (1 + kSobolevTol), "H^k <= H^{k,k}");
    }
    for (int j = 0; j <= 2; ++j) {
      for (int k = 0; k <= 2; ++k) {
        o.require(mixed_sobolev_norm(f, j, k) <= sobolev_norm(f, j + k) * (1 + kSobolevTol), "H^{j,k} <= H^{j+k}");
      }
    }
  }
  o.require(worst <= kSobolevTol, "Parseval");
  o.detail << " parseval_rel=" << worst;
}

// 11. Circle counterexample.
void c11(Outcome& o) {
  const S1Report r = s1_counterexample(64);
  o.require(r.smooth_case.finite && r.smooth_case.interior_residual == 0.0, "f = 1 - e^{ix} solved exactly");
  o.require(r.smooth_class.classification == Smoothness::Smooth, "smooth solution classified Smooth");
  o.require(r.distribution_class.classification == Smoothness::Distribution, "a v = 1 classified Distribution");
  o.require(r.cinfty_constraint == "f(0)=0", "constraint reported");
  o.detail << " smooth_residual=" << r.smooth_case.interior_residual
           << " v:" << to_string(r.distribution_class.classification) << " slope=" << r.distribution_class.slope;
}

// 12. Propagation from a window.
void c12(Outcome& o) {
  const OperatorSpec e1 = builtin_operator("E1");
  ProductFunction u(1, 1, true);
  for (long k = -32; k <= 32; ++k) {
    const double w = std::pow(1.0 + static_cast<double>(k * k), -6.0);
    const long j = std::abs(k) % 3;
    u.add_to({0}, {k}, w);
    u.add_to({j}, {k}, w / 2);
    u.add_to({-j}, {k}, w / 2);
  }
  const auto r = propagation_verdict(e1, u, LocalWindow{{{0.0, std::numbers::pi / 2}}}, 32 * 32);
  o.require(r.outcome == PropagationOutcome::SmoothEverywhere, "SmoothEverywhere");
  o.require(r.slope_gap <= kSlopeAgreement, "slopes agree");
  o.detail << " local=" << r.local.slope << " global=" << r.global.slope << " verdict=" << to_string(r.outcome);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"gamma exactness", c1},   {"SU(2) case study", c2},       {"Diophantine fits", c3},
      {"rational certificate", c4}, {"kernel characterization", c5}, {"manufactured solution", c6},
      {"oracle equivalence", c7}, {"cluster algebra", c8},          {"a priori probe", c9},
      {"Sobolev sandwich", c10},  {"circle counterexample", c11},   {"propagation", c12},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %2zu %-24s (%.2fs)%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                o.detail.str().c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

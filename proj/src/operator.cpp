#include "tubespec/operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace tubespec {

double OperatorSpec::degree_t() const {
  long d = 0;
  for (const auto& row : a) {
    for (const auto& p : row) d = std::max(d, p.degree_sq());
  }
  return std::sqrt(static_cast<double>(d));
}

void derive_numeric_coefficients(OperatorSpec& spec) {
  spec.a_hp.clear();
  for (const auto& row : spec.a_exact) {
    auto& out = spec.a_hp.emplace_back();
    for (const auto& p : row) {
      out.push_back(p.map_coeffs([](const QuadComplex& c) { return HpComplex{c.re.to_hp(), c.im.to_hp()}; }));
    }
  }
  derive_double_coefficients(spec);
}

void derive_double_coefficients(OperatorSpec& spec) {
  spec.a.clear();
  for (const auto& row : spec.a_hp) {
    auto& out = spec.a.emplace_back();
    for (const auto& p : row) {
      out.push_back(p.map_coeffs([](const HpComplex& c) { return cd(c.re.convert_to<double>(), c.im.convert_to<double>()); }));
    }
  }
}

namespace {

std::string freq_str(const Freq& f) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
  os << ")";
  return os.str();
}

}  // namespace

OperatorSpec validate_spec(OperatorSpec spec) {
  if (spec.n < 1 || spec.m < 1) throw ValidationError("dimensions n and m must be >= 1");
  if (spec.N < 1) throw ValidationError("the operator needs at least one square (N >= 1)");
  if (spec.field.kind == ScalarField::Kind::Quadratic && !is_square_free(spec.field.d)) {
    throw ValidationError("quadratic field radicand must be square-free and > 1");
  }
  if (spec.field.exact()) {
    if (spec.a_exact.size() != static_cast<std::size_t>(spec.N)) throw ValidationError("coefficient matrix must have N rows");
    derive_numeric_coefficients(spec);
  } else {
    if (spec.a_hp.size() != static_cast<std::size_t>(spec.N)) throw ValidationError("coefficient matrix must have N rows");
    derive_double_coefficients(spec);
  }
  if (spec.W.empty()) spec.W.assign(static_cast<std::size_t>(spec.N), std::vector<double>(static_cast<std::size_t>(spec.n), 0.0));
  if (spec.W.size() != static_cast<std::size_t>(spec.N)) throw ValidationError("W must have N entries");

  std::vector<std::string> offenders;
  for (int l = 0; l < spec.N; ++l) {
    const auto ul = static_cast<std::size_t>(l);
    if (spec.a[ul].size() != static_cast<std::size_t>(spec.m)) throw ValidationError("coefficient row must have m entries");
    if (spec.W[ul].size() != static_cast<std::size_t>(spec.n)) throw ValidationError("each W_l must have n components");
    for (double c : spec.W[ul]) {
      if (!std::isfinite(c)) throw ValidationError("W entries must be finite reals");
    }
    for (int j = 0; j < spec.m; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      for (const auto& [eta, c] : spec.a[ul][uj].coeffs()) {
        if (static_cast<int>(eta.size()) != spec.n) throw ValidationError("coefficient frequency has wrong dimension");
      }
      const std::string where = "a[" + std::to_string(l + 1) + "][" + std::to_string(j + 1) + "]";
      if (spec.field.exact()) {
        const auto& p = spec.a_exact[ul][uj];
        for (const auto& [eta, c] : p.coeffs()) {
          if (!(p.coeff(negate(eta)) == c.conj())) offenders.push_back(where + " at eta=" + freq_str(eta));
        }
        continue;
      }
      const double scale = std::max(1.0, l2_norm(spec.a[ul][uj]));
      const double defect = conjugate_symmetry_defect(spec.a[ul][uj]);
      if (defect > spec.field.tol * scale) {
        for (const auto& [eta, c] : spec.a[ul][uj].coeffs()) {
          if (std::abs(spec.a[ul][uj].coeff(negate(eta)) - std::conj(c)) > spec.field.tol * scale) {
            offenders.push_back(where + " at eta=" + freq_str(eta));
          }
        }
      } else if (defect > 0.0) {
        // Symmetrize: c(eta) <- (c(eta) + conj c(-eta)) / 2.
        const auto& hp = spec.a_hp[ul][uj];
        TrigPoly<HpComplex> sym(spec.n);
        for (const auto& [eta, c] : hp.coeffs()) {
          const HpComplex mirror = hp.coeff(negate(eta)).conj();
          sym.add_to(eta, HpComplex{(c.re + mirror.re) / 2, (c.im + mirror.im) / 2});
        }
        for (const auto& [eta, c] : hp.coeffs()) {
          if (hp.coeff(negate(eta)).is_zero()) {
            const HpComplex mirror = c.conj();
            sym.add_to(negate(eta), HpComplex{mirror.re / 2, mirror.im / 2});
          }
        }
        spec.a_hp[ul][uj] = sym;
      }
    }
  }
  if (!offenders.empty()) {
    std::string msg = "coefficients are not real-valued: ";
    for (std::size_t i = 0; i < offenders.size(); ++i) msg += (i ? "; " : "") + offenders[i];
    throw ValidationError(msg);
  }
  if (!spec.field.exact()) derive_double_coefficients(spec);
  return spec;
}

std::vector<TrigPolyd> mode_symbols(const OperatorSpec& spec, const Freq& xi) {
  std::vector<TrigPolyd> out;
  out.reserve(static_cast<std::size_t>(spec.N));
  for (const auto& row : spec.a) {
    std::map<Freq, cd> acc;
    std::map<Freq, double> mag;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (xi[j] == 0) continue;
      for (const auto& [eta, c] : row[j].coeffs()) {
        acc[eta] += static_cast<double>(xi[j]) * c;
        mag[eta] += std::abs(static_cast<double>(xi[j]) * c);
      }
    }
    // Cancellations in sum_j a_lj xi_j leave rounding residue; drop it.
    TrigPolyd b(spec.n);
    for (const auto& [eta, c] : acc) {
      if (std::abs(c) > 64.0 * std::numeric_limits<double>::epsilon() * mag[eta]) b.add_to(eta, c);
    }
    out.push_back(std::move(b));
  }
  return out;
}

namespace {

double dot(const std::vector<double>& c, const Freq& eta) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * static_cast<double>(eta[k]);
  return s;
}

/// D v = b * v + (c . eta) v, the real part of -i Y on one xi-mode.
TrigPolyd apply_D(const TrigPolyd& b, const std::vector<double>& c, const TrigPolyd& v) {
  TrigPolyd out = b * v;
  for (const auto& [eta, val] : v.coeffs()) {
    const double s = dot(c, eta);
    if (s != 0.0) out.add_to(eta, s * val);
  }
  return out;
}

}  // namespace

ProductFunction apply_P(const OperatorSpec& spec, const ProductFunction& u) {
  ProductFunction out(u.n(), u.m(), u.real());
  for (const auto& [xi, v] : u.modes()) {
    const auto symbols = mode_symbols(spec, xi);
    TrigPolyd pv(spec.n);
    for (const auto& [eta, c] : v.coeffs()) {
      const auto mu = static_cast<double>(norm_sq(eta));
      if (mu != 0.0) pv.add_to(eta, mu * c);
    }
    for (std::size_t l = 0; l < symbols.size(); ++l) {
      // -Y_l^2 = D_l^2 since Y_l = i D_l.
      pv = pv + apply_D(symbols[l], spec.W[l], apply_D(symbols[l], spec.W[l], v));
    }
    out.add_mode(xi, pv);
  }
  return out;
}

std::size_t ModeMatrix::index_of(const Freq& eta) const {
  auto it = std::lower_bound(basis.begin(), basis.end(), eta);
  if (it == basis.end() || *it != eta) return basis.size();
  return static_cast<std::size_t>(it - basis.begin());
}

ModeMatrix mode_matrix(const OperatorSpec& spec, const Freq& xi, long K) {
  if (K <= 0) throw std::invalid_argument("t-frequency truncation K must be positive");
  if (static_cast<int>(xi.size()) != spec.m) throw std::invalid_argument("xi has wrong dimension");
  ModeMatrix mm;
  mm.xi = xi;
  mm.K = K;
  mm.basis = enumerate_ball_sq(spec.n, K * K);
  mm.undersized = static_cast<double>(K) < spec.degree_t() + 1.0;
  const auto dim = static_cast<Eigen::Index>(mm.basis.size());
  mm.entries = Eigen::MatrixXcd::Zero(dim, dim);

  for (Eigen::Index c = 0; c < dim; ++c) {
    const auto& eta = mm.basis[static_cast<std::size_t>(c)];
    mm.entries(c, c) += static_cast<double>(norm_sq(eta));
  }

  const auto symbols = mode_symbols(spec, xi);
  std::vector<long> reach(static_cast<std::size_t>(spec.N), 0);
  for (std::size_t l = 0; l < symbols.size(); ++l) {
    const auto& b = symbols[l];
    const auto& w = spec.W[l];
    reach[l] = b.degree_sq();
    // D[alpha, beta] = b^(alpha - beta) + (w . beta) delta.
    auto D = [&](const Freq& alpha, const Freq& beta) {
      cd v = b.coeff(sub(alpha, beta));
      if (alpha == beta) v += dot(w, beta);
      return v;
    };
    std::vector<Freq> steps;
    for (const auto& [s, coef] : b.coeffs()) steps.push_back(s);
    const Freq zero(static_cast<std::size_t>(spec.n), 0);
    if (!b.coeffs().contains(zero)) steps.push_back(zero);

    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto& eta = mm.basis[static_cast<std::size_t>(c)];
      for (const auto& s1 : steps) {
        const Freq zeta = add(eta, s1);
        const cd inner_val = D(zeta, eta);
        if (inner_val == cd(0.0)) continue;
        for (const auto& s2 : steps) {
          const Freq row = add(zeta, s2);
          const std::size_t r = mm.index_of(row);
          if (r == mm.basis.size()) continue;
          mm.entries(static_cast<Eigen::Index>(r), c) += D(row, zeta) * inner_val;
        }
      }
    }
  }

  // Row eta is interior when every frequency reachable by two D-steps lies in the ball.
  long max_reach = 0;
  for (long r : reach) max_reach = std::max(max_reach, r);
  const double step = std::sqrt(static_cast<double>(max_reach));
  mm.interior.resize(mm.basis.size());
  for (std::size_t r = 0; r < mm.basis.size(); ++r) {
    const double len = std::sqrt(static_cast<double>(norm_sq(mm.basis[r])));
    mm.interior[r] = len + 2.0 * step <= static_cast<double>(K) + 1e-12;
  }
  return mm;
}

ModeMatrix tilde_p_matrix(const OperatorSpec& spec, long K) {
  return mode_matrix(spec, Freq(static_cast<std::size_t>(spec.m), 0), K);
}

Eigen::VectorXcd to_vector(const TrigPolyd& p, const std::vector<Freq>& basis) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) v(static_cast<Eigen::Index>(i)) = p.coeff(basis[i]);
  return v;
}

TrigPolyd from_vector(const Eigen::VectorXcd& v, const std::vector<Freq>& basis, int dim) {
  TrigPolyd p(dim);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const cd c = v(static_cast<Eigen::Index>(i));
    if (c != cd(0.0)) p.add_to(basis[i], c);
  }
  return p;
}

}  // namespace tubespec

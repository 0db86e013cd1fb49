#include "tubespec/invariant_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace tubespec {

namespace {

/// Coefficients x with sum_p x_p cols[p] == target, decided exactly.
std::optional<std::vector<QuadScalar>> express_exact(const std::vector<std::vector<QuadScalar>>& cols,
                                                     const std::vector<QuadScalar>& target) {
  const std::size_t P = cols.size();
  const std::size_t R = target.size();
  std::vector<std::vector<QuadScalar>> a(R, std::vector<QuadScalar>(P + 1));
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t p = 0; p < P; ++p) a[r][p] = cols[p][r];
    a[r][P] = target[r];
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < P; ++c) {
    std::size_t piv = R;
    for (std::size_t r = rank; r < R; ++r) {
      if (!a[r][c].is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv == R) continue;  // cannot happen for independent pivots
    std::swap(a[rank], a[piv]);
    const QuadScalar inv = a[rank][c].inverse();
    for (std::size_t k = c; k <= P; ++k) a[rank][k] *= inv;
    for (std::size_t r = 0; r < R; ++r) {
      if (r == rank || a[r][c].is_zero()) continue;
      const QuadScalar f = a[r][c];
      for (std::size_t k = c; k <= P; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  for (std::size_t r = rank; r < R; ++r) {
    if (!a[r][P].is_zero()) return std::nullopt;
  }
  std::vector<QuadScalar> x(P);
  for (std::size_t p = 0; p < P && p < R; ++p) x[p] = a[p][P];
  return x;
}

struct HpSolve {
  std::vector<HpReal> x;
  double relative_residual = 0.0;
};

/// Least-squares style elimination with partial pivoting; the residual is the
/// part of `target` left outside the span, relative to its size.
HpSolve express_hp(const std::vector<std::vector<HpReal>>& cols, const std::vector<HpReal>& target) {
  const std::size_t P = cols.size();
  const std::size_t R = target.size();
  std::vector<std::vector<HpReal>> a(R, std::vector<HpReal>(P + 1));
  HpReal scale = 0;
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t p = 0; p < P; ++p) a[r][p] = cols[p][r];
    a[r][P] = target[r];
    scale = std::max(scale, HpReal(abs(target[r])));
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < P && rank < R; ++c) {
    std::size_t piv = rank;
    for (std::size_t r = rank; r < R; ++r) {
      if (abs(a[r][c]) > abs(a[piv][c])) piv = r;
    }
    if (a[piv][c] == 0) continue;
    std::swap(a[rank], a[piv]);
    for (std::size_t r = 0; r < R; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const HpReal f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k <= P; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  HpSolve s;
  s.x.assign(P, HpReal(0));
  for (std::size_t p = 0; p < rank && p < P; ++p) s.x[p] = a[p][P] / a[p][p];
  HpReal res = 0;
  for (std::size_t r = rank; r < R; ++r) res = std::max(res, HpReal(abs(a[r][P])));
  s.relative_residual = scale == 0 ? 0.0 : HpReal(res / scale).convert_to<double>();
  return s;
}

std::vector<Freq> union_support(const std::vector<TrigPoly<HpComplex>>& row) {
  std::set<Freq> s;
  for (const auto& p : row) {
    for (const auto& [eta, c] : p.coeffs()) s.insert(eta);
  }
  return {s.begin(), s.end()};
}

}  // namespace

std::string to_string(AghMode mode) {
  switch (mode) {
    case AghMode::ExactCertificate: return "ExactCertificate";
    case AghMode::EmpiricalFit: return "EmpiricalFit";
    case AghMode::Refuted: return "Refuted";
    case AghMode::Undecided: return "Undecided";
  }
  return "Undecided";
}

SystemBasis build_system(const OperatorSpec& spec) {
  SystemBasis sys;
  sys.m = spec.m;
  sys.exact = spec.field.exact();
  const auto m = static_cast<std::size_t>(spec.m);

  for (int l = 0; l < spec.N; ++l) {
    const auto ul = static_cast<std::size_t>(l);
    const auto support = union_support(spec.a_hp[ul]);
    SubsystemBasis sub;
    // Dependents recorded against the pivots known at the time (padded later).
    std::vector<std::pair<int, std::vector<QuadScalar>>> dep_exact;
    std::vector<std::pair<int, std::vector<HpReal>>> dep_hp;

    if (sys.exact) {
      std::vector<std::vector<QuadScalar>> pivcols;
      for (std::size_t j = 0; j < m; ++j) {
        std::vector<QuadScalar> col;
        for (const auto& eta : support) {
          const QuadComplex c = spec.a_exact[ul][j].coeff(eta);
          col.push_back(c.re);
          col.push_back(c.im);
        }
        auto x = express_exact(pivcols, col);
        if (x) {
          dep_exact.emplace_back(static_cast<int>(j), std::move(*x));
        } else {
          sub.j_idx.push_back(static_cast<int>(j));
          pivcols.push_back(std::move(col));
        }
      }
    } else {
      std::vector<std::vector<HpReal>> pivcols;
      const double tol = spec.field.tol;
      for (std::size_t j = 0; j < m; ++j) {
        std::vector<HpReal> col;
        for (const auto& eta : support) {
          const HpComplex c = spec.a_hp[ul][j].coeff(eta);
          col.push_back(c.re);
          col.push_back(c.im);
        }
        const bool zero = std::all_of(col.begin(), col.end(), [](const HpReal& v) { return v == 0; });
        auto s = express_hp(pivcols, col);
        const bool dependent = zero || s.relative_residual <= tol;
        if (!zero && s.relative_residual > tol * 1e-3 && s.relative_residual <= 10.0 * tol) sys.ambiguous = true;
        if (dependent) {
          dep_hp.emplace_back(static_cast<int>(j), std::move(s.x));
        } else {
          sub.j_idx.push_back(static_cast<int>(j));
          pivcols.push_back(std::move(col));
        }
      }
    }

    sub.m_ell = static_cast<int>(sub.j_idx.size());
    const auto me = static_cast<std::size_t>(sub.m_ell);
    for (auto& [j, x] : dep_exact) {
      sub.i_idx.push_back(j);
      x.resize(me);
      std::vector<HpReal> h;
      for (const auto& v : x) h.push_back(v.to_hp());
      sub.lambda_exact.push_back(std::move(x));
      sub.lambda_hp.push_back(std::move(h));
    }
    for (auto& [j, x] : dep_hp) {
      sub.i_idx.push_back(j);
      x.resize(me, HpReal(0));
      sub.lambda_hp.push_back(std::move(x));
    }

    for (std::size_t p = 0; p < me; ++p) {
      LinearForm f;
      f.ell = l;
      f.p = static_cast<int>(p);
      f.hp.assign(m, HpReal(0));
      if (sys.exact) f.exact.assign(m, QuadScalar(0));
      const auto jp = static_cast<std::size_t>(sub.j_idx[p]);
      f.hp[jp] = 1;
      if (sys.exact) f.exact[jp] = QuadScalar(1);
      for (std::size_t q = 0; q < sub.i_idx.size(); ++q) {
        const auto iq = static_cast<std::size_t>(sub.i_idx[q]);
        f.hp[iq] = sub.lambda_hp[q][p];
        if (sys.exact) f.exact[iq] = sub.lambda_exact[q][p];
      }
      for (const auto& v : f.hp) f.dbl.push_back(v.convert_to<double>());
      sys.forms.push_back(std::move(f));
    }
    sys.per_ell.push_back(std::move(sub));
  }
  return sys;
}

GammaLattice gamma_of(const SystemBasis& system) {
  GammaLattice lat;
  lat.m = system.m;
  const auto m = static_cast<std::size_t>(system.m);
  if (system.forms.empty()) {
    for (std::size_t j = 0; j < m; ++j) {
      Freq e(m, 0);
      e[j] = 1;
      lat.basis.push_back(std::move(e));
    }
    lat.numeric = !system.exact;
    return lat;
  }
  if (!system.exact) {
    lat.numeric = true;
    return lat;
  }
  for (const auto& sub : system.per_ell) {
    if (sub.m_ell == system.m) return lat;  // xi_j = 0 for every j
  }
  std::vector<std::vector<QuadScalar>> forms;
  for (const auto& f : system.forms) forms.push_back(f.exact);
  return integer_kernel(forms, system.m);
}

double gap(const SystemBasis& system, const Freq& xi) {
  double s = 0.0;
  for (const auto& f : system.forms) {
    double v = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
      if (xi[j] != 0) v += f.dbl[j] * static_cast<double>(xi[j]);
    }
    s += v * v;
  }
  return std::sqrt(s);
}

std::vector<QuadScalar> form_values(const SystemBasis& system, const Freq& xi) {
  if (!system.exact) throw std::logic_error("exact form values need an exact scalar field");
  std::vector<QuadScalar> out;
  for (const auto& f : system.forms) {
    QuadScalar v;
    for (std::size_t j = 0; j < xi.size(); ++j) {
      if (xi[j] != 0) v += f.exact[j] * QuadScalar(xi[j]);
    }
    out.push_back(v);
  }
  return out;
}

HpReal gap_hp(const SystemBasis& system, const Freq& xi) {
  HpReal s = 0;
  for (const auto& f : system.forms) {
    HpReal v = 0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
      if (xi[j] != 0) v += f.hp[j] * HpReal(xi[j]);
    }
    s += v * v;
  }
  return sqrt(s);
}

std::vector<GapWitness> witness_gap(const SystemBasis& system, const std::vector<Freq>& xs, int digits) {
  std::vector<GapWitness> out;
  for (const auto& xi : xs) {
    const HpReal g = gap_hp(system, xi);
    out.push_back({xi, g.convert_to<double>(), hp_str(g, std::max(digits, 1))});
  }
  return out;
}

std::optional<BinaryForm> single_binary_form(const SystemBasis& system) {
  if (system.forms.empty()) return std::nullopt;
  const auto& f0 = system.forms.front();
  for (const auto& f : system.forms) {
    if (f.hp != f0.hp) return std::nullopt;
    if (system.exact && f.exact != f0.exact) return std::nullopt;
  }
  std::vector<int> nz;
  for (std::size_t j = 0; j < f0.hp.size(); ++j) {
    if (f0.hp[j] != 0) nz.push_back(static_cast<int>(j));
  }
  if (nz.size() != 2) return std::nullopt;
  BinaryForm bf;
  bf.form = f0;
  // The pivot carries coefficient 1; the other index carries lambda.
  const int piv = system.forms.front().hp[static_cast<std::size_t>(nz[0])] == 1 ? nz[0] : nz[1];
  bf.a = piv;
  bf.b = piv == nz[0] ? nz[1] : nz[0];
  return bf;
}

std::vector<Freq> convergent_witnesses(const SystemBasis& system, int digits) {
  std::vector<Freq> out;
  const auto bf = single_binary_form(system);
  if (!bf) return out;
  const HpReal lambda = bf->form.hp[static_cast<std::size_t>(bf->b)];
  const HpReal q_cap = pow(HpReal(10), std::min(digits / 3, 18));
  const HpReal frac_floor = pow(HpReal(10), -(kHpDigits - 10));
  const HpReal long_cap("9e18");
  HpReal x = lambda;
  HpReal h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  for (int it = 0; it < 400; ++it) {
    const HpReal a = floor(x);
    const HpReal h = a * h1 + h2;
    const HpReal k = a * k1 + k2;
    if (k > q_cap || abs(h) > long_cap) break;
    // h/k ~ lambda, so xi_a + lambda xi_b ~ 0 at xi_a = h, xi_b = -k.
    Freq xi(static_cast<std::size_t>(system.m), 0);
    xi[static_cast<std::size_t>(bf->a)] = h.convert_to<long>();
    xi[static_cast<std::size_t>(bf->b)] = -k.convert_to<long>();
    if (k >= 1) out.push_back(std::move(xi));
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    const HpReal frac = x - a;
    if (frac < frac_floor) break;
    x = 1 / frac;
  }
  return out;
}

namespace {

struct Fit {
  double rho = 0.0;
  std::size_t points = 0;
};

Fit fit_records(const std::vector<ShellMinimum>& records) {
  Fit fit;
  fit.points = records.size();
  if (records.size() < 3) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(records.size());
  for (const auto& r : records) {
    const double x = std::log1p(std::sqrt(static_cast<double>(r.lambda)));
    const double y = std::log(r.min_gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = denom > 0 ? (n * sxy - sx * sy) / denom : 0.0;
  fit.rho = std::max(0.0, -slope);
  return fit;
}

double envelope_weight(const Freq& xi) { return 1.0 + std::sqrt(static_cast<double>(norm_sq(xi))); }

}  // namespace

AghVerdict agh_scan(const SystemBasis& system, const GammaLattice& gamma, double R, const AghOptions& options) {
  if (R < 10.0) throw std::invalid_argument("agh_scan needs R >= 10");
  const long lam_max = radius_to_lambda(R);
  check_ball_size(system.m, lam_max);

  AghVerdict v;
  v.numeric = !system.exact || gamma.numeric;

  // Rational systems: integer forms D * f with a common denominator D.
  bool rational = system.exact;
  mpz_class D = 1;
  if (rational) {
    for (const auto& f : system.forms) {
      for (const auto& c : f.exact) {
        if (!c.is_rational()) rational = false;
        else mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), c.rational_part().get_den_mpz_t());
      }
    }
  }
  std::vector<std::vector<long>> int_forms;
  if (rational) {
    if (!D.fits_slong_p()) rational = false;
    for (const auto& f : system.forms) {
      std::vector<long> row;
      for (const auto& c : f.exact) {
        const mpq_class s = c.rational_part() * D;
        row.push_back(mpz_class(s.get_num()).get_si());
      }
      int_forms.push_back(std::move(row));
    }
  }
  const double Dd = D.get_d();

  std::vector<double> mins(static_cast<std::size_t>(lam_max) + 1, std::numeric_limits<double>::infinity());
  for_each_in_ball(system.m, lam_max, [&](const Freq& xi) {
    const long lam = norm_sq(xi);
    if (lam == 0) return;
    double g;
    if (rational) {
      long sq = 0;
      for (const auto& row : int_forms) {
        long val = 0;
        for (std::size_t j = 0; j < row.size(); ++j) val += row[j] * xi[j];
        sq += val * val;
      }
      if (sq == 0) return;  // xi in Gamma
      g = std::sqrt(static_cast<double>(sq)) / Dd;
    } else {
      if (system.exact && gamma_member(gamma, xi)) return;
      g = gap(system, xi);
      if (!system.exact && g == 0.0) return;
    }
    ++v.points_scanned;
    auto& slot = mins[static_cast<std::size_t>(lam)];
    slot = std::min(slot, g);
  });

  double running = std::numeric_limits<double>::infinity();
  std::set<long> record_lambdas;
  for (std::size_t lam = 1; lam < mins.size(); ++lam) {
    if (!std::isfinite(mins[lam])) continue;
    ++v.shells_scanned;
    v.shell_minima.push_back({static_cast<long>(lam), mins[lam], {}});
    if (mins[lam] < running) {
      running = mins[lam];
      record_lambdas.insert(static_cast<long>(lam));
    }
  }
  // Second pass to recover the arg-min of every record shell.
  std::map<long, Freq> argmin;
  if (!record_lambdas.empty()) {
    for_each_in_ball(system.m, *record_lambdas.rbegin(), [&](const Freq& xi) {
      const long lam = norm_sq(xi);
      if (!record_lambdas.contains(lam) || argmin.contains(lam)) return;
      if (system.exact && gamma_member(gamma, xi)) return;
      if (gap(system, xi) <= mins[static_cast<std::size_t>(lam)] * (1.0 + 1e-12) && gap(system, xi) > 0.0) argmin[lam] = xi;
    });
  }
  for (long lam : record_lambdas) v.records.push_back({lam, mins[static_cast<std::size_t>(lam)], argmin[lam]});

  const Fit fit = fit_records(v.records);
  v.fit_points = fit.points;
  v.fitted_rho = fit.rho;
  v.fitted_C = std::numeric_limits<double>::infinity();
  for (const auto& s : v.shell_minima) {
    v.fitted_C = std::min(v.fitted_C, s.min_gap * std::pow(1.0 + std::sqrt(static_cast<double>(s.lambda)), fit.rho));
  }
  if (!std::isfinite(v.fitted_C)) v.fitted_C = 0.0;

  // Witness list: envelope records plus convergents plus caller-supplied points.
  std::vector<Freq> wx;
  for (const auto& r : v.records) {
    if (!r.argmin.empty()) wx.push_back(r.argmin);
  }
  for (auto& xi : convergent_witnesses(system, options.witness_digits)) wx.push_back(std::move(xi));
  for (const auto& xi : options.extra_witnesses) wx.push_back(xi);
  std::sort(wx.begin(), wx.end(), [](const Freq& a, const Freq& b) {
    return norm_sq(a) != norm_sq(b) ? norm_sq(a) < norm_sq(b) : a < b;
  });
  wx.erase(std::unique(wx.begin(), wx.end()), wx.end());
  std::erase_if(wx, [&](const Freq& xi) {
    return norm_sq(xi) == 0 || (system.exact && gamma_member(gamma, xi));
  });
  v.witnesses = witness_gap(system, wx, options.witness_digits);

  if (system.ambiguous) {
    v.mode = AghMode::Undecided;
    v.note = "rank decision within 10x of the float tolerance";
    return v;
  }

  if (rational) {
    v.mode = AghMode::ExactCertificate;
    v.C = 1.0 / Dd;
    v.C_exact = D == 1 ? "1" : "1/" + D.get_str();
    v.rho = 0.0;
    v.certificate = "rational forms with common denominator " + D.get_str() +
                    ": every nonzero form value is a nonzero multiple of 1/" + D.get_str();
    return v;
  }

  if (system.exact) {
    if (auto bf = single_binary_form(system)) {
      const QuadScalar lambda = bf->form.exact[static_cast<std::size_t>(bf->b)];
      if (!lambda.is_rational()) {
        const ContinuedFraction cf = continued_fraction(lambda);
        mpz_class A = 1;
        for (std::size_t k = 1; k < cf.terms.size(); ++k) A = std::max(A, mpz_class(abs(cf.terms[k])));
        const mpz_class denom = A + 2;
        const double C = 1.0 / denom.get_d();
        bool verified = true;
        for (const auto& s : v.shell_minima) {
          if (s.min_gap * (1.0 + std::sqrt(static_cast<double>(s.lambda))) < C * (1.0 - 1e-12)) verified = false;
        }
        if (verified) {
          v.mode = AghMode::ExactCertificate;
          v.C = C;
          v.C_exact = "1/" + denom.get_str();
          v.rho = 1.0;
          v.certificate = "single binary form with quadratic irrational coefficient " + lambda.str() +
                          "; partial quotients bounded by " + A.get_str() +
                          " give |q lambda - p| >= 1/((A+2) q)";
          return v;
        }
        v.note = "continued-fraction bound not confirmed on the scan; falling back to the empirical fit";
      }
    }
  }

  // Refutation along the witness sequence (sorted by |xi|).
  const double rho_max = options.rho_max;
  for (std::size_t i = 0; i + 1 < v.witnesses.size(); ++i) {
    const auto& w0 = v.witnesses[i];
    const auto& w1 = v.witnesses[i + 1];
    if (!(w0.gap > 0.0) || !(w1.gap > 0.0)) continue;
    const double x0 = envelope_weight(w0.xi), x1 = envelope_weight(w1.xi);
    if (x1 <= x0 || w1.gap >= w0.gap) continue;
    const double local = std::log(w0.gap / w1.gap) / std::log(x1 / x0);
    if (local > rho_max && w1.gap < std::pow(x1, -rho_max)) {
      v.mode = AghMode::Refuted;
      v.rho = local;
      v.C = v.fitted_C;
      v.note = "witness gaps decay with local exponent " + std::to_string(local) + " > rho_max = " +
               std::to_string(rho_max) + "; numeric witness, not a certificate";
      return v;
    }
  }
  if (v.fitted_rho > rho_max) {
    v.mode = AghMode::Refuted;
    v.rho = v.fitted_rho;
    v.C = v.fitted_C;
    v.note = "lower-envelope exponent exceeds rho_max";
    return v;
  }
  if (v.points_scanned == 0) {
    v.mode = AghMode::Undecided;
    v.note = "no frequencies off Gamma inside the scan radius";
    return v;
  }
  v.mode = AghMode::EmpiricalFit;
  v.rho = v.fitted_rho;
  v.C = v.fitted_C;
  v.note = v.numeric ? "numeric fit over the scanned ball, not certified" : "fit over the scanned ball, not certified";
  return v;
}

}  // namespace tubespec

#include "tubespec/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tubespec {

namespace {

Freq freq_from_json(const json& j, int dim, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of integers");
  Freq f;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ConfigError(std::string(what) + " must be an array of integers");
    f.push_back(v.get<long>());
  }
  if (dim >= 0 && static_cast<int>(f.size()) != dim) {
    throw ConfigError(std::string(what) + " has length " + std::to_string(f.size()) + ", expected " +
                      std::to_string(dim));
  }
  return f;
}

json freq_json(const Freq& f) {
  json a = json::array();
  for (long v : f) a.push_back(v);
  return a;
}

double number_of(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      return parse_rational(s).get_d();
    } catch (const std::exception&) {
      return HpReal(s).convert_to<double>();
    }
  }
  throw ConfigError(std::string(what) + " must be a number");
}

// Scalar readers for the two coefficient representations.
struct ExactReader {
  long d = 0;
  QuadScalar operator()(const json& j) const {
    if (j.is_number_integer()) return QuadScalar(mpq_class(j.get<long>()));
    if (j.is_number()) return QuadScalar(parse_rational(j.dump()));
    if (j.is_string()) return QuadScalar(parse_rational(j.get<std::string>()));
    if (j.is_object()) {
      if (d == 0) throw ConfigError("{p, q} values need a quadratic field");
      const QuadScalar p = (*this)(j.at("p"));
      const QuadScalar q = (*this)(j.at("q"));
      return QuadScalar(p.rational_part(), q.rational_part(), d);
    }
    throw ConfigError("unsupported exact value: " + j.dump());
  }
};

struct FloatReader {
  HpReal operator()(const json& j) const {
    if (j.is_number()) return HpReal(j.dump());
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      if (auto slash = s.find('/'); slash != std::string::npos) {
        return HpReal(s.substr(0, slash)) / HpReal(s.substr(slash + 1));
      }
      return HpReal(s);
    }
    throw ConfigError("unsupported float value: " + j.dump());
  }
};

template <class S, class C, class Reader>
TrigPoly<C> trig_from_json(const json& j, int n, const Reader& read) {
  if (!j.is_array()) throw ConfigError("a coefficient must be an array of terms");
  TrigPoly<C> p(n);
  const S half = S(1) / S(2);
  const S zero = S(0);
  for (const auto& term : j) {
    if (!term.is_object()) throw ConfigError("coefficient term must be an object");
    if (term.contains("const")) {
      p.add_to(Freq(static_cast<std::size_t>(n), 0), C{read(term.at("const")), zero});
    } else if (term.contains("sin") || term.contains("cos")) {
      const bool is_sin = term.contains("sin");
      const Freq eta = freq_from_json(term.at(is_sin ? "sin" : "cos"), n, "eta");
      const S s = term.contains("scale") ? read(term.at("scale")) : S(1);
      if (is_sin) {
        // s sin(eta.t) = -i s/2 e^{i eta t} + i s/2 e^{-i eta t}
        p.add_to(eta, C{zero, zero - s * half});
        p.add_to(negate(eta), C{zero, s * half});
      } else {
        p.add_to(eta, C{s * half, zero});
        p.add_to(negate(eta), C{s * half, zero});
      }
    } else {
      const Freq eta = freq_from_json(term.at("eta"), n, "eta");
      const S re = term.contains("re") ? read(term.at("re")) : zero;
      const S im = term.contains("im") ? read(term.at("im")) : zero;
      p.add_to(eta, C{re, im});
    }
  }
  return p;
}

json exact_value_json(const QuadScalar& x) {
  if (x.is_rational()) return x.rational_part().get_str();
  return json{{"p", x.rational_part().get_str()}, {"q", x.irrational_part().get_str()}};
}

template <class C, class F>
json trig_json(const TrigPoly<C>& p, F&& value) {
  json a = json::array();
  for (const auto& [eta, c] : p.coeffs()) a.push_back({{"eta", freq_json(eta)}, {"re", value(c.re)}, {"im", value(c.im)}});
  return a;
}

json shell_minima_json(const std::vector<ShellMinimum>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back({{"lambda", s.lambda}, {"min_gap", s.min_gap}, {"argmin", freq_json(s.argmin)}});
  return a;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(format_double(x)); }

}  // namespace

std::string freq_to_string(const Freq& f) {
  std::string s = "(";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
  return s + ")";
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void write_json_file(const std::filesystem::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

json to_json(const ProductFunction& f) {
  json coeffs = json::array();
  for (const auto& [k, c] : f.coeffs()) {
    coeffs.push_back({{"eta", freq_json(k.eta)}, {"xi", freq_json(k.xi)}, {"re", c.real() + 0.0}, {"im", c.imag() + 0.0}});
  }
  return {{"n", f.n()}, {"m", f.m()}, {"real", f.real()}, {"coeffs", coeffs}};
}

ProductFunction product_function_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    ProductFunction f(n, m, j.value("real", false));
    for (const auto& t : j.at("coeffs")) {
      const Freq eta = freq_from_json(t.at("eta"), n, "eta");
      const Freq xi = freq_from_json(t.at("xi"), m, "xi");
      const double re = t.contains("re") ? number_of(t.at("re"), "re") : 0.0;
      const double im = t.contains("im") ? number_of(t.at("im"), "im") : 0.0;
      f.add_to(eta, xi, cd(re, im));
    }
    return f;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid function: ") + e.what());
  }
}

json to_json(const OperatorSpec& spec) {
  json field;
  switch (spec.field.kind) {
    case ScalarField::Kind::Rational: field = {{"kind", "rational"}}; break;
    case ScalarField::Kind::Quadratic: field = {{"kind", "quadratic"}, {"d", spec.field.d}}; break;
    case ScalarField::Kind::Float: field = {{"kind", "float"}, {"tol", spec.field.tol}}; break;
  }
  json a = json::array();
  for (int l = 0; l < spec.N; ++l) {
    json row = json::array();
    for (int j = 0; j < spec.m; ++j) {
      const auto ul = static_cast<std::size_t>(l), uj = static_cast<std::size_t>(j);
      if (spec.field.exact()) {
        row.push_back(trig_json(spec.a_exact[ul][uj], exact_value_json));
      } else {
        row.push_back(trig_json(spec.a_hp[ul][uj], [](const HpReal& x) { return hp_str(x, 60); }));
      }
    }
    a.push_back(row);
  }
  json W = json::array();
  for (const auto& w : spec.W) W.push_back(w);
  return {{"n", spec.n}, {"m", spec.m}, {"N", spec.N}, {"a", a}, {"W", W}, {"field", field}};
}

OperatorSpec operator_spec_from_json(const json& j) {
  try {
    OperatorSpec spec;
    spec.n = j.at("n").get<int>();
    spec.m = j.at("m").get<int>();
    spec.N = j.value("N", 1);
    const json& field = j.contains("field") ? j.at("field") : json{{"kind", "rational"}};
    const std::string kind = field.at("kind").get<std::string>();
    if (kind == "rational") {
      spec.field.kind = ScalarField::Kind::Rational;
    } else if (kind == "quadratic") {
      spec.field.kind = ScalarField::Kind::Quadratic;
      spec.field.d = field.at("d").get<long>();
      if (!is_square_free(spec.field.d) || spec.field.d < 2) throw ConfigError("radicand d must be square-free and >= 2");
    } else if (kind == "float") {
      spec.field.kind = ScalarField::Kind::Float;
      spec.field.tol = field.contains("tol") ? number_of(field.at("tol"), "tol") : 1e-12;
    } else {
      throw ConfigError("unknown field kind '" + kind + "'");
    }
    const json& a = j.at("a");
    if (!a.is_array() || a.size() != static_cast<std::size_t>(spec.N)) throw ConfigError("a must have N rows");
    for (const auto& row : a) {
      if (!row.is_array() || row.size() != static_cast<std::size_t>(spec.m)) throw ConfigError("each row of a must have m entries");
      if (spec.field.exact()) {
        const ExactReader read{spec.field.kind == ScalarField::Kind::Quadratic ? spec.field.d : 0};
        auto& out = spec.a_exact.emplace_back();
        for (const auto& c : row) out.push_back(trig_from_json<QuadScalar, QuadComplex>(c, spec.n, read));
      } else {
        auto& out = spec.a_hp.emplace_back();
        for (const auto& c : row) out.push_back(trig_from_json<HpReal, HpComplex>(c, spec.n, FloatReader{}));
      }
    }
    if (j.contains("W")) {
      for (const auto& w : j.at("W")) {
        auto& out = spec.W.emplace_back();
        for (const auto& c : w) out.push_back(number_of(c, "W entry"));
      }
    }
    return validate_spec(std::move(spec));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid operator: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid operator: ") + e.what());
  }
}

json to_json(const GammaLattice& g) {
  json basis = json::array();
  for (const auto& b : g.basis) basis.push_back(freq_json(b));
  return {{"m", g.m}, {"rank", g.rank()}, {"basis", basis}, {"numeric", g.numeric}};
}

json to_json(const SystemBasis& s) {
  json forms = json::array();
  for (const auto& f : s.forms) {
    json coeffs = json::array();
    if (s.exact) {
      for (const auto& c : f.exact) coeffs.push_back(c.str());
    } else {
      for (const auto& c : f.hp) coeffs.push_back(hp_str(c, 30));
    }
    forms.push_back({{"ell", f.ell + 1}, {"p", f.p + 1}, {"coefficients", coeffs}});
  }
  json subs = json::array();
  for (const auto& b : s.per_ell) subs.push_back({{"m_ell", b.m_ell}});
  return {{"m", s.m}, {"exact", s.exact}, {"ambiguous", s.ambiguous}, {"subsystems", subs}, {"forms", forms}};
}

json to_json(const AghVerdict& v) {
  json w = json::array();
  for (const auto& x : v.witnesses) w.push_back({{"xi", freq_json(x.xi)}, {"gap", x.gap}, {"gap_hp", x.gap_hp}});
  json out = {{"mode", to_string(v.mode)},
              {"C", v.C_exact.empty() ? json(v.C) : json(v.C_exact)},
              {"C_value", v.C},
              {"rho", v.rho},
              {"numeric", v.numeric},
              {"certified", v.mode == AghMode::ExactCertificate && !v.numeric},
              {"certificate", v.certificate},
              {"note", v.note},
              {"fit", {{"rho", finite_or_null(v.fitted_rho)}, {"C", finite_or_null(v.fitted_C)}, {"points", v.fit_points}}},
              {"shells_scanned", v.shells_scanned},
              {"points_scanned", v.points_scanned},
              {"witnesses", w},
              {"records", shell_minima_json(v.records)}};
  return out;
}

json to_json(const DecayVerdict& v) {
  return {{"classification", to_string(v.classification)},
          {"slope", finite_or_null(v.slope)},
          {"intercept", finite_or_null(v.intercept)},
          {"residual", v.residual},
          {"points_used", v.points_used},
          {"finite_support", v.finite_support},
          {"diagnostic", v.diagnostic}};
}

json to_json(const AprioriProbe& p) {
  json pts = json::array();
  for (const auto& q : p.points) pts.push_back({{"lambda", q.lambda}, {"sigma_min", q.sigma_min}, {"argmin", freq_json(q.argmin)}});
  return {{"C", p.C},
          {"rho", p.rho},
          {"rho_bound", p.rho_bound ? json(*p.rho_bound) : json(nullptr)},
          {"within_bound", p.within_bound},
          {"points", pts}};
}

json to_json(const ClusterPartition& c) {
  json in = json::array(), out = json::array();
  for (const auto& x : c.in_gamma) in.push_back(freq_json(x));
  for (const auto& x : c.out_gamma) out.push_back(freq_json(x));
  return {{"lambda", c.lambda}, {"c_lambda", c.c_lambda()}, {"dim_E", c.shell_dimension()}, {"A", in}, {"A_perp", out}};
}

json to_json(const SolveResult& r) {
  std::size_t ill = 0;
  for (const auto& m : r.per_mode) ill += m.ill_conditioned ? 1 : 0;
  return {{"total_residual", r.total_residual},
          {"modes", r.per_mode.size()},
          {"ill_conditioned_modes", ill},
          {"kernel_component_removed", r.kernel_component_removed},
          {"u_norm", r.u.l2_norm()},
          {"classification", to_json(r.classification)}};
}

json to_json(const std::vector<Violation>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back({{"xi", freq_json(x.xi)}, {"re", x.value.real()}, {"im", x.value.imag()}});
  return a;
}

json to_json(const Su2AghReport& r) {
  return {{"min_gamma", r.min_nonzero_gamma ? json(r.min_nonzero_gamma->str()) : json(nullptr)},
          {"C", r.C},
          {"rho", r.rho},
          {"holds", r.holds},
          {"sampled_min_ratio", r.sampled_min_ratio}};
}

json to_json(const std::vector<KernelGrowthPoint>& g) {
  json a = json::array();
  for (const auto& p : g) {
    a.push_back({{"l", p.l.str()}, {"lambda", p.lambda.get_str()}, {"c_lambda", p.c_lambda}, {"cumulative", p.cumulative}});
  }
  return a;
}

json to_json(const S1Report& r) {
  auto coeffs = [](const S1Solve& s, std::size_t limit) {
    json a = json::array();
    for (const auto& [k, c] : s.u) {
      if (a.size() >= limit) break;
      a.push_back({{"k", k}, {"re", c.real() + 0.0}, {"im", c.imag() + 0.0}});
    }
    return a;
  };
  return {{"K", r.K},
          {"cinfty_cc", {{"constraint", r.cinfty_constraint}}},
          {"distr_cc", {{"constraint", r.distr_constraint}}},
          {"smooth_case",
           {{"f", "1 - e^{ix}"},
            {"finite", r.smooth_case.finite},
            {"residual", r.smooth_case.interior_residual},
            {"u", coeffs(r.smooth_case, 8)},
            {"decay", to_json(r.smooth_class)}}},
          {"distribution_case",
           {{"f", "1"},
            {"finite", r.distribution_case.finite},
            {"residual", r.distribution_case.interior_residual},
            {"truncation_mismatch", r.distribution_case.cut_residual},
            {"u_head", coeffs(r.distribution_case, 8)},
            {"decay", to_json(r.distribution_class)}}}};
}

json to_json(const PropagationReport& r) {
  return {{"verdict", to_string(r.outcome)},
          {"note", r.note},
          {"Pu", to_json(r.pu)},
          {"local", to_json(r.local)},
          {"global", to_json(r.global)},
          {"slope_gap", finite_or_null(r.slope_gap)}};
}

LocalWindow local_window_from_json(const json& j) {
  LocalWindow w;
  if (!j.is_array()) throw ConfigError("U must be an array of [a, b] intervals");
  for (const auto& iv : j) {
    if (!iv.is_array() || iv.size() != 2) throw ConfigError("U must be an array of [a, b] intervals");
    w.intervals.emplace_back(number_of(iv[0], "interval end"), number_of(iv[1], "interval end"));
  }
  return w;
}

std::string gap_minima_csv(const AghVerdict& v) {
  std::ostringstream os;
  os << "lambda,min_gap\n";
  for (const auto& s : v.shell_minima) os << s.lambda << ',' << format_double(s.min_gap) << '\n';
  return os.str();
}

std::string decay_csv(const DecayProfile& p) {
  std::ostringstream os;
  os << "lambda,norm,fitted\n";
  for (const auto& q : p.points) {
    const double fitted = std::exp(p.fitted_intercept + p.fitted_slope * std::log1p(static_cast<double>(q.lambda)));
    os << q.lambda << ',' << format_double(q.norm) << ',' << format_double(std::isfinite(fitted) ? fitted : 0.0) << '\n';
  }
  return os.str();
}

std::string residuals_csv(const SolveResult& r) {
  std::ostringstream os;
  os << "xi,branch,residual,interior_residual,truncation_leak,sigma_min\n";
  for (const auto& m : r.per_mode) {
    os << '"' << freq_to_string(m.xi) << "\"," << to_string(m.branch) << ',' << format_double(m.residual) << ','
       << format_double(m.interior_residual) << ',' << format_double(m.truncation_leak) << ','
       << format_double(m.sigma_min) << '\n';
  }
  return os.str();
}

}  // namespace tubespec

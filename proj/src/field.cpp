#include "tubespec/field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace tubespec {

std::string hp_str(const HpReal& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << std::scientific << x;
  return os.str();
}

bool is_square_free(long d) {
  if (d <= 0) return false;
  for (long k = 2; k * k <= d; ++k) {
    if (d % (k * k) == 0) return false;
  }
  return true;
}

mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  const auto dot = s.find('.');
  const auto exp_pos = s.find_first_of("eE");
  if (dot == std::string::npos && exp_pos == std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }
  // Decimal: mantissa digits with an optional exponent, read exactly.
  std::string mant = exp_pos == std::string::npos ? s : s.substr(0, exp_pos);
  long exponent = 0;
  if (exp_pos != std::string::npos) exponent = std::stol(s.substr(exp_pos + 1));
  bool negative = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    negative = mant[0] == '-';
    mant.erase(0, 1);
  }
  const auto d2 = mant.find('.');
  std::string digits = mant;
  if (d2 != std::string::npos) {
    exponent -= static_cast<long>(mant.size() - d2 - 1);
    digits.erase(d2, 1);
  }
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw std::invalid_argument("bad decimal literal '" + s + "'");
  }
  mpz_class num(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  mpq_class q = exponent >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

// --- QuadScalar -------------------------------------------------------------

QuadScalar::QuadScalar(const mpq_class& p, const mpq_class& q, long d) : p_(p), q_(q), d_(d) {
  p_.canonicalize();
  q_.canonicalize();
  if (d_ < 0) throw DomainError("radicand must be non-negative");
  if (d_ == 0) {
    if (sgn(q_) != 0) throw DomainError("irrational part requires a radicand");
  } else if (d_ == 1) {
    p_ += q_;
    q_ = 0;
    d_ = 0;
  } else if (!is_square_free(d_)) {
    throw DomainError("radicand " + std::to_string(d_) + " is not square-free");
  }
  if (sgn(q_) == 0) d_ = 0;
}

long QuadScalar::common_radicand(const QuadScalar& a, const QuadScalar& b) {
  if (a.d_ == 0) return b.d_;
  if (b.d_ == 0) return a.d_;
  if (a.d_ != b.d_) {
    throw DomainError("mixing Q(sqrt " + std::to_string(a.d_) + ") and Q(sqrt " + std::to_string(b.d_) + ")");
  }
  return a.d_;
}

int QuadScalar::sign() const {
  const int sp = sgn(p_);
  const int sq = sgn(q_);
  if (sq == 0) return sp;
  if (sp == 0) return sq;
  if (sp == sq) return sp;
  // Opposite signs: compare p^2 with q^2 d.
  const mpq_class lhs = p_ * p_;
  const mpq_class rhs = q_ * q_ * d_;
  const int c = cmp(lhs, rhs);
  return c > 0 ? sp : sq;  // c == 0 impossible for square-free d
}

QuadScalar QuadScalar::conjugate() const {
  QuadScalar r = *this;
  r.q_ = -q_;
  return r;
}

mpq_class QuadScalar::norm() const { return p_ * p_ - q_ * q_ * d_; }

QuadScalar QuadScalar::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero");
  const mpq_class n = norm();
  QuadScalar r;
  r.p_ = p_ / n;
  r.q_ = -q_ / n;
  r.d_ = d_;
  r.p_.canonicalize();
  r.q_.canonicalize();
  return r;
}

double QuadScalar::to_double() const {
  return p_.get_d() + q_.get_d() * std::sqrt(static_cast<double>(d_));
}

HpReal QuadScalar::to_hp() const {
  auto conv = [](const mpq_class& x) {
    return HpReal(x.get_num().get_str()) / HpReal(x.get_den().get_str());
  };
  HpReal r = conv(p_);
  if (sgn(q_) != 0) r += conv(q_) * boost::multiprecision::sqrt(HpReal(d_));
  return r;
}

std::string QuadScalar::str() const {
  if (sgn(q_) == 0) return p_.get_str();
  std::string s;
  if (sgn(p_) != 0) s = p_.get_str() + (sgn(q_) > 0 ? "+" : "-");
  else if (sgn(q_) < 0) s = "-";
  const mpq_class aq = ::abs(q_);
  if (aq != 1) s += aq.get_str() + "*";
  s += "sqrt(" + std::to_string(d_) + ")";
  return s;
}

QuadScalar QuadScalar::operator-() const {
  QuadScalar r = *this;
  r.p_ = -p_;
  r.q_ = -q_;
  return r;
}

QuadScalar& QuadScalar::operator+=(const QuadScalar& o) {
  const long d = common_radicand(*this, o);
  p_ += o.p_;
  q_ += o.q_;
  d_ = sgn(q_) == 0 ? 0 : d;
  return *this;
}

QuadScalar& QuadScalar::operator-=(const QuadScalar& o) { return *this += -o; }

QuadScalar& QuadScalar::operator*=(const QuadScalar& o) {
  const long d = common_radicand(*this, o);
  const mpq_class p = p_ * o.p_ + q_ * o.q_ * d;
  const mpq_class q = p_ * o.q_ + q_ * o.p_;
  p_ = p;
  q_ = q;
  d_ = sgn(q_) == 0 ? 0 : d;
  return *this;
}

QuadScalar& QuadScalar::operator/=(const QuadScalar& o) { return *this *= o.inverse(); }

QuadScalar abs(const QuadScalar& x) { return x.sign() < 0 ? -x : x; }

mpz_class floor(const QuadScalar& x) {
  mpz_class f(std::floor(x.to_double()));
  // Correct a possible off-by-one from double rounding.
  while (QuadScalar(mpq_class(f)) > x) --f;
  while (QuadScalar(mpq_class(f + 1)) <= x) ++f;
  return f;
}

// --- Lattices ---------------------------------------------------------------

IntMatrix hermite_normal_form(IntMatrix a, std::size_t cols) {
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    for (;;) {
      std::size_t best = a.size();
      for (std::size_t i = row; i < a.size(); ++i) {
        if (sgn(a[i][col]) != 0 && (best == a.size() || mpz_cmpabs(a[i][col].get_mpz_t(), a[best][col].get_mpz_t()) < 0)) best = i;
      }
      if (best == a.size()) break;
      std::swap(a[row], a[best]);
      bool clean = true;
      for (std::size_t i = row + 1; i < a.size(); ++i) {
        if (sgn(a[i][col]) == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), a[i][col].get_mpz_t(), a[row][col].get_mpz_t());
        for (std::size_t c = col; c < cols; ++c) a[i][c] -= q * a[row][c];
        if (sgn(a[i][col]) != 0) clean = false;
      }
      if (clean) break;
    }
    if (row >= a.size() || sgn(a[row][col]) == 0) continue;
    if (sgn(a[row][col]) < 0) {
      for (auto& v : a[row]) v = -v;
    }
    for (std::size_t i = 0; i < row; ++i) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), a[i][col].get_mpz_t(), a[row][col].get_mpz_t());
      if (sgn(q) == 0) continue;
      for (std::size_t c = col; c < cols; ++c) a[i][c] -= q * a[row][c];
    }
    ++row;
  }
  a.resize(row);
  return a;
}

IntMatrix integer_kernel_basis(IntMatrix a, std::size_t cols) {
  // Column operations on A are mirrored on U = I; once A*U is in column
  // echelon form, the trailing columns of U span the kernel over Z.
  IntMatrix u(cols, std::vector<mpz_class>(cols, 0));
  for (std::size_t i = 0; i < cols; ++i) u[i][i] = 1;
  auto col_swap = [&](std::size_t j, std::size_t k) {
    for (auto& r : a) std::swap(r[j], r[k]);
    for (auto& r : u) std::swap(r[j], r[k]);
  };
  auto col_axpy = [&](std::size_t dst, const mpz_class& q, std::size_t src) {
    for (auto& r : a) r[dst] -= q * r[src];
    for (auto& r : u) r[dst] -= q * r[src];
  };

  std::size_t k = 0;
  for (std::size_t i = 0; i < a.size() && k < cols; ++i) {
    for (;;) {
      std::size_t best = cols;
      for (std::size_t j = k; j < cols; ++j) {
        if (sgn(a[i][j]) != 0 && (best == cols || mpz_cmpabs(a[i][j].get_mpz_t(), a[i][best].get_mpz_t()) < 0)) best = j;
      }
      if (best == cols) break;
      if (best != k) col_swap(best, k);
      bool clean = true;
      for (std::size_t j = k + 1; j < cols; ++j) {
        if (sgn(a[i][j]) == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), a[i][j].get_mpz_t(), a[i][k].get_mpz_t());
        col_axpy(j, q, k);
        if (sgn(a[i][j]) != 0) clean = false;
      }
      if (clean) break;
    }
    if (sgn(a[i][k]) != 0) ++k;
  }

  IntMatrix kernel;
  for (std::size_t j = k; j < cols; ++j) {
    std::vector<mpz_class> v(cols);
    for (std::size_t r = 0; r < cols; ++r) v[r] = u[r][j];
    kernel.push_back(std::move(v));
  }
  return kernel;
}

namespace {

std::vector<mpz_class> clear_denominators(const std::vector<mpq_class>& row) {
  mpz_class l = 1;
  for (const auto& q : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  std::vector<mpz_class> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) out[j] = row[j].get_num() * (l / row[j].get_den());
  return out;
}

bool all_zero(const std::vector<mpz_class>& row) {
  return std::all_of(row.begin(), row.end(), [](const mpz_class& v) { return sgn(v) == 0; });
}

}  // namespace

GammaLattice integer_kernel(const std::vector<std::vector<QuadScalar>>& forms, int m) {
  if (m < 1) throw std::invalid_argument("lattice dimension must be >= 1");
  const auto cols = static_cast<std::size_t>(m);
  IntMatrix rows;
  for (const auto& form : forms) {
    if (form.size() != cols) throw std::invalid_argument("linear form has wrong length");
    std::vector<mpq_class> ratpart(cols), irrpart(cols);
    for (std::size_t j = 0; j < cols; ++j) {
      ratpart[j] = form[j].rational_part();
      irrpart[j] = form[j].irrational_part();
    }
    for (auto* part : {&ratpart, &irrpart}) {
      auto r = clear_denominators(*part);
      if (!all_zero(r)) rows.push_back(std::move(r));
    }
  }
  IntMatrix kernel = integer_kernel_basis(rows, cols);
  kernel = hermite_normal_form(std::move(kernel), cols);

  GammaLattice lat;
  lat.m = m;
  for (const auto& row : kernel) {
    Freq v(cols);
    for (std::size_t j = 0; j < cols; ++j) {
      if (!row[j].fits_slong_p()) throw ResourceError("Gamma basis entry exceeds machine integers");
      v[j] = row[j].get_si();
    }
    lat.basis.push_back(std::move(v));
  }
  return lat;
}

bool gamma_member(const GammaLattice& lattice, const Freq& xi) {
  if (static_cast<int>(xi.size()) != lattice.m) throw std::invalid_argument("dimension mismatch in gamma_member");
  Freq residual = xi;
  std::size_t col = 0;
  for (const auto& b : lattice.basis) {
    while (col < b.size() && b[col] == 0) {
      if (residual[col] != 0) return false;
      ++col;
    }
    if (residual[col] % b[col] != 0) return false;
    const long k = residual[col] / b[col];
    for (std::size_t j = 0; j < b.size(); ++j) residual[j] -= k * b[j];
    ++col;
  }
  return std::all_of(residual.begin(), residual.end(), [](long v) { return v == 0; });
}

// --- Continued fractions ----------------------------------------------------

ContinuedFraction continued_fraction(const QuadScalar& x, std::size_t max_terms) {
  ContinuedFraction cf;
  std::map<std::pair<std::string, std::string>, std::size_t> seen;
  QuadScalar cur = x;
  for (std::size_t k = 0; k < max_terms; ++k) {
    // Complete quotients are determined by (p, q); a repeat closes the period.
    auto key = std::make_pair(cur.rational_part().get_str(), cur.irrational_part().get_str());
    if (auto it = seen.find(key); it != seen.end()) {
      cf.period_start = it->second;
      cf.periodic = true;
      return cf;
    }
    seen.emplace(std::move(key), k);
    const mpz_class a = floor(cur);
    cf.terms.push_back(a);
    const QuadScalar frac = cur - QuadScalar(mpq_class(a));
    if (frac.is_zero()) return cf;
    cur = frac.inverse();
  }
  throw ResourceError("continued fraction did not close its period within the term limit");
}

}  // namespace tubespec

#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <string>

namespace tubespec {

/// Working type for witness-mode evaluation (100 significant digits).
using HpReal = boost::multiprecision::cpp_dec_float_100;

inline constexpr int kHpDigits = 100;

/// Scientific rendering with the requested number of significant digits.
std::string hp_str(const HpReal& x, int digits);

}  // namespace tubespec

namespace tubespec {

struct HpComplex {
  HpReal re = 0;
  HpReal im = 0;

  bool is_zero() const { return re == 0 && im == 0; }
  HpComplex conj() const { return {re, -im}; }
  friend HpComplex operator+(const HpComplex& a, const HpComplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend HpComplex operator-(const HpComplex& a, const HpComplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend HpComplex operator*(const HpComplex& a, const HpComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
};

}  // namespace tubespec

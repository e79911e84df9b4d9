#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace novelty {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact conversion: every finite double is a dyadic rational m * 2^e.
inline Rational to_rational(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("cannot convert non-finite value to rational");
  }
  int exp = 0;
  double mantissa = std::frexp(x, &exp);
  auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exp -= 53;
  Rational r(scaled);
  if (exp > 0) {
    r *= Rational(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= Rational(BigInt(1) << -exp);
  }
  return r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

template <class S>
S scalar_from_double(double x);

template <>
inline double scalar_from_double<double>(double x) { return x; }

template <>
inline Rational scalar_from_double<Rational>(double x) { return to_rational(x); }

}  // namespace novelty

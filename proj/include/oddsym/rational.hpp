#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "oddsym/error.hpp"

namespace oddsym {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

/// Exact square root of a non-negative integer, if it is a perfect square.
inline std::optional<BigInt> integer_sqrt_exact(const BigInt& n) {
    if (n < 0) return std::nullopt;
    BigInt r = boost::multiprecision::sqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

/// Exact square root of a non-negative rational, if both numerator and
/// denominator are perfect squares.
inline std::optional<Rational> rational_sqrt_exact(const Rational& q) {
    if (q < 0) return std::nullopt;
    auto num = integer_sqrt_exact(boost::multiprecision::numerator(q));
    auto den = integer_sqrt_exact(boost::multiprecision::denominator(q));
    if (!num || !den) return std::nullopt;
    return Rational(*num, *den);
}

/// Nearest-double square root re-embedded as an exact rational.  Backs the
/// float-scalar escape hatch; the exact path never calls this.
inline Rational rational_sqrt_float(const Rational& q) {
    if (q < 0) fail(ErrorKind::NegativeBody, "sqrt of negative value");
    double approx = std::sqrt(static_cast<double>(q));
    return Rational(approx);
}

} // namespace oddsym

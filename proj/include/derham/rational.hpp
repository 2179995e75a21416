#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>

namespace derham {

/// Exact scalar used by every algebraic identity in the library.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Exact conversion; every finite double is a dyadic rational.
inline Rational from_double(double x) { return Rational(x); }

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    return Rational(Integer(num), Integer(den));
}

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

Integer factorial(int n);
Integer binomial(int n, int k);

}  // namespace derham

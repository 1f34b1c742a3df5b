#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace khv {

// All arithmetic in this project is exact. Int is an arbitrary-precision
// integer; Rat a rational kept in lowest terms with positive denominator
// (cpp_rational maintains that canonical form).
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

}  // namespace khv

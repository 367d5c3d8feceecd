#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>

#include "pfaff/errors.hpp"

namespace pfaff {

/// Exact rational scalar. All core arithmetic is over Q; floating point
/// appears only in the numeric verification layer.
using Rat = boost::multiprecision::mpq_rational;

inline Rat rat_abs(const Rat& a) { return a < 0 ? Rat(-a) : a; }

/// Canonical "p" / "p/q" rendering (q > 0, gcd(p,q)=1 — GMP keeps mpq
/// canonical).
inline std::string rat_str(const Rat& a) { return a.str(); }

Rat rat_parse(const std::string& text);

inline double rat_double(const Rat& a) { return a.convert_to<double>(); }

}  // namespace pfaff

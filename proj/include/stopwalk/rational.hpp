#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace stopwalk {

using Natural = mpz_class;   // arbitrary-precision path counts
using Rational = mpq_class;  // exact probabilities and estimates
using Int = long long;       // lattice coordinates and orders

// Accepts "3/10", "0.4", "1e-3" style decimals and plain integers; all are
// converted exactly (0.4 becomes 2/5).
Rational parse_rational(const std::string& text);

// Canonical rendering: "num/den", or just "num" when the denominator is 1.
std::string fraction_string(const Rational& q);

// Fixed-point decimal rendering with the given number of fractional digits.
std::string decimal_string(const Rational& q, int digits);

inline double to_double(const Rational& q) { return q.get_d(); }

std::string natural_string(const Natural& n);

}  // namespace stopwalk

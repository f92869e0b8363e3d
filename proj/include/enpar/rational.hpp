#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace enpar {

// All probabilities and values are exact rationals. Floats appear only in
// simulation summaries.
using Rat = mpq_class;
using Int = mpz_class;

// Parses "p/q", "p", or a plain decimal like "0.25". Throws Err::ParseError.
Rat rat_from_string(const std::string& s);

// Lowest terms; "p" when the denominator is 1, otherwise "p/q".
std::string rat_to_string(const Rat& r);

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat rat_pow(const Rat& base, unsigned long e);

double rat_to_double(const Rat& r);

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

}  // namespace enpar

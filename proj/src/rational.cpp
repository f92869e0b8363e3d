#include "enpar/rational.hpp"

#include <cctype>

#include "enpar/error.hpp"

namespace enpar {

Rat rat_from_string(const std::string& s) {
  if (s.empty()) fail(Err::ParseError, "empty rational literal");
  std::string t = s;
  // Reject whitespace and validate the character set up front; mpq accepts
  // some forms we do not want (e.g. hex).
  for (char c : t) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '.' ||
          c == '-' || c == '+')) {
      fail(Err::ParseError, "bad character in rational literal '" + s + "'");
    }
  }
  auto dot = t.find('.');
  if (dot != std::string::npos) {
    if (t.find('/') != std::string::npos)
      fail(Err::ParseError, "mixed decimal and fraction in '" + s + "'");
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    size_t frac_len = t.size() - dot - 1;
    if (digits.empty() || frac_len == 0)
      fail(Err::ParseError, "bad decimal literal '" + s + "'");
    Int num;
    if (num.set_str(digits, 10) != 0)
      fail(Err::ParseError, "bad decimal literal '" + s + "'");
    Int den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    Rat r(num, den);
    r.canonicalize();
    return r;
  }
  Rat r;
  if (r.set_str(t, 10) != 0) fail(Err::ParseError, "bad rational literal '" + s + "'");
  if (sgn(r.get_den()) == 0) fail(Err::ParseError, "zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string rat_to_string(const Rat& r) {
  Rat c = r;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rat rat_pow(const Rat& base, unsigned long e) {
  Rat result = 1;
  Rat b = base;
  while (e > 0) {
    if (e & 1UL) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

double rat_to_double(const Rat& r) { return r.get_d(); }

}  // namespace enpar

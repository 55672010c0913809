#pragma once

#include <gmpxx.h>

#include <string>

#include "taut0/errors.hpp"

namespace taut0 {

// Exact arithmetic everywhere.  All divisor-class coefficients, matrix
// entries and pairing values are GMP rationals; nothing in this project
// touches floating point.
using Rat = mpq_class;

inline std::string rat_str(const Rat& q) {
    return q.get_str();  // canonical "p" or "p/q", q > 0, gcd(p,q) = 1
}

inline Rat rat_parse(const std::string& s) {
    if (s.empty()) throw input_error("empty rational literal");
    size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    bool seen_digit = false, seen_slash = false;
    for (; i < s.size(); ++i) {
        if (s[i] >= '0' && s[i] <= '9') {
            seen_digit = true;
        } else if (s[i] == '/' && seen_digit && !seen_slash) {
            seen_slash = true;
            seen_digit = false;
        } else {
            throw input_error("malformed rational literal '" + s + "'");
        }
    }
    if (!seen_digit) throw input_error("malformed rational literal '" + s + "'");
    Rat q;
    const std::string body = (s[0] == '+') ? s.substr(1) : s;  // gmp rejects '+'
    if (q.set_str(body, 10) != 0) throw input_error("malformed rational literal '" + s + "'");
    if (q.get_den() == 0) throw input_error("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

}  // namespace taut0

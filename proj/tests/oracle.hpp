#pragma once

// Independent high-precision reference values for the Sturmian tests.

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cstdint>

namespace oracle {

using Big = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<200>>;

// (p + q sqrt d) / r
inline Big quad(std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t d) {
    return (Big(p) + Big(q) * boost::multiprecision::sqrt(Big(d))) / Big(r);
}

inline Big frac(const Big& x) { return x - boost::multiprecision::floor(x); }

inline Big frac_mul(std::int64_t n, const Big& alpha) { return frac(Big(n) * alpha); }

inline Big ratio(std::int64_t num, std::int64_t den) { return Big(num) / Big(den); }

// {x} in the closed arc [lo, lo + len] of R/Z.
inline bool in_arc(const Big& fx, const Big& lo, const Big& len) {
    if (len >= 1) return true;
    Big t = fx - lo;
    if (t < 0) t += 1;
    return t <= len;
}

}  // namespace oracle

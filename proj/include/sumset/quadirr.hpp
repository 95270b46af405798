#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "sumset/rational.hpp"

namespace sumset {

// Sign of a + b*sqrt(d) for d > 1 not a perfect square. Exact.
int sign_quadratic(i128 a, i128 b, std::int64_t d);

// floor((a + b*sqrt(d)) / r) for r > 0. Exact.
i128 floor_quadratic(i128 a, i128 b, std::int64_t d, i128 r);

// Exact element (p + q*sqrt(d)) / r of the real quadratic field Q(sqrt d).
// Canonical form: r > 0, gcd(p, q, r) = 1, and q = 0 normalises d to 1
// so rationals compare equal regardless of the field they came from.
class QuadIrr {
public:
    QuadIrr() = default;
    QuadIrr(std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t d);
    explicit QuadIrr(const Rational& x) : QuadIrr(x.num(), 0, x.den(), 1) {}

    static QuadIrr golden_conjugate() { return QuadIrr(-1, 1, 2, 5); }  // (sqrt5 - 1)/2

    std::int64_t p() const { return p_; }
    std::int64_t q() const { return q_; }
    std::int64_t r() const { return r_; }
    std::int64_t d() const { return d_; }
    bool is_irrational() const { return q_ != 0; }

    long double approx() const;
    std::string str() const;

    std::int64_t floor() const;
    QuadIrr frac() const;

    QuadIrr operator-() const { return QuadIrr(checked_sub(0, p_), checked_sub(0, q_), r_, d_); }
    friend QuadIrr operator+(const QuadIrr& a, const QuadIrr& b);
    friend QuadIrr operator-(const QuadIrr& a, const QuadIrr& b) { return a + (-b); }
    friend QuadIrr operator*(std::int64_t n, const QuadIrr& a);

    friend bool operator==(const QuadIrr& a, const QuadIrr& b) = default;
    friend std::strong_ordering operator<=>(const QuadIrr& a, const QuadIrr& b);

private:
    std::int64_t p_ = 0;
    std::int64_t q_ = 0;
    std::int64_t r_ = 1;
    std::int64_t d_ = 1;
};

bool is_squarefree(std::int64_t d);

}  // namespace sumset

#include "sumset/quadirr.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sumset/errors.hpp"

namespace sumset {

namespace {

using u128 = unsigned __int128;

constexpr i128 kSquareLimit = static_cast<i128>(1) << 62;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

u128 isqrt128(u128 n) {
    if (n == 0) return 0;
    u128 x = static_cast<u128>(std::sqrt(static_cast<long double>(n)));
    while (x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return x;
}

std::int64_t common_field(const QuadIrr& a, const QuadIrr& b) {
    if (!a.is_irrational()) return b.d();
    if (!b.is_irrational()) return a.d();
    if (a.d() != b.d()) throw TypeError("quadratic irrationals from different fields");
    return a.d();
}

}  // namespace

int sign_quadratic(i128 a, i128 b, std::int64_t d) {
    if (b == 0) return (a > 0) - (a < 0);
    if (a >= 0 && b >= 0) return 1;
    if (a <= 0 && b <= 0) return -1;
    if (abs128(a) >= kSquareLimit || abs128(b) >= kSquareLimit / d)
        throw std::overflow_error("quadratic sign test out of range");
    i128 lhs = a * a;
    i128 rhs = b * b * d;  // never equal: d is not a square
    // a and b have opposite signs; the one with larger magnitude wins.
    if (lhs > rhs) return a > 0 ? 1 : -1;
    return b > 0 ? 1 : -1;
}

i128 floor_quadratic(i128 a, i128 b, std::int64_t d, i128 r) {
    i128 s = 0;
    if (b != 0) {
        if (abs128(b) >= kSquareLimit / d) throw std::overflow_error("quadratic floor out of range");
        u128 root = isqrt128(static_cast<u128>(b * b) * static_cast<u128>(d));
        s = b > 0 ? static_cast<i128>(root) : -static_cast<i128>(root) - 1;
    }
    // floor((a + s + f) / r) with 0 <= f < 1 equals floor((a + s) / r).
    i128 num = a + s;
    i128 q = num / r;
    if (num % r != 0 && num < 0) --q;
    return q;
}

bool is_squarefree(std::int64_t d) {
    if (d < 1) return false;
    for (std::int64_t f = 2; f * f <= d; ++f)
        if (d % (f * f) == 0) return false;
    return true;
}

QuadIrr::QuadIrr(std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t d) {
    if (r == 0) throw std::domain_error("QuadIrr with zero denominator");
    if (q != 0 && (d <= 1 || !is_squarefree(d)))
        throw PreconditionError("QuadIrr radicand must be a squarefree integer > 1");
    if (r < 0) {
        p = checked_sub(0, p);
        q = checked_sub(0, q);
        r = checked_sub(0, r);
    }
    std::int64_t g = std::gcd(std::gcd(p, q), r);
    p_ = p / g;
    q_ = q / g;
    r_ = r / g;
    d_ = q_ == 0 ? 1 : d;
}

long double QuadIrr::approx() const {
    long double root = q_ == 0 ? 0.0L : std::sqrt(static_cast<long double>(d_));
    return (static_cast<long double>(p_) + static_cast<long double>(q_) * root) / static_cast<long double>(r_);
}

std::string QuadIrr::str() const {
    return "(" + std::to_string(p_) + " + " + std::to_string(q_) + "*sqrt(" + std::to_string(d_) + "))/" +
           std::to_string(r_);
}

std::int64_t QuadIrr::floor() const { return narrow(floor_quadratic(p_, q_, d_, r_)); }

QuadIrr QuadIrr::frac() const {
    std::int64_t k = floor();
    return QuadIrr(checked_sub(p_, checked_mul(k, r_)), q_, r_, d_);
}

QuadIrr operator+(const QuadIrr& a, const QuadIrr& b) {
    std::int64_t d = common_field(a, b);
    i128 p = static_cast<i128>(a.p_) * b.r_ + static_cast<i128>(b.p_) * a.r_;
    i128 q = static_cast<i128>(a.q_) * b.r_ + static_cast<i128>(b.q_) * a.r_;
    i128 r = static_cast<i128>(a.r_) * b.r_;
    i128 g = gcd128(gcd128(p, q), r);
    return QuadIrr(narrow(p / g), narrow(q / g), narrow(r / g), d);
}

QuadIrr operator*(std::int64_t n, const QuadIrr& a) {
    return QuadIrr(checked_mul(n, a.p_), checked_mul(n, a.q_), a.r_, a.d_);
}

std::strong_ordering operator<=>(const QuadIrr& a, const QuadIrr& b) {
    std::int64_t d = common_field(a, b);
    i128 p = static_cast<i128>(a.p_) * b.r_ - static_cast<i128>(b.p_) * a.r_;
    i128 q = static_cast<i128>(a.q_) * b.r_ - static_cast<i128>(b.q_) * a.r_;
    int s = sign_quadratic(p, q, d);
    return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

}  // namespace sumset

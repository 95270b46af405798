#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "sumset/quadirr.hpp"
#include "sumset/rational.hpp"
#include "sumset/window.hpp"

namespace sumset {

// Closed arc [lo, lo + len] of the circle R/Z with rational endpoints.
// lo is kept in [0, 1); len in [0, 1], len == 1 meaning the full circle.
class TorusInterval {
public:
    TorusInterval() = default;
    // [lo, hi] taken mod 1; hi < lo (after reduction) means the arc wraps.
    static TorusInterval closed(const Rational& lo, const Rational& hi);
    static TorusInterval from_length(const Rational& lo, const Rational& len);
    static TorusInterval full();

    const Rational& lo() const { return lo_; }
    Rational hi() const { return (lo_ + len_).frac(); }
    const Rational& length() const { return len_; }
    Rational measure() const { return len_; }
    bool is_full() const { return len_ == Rational(1); }
    bool wraps() const { return !is_full() && lo_ + len_ >= Rational(1); }

    bool contains(const Rational& x) const;
    bool contains(const QuadIrr& x) const;
    TorusInterval shifted(const Rational& c) const { return from_length(lo_ + c, len_); }

    std::string str() const;
    friend bool operator==(const TorusInterval&, const TorusInterval&) = default;

private:
    Rational lo_{0};
    Rational len_{0};
};

// Closed arc [start, start + len] with a quadratic-irrational start point.
struct Arc {
    QuadIrr start;  // in [0, 1)
    Rational len;

    static Arc of(const TorusInterval& I) { return {QuadIrr(I.lo()), I.length()}; }
    bool contains(const QuadIrr& x) const;
};

TorusInterval interval_sum(const TorusInterval& I, const TorusInterval& J);
// I + n alpha.
Arc interval_translate(const TorusInterval& I, const QuadIrr& alpha, std::int64_t n);
bool interval_disjoint(const Arc& a, const Arc& b);
inline bool interval_disjoint(const TorusInterval& I, const TorusInterval& J) {
    return interval_disjoint(Arc::of(I), Arc::of(J));
}

// Exact test {n alpha} in I.
bool frac_in_interval(std::int64_t n, const QuadIrr& alpha, const TorusInterval& I);

// Smallest |n| in [1, bound] (n tried before -n) with (I + I) and I + n alpha
// disjoint. Throws PreconditionError if m(I) >= 1/3, NotFound if none.
std::int64_t find_shift_n(const QuadIrr& alpha, const TorusInterval& I, std::int64_t bound);

// Sturmian set data. The offset is a = c + m alpha on the circle (and, for
// the twisted case, sign carries the {-1, 1} component of a).
struct SturmianSpec {
    QuadIrr alpha = QuadIrr::golden_conjugate();
    TorusInterval interval;
    Rational offset_c{0};
    std::int64_t offset_m = 0;
    int offset_sign = 1;
    bool twisted = false;

    void validate() const;
};

// Untwisted: n in set iff {n alpha} in I + a.
bool sturmian_member(const SturmianSpec& spec, std::int64_t n);
// Twisted, on DihedralInf: (m, eps) in (I x| {-1,1}) a under tau(m, eps) = (m alpha, eps).
bool twisted_member(const SturmianSpec& spec, std::int64_t m, int eps);

// Fast membership tester: long-double filter with exact fallback.
class SturmianTester {
public:
    explicit SturmianTester(const SturmianSpec& spec);
    bool operator()(std::int64_t n) const;                 // untwisted
    bool operator()(std::int64_t m, int eps) const;        // twisted

private:
    bool frac_test(std::int64_t n, const TorusInterval& I, long double lo) const;

    SturmianSpec spec_;
    long double alpha_;
    TorusInterval shifted_;   // I + c
    TorusInterval shifted_neg_;  // I - c
    long double lo_pos_, lo_neg_, len_;
};

WindowSet sturmian_members(const SturmianSpec& spec, const GroupDescriptor& group, const BoxParams& window);

struct Equidistribution {
    std::int64_t count = 0;
    std::int64_t n = 0;
    double ratio = 0;
    double discrepancy = 0;
};
Equidistribution equidistribution_check(const QuadIrr& alpha, const TorusInterval& I, std::int64_t n);

// "golden" or "p,q,r,d" meaning (p + q sqrt d) / r.
QuadIrr parse_alpha(const std::string& text);

nlohmann::json interval_to_json(const TorusInterval& I);
TorusInterval interval_from_json(const nlohmann::json& j);
nlohmann::json sturmian_to_json(const SturmianSpec& spec);
SturmianSpec sturmian_from_json(const nlohmann::json& j);

}  // namespace sumset

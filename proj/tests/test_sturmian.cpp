#include <doctest.h>

#include <cmath>
#include <set>

#include "oracle.hpp"
#include "sumset/errors.hpp"
#include "sumset/sturmian.hpp"

using namespace sumset;

namespace {

SturmianSpec spec(const QuadIrr& alpha, const TorusInterval& I) {
    SturmianSpec s;
    s.alpha = alpha;
    s.interval = I;
    return s;
}

TorusInterval iv(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    return TorusInterval::closed(Rational(a, b), Rational(c, d));
}

std::vector<std::int64_t> members_of(const WindowSet& w) {
    std::vector<std::int64_t> out;
    for (std::uint64_t i = 0; i < w.size(); ++i)
        if (w.mask[i]) out.push_back(w.at(i));
    return out;
}

}  // namespace

TEST_SUITE("sturmian") {
    TEST_CASE("quadratic irrational comparisons match the oracle") {
        const QuadIrr g = QuadIrr::golden_conjugate();
        const auto big = oracle::quad(-1, 1, 2, 5);
        for (std::int64_t n = -2000; n <= 2000; n += 7) {
            const QuadIrr x = n * g;
            const auto bx = oracle::Big(n) * big;
            CHECK(x.floor() == static_cast<std::int64_t>(boost::multiprecision::floor(bx)));
            for (std::int64_t k : {-3, 0, 5}) CHECK((x < QuadIrr(Rational(k, 7))) == (bx < oracle::ratio(k, 7)));
        }
        CHECK(QuadIrr(2, 0, 4, 7) == QuadIrr(Rational(1, 2)));
        CHECK(sign_quadratic(-3, 2, 2) == -1);  // -3 + 2 sqrt2 < 0
        CHECK(sign_quadratic(-2, 2, 2) == 1);
        CHECK(floor_quadratic(0, 1, 2, 1) == 1);
        CHECK(is_squarefree(5));
        CHECK_FALSE(is_squarefree(12));
        CHECK(parse_alpha("golden") == g);
        CHECK(parse_alpha("-1,1,1,2") == QuadIrr(-1, 1, 1, 2));
    }

    TEST_CASE("frac_in_interval examples") {
        const QuadIrr g = QuadIrr::golden_conjugate();
        const auto I = iv(0, 1, 3, 10);
        CHECK(frac_in_interval(0, g, I));
        CHECK(frac_in_interval(5, g, I));
        CHECK_FALSE(frac_in_interval(1, g, I));
    }

    TEST_CASE("exact membership agrees with 200 digits for |n| <= 1e5") {
        struct Case {
            std::int64_t p, q, r, d;
        };
        const std::vector<TorusInterval> grid = {iv(0, 1, 3, 10), iv(1, 7, 5, 7), iv(9, 10, 1, 10), iv(1, 3, 1, 2),
                                                 iv(0, 1, 1, 2)};
        for (const Case c : {Case{-1, 1, 2, 5}, Case{-1, 1, 1, 2}}) {
            const QuadIrr alpha(c.p, c.q, c.r, c.d);
            const auto ba = oracle::quad(c.p, c.q, c.r, c.d);
            std::vector<SturmianTester> testers;
            for (const auto& I : grid) testers.emplace_back(spec(alpha, I));
            std::int64_t disagreements = 0;
            for (std::int64_t n = -100000; n <= 100000; ++n) {
                const auto fx = oracle::frac_mul(n, ba);
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const auto& I = grid[i];
                    const bool want = oracle::in_arc(fx, oracle::ratio(I.lo().num(), I.lo().den()),
                                                     oracle::ratio(I.length().num(), I.length().den()));
                    if (testers[i](n) != want) ++disagreements;
                    if (n % 97 == 0 && frac_in_interval(n, alpha, I) != want) ++disagreements;
                }
            }
            CHECK(disagreements == 0);
        }
    }

    TEST_CASE("interval algebra") {
        CHECK(interval_sum(iv(0, 1, 1, 5), iv(0, 1, 1, 10)) == iv(0, 1, 3, 10));
        CHECK(interval_sum(iv(0, 1, 3, 5), iv(0, 1, 1, 2)).is_full());
        const Arc a = interval_translate(iv(0, 1, 1, 4), QuadIrr::golden_conjugate(), 1);
        CHECK(a.start == QuadIrr::golden_conjugate());
        CHECK(a.len == Rational(1, 4));
        CHECK(std::abs(static_cast<double>(a.start.approx()) - 0.6180339887) < 1e-9);
        CHECK(interval_disjoint(iv(0, 1, 3, 10), iv(2, 5, 3, 5)));
        CHECK_FALSE(interval_disjoint(iv(0, 1, 3, 10), iv(1, 5, 3, 5)));
        CHECK_FALSE(interval_disjoint(iv(9, 10, 1, 10), iv(0, 1, 1, 20)));
        const auto w = iv(9, 10, 1, 10);
        CHECK(w.wraps());
        CHECK(w.length() == Rational(1, 5));
        CHECK(w.contains(Rational(0)));
        CHECK_FALSE(w.contains(Rational(1, 2)));
    }

    TEST_CASE("find_shift_n") {
        const QuadIrr g = QuadIrr::golden_conjugate();
        CHECK(find_shift_n(g, iv(0, 1, 1, 5), 100) == 1);
        CHECK_THROWS_AS(find_shift_n(g, iv(0, 1, 17, 50), 100), PreconditionError);
        const QuadIrr r2 = parse_alpha("sqrt2-1");
        const std::int64_t n = find_shift_n(r2, iv(0, 1, 1, 5), 100);
        const auto fx = oracle::frac_mul(n, oracle::quad(-1, 1, 1, 2));
        // I + n alpha = [x, x + 1/5] misses [0, 2/5] iff x in (2/5, 4/5)
        CHECK(fx > oracle::ratio(2, 5));
        CHECK(fx < oracle::ratio(4, 5));
        // no smaller |n| works
        for (std::int64_t k = 1; k < std::abs(n); ++k)
            for (std::int64_t s : {k, -k}) {
                const auto f = oracle::frac_mul(s, oracle::quad(-1, 1, 1, 2));
                CHECK_FALSE((f > oracle::ratio(2, 5) && f < oracle::ratio(4, 5)));
            }
        // I = [1/2, 3/4]: I + I = [0, 1/2], so {n alpha} must lie in (0, 1/4)
        CHECK_THROWS_AS(find_shift_n(g, iv(1, 2, 3, 4), 1), NotFound);
        CHECK(find_shift_n(g, iv(1, 2, 3, 4), 10) == 2);
    }

    TEST_CASE("sturmian_members") {
        const QuadIrr g = QuadIrr::golden_conjugate();
        const auto Z = GroupDescriptor::int_line();
        const auto w = sturmian_members(spec(g, iv(0, 1, 3, 10)), Z, BoxParams::interval(0, 9));
        CHECK(members_of(w) == std::vector<std::int64_t>{0, 2, 5});
        const auto full = sturmian_members(spec(g, TorusInterval::full()), Z, BoxParams::interval(-5, 5));
        CHECK(full.count() == 11);

        SturmianSpec t = spec(g, iv(0, 1, 3, 10));
        t.twisted = true;
        const auto D = GroupDescriptor::dihedral_inf();
        const auto tw = sturmian_members(t, D, BoxParams::interval(0, 3));
        const auto box = enumerate_box(D, BoxParams::interval(0, 3));
        for (std::uint64_t i = 0; i < box.size(); ++i) {
            const auto e = std::get<DihElt>(box[i]);
            CHECK(static_cast<bool>(tw.mask[i]) == frac_in_interval(e.m, g, t.interval));
        }
        CHECK_THROWS_AS(sturmian_members(t, Z, BoxParams::interval(0, 3)), TypeError);
    }

    TEST_CASE("offsets shift the set") {
        const QuadIrr g = QuadIrr::golden_conjugate();
        SturmianSpec s = spec(g, iv(0, 1, 3, 10));
        s.offset_m = 4;
        for (std::int64_t n = -200; n <= 200; ++n) CHECK(sturmian_member(s, n) == frac_in_interval(n - 4, g, s.interval));
        s.offset_m = 0;
        s.offset_c = Rational(1, 10);
        for (std::int64_t n = -200; n <= 200; ++n)
            CHECK(sturmian_member(s, n) == frac_in_interval(n, g, iv(1, 10, 2, 5)));
    }

    TEST_CASE("three-distance gaps") {
        const QuadIrr g = QuadIrr::golden_conjugate();
        const auto Z = GroupDescriptor::int_line();
        for (const auto& I : {iv(0, 1, 3, 10), iv(1, 7, 5, 7), iv(1, 3, 1, 2)}) {
            const auto m = members_of(sturmian_members(spec(g, I), Z, BoxParams::interval(-50000, 50000)));
            std::set<std::int64_t> gaps;
            for (std::size_t i = 1; i < m.size(); ++i) gaps.insert(m[i] - m[i - 1]);
            CHECK(gaps.size() <= 3);
        }
        const auto m = members_of(sturmian_members(spec(g, iv(0, 1, 3, 10)), Z, BoxParams::interval(-50000, 50000)));
        std::set<std::int64_t> gaps;
        for (std::size_t i = 1; i < m.size(); ++i) gaps.insert(m[i] - m[i - 1]);
        CHECK(gaps == std::set<std::int64_t>{2, 3, 5});
    }

    TEST_CASE("equidistribution") {
        const QuadIrr g = QuadIrr::golden_conjugate();
        CHECK(std::abs(equidistribution_check(g, iv(0, 1, 3, 10), 10000).ratio - 0.3) <= 5e-3);
        CHECK(equidistribution_check(g, TorusInterval::full(), 1000).ratio == 1.0);
        CHECK(std::abs(equidistribution_check(g, iv(0, 1, 1, 2), 100000).ratio - 0.5) <= 1e-3);
        // density along [-n, n] within 10 log n / n
        const std::int64_t n = 100000;
        const auto w = sturmian_members(spec(g, iv(0, 1, 3, 10)), GroupDescriptor::int_line(), BoxParams::interval(-n, n));
        const double ratio = static_cast<double>(w.count()) / static_cast<double>(2 * n + 1);
        CHECK(std::abs(ratio - 0.3) <= 10 * std::log(double(n)) / double(n));
    }

    TEST_CASE("every residue class is hit") {
        const auto w = sturmian_members(spec(QuadIrr::golden_conjugate(), iv(0, 1, 3, 10)), GroupDescriptor::int_line(),
                                        BoxParams::interval(-500000, 500000));
        for (std::int64_t m = 1; m <= 50; ++m) {
            std::set<std::int64_t> res;
            for (std::uint64_t i = 0; i < w.size() && static_cast<std::int64_t>(res.size()) < m; ++i)
                if (w.mask[i]) res.insert(floor_mod(w.at(i), m));
            CHECK(static_cast<std::int64_t>(res.size()) == m);
        }
    }

    TEST_CASE("spec JSON round trip") {
        SturmianSpec s = spec(parse_alpha("sqrt2-1"), iv(9, 10, 1, 10));
        s.offset_c = Rational(1, 3);
        s.offset_m = -2;
        const SturmianSpec back = sturmian_from_json(sturmian_to_json(s));
        CHECK(back.alpha == s.alpha);
        CHECK(back.interval == s.interval);
        CHECK(back.offset_c == s.offset_c);
        CHECK(back.offset_m == s.offset_m);
        CHECK(sturmian_to_json(back) == sturmian_to_json(s));
    }
}

#include <doctest.h>

#include <set>

#include "sumset/setspec.hpp"
#include "sumset/structure.hpp"

using namespace sumset;

namespace {

SetExprPtr golden(Rational lo, Rational hi) {
    SturmianSpec s;
    s.interval = TorusInterval::closed(lo, hi);
    return sturmian_set(s);
}

std::set<std::int64_t> residues_oracle(const WindowSet& w, std::int64_t m) {
    std::set<std::int64_t> r;
    for (std::int64_t n = w.box.lo; n <= w.box.hi; ++n)
        if (w.contains(n)) r.insert(((n % m) + m) % m);
    return r;
}

}  // namespace

TEST_SUITE("structure") {
    TEST_CASE("periodic supersets") {
        const auto odd = detect_periodic_superset(periodic(2, {1}), -1000, 1000, 10);
        REQUIRE_FALSE(odd.empty());
        CHECK(odd.front().m == 2);
        CHECK(odd.front().residues == std::vector<std::int64_t>{1});
        CHECK(odd.front().margin_ok);
        const auto four = detect_periodic_superset(periodic(4, {0, 1}), -1000, 1000, 10);
        REQUIRE_FALSE(four.empty());
        CHECK(four.front().m == 4);
        CHECK(four.front().residues == std::vector<std::int64_t>{0, 1});
        CHECK(four.front().density == doctest::Approx(0.5));
        CHECK(detect_periodic_superset(golden(Rational(0), Rational(3, 10)), -500000, 500000, 50).empty());
    }

    TEST_CASE("witnesses contain the set and the first has minimal period") {
        const std::vector<SetExprPtr> sets = {
            set_union({periodic(6, {1, 4}), explicit_ints({})}),
            set_intersect({periodic(3, {0}), golden(Rational(0), Rational(1, 2))}),
            periodic(10, {0, 5, 7}),
        };
        for (const auto& a : sets) {
            const auto w = materialize(a, BoxParams::interval(-20000, 20000));
            const auto ws = detect_periodic_superset(w, 12);
            REQUIRE_FALSE(ws.empty());
            for (std::int64_t m = 1; m < ws.front().m; ++m) CHECK(residues_oracle(w, m).size() == static_cast<std::size_t>(m));
            for (const auto& pw : ws) {
                const auto r = residues_oracle(w, pw.m);
                CHECK(std::vector<std::int64_t>(r.begin(), r.end()) == pw.residues);
                CHECK(pw.residues.size() < static_cast<std::size_t>(pw.m));
                CHECK(pw.density < pw.banach_upper + 1.0 / static_cast<double>(pw.m) + 1e-12);
            }
        }
    }

    TEST_CASE("spread-out detection on the integers") {
        const auto v = spread_out_witness_Z(periodic(2, {0}), -1000, 1000, 10);
        CHECK_FALSE(v.spread_out);
        REQUIRE(v.witness.has_value());
        CHECK(v.witness->m == 2);
        const auto g = spread_out_witness_Z(golden(Rational(0), Rational(3, 10)), -200000, 200000, 20);
        CHECK(g.spread_out);
        CHECK(g.to_json().at("m_max") == 20);
    }

    TEST_CASE("periodic runs") {
        const auto N = materialize(half_line(1), BoxParams::interval(-100, 100));
        const auto r = find_periodic_run(N, 1, 10, -100, 100);
        REQUIRE(r.has_value());
        CHECK(r->x == 1);
        CHECK(r->r == 0);
        CHECK(max_run_span(N, 1, -100, 100) == 100);
        const auto E = materialize(set_intersect({periodic(2, {0}), half_line(1)}), BoxParams::interval(0, 1000000));
        const auto e = find_periodic_run(E, 2, 10000, 0, 1000000);
        REQUIRE(e.has_value());
        CHECK(e->r == 0);
        CHECK(e->x == 1);
        CHECK_FALSE(find_periodic_run(E, 1, 2, 0, 1000000).has_value());
        // success is monotone in L up to the maximal span
        const auto C = materialize(golden(Rational(1, 10), Rational(7, 10)), BoxParams::interval(-5000, 5000));
        for (std::int64_t m : {1, 2, 3, 5}) {
            const std::int64_t top = max_run_span(C, m, -5000, 5000);
            for (std::int64_t L = 1; L <= std::min<std::int64_t>(top, 60); ++L)
                CHECK(find_periodic_run(C, m, L, -5000, 5000).has_value());
            CHECK_FALSE(find_periodic_run(C, m, top + 1, -5000, 5000).has_value());
        }
    }

    TEST_CASE("Sturmian containment") {
        SturmianSpec same;
        same.interval = TorusInterval::closed(Rational(0), Rational(3, 10));
        const auto a = sturmian_set(same);
        const auto c = verify_sturmian_containment(a, same, -100000, 100000, 0.01);
        CHECK(c.contained);
        CHECK(c.density_ok);
        CHECK(c.ok);
        SturmianSpec wide;
        wide.interval = TorusInterval::closed(Rational(0), Rational(1, 2));
        const auto d = verify_sturmian_containment(golden(Rational(0), Rational(1, 5)), wide, -100000, 100000, 0.01);
        CHECK(d.contained);
        CHECK_FALSE(d.density_ok);
        CHECK_FALSE(d.ok);
        const auto e = verify_sturmian_containment(periodic(2, {0}), same, -1000, 1000, 0.01);
        CHECK_FALSE(e.contained);
        REQUIRE(e.first_violation.has_value());
        CHECK(*e.first_violation % 2 == 0);
        CHECK(e.to_json().at("ok") == false);
    }
}

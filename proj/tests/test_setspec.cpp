#include <doctest.h>

#include <random>
#include <set>

#include "oracle.hpp"
#include "sumset/errors.hpp"
#include "sumset/setspec.hpp"

using namespace sumset;

namespace {

SetExprPtr golden_sturmian(Rational lo, Rational hi) {
    SturmianSpec s;
    s.interval = TorusInterval::closed(lo, hi);
    return sturmian_set(s);
}

std::set<std::int64_t> ints(const WindowSet& w) {
    std::set<std::int64_t> out;
    for (std::uint64_t i = 0; i < w.size(); ++i)
        if (w.mask[i]) out.insert(w.at(i));
    return out;
}

// Sumset by enumerating pairs of operand windows.
std::set<std::int64_t> pair_oracle(const SetExprPtr& a, const SetExprPtr& b, std::int64_t a0, std::int64_t a1,
                                   std::int64_t b0, std::int64_t b1, std::int64_t lo, std::int64_t hi) {
    std::set<std::int64_t> out;
    for (std::int64_t x = a0; x <= a1; ++x) {
        if (!member(a, IntElt{x})) continue;
        for (std::int64_t y = b0; y <= b1; ++y)
            if (x + y >= lo && x + y <= hi && member(b, IntElt{y})) out.insert(x + y);
    }
    return out;
}

}  // namespace

TEST_SUITE("setspec") {
    TEST_CASE("membership examples") {
        const auto evens = periodic(2, {0});
        CHECK(member(evens, IntElt{4}));
        CHECK_FALSE(member(evens, IntElt{3}));
        CHECK(member(golden_sturmian(Rational(0), Rational(3, 10)), IntElt{5}));
        const auto odd_pos = set_intersect({half_line(1), periodic(2, {1})});
        CHECK(member(odd_pos, IntElt{7}));
        CHECK_FALSE(member(odd_pos, IntElt{-3}));
        CHECK_THROWS_AS(member(product_set(evens, evens), IntElt{0}), UnsupportedQuery);
        CHECK_THROWS_AS(member(evens, DihElt{0, 1}), TypeError);
        CHECK_THROWS_AS(periodic(3, {3}), std::exception);
        CHECK_THROWS_AS(set_union({evens, explicit_set(GroupDescriptor::dihedral_inf(), {DihElt{0, 1}})}), TypeError);
    }

    TEST_CASE("materialize examples") {
        CHECK(ints(materialize(periodic(3, {0}), BoxParams::interval(0, 8))) == std::set<std::int64_t>{0, 3, 6});
        CHECK(ints(materialize(golden_sturmian(Rational(0), Rational(3, 10)), BoxParams::interval(0, 9))) ==
              std::set<std::int64_t>{0, 2, 5});
        CHECK(ints(materialize(complement(half_line(1)), BoxParams::interval(-2, 2))) ==
              std::set<std::int64_t>{-2, -1, 0});
        CHECK(ints(materialize(translate(IntElt{3}, explicit_ints({0, 1})), BoxParams::interval(-5, 5))) ==
              std::set<std::int64_t>{3, 4});
        CHECK(ints(materialize(inverse_set(half_line(1)), BoxParams::interval(-2, 2))) ==
              std::set<std::int64_t>{-2, -1});
    }

    TEST_CASE("materialize agrees with member and with the 200-digit oracle") {
        const auto big = oracle::quad(-1, 1, 2, 5);
        const auto C = golden_sturmian(Rational(1, 7), Rational(5, 7));
        const auto w = materialize(C, BoxParams::interval(-3000, 3000));
        for (std::uint64_t i = 0; i < w.size(); ++i) {
            const bool want = oracle::in_arc(oracle::frac_mul(w.at(i), big), oracle::ratio(1, 7), oracle::ratio(4, 7));
            REQUIRE(static_cast<bool>(w.mask[i]) == want);
            REQUIRE(member(C, IntElt{w.at(i)}) == want);
        }
        // non-IntLine groups go element by element
        const auto G = GroupDescriptor::solvable(2);
        const auto S = builtin(G, "S");
        const auto box = BoxParams::solvable(2, 5);
        const auto ws = materialize(complement(S), box);
        const auto elts = enumerate_box(G, box);
        for (std::size_t i = 0; i < elts.size(); ++i) CHECK(static_cast<bool>(ws.mask[i]) == !member(S, elts[i]));
    }

    TEST_CASE("de Morgan on windows") {
        const auto A = golden_sturmian(Rational(0), Rational(3, 10));
        const auto B = set_union({periodic(4, {1, 2}), explicit_ints({-7, 0, 9})});
        const auto box = BoxParams::interval(-500, 500);
        const auto lhs1 = materialize(complement(set_union({A, B})), box);
        const auto rhs1 = materialize(set_intersect({complement(A), complement(B)}), box);
        const auto lhs2 = materialize(complement(set_intersect({A, B})), box);
        const auto rhs2 = materialize(set_union({complement(A), complement(B)}), box);
        CHECK(lhs1.mask == rhs1.mask);
        CHECK(lhs2.mask == rhs2.mask);
    }

    TEST_CASE("product_window examples") {
        const auto out = BoxParams::interval(0, 3);
        CHECK(ints(product_window(explicit_ints({0, 1}), explicit_ints({0, 2}), out)) ==
              std::set<std::int64_t>{0, 1, 2, 3});
        const auto w = product_window(periodic(2, {0}), explicit_ints({0, 1}), BoxParams::interval(0, 9));
        CHECK(w.count() == 10);
        CHECK(w.exact);
    }

    TEST_CASE("product_window against the pairwise oracle") {
        const auto C = golden_sturmian(Rational(0), Rational(3, 10));
        const auto N = half_line(1);
        // both bounded below: exact
        const auto A = set_intersect({C, N});
        const auto wab = product_window(A, A, BoxParams::interval(0, 20));
        CHECK(wab.exact);
        CHECK(ints(wab) == pair_oracle(A, A, 1, 20, 1, 20, 0, 20));
        // finite operand: exact
        const auto F = explicit_ints({-3, 0, 4, 11});
        const auto wf = product_window(F, C, BoxParams::interval(-400, 400));
        CHECK(wf.exact);
        CHECK(ints(wf) == pair_oracle(F, C, -3, 11, -411, 403, -400, 400));
        // two-sided operands: lower approximation, inside the exact identity C + C = Sturmian(I + I)
        const auto wcc = product_window(C, C, BoxParams::interval(0, 20));
        CHECK_FALSE(wcc.exact);
        const auto CC = golden_sturmian(Rational(0), Rational(3, 5));
        CHECK(ints(wcc) == ints(materialize(CC, BoxParams::interval(0, 20))));
        for (std::int64_t x : ints(wcc)) CHECK(member(CC, IntElt{x}));
        // random small windows
        std::mt19937_64 rng(11);
        for (int t = 0; t < 40; ++t) {
            std::vector<std::int64_t> xs, ys;
            for (int i = 0; i < 12; ++i) xs.push_back(static_cast<std::int64_t>(rng() % 60) - 30);
            for (int i = 0; i < 12; ++i) ys.push_back(static_cast<std::int64_t>(rng() % 60) - 30);
            const auto X = explicit_ints(xs);
            const auto Y = set_union({explicit_ints(ys), set_intersect({periodic(3, {1}), N})});
            const std::int64_t lo = static_cast<std::int64_t>(rng() % 40) - 40, hi = lo + 200;
            const auto w = product_window(X, Y, BoxParams::interval(lo, hi));
            CHECK(w.exact);
            CHECK(ints(w) == pair_oracle(X, Y, -30, 30, lo - 30, hi + 30, lo, hi));
        }
    }

    TEST_CASE("product_window contains every translate") {
        const auto A = explicit_ints({-4, 1, 6});
        const auto B = golden_sturmian(Rational(1, 5), Rational(1, 2));
        const auto out = BoxParams::interval(-100, 100);
        const auto w = product_window(A, B, out);
        for (std::int64_t a : {-4, 1, 6})
            for (std::int64_t x = -100; x <= 100; ++x)
                if (member(B, IntElt{x - a})) CHECK(w.contains(x));
    }

    TEST_CASE("product_window on finite and solvable groups") {
        const auto Z6 = GroupDescriptor::cyclic(6);
        const auto a = explicit_set(Z6, {ResElt{1}, ResElt{2}});
        const auto b = explicit_set(Z6, {ResElt{0}, ResElt{3}});
        const auto w = product_window(a, b, BoxParams::whole());
        CHECK(w.exact);
        CHECK(w.count() == 4);
        const auto G = GroupDescriptor::solvable(2);
        const auto s1 = explicit_set(G, {affine_elt(2, Rational(1, 2), 1)});
        const auto s2 = explicit_set(G, {affine_elt(2, Rational(1), 0)});
        const auto wp = product_window(s1, s2, BoxParams::solvable(2, 20));
        CHECK(wp.count() == 1);
        CHECK(wp.members().front() == affine_elt(2, Rational(5, 2), 1));
    }

    TEST_CASE("JSON round trip") {
        SturmianSpec s;
        s.interval = TorusInterval::closed(Rational(9, 10), Rational(1, 10));
        s.offset_m = 3;
        const auto e = set_union({set_intersect({sturmian_set(s), half_line(1)}),
                                  translate(IntElt{-2}, periodic(5, {0, 3})), complement(explicit_ints({4, 8}))});
        const auto j = set_to_json(e);
        CHECK(j.at("schema_version") == 1);
        const auto back = set_from_json(j);
        CHECK(set_to_json(back) == j);
        const auto box = BoxParams::interval(-300, 300);
        CHECK(materialize(back, box).mask == materialize(e, box).mask);
        const auto G = GroupDescriptor::solvable(3);
        const auto cx = set_union({builtin(G, "S"), translate(affine_elt(3, Rational(1, 3), -1), builtin(G, "T"), false)});
        CHECK(set_to_json(set_from_json(set_to_json(cx))) == set_to_json(cx));
        CHECK_THROWS_AS(set_from_json(nlohmann::json::parse(R"({"schema_version":1,"group":{"kind":"IntLine"},"expr":{"node":"Bogus"}})")),
                        InputError);
        CHECK(load_set(SUMSET_DATA_DIR "/evens.json")->kind == NodeKind::Periodic);
    }
}

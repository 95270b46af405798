#include <doctest.h>

#include <set>

#include "oracle.hpp"
#include "sumset/cxmachine.hpp"
#include "sumset/errors.hpp"

using namespace sumset;

namespace {

using RElt = std::pair<Rational, std::int64_t>;

Rational pow_r(std::int64_t p, std::int64_t k) {
    Rational s(1);
    for (std::int64_t i = 0; i < std::abs(k); ++i) s = s * Rational(p);
    return k < 0 ? Rational(1) / s : s;
}

RElt mul(std::int64_t p, const RElt& x, const RElt& y) { return {x.first + pow_r(p, x.second) * y.first, x.second + y.second}; }
RElt inv(std::int64_t p, const RElt& x) { return {-(pow_r(p, -x.second) * x.first), -x.second}; }

AffineElt as_aff(std::int64_t p, const RElt& x) { return std::get<AffineElt>(affine_elt(p, x.first, x.second)); }

bool in_pk_z(std::int64_t p, const Rational& x, std::int64_t k) { return (x / pow_r(p, k)).is_integer(); }

}  // namespace

TEST_SUITE("cxmachine") {
    TEST_CASE("S and S^-1 S against explicit products") {
        const CxContext ctx(2);
        const std::int64_t p = 2;
        // S = {(0, k)(m, 0)}
        std::vector<RElt> S;
        for (std::int64_t k = -3; k <= 3; ++k)
            for (std::int64_t m = -40; m <= 40; ++m) {
                const RElt s = mul(p, {Rational(0), k}, {Rational(m), 0});
                CHECK(member_S(ctx, as_aff(p, s)));
                S.push_back(s);
            }
        CHECK_FALSE(member_S(ctx, as_aff(p, {Rational(1), 1})));
        CHECK(member_S(ctx, as_aff(p, {Rational(1, 2), -1})));
        std::set<std::pair<std::pair<std::int64_t, std::int64_t>, std::int64_t>> found;  // (x num, x den), k
        for (const auto& s : S)
            for (const auto& t : S) {
                const RElt q = mul(p, inv(p, s), t);
                found.insert({{q.first.num(), q.first.den()}, q.second});
            }
        for (std::int64_t k = -3; k <= 3; ++k)
            for (std::int64_t j = -40; j <= 40; ++j) {
                const RElt g{Rational(j, 8), k};
                const bool in = found.count({{g.first.num(), g.first.den()}, k}) > 0;
                CHECK(member_SinvS(ctx, as_aff(p, g)) == in);
                CHECK(member_T(ctx, as_aff(p, g)) == !in);
            }
    }

    TEST_CASE("AB closed form") {
        const CxContext ctx(2);
        const std::int64_t p = 2;
        const auto params = Cx1Params::make(Rational(1, 5), QuadIrr::golden_conjugate());
        const auto ball = check_closed_forms(ctx, params, 3, 40);
        CHECK(ball.ball_size > 0);
        CHECK(ball.s_mismatch == 0);
        CHECK(ball.sinvs_mismatch == 0);
        CHECK(ball.ab_mismatch == 0);
        // every product of small members of A and B lies in AB
        std::vector<RElt> A, B;
        for (std::int64_t k = -4; k <= 4; ++k)
            for (std::int64_t j = -24; j <= 24; ++j) {
                const RElt g{Rational(j, 4), k};
                if (cx1_member_A(ctx, as_aff(p, g))) A.push_back(g);
                if (cx1_member_B(ctx, params, as_aff(p, g))) B.push_back(g);
            }
        REQUIRE(!A.empty());
        REQUIRE(!B.empty());
        for (const auto& a : A)
            for (const auto& b : B) REQUIRE(cx1_member_AB(ctx, as_aff(p, mul(p, a, b))));
        // every member of AB outside A factors through the witness shift
        for (std::int64_t k = -7; k <= 7; ++k)
            for (std::int64_t j = -12; j <= 12; ++j) {
                const RElt g{Rational(j, 8), k};
                if (!cx1_member_AB(ctx, as_aff(p, g)) || cx1_member_A(ctx, as_aff(p, g))) continue;
                const std::int64_t i = cx1_ab_witness_shift(params, k);
                const RElt a{Rational(0), i}, b{g.first * pow_r(p, -i), k - i};
                CHECK(cx1_member_A(ctx, as_aff(p, a)));
                CHECK(cx1_member_B(ctx, params, as_aff(p, b)));
                CHECK(mul(p, a, b) == g);
            }
    }

    TEST_CASE("witness shift against a high-precision rotation") {
        const auto params = Cx1Params::make(Rational(1, 5), QuadIrr::golden_conjugate());
        const auto alpha = oracle::quad(-1, 1, 2, 5);
        for (std::int64_t k = -30; k <= 30; ++k) {
            const std::int64_t i = cx1_ab_witness_shift(params, k);
            CHECK(i % 2 == 0);
            CHECK(i > k);
            CHECK(oracle::in_arc(oracle::frac_mul(k - i - 1, alpha), 0, oracle::ratio(2, 5)));
        }
    }

    TEST_CASE("contracting conjugator") {
        const CxContext ctx(3);
        const std::vector<RElt> F = {{Rational(1, 9), 0}, {Rational(5, 3), 0}, {Rational(7), 0}};
        std::vector<Element> Fe;
        for (const auto& f : F) Fe.push_back(affine_elt(3, f.first, f.second));
        const Element g = contracting_conjugator(ctx, Fe);
        const auto ga = std::get<AffineElt>(g);
        CHECK(ga.k == 2);
        CHECK(ga.a.is_zero());
        for (const auto& f : F) {
            CHECK(in_pk_z(3, mul(3, mul(3, {Rational(0), 2}, f), {Rational(0), -2}).first, 0));
        }
        CHECK_FALSE(in_pk_z(3, mul(3, mul(3, {Rational(0), 1}, F[0]), {Rational(0), -1}).first, 0));
        CHECK(std::get<AffineElt>(contracting_conjugator(ctx, {affine_elt(3, Rational(4), 0)})).k == 0);
    }

    TEST_CASE("density proxies") {
        const CxContext ctx(2);
        const auto params = Cx1Params::make(Rational(1, 5), QuadIrr::golden_conjugate());
        const int n = 8;
        const std::int64_t J = std::int64_t{1} << 16;
        const double a = cx1_upper_proxy(ctx, params, Cx1Set::A, n, J).value;
        const double b = cx1_upper_proxy(ctx, params, Cx1Set::B, n, J).value;
        const double ab = cx1_upper_proxy(ctx, params, Cx1Set::AB, n, J).value;
        CHECK(a >= 0.45);
        CHECK(a <= 0.55);
        CHECK(b >= 0.15);
        CHECK(b <= 0.25);
        CHECK(ab <= 0.55);
        CHECK(cx1_lower_proxy(ctx, params, Cx1Set::A, n, J).value <= a);
        CHECK_THROWS(Cx1Params::make(Rational(3, 5), QuadIrr::golden_conjugate()).validate());
    }

    TEST_CASE("independence and the L Lambda proposition") {
        const CxContext ctx(2);
        const auto pts = independence_check(ctx, builtin(ctx.group(), "NL2"), builtin(ctx.group(), "S"), 2, 7);
        REQUIRE(pts.size() == 6);
        for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].error < pts[i - 1].error);
        for (const auto& pt : pts) CHECK(pt.error == doctest::Approx(std::abs(pt.rho_cd - pt.rho_c * pt.rho_d)));
        CHECK_THROWS_AS(independence_check(ctx, builtin(ctx.group(), "S"), builtin(ctx.group(), "S"), 2, 3), InputError);
        const auto ll = verify_prop_L_Lambda(ctx, 6);
        CHECK(ll.thick_ok);
        CHECK(ll.lower_decreasing);
        for (const auto& t : ll.thick) CHECK(t.inside == t.box_size);
    }
}

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "sumset/density.hpp"
#include "sumset/errors.hpp"

using namespace sumset;

namespace {

SetExprPtr golden(Rational lo, Rational hi) {
    SturmianSpec s;
    s.interval = TorusInterval::closed(lo, hi);
    return sturmian_set(s);
}

FolnerFamily sym() { return FolnerFamily{GroupDescriptor::int_line(), FolnerFamily::Kind::Symmetric}; }

// |F \ gF| by set difference over the enumerated box.
Rational defect_oracle(const FolnerFamily& fam, std::int64_t n, const Element& g) {
    const auto F = enumerate_box(fam.group, fam.box(n));
    std::set<Element> gF;
    for (const auto& f : F) gF.insert(group_op(fam.group, g, f));
    std::int64_t outside = 0;
    for (const auto& f : F)
        if (!gF.count(f)) ++outside;
    return Rational(2 * outside, static_cast<std::int64_t>(F.size()));
}

}  // namespace

TEST_SUITE("density") {
    TEST_CASE("density along symmetric intervals") {
        const std::int64_t n = 2000;
        const auto d = density_along(periodic(2, {0}), sym(), n);
        CHECK(std::abs(d.upper.value - 0.5) <= 1.0 / n);
        CHECK(std::abs(d.lower.value - 0.5) <= 1.0 / n);
        const double tol = default_tolerance(1000000);
        CHECK(tol == doctest::Approx(0.01));
        const auto C = golden(Rational(0), Rational(3, 10));
        const auto B = density_along(set_union({C, half_line(1)}), sym(), 1000000);
        CHECK(std::abs(B.lower.value - 0.65) <= tol);
        const auto A = density_along(set_intersect({C, half_line(1)}), sym(), 1000000);
        CHECK(std::abs(A.lower.value - 0.15) <= tol);
        for (const auto& [n_, v] : A.lower.series) {
            CHECK(v >= 0);
            CHECK(v <= 1);
        }
    }

    TEST_CASE("other families") {
        const auto evens = periodic(2, {0});
        const auto pos = FolnerFamily::parse(GroupDescriptor::int_line(), "pos");
        CHECK(pos.box(5).lo == 1);
        CHECK(pos.box(5).hi == 5);
        const auto sh = FolnerFamily::parse(GroupDescriptor::int_line(), "shifted");
        CHECK(sh.box(3).lo == 30);
        CHECK(sh.box(3).hi == 32);
        CHECK(std::abs(density_along(evens, sh, 1000).lower.value - 0.5) <= 1e-3);
        // dihedral: evens in the m-coordinate on both sheets
        const auto D = GroupDescriptor::dihedral_inf();
        SturmianSpec t;
        t.interval = TorusInterval::closed(Rational(0), Rational(1, 4));
        t.twisted = true;
        const auto d = density_along(twisted_sturmian(t), FolnerFamily{D, FolnerFamily::Kind::Symmetric}, 400);
        CHECK(std::abs(d.lower.value - 0.25) <= 0.02);
        // |F_n| strictly increasing
        for (const auto& fam : {sym(), pos, sh, FolnerFamily::parse(GroupDescriptor::solvable(2), "box"),
                                FolnerFamily::parse(GroupDescriptor::solvable(2), "skew")}) {
            std::uint64_t prev = 0;
            for (std::int64_t n = 1; n <= 4; ++n) {
                const auto sz = box_size(fam.group, fam.box(n));
                CHECK(sz > prev);
                prev = sz;
            }
        }
        CHECK_THROWS_AS(FolnerFamily::parse(GroupDescriptor::int_line(), "nope"), InputError);
    }

    TEST_CASE("Banach densities") {
        CHECK(banach_density(half_line(1), true, 100, -1000, 1000).value == 1.0);
        CHECK(banach_density(periodic(2, {0}), false, 100, -1000, 1000).value == 0.5);
        const auto C = golden(Rational(0), Rational(3, 10));
        CHECK(std::abs(banach_density(C, true, 10000, -500000, 500000).value - 0.3) <= 5e-3);
        CHECK_THROWS_AS(banach_density(builtin(GroupDescriptor::solvable(2), "S"), true, 10, 0, 10), UnsupportedQuery);
        // lattice: a half-plane has upper density 1 and lower density 0
        const auto L2 = GroupDescriptor::lattice(2);
        std::vector<Element> pts;
        for (std::int64_t x = -3; x <= 3; ++x) pts.push_back(VecElt{{x, x}});
        const auto diag = explicit_set(L2, pts);
        CHECK(banach_density(diag, true, 2, -3, 2).value == doctest::Approx(0.5));
    }

    TEST_CASE("Fekete subadditivity of window maxima") {
        const auto C = golden(Rational(1, 10), Rational(9, 20));
        const auto w = materialize(C, BoxParams::interval(-20000, 20000));
        for (std::int64_t L1 : {1, 3, 17, 100, 333})
            for (std::int64_t L2 : {2, 5, 64, 250}) {
                auto f = [&](std::int64_t L) { return max_window_count(w, L, -10000, 10000); };
                CHECK(f(L1 + L2) <= f(L1) + f(L2));
            }
    }

    TEST_CASE("density ordering at every scale") {
        const auto sets = {golden(Rational(0), Rational(3, 10)), set_intersect({golden(Rational(0), Rational(1, 2)), half_line(1)}),
                           set_union({periodic(3, {1}), golden(Rational(1, 3), Rational(1, 2))})};
        for (const auto& A : sets)
            for (std::int64_t n : {500, 5000}) {
                const auto fam = sym();
                const auto d = density_along(A, fam, n);
                const std::int64_t L = 2 * n + 1;
                const auto w = materialize(A, BoxParams::interval(-3 * n, 3 * n));
                const double bu = banach_density(w, true, L, -3 * n, n - 1).value;
                const double bl = banach_density(w, false, L, -3 * n, n - 1).value;
                // a tiny tail keeps only F_n itself
                const auto dn = density_along(w, fam, n, 1e-9);
                CHECK(bu >= dn.upper.value - 1e-12);
                CHECK(dn.upper.value >= dn.lower.value);
                CHECK(dn.lower.value >= bl - 1e-12);
                CHECK(d.upper.value >= d.lower.value);
            }
    }

    TEST_CASE("thickness") {
        const auto N = half_line(1);
        for (std::int64_t L : {1, 10, 1000}) CHECK(is_thick_at_scale(N, L, -5000, 5000).thick);
        CHECK(*is_thick_at_scale(N, 10, -5000, 5000).witness == 1);
        const auto C = golden(Rational(0), Rational(3, 10));
        for (std::int64_t L : {4, 5, 50}) CHECK_FALSE(is_thick_at_scale(C, L, -1000000, 1000000).thick);
        std::vector<std::int64_t> xs;
        for (int k = 0; k <= 16; ++k)
            for (int j = 0; j <= k; ++j) xs.push_back((std::int64_t{1} << k) + j);
        const auto U = explicit_ints(xs);
        for (std::int64_t L = 7; L <= 14; ++L) {
            const auto t = is_thick_at_scale(U, L, 0, 70000);
            REQUIRE(t.thick);
            CHECK(*t.witness == (std::int64_t{1} << (L - 1)));
        }
        CHECK(*is_thick_at_scale(U, 6, 0, 70000).witness == 1);  // 1..6 is already a run
        // banach_upper = 1 at L0 gives thickness for every L <= L0
        const auto w = materialize(U, BoxParams::interval(0, 70000));
        const std::int64_t L0 = 12;
        REQUIRE(banach_density(w, true, L0, 0, 70000 - L0 + 1).value == 1.0);
        for (std::int64_t L = 1; L <= L0; ++L) CHECK(is_thick_at_scale(w, L, 0, 70000 - L + 1).thick);
    }

    TEST_CASE("syndeticity") {
        const auto s = is_syndetic_at_scale(periodic(2, {0}), 2, -1000, 1000);
        CHECK(s.syndetic);
        CHECK(s.max_gap == 2);
        const auto C = golden(Rational(0), Rational(3, 10));
        CHECK_FALSE(is_syndetic_at_scale(set_intersect({C, half_line(1)}), 100, -1000000, 1000000).syndetic);
        const auto sc = is_syndetic_at_scale(C, 5, -1000000, 1000000);
        CHECK(sc.syndetic);
        CHECK(sc.max_gap == 5);
        CHECK_FALSE(is_syndetic_at_scale(C, 4, -1000000, 1000000).syndetic);
    }

    TEST_CASE("Folner defects") {
        const auto Z = sym();
        CHECK(folner_defect(Z, 10, IntElt{1}) == Rational(2, 21));
        for (std::int64_t n = 1; n <= 30; ++n) CHECK(folner_defect(Z, n, IntElt{1}) == Rational(2, 2 * n + 1));
        CHECK(folner_defect(Z, 7, IntElt{0}) == Rational(0));
        const auto G = GroupDescriptor::solvable(2);
        const auto box = FolnerFamily::parse(G, "box");
        const auto skew = FolnerFamily::parse(G, "skew");
        const Element a = affine_elt(2, Rational(1), 0), r = affine_elt(2, Rational(0), 1);
        for (const auto& fam : {box, skew})
            for (std::int64_t n = 1; n <= 3; ++n)
                for (const auto& g : {a, r, affine_elt(2, Rational(3, 2), -1), identity(G)})
                    CHECK(folner_defect(fam, n, g) == defect_oracle(fam, n, g));
        Rational prev_a(3), prev_r(3);
        for (std::int64_t n = 2; n <= 8; ++n) {
            const Rational da = folner_defect(box, n, a), dr = folner_defect(box, n, r);
            CHECK(da < prev_a);
            CHECK(dr < prev_r);
            prev_a = da;
            prev_r = dr;
        }
        CHECK(folner_defect(box, 5, identity(G)) == Rational(0));
        // the skew family is Folner for both generators
        CHECK(folner_defect(skew, 8, r).to_double() < 0.3);
        CHECK(folner_defect(skew, 8, a).to_double() < 0.01);
        const auto D = FolnerFamily{GroupDescriptor::dihedral_inf(), FolnerFamily::Kind::Symmetric};
        CHECK(folner_defect(D, 4, DihElt{0, -1}) == defect_oracle(D, 4, DihElt{0, -1}));
        CHECK(folner_defect(D, 4, DihElt{1, 1}) == Rational(2, 9));
    }

    TEST_CASE("CSV and JSON output") {
        const auto d = density_along(periodic(2, {0}), sym(), 100);
        std::ostringstream out;
        write_csv(out, d.rows);
        const std::string text = out.str();
        CHECK(text.rfind("n,size,count,ratio\n", 0) == 0);
        CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(d.rows.size()) + 1);
        const auto j = to_json(d.upper);
        CHECK(j.at("mode") == "upper_along");
        CHECK(j.at("value").get<double>() == d.upper.value);
    }
}

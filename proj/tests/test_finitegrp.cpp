#include <doctest.h>

#include <random>

#include "sumset/errors.hpp"
#include "sumset/finitegrp.hpp"

using namespace sumset;

namespace {

Mask bits(std::initializer_list<int> xs) {
    Mask m = 0;
    for (int x : xs) m |= Mask{1} << x;
    return m;
}

// Element-by-element products, for comparison with the byte tables.
Mask naive_product(const FiniteGroup& k, Mask A, Mask B) {
    Mask out = 0;
    for (int a = 0; a < k.order(); ++a)
        if (mask_has(A, a))
            for (int b = 0; b < k.order(); ++b)
                if (mask_has(B, b)) out |= Mask{1} << k.op(a, b);
    return out;
}

Mask naive_inv(const FiniteGroup& k, Mask A) {
    Mask out = 0;
    for (int a = 0; a < k.order(); ++a)
        if (mask_has(A, a)) out |= Mask{1} << k.inverse(a);
    return out;
}

bool naive_spread_out(const FiniteGroup& k, Mask I) {
    for (Mask U : subgroups_of(k))
        if (U != full_mask(k.order()) && naive_product(k, I, U) != full_mask(k.order())) return false;
    return true;
}

}  // namespace

TEST_SUITE("finitegrp") {
    TEST_CASE("mask tables agree with element products") {
        std::mt19937_64 rng(3);
        for (const char* name : {"Z7", "S3", "Q8", "A4", "D8", "Z2xZ2xZ4"}) {
            const auto k = small_groups::by_name(name);
            const MaskOps ops(k);
            for (int t = 0; t < 200; ++t) {
                const Mask A = rng() & ops.full(), B = rng() & ops.full();
                REQUIRE(ops.product(A, B) == naive_product(k, A, B));
                REQUIRE(ops.inv(A) == naive_inv(k, A));
                const int g = static_cast<int>(rng() % k.order());
                CHECK(ops.left(g, A) == naive_product(k, Mask{1} << g, A));
                CHECK(ops.right(A, g) == naive_product(k, A, Mask{1} << g));
                CHECK(product_mask(k, A, B) == naive_product(k, naive_inv(k, A), B));
                CHECK(product_mask(k, A, B, ProductKind::InvRight) == naive_product(k, A, naive_inv(k, B)));
            }
        }
    }

    TEST_CASE("spread-out and stabilizers") {
        const auto z4 = small_groups::cyclic(4);
        CHECK_FALSE(spread_out_mask(z4, bits({0, 1})));
        CHECK(spread_out_mask(z4, full_mask(4)));
        CHECK(stabilizer_mask(z4, bits({0, 2})) == bits({0, 2}));
        CHECK(stabilizer_mask(z4, bits({0, 1})) == bits({0}));
        std::mt19937_64 rng(11);
        for (const char* name : {"Z6", "S3", "D4", "Q8", "Z2xZ4"}) {
            const auto k = small_groups::by_name(name);
            for (Mask I = 1; I <= full_mask(k.order()); ++I) {
                CHECK(spread_out_mask(k, I) == naive_spread_out(k, I));
                const Mask S = stabilizer_mask(k, I);
                CHECK(naive_product(k, S, I) == I);
            }
        }
    }

    TEST_CASE("reductions") {
        const auto z5 = small_groups::cyclic(5);
        CHECK_FALSE(find_reduction(z5, bits({0, 1}), bits({0, 1})).has_value());
        const auto z6 = small_groups::cyclic(6);
        const auto w = find_reduction(z6, bits({0, 3}), bits({0, 3}));
        REQUIRE(w.has_value());
        CHECK(w->quotient->order() == 3);
        CHECK(w->kernel == bits({0, 3}));
        CHECK(w->verify(z6, bits({0, 3}), bits({0, 3})));
        CHECK_FALSE(w->verify(z6, bits({0, 1}), bits({0, 3})));
        // with the identity quotient allowed, Z5 {0,1} reduces to itself
        const auto self = find_reduction(z5, bits({0, 1}), bits({0, 1}), true);
        REQUIRE(self.has_value());
        CHECK(self->quotient->order() == 5);
        const auto j = w->to_json();
        CHECK(j.at("quotient_order") == 3);
    }

    TEST_CASE("enlarged I1") {
        std::mt19937_64 rng(5);
        for (const char* name : {"Z5", "Z6", "S3", "D4", "Q8"}) {
            const auto m = small_groups::by_name(name);
            const MaskOps ops(m);
            for (int t = 0; t < 300; ++t) {
                const Mask Io = (rng() & ops.full()) | 1, Jo = (rng() & ops.full()) | 2;
                const Mask I1 = enlarge_I1(m, Io, Jo);
                const Mask P = ops.product(ops.inv(Io), Jo);
                CHECK((I1 & Io) == Io);
                CHECK(ops.product(ops.inv(I1), Jo) == P);
                // s in I1 iff s^-1 J_o is inside I_o^-1 J_o
                for (int s = 0; s < m.order(); ++s)
                    CHECK(mask_has(I1, s) == ((ops.left(m.inverse(s), Jo) & ~P) == 0));
            }
        }
        CHECK_THROWS_AS(enlarge_I1(small_groups::cyclic(3), 1, 0), PreconditionError);
    }

    TEST_CASE("Kemperman structure on small groups") {
        for (const auto& name : kemperman_exhaustive_groups()) {
            const auto k = small_groups::by_name(name);
            if (k.order() > 6) continue;
            const auto r = kemperman_verify(k);
            CHECK(r.exhaustive);
            CHECK(r.violations == 0);
            CHECK(r.pairs_checked == (full_mask(k.order())) * full_mask(k.order()));
            CHECK(r.last_assertion_checks > 0);
        }
    }

    TEST_CASE("Kneser structure on abelian groups") {
        for (const auto& name : abelian_groups_up_to(8)) {
            const auto r = kneser_abelian_verify(small_groups::by_name(name));
            CHECK(r.violations == 0);
        }
    }

    TEST_CASE("sampling is seeded") {
        VerifyOptions o;
        o.exhaustive_max_order = 4;
        o.samples = 3000;
        const auto k = small_groups::by_name("Z9");
        const auto a = kemperman_verify(k, o), b = kemperman_verify(k, o);
        CHECK_FALSE(a.exhaustive);
        CHECK(a.to_json() == b.to_json());
        CHECK(a.violations == 0);
        o.seed = 1;
        CHECK(kemperman_verify(k, o).hypothesis_pairs != a.hypothesis_pairs);
    }
}

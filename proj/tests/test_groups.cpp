#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "sumset/errors.hpp"
#include "sumset/groups.hpp"

using namespace sumset;

namespace {

Element aff(std::int64_t p, std::int64_t num, std::int64_t den, std::int64_t k) {
    return affine_elt(p, Rational(num, den), k);
}

// Direct rational evaluation of the affine law, independent of PAdic.
std::pair<Rational, std::int64_t> affine_oracle(std::int64_t p, std::pair<Rational, std::int64_t> x,
                                                std::pair<Rational, std::int64_t> y) {
    Rational scale(1);
    for (std::int64_t i = 0; i < std::abs(x.second); ++i) scale = scale * Rational(p);
    if (x.second < 0) scale = Rational(1) / scale;
    return {x.first + scale * y.first, x.second + y.second};
}

void check_axioms(const GroupDescriptor& g, const std::vector<Element>& elts) {
    const Element e = identity(g);
    for (const auto& x : elts) {
        CHECK(group_op(g, e, x) == x);
        CHECK(group_op(g, x, e) == x);
        CHECK(group_op(g, x, inverse(g, x)) == e);
        CHECK(group_op(g, inverse(g, x), x) == e);
    }
    for (const auto& x : elts)
        for (const auto& y : elts)
            for (const auto& z : elts)
                REQUIRE(group_op(g, group_op(g, x, y), z) == group_op(g, x, group_op(g, y, z)));
}

}  // namespace

TEST_SUITE("groups") {
    TEST_CASE("integer and dihedral laws") {
        const auto Z = GroupDescriptor::int_line();
        CHECK(group_op(Z, int_elt(2), int_elt(3)) == int_elt(5));
        CHECK(inverse(Z, int_elt(5)) == int_elt(-5));
        const auto D = GroupDescriptor::dihedral_inf();
        CHECK(group_op(D, dih_elt(1, -1), dih_elt(2, 1)) == dih_elt(-1, -1));
        CHECK_THROWS_AS(group_op(Z, int_elt(1), dih_elt(0, 1)), TypeError);
    }

    TEST_CASE("solvable law against a rational oracle") {
        const auto G = GroupDescriptor::solvable(2);
        CHECK(group_op(G, aff(2, 1, 2, 1), aff(2, 1, 1, 0)) == aff(2, 5, 2, 1));
        std::mt19937_64 rng(7);
        for (std::int64_t p : {2, 3, 6}) {
            const auto H = GroupDescriptor::solvable(p);
            for (int t = 0; t < 300; ++t) {
                auto draw = [&] {
                    const std::int64_t num = static_cast<std::int64_t>(rng() % 41) - 20;
                    std::int64_t den = 1;
                    for (int i = 0, e = static_cast<int>(rng() % 3); i < e; ++i) den *= p;
                    return std::pair{Rational(num, den), static_cast<std::int64_t>(rng() % 7) - 3};
                };
                const auto x = draw(), y = draw();
                const auto want = affine_oracle(p, x, y);
                CHECK(group_op(H, affine_elt(p, x.first, x.second), affine_elt(p, y.first, y.second)) ==
                      affine_elt(p, want.first, want.second));
            }
        }
    }

    TEST_CASE("PAdic valuation tests") {
        const PAdic a = PAdic::from_rational(Rational(3, 4), 2);
        CHECK(a.num == 3);
        CHECK(a.val == -2);
        CHECK(a.in_pk_z(-2));
        CHECK_FALSE(a.in_pk_z(-1));
        CHECK(PAdic{}.in_pk_z(100));
        CHECK(PAdic::from_rational(Rational(12), 2).in_pk_z(2));
        CHECK_FALSE(PAdic::from_rational(Rational(12), 2).in_pk_z(3));
        CHECK(padd(2, a, pneg(a)).is_zero());
        CHECK(pshift(a, 2) == PAdic::integer(3, 2));
        CHECK_THROWS(PAdic::from_rational(Rational(1, 3), 2));
    }

    TEST_CASE("group axioms on boxes") {
        check_axioms(GroupDescriptor::int_line(), enumerate_box(GroupDescriptor::int_line(), BoxParams::interval(-4, 4)));
        check_axioms(GroupDescriptor::dihedral_inf(),
                     enumerate_box(GroupDescriptor::dihedral_inf(), BoxParams::interval(-3, 3)));
        check_axioms(GroupDescriptor::solvable(2),
                     enumerate_box(GroupDescriptor::solvable(2), BoxParams::solvable(1, 2)));
        check_axioms(GroupDescriptor::lattice(2),
                     enumerate_box(GroupDescriptor::lattice(2), BoxParams::lattice({{-1, 1}, {0, 2}})));
        check_axioms(GroupDescriptor::cyclic(6), enumerate_box(GroupDescriptor::cyclic(6), BoxParams::whole()));
        const auto q8 = std::make_shared<const FiniteGroup>(small_groups::by_name("Q8"));
        check_axioms(GroupDescriptor::finite(q8, "Q8"),
                     enumerate_box(GroupDescriptor::finite(q8, "Q8"), BoxParams::whole()));
    }

    TEST_CASE("conjugate_set") {
        const auto G = GroupDescriptor::solvable(2);
        CHECK(conjugate_set(G, aff(2, 0, 1, 1), {aff(2, 1, 2, 0)}) == std::vector<Element>{aff(2, 1, 1, 0)});
        CHECK(conjugate_set(G, aff(2, 0, 1, 2), {aff(2, 1, 2, 0), aff(2, 3, 4, 0)}) ==
              std::vector<Element>{aff(2, 2, 1, 0), aff(2, 3, 1, 0)});
        const auto box = enumerate_box(G, BoxParams::solvable(1, 2));
        const std::vector<Element> F(box.begin(), box.begin() + 6);
        std::vector<Element> sorted = F;
        std::sort(sorted.begin(), sorted.end());
        CHECK(conjugate_set(G, identity(G), F) == sorted);
        for (const auto& g : box) CHECK(conjugate_set(G, g, conjugate_set(G, inverse(G, g), F)) == sorted);
    }

    TEST_CASE("box enumeration") {
        const auto Z = GroupDescriptor::int_line();
        CHECK(enumerate_box(Z, BoxParams::interval(-2, 2)).size() == 5);
        const auto G = GroupDescriptor::solvable(2);
        const auto box = enumerate_box(G, BoxParams::solvable(1, 2));
        CHECK(box.size() == 15);
        CHECK(box_size(G, BoxParams::solvable(1, 2)) == 15);
        std::set<Element> uniq(box.begin(), box.end());
        CHECK(uniq.size() == box.size());
        for (std::size_t i = 0; i < box.size(); ++i) CHECK(box_index(G, BoxParams::solvable(1, 2), box[i]) == (std::int64_t)i);
        const auto skew = enumerate_box(G, BoxParams::solvable(3, 4, BoxParams::Shape::Skew));
        CHECK(skew.size() == 12);
        for (std::size_t i = 0; i < skew.size(); ++i)
            CHECK(box_index(G, BoxParams::solvable(3, 4, BoxParams::Shape::Skew), skew[i]) == (std::int64_t)i);
        const auto D = GroupDescriptor::dihedral_inf();
        const auto d = enumerate_box(D, BoxParams::interval(0, 1));
        CHECK(d.size() == 4);
        CHECK(std::set<Element>(d.begin(), d.end()) ==
              std::set<Element>{dih_elt(0, 1), dih_elt(0, -1), dih_elt(1, 1), dih_elt(1, -1)});
        CHECK_THROWS_AS(enumerate_box(Z, BoxParams::interval(0, std::int64_t{1} << 45)), ResourceError);
    }

    TEST_CASE("finite groups and quotients") {
        const auto z6 = small_groups::cyclic(6);
        std::vector<Mask> normals;
        std::vector<int> orders;
        for (const auto& q : quotients_of(z6)) {
            normals.push_back(q.kernel);
            orders.push_back(q.group->order());
        }
        CHECK(orders == std::vector<int>{1, 2, 3, 6});
        std::sort(normals.begin(), normals.end());
        CHECK(normals == std::vector<Mask>{0b1, 0b1001, 0b10101, 0b111111});
        CHECK(quotients_of(small_groups::cyclic(5)).size() == 2);

        const FiniteGroup s3 = FiniteGroup::load(SUMSET_DATA_DIR "/groups/S3.txt");
        std::vector<int> s3_orders;
        for (const auto& q : quotients_of(s3)) s3_orders.push_back(mask_count(q.kernel));
        std::sort(s3_orders.begin(), s3_orders.end());
        CHECK(s3_orders == std::vector<int>{1, 3, 6});
        CHECK(subgroups_of(s3).size() == 6);
        CHECK(subgroups_of(small_groups::dihedral(4)).size() == 10);
        CHECK(subgroups_of(small_groups::by_name("Q8")).size() == 6);
        CHECK_THROWS_AS(quotients_of(small_groups::cyclic(17)), ResourceError);

        // projections are homomorphisms
        for (const char* name : {"Z12", "D6", "A4", "Dic3", "Z2xZ6", "Q8"}) {
            const auto k = small_groups::by_name(name);
            for (const auto& q : quotients_of(k))
                for (int a = 0; a < k.order(); ++a)
                    for (int b = 0; b < k.order(); ++b)
                        REQUIRE(q.projection[k.op(a, b)] == q.group->op(q.projection[a], q.projection[b]));
        }
    }

    TEST_CASE("Cayley table round trip") {
        for (const char* name : {"S3", "Q8", "Z2xZ4", "A4"}) {
            const auto k = small_groups::by_name(name);
            std::istringstream in(k.to_text());
            const auto back = FiniteGroup::parse(in);
            CHECK(back == k);
            CHECK(back.to_text() == k.to_text());
        }
        std::istringstream labelled("order 2\n0 1\n1 0\ne a\n");
        const auto z2 = FiniteGroup::parse(labelled);
        CHECK(z2.labels() == std::vector<std::string>{"e", "a"});
        CHECK(z2.to_text() == "order 2\n0 1\n1 0\ne a\n");
        std::istringstream bad("order 2\n0 1\n0 1\n");
        CHECK_THROWS_AS(FiniteGroup::parse(bad), InputError);
        std::istringstream nonassoc("order 3\n0 1 2\n1 0 2\n2 2 0\n");
        CHECK_THROWS_AS(FiniteGroup::parse(nonassoc), InputError);
    }

    TEST_CASE("element and descriptor JSON") {
        const auto G = GroupDescriptor::solvable(3);
        const Element x = aff(3, 5, 9, -2);
        CHECK(element_from_json(G, element_to_json(G, x)) == x);
        CHECK(descriptor_from_json(descriptor_to_json(G)) == G);
        CHECK(descriptor_from_json(descriptor_to_json(GroupDescriptor::lattice(3))) == GroupDescriptor::lattice(3));
        CHECK_THROWS_AS(descriptor_from_json({{"kind", "Nope"}}), InputError);
    }
}

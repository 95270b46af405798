#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sumset/finite_group.hpp"
#include "sumset/rational.hpp"

namespace sumset {

// Element num * p^val of Z[1/p] with p not dividing num. Zero is stored
// with num = 0 and val = kInfVal so that equality is structural.
struct PAdic {
    static constexpr std::int64_t kInfVal = std::numeric_limits<std::int64_t>::max();

    std::int64_t num = 0;
    std::int64_t val = kInfVal;

    static PAdic make(std::int64_t num, std::int64_t val, std::int64_t p);
    static PAdic from_rational(const Rational& x, std::int64_t p);
    static PAdic integer(std::int64_t n, std::int64_t p) { return make(n, 0, p); }

    bool is_zero() const { return num == 0; }
    // True iff the value lies in p^k Z.
    bool in_pk_z(std::int64_t k) const { return num == 0 || val >= k; }
    bool is_integer() const { return in_pk_z(0); }

    Rational to_rational(std::int64_t p) const;
    long double approx(std::int64_t p) const;

    friend bool operator==(const PAdic&, const PAdic&) = default;
    friend auto operator<=>(const PAdic&, const PAdic&) = default;
};

PAdic padd(std::int64_t p, const PAdic& a, const PAdic& b);
PAdic pneg(const PAdic& a);
// a * p^k
PAdic pshift(const PAdic& a, std::int64_t k);

struct IntElt {
    std::int64_t n = 0;
    friend auto operator<=>(const IntElt&, const IntElt&) = default;
};
struct VecElt {
    std::vector<std::int64_t> v;
    friend auto operator<=>(const VecElt&, const VecElt&) = default;
};
struct ResElt {
    std::int64_t r = 0;
    friend auto operator<=>(const ResElt&, const ResElt&) = default;
};
struct DihElt {
    std::int64_t m = 0;
    int eps = 1;
    friend auto operator<=>(const DihElt&, const DihElt&) = default;
};
// (a, k) in Z[1/p] x| Z with (a,k)(b,l) = (a + p^k b, k + l).
struct AffineElt {
    PAdic a;
    std::int64_t k = 0;
    friend auto operator<=>(const AffineElt&, const AffineElt&) = default;
};
struct TableElt {
    int i = 0;
    friend auto operator<=>(const TableElt&, const TableElt&) = default;
};

using Element = std::variant<IntElt, VecElt, ResElt, DihElt, AffineElt, TableElt>;

enum class GroupKind { IntLine, IntLattice, Cyclic, FiniteTable, DihedralInf, SolvablePK };

struct GroupDescriptor {
    GroupKind kind = GroupKind::IntLine;
    std::int64_t param = 0;  // d for IntLattice, m for Cyclic, p for SolvablePK
    FiniteGroupPtr table;
    std::string table_id;

    static GroupDescriptor int_line() { return {}; }
    static GroupDescriptor lattice(std::int64_t d);
    static GroupDescriptor cyclic(std::int64_t m);
    static GroupDescriptor finite(FiniteGroupPtr table, std::string id);
    static GroupDescriptor dihedral_inf();
    static GroupDescriptor solvable(std::int64_t p);

    // Element has the right variant and satisfies its invariants.
    bool contains(const Element& g) const;
    std::string name() const;

    friend bool operator==(const GroupDescriptor& a, const GroupDescriptor& b) {
        return a.kind == b.kind && a.param == b.param && a.table_id == b.table_id;
    }
};

Element identity(const GroupDescriptor& desc);
Element group_op(const GroupDescriptor& desc, const Element& g, const Element& h);
Element inverse(const GroupDescriptor& desc, const Element& g);
// { g f g^-1 : f in F }, sorted and duplicate free.
std::vector<Element> conjugate_set(const GroupDescriptor& desc, const Element& g, const std::vector<Element>& F);

// Shorthand constructors.
inline Element int_elt(std::int64_t n) { return IntElt{n}; }
inline Element dih_elt(std::int64_t m, int eps) { return DihElt{m, eps}; }
Element affine_elt(std::int64_t p, const Rational& a, std::int64_t k);

std::string to_string(const GroupDescriptor& desc, const Element& g);
nlohmann::json element_to_json(const GroupDescriptor& desc, const Element& g);
Element element_from_json(const GroupDescriptor& desc, const nlohmann::json& j);
nlohmann::json descriptor_to_json(const GroupDescriptor& desc);
// FiniteTable descriptors are resolved with small_groups::by_name or, if
// the id names a file, FiniteGroup::load.
GroupDescriptor descriptor_from_json(const nlohmann::json& j);

// Finite truncation boxes.
//   IntLine, DihedralInf: [lo, hi] (times {-1, 1})
//   IntLattice:           product of ranges
//   Cyclic, FiniteTable:  the whole group
//   SolvablePK:           Default: {(j p^-n, k) : |k| <= n, |j| <= J}
//                         Skew:    {(j p^(k-n), k) : 0 <= k < n, 0 <= j < J}
struct BoxParams {
    enum class Shape { Default, Skew };

    std::int64_t lo = 0;
    std::int64_t hi = -1;
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    int n = 0;
    std::int64_t J = 0;
    Shape shape = Shape::Default;

    static BoxParams interval(std::int64_t lo, std::int64_t hi);
    static BoxParams lattice(std::vector<std::pair<std::int64_t, std::int64_t>> ranges);
    static BoxParams solvable(int n, std::int64_t J, Shape shape = Shape::Default);
    static BoxParams whole() { return {}; }
};

std::uint64_t box_size(const GroupDescriptor& desc, const BoxParams& box);
bool box_contains(const GroupDescriptor& desc, const BoxParams& box, const Element& g);
// Exact duplicate-free enumeration in a fixed order; throws ResourceError
// when the box would exceed the memory budget.
std::vector<Element> enumerate_box(const GroupDescriptor& desc, const BoxParams& box);
// Position of g in enumerate_box order, or -1.
std::int64_t box_index(const GroupDescriptor& desc, const BoxParams& box, const Element& g);

// Memory budget in bytes, from SUMSET_MEMORY_MB (default 4096).
std::uint64_t memory_budget_bytes();
void require_budget(std::uint64_t bytes, const std::string& what);

}  // namespace sumset

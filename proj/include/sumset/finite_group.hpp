#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace sumset {

// A finite group given by its Cayley table. Elements are indices 0..n-1.
// The constructor verifies the group axioms (closure, associativity,
// identity, inverses) and throws InputError otherwise.
class FiniteGroup {
public:
    using Table = std::vector<std::vector<int>>;

    explicit FiniteGroup(Table table, std::vector<std::string> labels = {}, std::string name = {});

    int order() const { return static_cast<int>(table_.size()); }
    int identity() const { return identity_; }
    int op(int a, int b) const { return table_[a][b]; }
    int inverse(int a) const { return inverse_[a]; }
    const Table& table() const { return table_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& name() const { return name_; }
    bool is_abelian() const;

    // Cayley table text format: "order n", n rows of n zero-based indices,
    // then an optional row of labels.
    static FiniteGroup parse(std::istream& in, std::string name = {});
    static FiniteGroup load(const std::string& path);
    void write(std::ostream& out) const;
    std::string to_text() const;

    friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) { return a.table_ == b.table_; }

private:
    Table table_;
    std::vector<std::string> labels_;
    std::string name_;
    int identity_ = 0;
    std::vector<int> inverse_;
};

using FiniteGroupPtr = std::shared_ptr<const FiniteGroup>;

// Standard small groups, generated as Cayley tables.
namespace small_groups {

FiniteGroup cyclic(int n);
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);
// Dihedral group of order 2n: index i + n*e stands for r^i s^e.
FiniteGroup dihedral(int n);
// Dicyclic group of order 4n (n = 2 gives the quaternion group Q8).
FiniteGroup dicyclic(int n);
FiniteGroup symmetric(int n);
FiniteGroup alternating(int n);
// Closure of the given permutations of {0..degree-1}.
FiniteGroup from_permutations(const std::vector<std::vector<int>>& generators, std::string name = {});

// Parses names such as "Z6", "Z2xZ4", "S3", "D4", "Q8", "A4", "Dic3".
// Dn denotes the dihedral group of order 2n.
FiniteGroup by_name(const std::string& name);

}  // namespace small_groups

// Subsets of a finite group of order <= 64 as bit masks.
using Mask = std::uint64_t;

constexpr int kMaxMaskOrder = 64;

inline Mask full_mask(int order) { return order == 64 ? ~Mask{0} : ((Mask{1} << order) - 1); }
inline bool mask_has(Mask m, int i) { return (m >> i) & 1U; }
inline int mask_count(Mask m) { return __builtin_popcountll(m); }

// All subgroups, ordered by order then by mask value.
std::vector<Mask> subgroups_of(const FiniteGroup& k);
bool is_subgroup(const FiniteGroup& k, Mask h);
bool is_normal(const FiniteGroup& k, Mask h);

struct Quotient {
    Mask kernel = 0;                // normal subgroup N
    std::shared_ptr<const FiniteGroup> group;  // M = K / N
    std::vector<int> projection;    // K -> M
};

// Every quotient of k, ordered by |M| ascending (so the trivial quotient is
// first and K / {e} is last). Throws ResourceError if |K| > max_order.
std::vector<Quotient> quotients_of(const FiniteGroup& k, int max_order = 16);

}  // namespace sumset

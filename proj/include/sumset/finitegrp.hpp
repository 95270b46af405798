#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumset/finite_group.hpp"
#include "sumset/rational.hpp"

namespace sumset {

// Translation tables for fast mask arithmetic: a translate of a 64-bit mask
// costs eight byte lookups.
class MaskOps {
public:
    explicit MaskOps(const FiniteGroup& k);

    const FiniteGroup& group() const { return *k_; }
    Mask full() const { return full_mask(k_->order()); }
    Mask left(int g, Mask m) const;   // g m
    Mask right(Mask m, int g) const;  // m g
    Mask inv(Mask m) const;           // m^-1
    Mask product(Mask a, Mask b) const;  // a b

private:
    Mask apply(const std::vector<Mask>& table, int g, Mask m) const;

    const FiniteGroup* k_;
    int bytes_;
    std::vector<Mask> left_, right_, inv_;  // [g][byte][value] flattened
};

enum class ProductKind { InvLeft, Plain, InvRight };  // I^-1 J, I J, I J^-1
Mask product_mask(const FiniteGroup& k, Mask I, Mask J, ProductKind kind = ProductKind::InvLeft);

struct ReductionWitness {
    Mask kernel = 0;
    std::shared_ptr<const FiniteGroup> quotient;
    std::vector<int> projection;
    Mask I_o = 0, J_o = 0;

    // Re-checks I in p^-1(I_o), J in p^-1(J_o), m_K(I^-1 J) = m_M(I_o^-1 J_o),
    // and that p is a surjective homomorphism.
    bool verify(const FiniteGroup& k, Mask I, Mask J) const;
    nlohmann::json to_json() const;
};

Mask project_mask(const std::vector<int>& projection, Mask I);

// Smallest quotient M (by order) in which (p(I), p(J)) is a pair of proper
// subsets with equal product measure. The identity quotient M = K is only
// considered when allow_identity is set.
std::optional<ReductionWitness> find_reduction(const FiniteGroup& k, Mask I, Mask J, bool allow_identity = false);
std::optional<ReductionWitness> find_reduction(const FiniteGroup& k, const std::vector<Quotient>& quotients, Mask I,
                                               Mask J, bool allow_identity = false);

// I_1 with I_1^-1 = intersection over y in J_o of I_o^-1 J_o y^-1.
Mask enlarge_I1(const FiniteGroup& m, Mask I_o, Mask J_o);

Mask stabilizer_mask(const FiniteGroup& k, Mask I);
// I U = K for every proper subgroup U (the trivial subgroup included).
bool spread_out_mask(const FiniteGroup& k, Mask I);

struct VerifyReport {
    std::string theorem;
    std::string group;
    int order = 0;
    bool exhaustive = true;
    std::uint64_t seed = 0;
    std::uint64_t pairs_checked = 0;
    std::uint64_t hypothesis_pairs = 0;
    std::uint64_t violations = 0;
    std::uint64_t last_assertion_checks = 0;
    std::map<int, std::uint64_t> quotient_orders;  // |M| of the witness -> count
    std::optional<nlohmann::json> first_counterexample;

    void merge(const VerifyReport& o);
    nlohmann::json to_json() const;
};

struct VerifyOptions {
    int exhaustive_max_order = 8;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 20240531;
};

// For every nonempty (I, J) with m(I^-1 J) < 1 and m(I^-1 J) < m(I) + m(J):
// neither I nor J is spread-out, a reduction to proper subsets exists,
// and s^-1 J_o in I_o^-1 J_o forces s in I_1.
VerifyReport kemperman_verify(const FiniteGroup& k, const VerifyOptions& opts = {});

// Abelian K: for every nonempty (I, J) with m(I^-1 J) < min(1, m(I) + m(J)),
// the reduction through H = Stab(I^-1 J) has trivial Stab_M(I_o) and
// m_M(I_o^-1 J_o) = m_M(I_o) + m_M(J_o) - 1/|M|.
VerifyReport kneser_abelian_verify(const FiniteGroup& k);

// Groups used by the verification suites.
std::vector<std::string> kemperman_exhaustive_groups();
std::vector<std::string> kemperman_sampled_groups();
std::vector<std::string> abelian_groups_up_to(int order);

}  // namespace sumset

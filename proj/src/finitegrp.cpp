#include "sumset/finitegrp.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "sumset/errors.hpp"
#include "sumset/parallel.hpp"

namespace sumset {

using nlohmann::json;

namespace {

std::vector<Mask> build_table(int n, int bytes, int elements, auto&& image) {
    std::vector<Mask> t(static_cast<std::size_t>(elements) * bytes * 256, 0);
    for (int g = 0; g < elements; ++g)
        for (int b = 0; b < bytes; ++b)
            for (int v = 0; v < 256; ++v) {
                Mask m = 0;
                for (int i = 0; i < 8; ++i) {
                    const int x = 8 * b + i;
                    if ((v >> i & 1) && x < n) m |= Mask{1} << image(g, x);
                }
                t[(static_cast<std::size_t>(g) * bytes + b) * 256 + v] = m;
            }
    return t;
}

json mask_json(Mask m, int n) {
    json arr = json::array();
    for (int i = 0; i < n; ++i)
        if (mask_has(m, i)) arr.push_back(i);
    return arr;
}

}  // namespace

MaskOps::MaskOps(const FiniteGroup& k) : k_(&k), bytes_((k.order() + 7) / 8) {
    if (k.order() > kMaxMaskOrder) throw ResourceError("group order exceeds 64-element mask limit");
    const int n = k.order();
    left_ = build_table(n, bytes_, n, [&](int g, int x) { return k.op(g, x); });
    right_ = build_table(n, bytes_, n, [&](int g, int x) { return k.op(x, g); });
    inv_ = build_table(n, bytes_, 1, [&](int, int x) { return k.inverse(x); });
}

Mask MaskOps::apply(const std::vector<Mask>& table, int g, Mask m) const {
    Mask out = 0;
    const std::size_t base = static_cast<std::size_t>(g) * bytes_ * 256;
    for (int b = 0; b < bytes_; ++b) out |= table[base + b * 256 + ((m >> (8 * b)) & 0xff)];
    return out;
}

Mask MaskOps::left(int g, Mask m) const { return apply(left_, g, m); }
Mask MaskOps::right(Mask m, int g) const { return apply(right_, g, m); }
Mask MaskOps::inv(Mask m) const { return apply(inv_, 0, m); }

Mask MaskOps::product(Mask a, Mask b) const {
    Mask out = 0;
    while (a) {
        const int g = __builtin_ctzll(a);
        a &= a - 1;
        out |= left(g, b);
    }
    return out;
}

Mask product_mask(const FiniteGroup& k, Mask I, Mask J, ProductKind kind) {
    const MaskOps ops(k);
    switch (kind) {
        case ProductKind::InvLeft:
            return ops.product(ops.inv(I), J);
        case ProductKind::Plain:
            return ops.product(I, J);
        case ProductKind::InvRight:
            return ops.product(I, ops.inv(J));
    }
    return 0;
}

Mask project_mask(const std::vector<int>& projection, Mask I) {
    Mask out = 0;
    while (I) {
        const int g = __builtin_ctzll(I);
        I &= I - 1;
        out |= Mask{1} << projection[g];
    }
    return out;
}

namespace {

bool verify_with(const FiniteGroup& k, const MaskOps& kops, const MaskOps& mops, const ReductionWitness& w, Mask I,
                 Mask J) {
    if (!w.quotient || static_cast<int>(w.projection.size()) != k.order()) return false;
    const FiniteGroup& m = *w.quotient;
    const auto& proj = w.projection;
    // surjective homomorphism with the stated kernel
    Mask image = 0, ker = 0;
    for (int a = 0; a < k.order(); ++a) {
        image |= Mask{1} << proj[a];
        if (proj[a] == m.identity()) ker |= Mask{1} << a;
        for (int b = 0; b < k.order(); ++b)
            if (proj[k.op(a, b)] != m.op(proj[a], proj[b])) return false;
    }
    if (image != full_mask(m.order()) || ker != w.kernel) return false;
    if ((project_mask(proj, I) & ~w.I_o) != 0 || (project_mask(proj, J) & ~w.J_o) != 0) return false;
    const Mask pk = kops.product(kops.inv(I), J), pm = mops.product(mops.inv(w.I_o), w.J_o);
    return static_cast<std::int64_t>(mask_count(pk)) * m.order() ==
           static_cast<std::int64_t>(mask_count(pm)) * k.order();
}

// Reduction through one quotient: proper projections with equal product measure.
std::optional<ReductionWitness> reduce_with(const FiniteGroup& k, const MaskOps& kops, const Quotient& q,
                                            const MaskOps& mops, Mask I, Mask J) {
    const FiniteGroup& m = *q.group;
    const Mask io = project_mask(q.projection, I), jo = project_mask(q.projection, J);
    const Mask full = full_mask(m.order());
    if (io == full || jo == full) return std::nullopt;
    const std::int64_t pk = mask_count(kops.product(kops.inv(I), J));
    const std::int64_t pm = mask_count(mops.product(mops.inv(io), jo));
    if (pk * m.order() != pm * k.order()) return std::nullopt;
    ReductionWitness w{q.kernel, q.group, q.projection, io, jo};
    if (!verify_with(k, kops, mops, w, I, J)) throw std::logic_error("reduction witness failed its own check");
    return w;
}

}  // namespace

bool ReductionWitness::verify(const FiniteGroup& k, Mask I, Mask J) const {
    if (!quotient) return false;
    return verify_with(k, MaskOps(k), MaskOps(*quotient), *this, I, J);
}

json ReductionWitness::to_json() const {
    const int n = static_cast<int>(projection.size());
    const int mo = quotient ? quotient->order() : 0;
    return {{"kernel", mask_json(kernel, n)},
            {"quotient_order", mo},
            {"projection", projection},
            {"I_o", mask_json(I_o, mo)},
            {"J_o", mask_json(J_o, mo)}};
}

std::optional<ReductionWitness> find_reduction(const FiniteGroup& k, const std::vector<Quotient>& quotients, Mask I,
                                               Mask J, bool allow_identity) {
    const MaskOps kops(k);
    for (const auto& q : quotients) {
        if (q.group->order() == k.order() && !allow_identity) continue;
        if (auto w = reduce_with(k, kops, q, MaskOps(*q.group), I, J)) return w;
    }
    return std::nullopt;
}

std::optional<ReductionWitness> find_reduction(const FiniteGroup& k, Mask I, Mask J, bool allow_identity) {
    return find_reduction(k, quotients_of(k), I, J, allow_identity);
}

Mask enlarge_I1(const FiniteGroup& m, Mask I_o, Mask J_o) {
    if (J_o == 0) throw PreconditionError("enlarge_I1 needs a nonempty J_o");
    const MaskOps ops(m);
    const Mask P = ops.product(ops.inv(I_o), J_o);
    Mask R = ops.full();
    for (Mask y = J_o; y; y &= y - 1) R &= ops.right(P, m.inverse(__builtin_ctzll(y)));
    return ops.inv(R);
}

namespace {

Mask stabilizer_with(const MaskOps& ops, Mask I) {
    Mask s = 0;
    for (int g = 0; g < ops.group().order(); ++g)
        if (ops.left(g, I) == I) s |= Mask{1} << g;
    return s;
}

bool spread_out_with(const MaskOps& ops, const std::vector<Mask>& proper_subgroups, Mask I) {
    for (Mask u : proper_subgroups)
        if (ops.product(I, u) != ops.full()) return false;
    return true;
}

std::vector<Mask> proper_subgroups(const FiniteGroup& k) {
    auto all = subgroups_of(k);
    all.erase(std::remove(all.begin(), all.end(), full_mask(k.order())), all.end());
    return all;
}

}  // namespace

Mask stabilizer_mask(const FiniteGroup& k, Mask I) {
    const MaskOps ops(k);
    const Mask s = stabilizer_with(ops, I);
    if (!is_subgroup(k, s)) throw std::logic_error("stabilizer is not a subgroup");
    return s;
}

bool spread_out_mask(const FiniteGroup& k, Mask I) {
    const MaskOps ops(k);
    return spread_out_with(ops, proper_subgroups(k), I);
}

void VerifyReport::merge(const VerifyReport& o) {
    pairs_checked += o.pairs_checked;
    hypothesis_pairs += o.hypothesis_pairs;
    violations += o.violations;
    last_assertion_checks += o.last_assertion_checks;
    for (auto [m, c] : o.quotient_orders) quotient_orders[m] += c;
    if (!first_counterexample && o.first_counterexample) first_counterexample = o.first_counterexample;
}

json VerifyReport::to_json() const {
    json hist = json::object();
    for (auto [m, c] : quotient_orders) hist[std::to_string(m)] = c;
    json j = {{"theorem", theorem},
              {"group", group},
              {"order", order},
              {"exhaustive", exhaustive},
              {"pairs_checked", pairs_checked},
              {"hypothesis_pairs", hypothesis_pairs},
              {"violations", violations},
              {"last_assertion_checks", last_assertion_checks},
              {"witness_quotient_orders", hist},
              {"first_counterexample", first_counterexample ? *first_counterexample : json(nullptr)}};
    if (!exhaustive) j["seed"] = seed;
    return j;
}

namespace {

struct KempermanCtx {
    const FiniteGroup& k;
    MaskOps ops;
    std::vector<Quotient> quotients;
    std::vector<std::unique_ptr<MaskOps>> qops;
    std::vector<Mask> proper;

    explicit KempermanCtx(const FiniteGroup& g) : k(g), ops(g), quotients(quotients_of(g)), proper(proper_subgroups(g)) {
        for (const auto& q : quotients) qops.push_back(std::make_unique<MaskOps>(*q.group));
    }

    void check(Mask I, Mask J, VerifyReport& r) const {
        const int n = k.order();
        ++r.pairs_checked;
        const int p = mask_count(ops.product(ops.inv(I), J));
        if (!(p < n && p < mask_count(I) + mask_count(J))) return;
        ++r.hypothesis_pairs;
        std::string failure;
        if (spread_out_with(ops, proper, I)) failure = "I is spread-out";
        if (failure.empty() && spread_out_with(ops, proper, J)) failure = "J is spread-out";
        std::size_t qi = 0;
        std::optional<ReductionWitness> w;
        if (failure.empty()) {
            // smallest quotient first; the identity quotient is admitted
            for (qi = 0; qi < quotients.size(); ++qi) {
                w = reduce_with(k, ops, quotients[qi], *qops[qi], I, J);
                if (w) break;
            }
            if (!w) failure = "no reduction to proper subsets";
        }
        if (failure.empty()) {
            const MaskOps& mo = *qops[qi];
            const FiniteGroup& m = *w->quotient;
            ++r.quotient_orders[m.order()];
            const Mask I1 = enlarge_I1(m, w->I_o, w->J_o);
            const Mask Po = mo.product(mo.inv(w->I_o), w->J_o);
            if ((w->I_o & ~I1) != 0 || mo.product(mo.inv(I1), w->J_o) != Po) failure = "I_1 postcondition";
            for (int s = 0; s < m.order() && failure.empty(); ++s) {
                ++r.last_assertion_checks;
                if ((mo.left(m.inverse(s), w->J_o) & ~Po) == 0 && !mask_has(I1, s))
                    failure = "s^-1 J_o in I_o^-1 J_o but s not in I_1";
            }
        }
        if (!failure.empty()) {
            ++r.violations;
            if (!r.first_counterexample)
                r.first_counterexample = json{{"I", mask_json(I, n)}, {"J", mask_json(J, n)}, {"reason", failure}};
        }
    }
};

Mask random_subset(std::mt19937_64& rng, const FiniteGroup& k, const std::vector<Mask>& subgroups, const MaskOps& ops) {
    const int n = k.order();
    Mask m = 0;
    if (rng() % 2 == 0 || subgroups.empty()) {
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        const int size = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
        for (int i = 0; i < size; ++i) m |= Mask{1} << idx[i];
        return m;
    }
    // a few cosets of a random subgroup, possibly thinned
    const Mask h = subgroups[rng() % subgroups.size()];
    const int cosets = 1 + static_cast<int>(rng() % 3);
    for (int c = 0; c < cosets; ++c) m |= ops.left(static_cast<int>(rng() % n), h);
    const int drop = static_cast<int>(rng() % 3);
    for (int d = 0; d < drop && mask_count(m) > 1; ++d) {
        const int x = static_cast<int>(rng() % n);
        if (mask_has(m, x) && mask_count(m) > 1) m &= ~(Mask{1} << x);
    }
    return m;
}

}  // namespace

VerifyReport kemperman_verify(const FiniteGroup& k, const VerifyOptions& opts) {
    const int n = k.order();
    KempermanCtx ctx(k);
    VerifyReport r;
    r.theorem = "kemperman";
    r.group = k.name();
    r.order = n;
    r.exhaustive = n <= opts.exhaustive_max_order;
    const Mask full = full_mask(n);
    if (r.exhaustive) {
        const std::uint64_t masks = full;  // nonempty masks 1..full
        std::vector<VerifyReport> parts(static_cast<std::size_t>(std::max(1, worker_count())));
        const std::uint64_t step = (masks + parts.size() - 1) / parts.size();
        parallel_for(parts.size(), [&](std::uint64_t b, std::uint64_t e) {
            for (std::uint64_t w = b; w < e; ++w)
                for (std::uint64_t I = 1 + w * step; I <= std::min<std::uint64_t>(masks, (w + 1) * step); ++I)
                    for (Mask J = 1; J <= full; ++J) ctx.check(I, J, parts[w]);
        });
        for (const auto& p : parts) r.merge(p);
        return r;
    }
    r.seed = opts.seed;
    std::mt19937_64 rng(opts.seed);
    std::vector<Mask> subs = ctx.proper;
    for (std::uint64_t s = 0; s < opts.samples; ++s) {
        const Mask I = random_subset(rng, k, subs, ctx.ops);
        const Mask J = random_subset(rng, k, subs, ctx.ops);
        ctx.check(I, J, r);
    }
    return r;
}

VerifyReport kneser_abelian_verify(const FiniteGroup& k) {
    if (!k.is_abelian()) throw PreconditionError("kneser_abelian_verify needs an abelian group");
    const int n = k.order();
    const MaskOps ops(k);
    const auto quotients = quotients_of(k);
    std::vector<std::unique_ptr<MaskOps>> qops;
    for (const auto& q : quotients) qops.push_back(std::make_unique<MaskOps>(*q.group));
    VerifyReport r;
    r.theorem = "kneser-abelian";
    r.group = k.name();
    r.order = n;
    const Mask full = full_mask(n);
    for (Mask I = 1; I <= full && I != 0; ++I)
        for (Mask J = 1; J <= full && J != 0; ++J) {
            ++r.pairs_checked;
            const Mask P = ops.product(ops.inv(I), J);
            const int p = mask_count(P);
            if (!(p < n && p < mask_count(I) + mask_count(J))) continue;
            ++r.hypothesis_pairs;
            const Mask H = stabilizer_with(ops, P);
            std::string failure;
            std::size_t qi = 0;
            while (qi < quotients.size() && quotients[qi].kernel != H) ++qi;
            if (qi == quotients.size()) {
                failure = "stabilizer is not a normal subgroup";
            } else {
                const Quotient& q = quotients[qi];
                const MaskOps& mo = *qops[qi];
                const FiniteGroup& m = *q.group;
                ReductionWitness w{q.kernel, q.group, q.projection, project_mask(q.projection, I),
                                   project_mask(q.projection, J)};
                if (!verify_with(k, ops, mo, w, I, J)) failure = "reduction through Stab(I^-1 J) fails";
                const Mask stab_o = stabilizer_with(mo, w.I_o);
                if (failure.empty() && stab_o != (Mask{1} << m.identity())) failure = "Stab_M(I_o) is not trivial";
                const Mask Po = mo.product(mo.inv(w.I_o), w.J_o);
                if (failure.empty() && mask_count(Po) != mask_count(w.I_o) + mask_count(w.J_o) - 1)
                    failure = "m(I_o^-1 J_o) != m(I_o) + m(J_o) - 1/|M|";
                if (failure.empty()) {
                    ++r.quotient_orders[m.order()];
                    for (int s = 0; s < m.order(); ++s) {
                        ++r.last_assertion_checks;
                        if ((mo.left(m.inverse(s), w.J_o) & ~Po) == 0 && !mask_has(w.I_o, s)) {
                            failure = "s^-1 J_o in I_o^-1 J_o but s not in I_o";
                            break;
                        }
                    }
                }
            }
            if (!failure.empty()) {
                ++r.violations;
                if (!r.first_counterexample)
                    r.first_counterexample = json{{"I", mask_json(I, n)}, {"J", mask_json(J, n)}, {"reason", failure}};
            }
        }
    return r;
}

std::vector<std::string> kemperman_exhaustive_groups() {
    return {"Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z2xZ2", "Z2xZ4", "S3", "D4", "Q8"};
}

std::vector<std::string> kemperman_sampled_groups() {
    return {"Z9",  "Z3xZ3", "Z10", "D5",  "Z11", "Z12", "Z2xZ6", "D6",    "A4",    "Dic3",
            "Z13", "Z14",   "D7",  "Z15", "Z16", "Z4xZ4", "Z2xZ8", "D8", "Q16", "Z2xZ2xZ4"};
}

std::vector<std::string> abelian_groups_up_to(int order) {
    const std::vector<std::pair<int, std::string>> all = {
        {1, "Z1"},  {2, "Z2"},       {3, "Z3"}, {4, "Z4"},       {4, "Z2xZ2"},    {5, "Z5"},  {6, "Z6"},
        {7, "Z7"},  {8, "Z8"},       {8, "Z2xZ4"}, {8, "Z2xZ2xZ2"}, {9, "Z9"}, {9, "Z3xZ3"}, {10, "Z10"},
        {11, "Z11"}, {12, "Z12"},    {12, "Z2xZ6"}};
    std::vector<std::string> out;
    for (const auto& [o, name] : all)
        if (o <= order) out.push_back(name);
    return out;
}

}  // namespace sumset

#include "sumset/setspec.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include <fftw3.h>

#include "sumset/cxmachine.hpp"
#include "sumset/errors.hpp"
#include "sumset/parallel.hpp"

namespace sumset {

using nlohmann::json;

namespace {

SetExprPtr make(SetExpr e) { return std::make_shared<const SetExpr>(std::move(e)); }

void require_int_line(const GroupDescriptor& g, const char* what) {
    if (g.kind != GroupKind::IntLine) throw TypeError(std::string(what) + " is only defined on IntLine");
}

const GroupDescriptor& common_group(const std::vector<SetExprPtr>& parts) {
    if (parts.empty()) throw PreconditionError("empty operand list");
    for (const auto& p : parts)
        if (!(p->group == parts.front()->group))
            throw TypeError("operands live in different groups: " + p->group.name() + " vs " +
                            parts.front()->group.name());
    return parts.front()->group;
}

const std::vector<std::string> kBuiltins = {"S", "SinvS", "T", "NL2", "cx1.A", "cx1.B", "cx1.AB"};

}  // namespace

SetExprPtr explicit_set(const GroupDescriptor& g, std::vector<Element> elements) {
    for (const auto& e : elements)
        if (!g.contains(e)) throw TypeError("explicit element not in " + g.name());
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    SetExpr e;
    e.kind = NodeKind::Explicit;
    e.group = g;
    e.elements = std::move(elements);
    return make(std::move(e));
}

SetExprPtr explicit_ints(std::vector<std::int64_t> values) {
    std::vector<Element> els;
    for (auto v : values) els.push_back(IntElt{v});
    return explicit_set(GroupDescriptor::int_line(), std::move(els));
}

SetExprPtr periodic(std::int64_t m, std::vector<std::int64_t> residues) {
    if (m < 1) throw PreconditionError("period must be >= 1");
    for (auto r : residues)
        if (r < 0 || r >= m) throw PreconditionError("residue out of [0, m)");
    std::sort(residues.begin(), residues.end());
    residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
    SetExpr e;
    e.kind = NodeKind::Periodic;
    e.modulus = m;
    e.residues = std::move(residues);
    return make(std::move(e));
}

SetExprPtr half_line(int sign) {
    SetExpr e;
    e.kind = NodeKind::HalfLine;
    e.sign = sign >= 0 ? 1 : -1;
    return make(std::move(e));
}

SetExprPtr sturmian_set(const SturmianSpec& spec) {
    spec.validate();
    if (spec.twisted) return twisted_sturmian(spec);
    SetExpr e;
    e.kind = NodeKind::Sturmian;
    e.sturmian = spec;
    return make(std::move(e));
}

SetExprPtr twisted_sturmian(const SturmianSpec& spec) {
    spec.validate();
    SetExpr e;
    e.kind = NodeKind::TwistedSturmian;
    e.group = GroupDescriptor::dihedral_inf();
    e.sturmian = spec;
    e.sturmian.twisted = true;
    return make(std::move(e));
}

SetExprPtr singleton(const GroupDescriptor& g, const Element& x) {
    if (!g.contains(x)) throw TypeError("singleton element not in " + g.name());
    SetExpr e;
    e.kind = NodeKind::Singleton;
    e.group = g;
    e.elements = {x};
    return make(std::move(e));
}

SetExprPtr set_union(std::vector<SetExprPtr> parts) {
    SetExpr e;
    e.kind = NodeKind::Union;
    e.group = common_group(parts);
    e.children = std::move(parts);
    return make(std::move(e));
}

SetExprPtr set_intersect(std::vector<SetExprPtr> parts) {
    SetExpr e;
    e.kind = NodeKind::Intersect;
    e.group = common_group(parts);
    e.children = std::move(parts);
    return make(std::move(e));
}

SetExprPtr complement(SetExprPtr a) {
    SetExpr e;
    e.kind = NodeKind::Complement;
    e.group = a->group;
    e.children = {std::move(a)};
    return make(std::move(e));
}

SetExprPtr translate(const Element& g, SetExprPtr a, bool left) {
    if (!a->group.contains(g)) throw TypeError("translate element not in " + a->group.name());
    SetExpr e;
    e.kind = NodeKind::Translate;
    e.group = a->group;
    e.elements = {g};
    e.left = left;
    e.children = {std::move(a)};
    return make(std::move(e));
}

SetExprPtr product_set(SetExprPtr a, SetExprPtr b) {
    SetExpr e;
    e.kind = NodeKind::ProductSet;
    e.group = common_group({a, b});
    e.children = {std::move(a), std::move(b)};
    return make(std::move(e));
}

SetExprPtr inverse_set(SetExprPtr a) {
    SetExpr e;
    e.kind = NodeKind::InverseSet;
    e.group = a->group;
    e.children = {std::move(a)};
    return make(std::move(e));
}

SetExprPtr builtin(const GroupDescriptor& g, const std::string& name, const SturmianSpec& params) {
    if (g.kind != GroupKind::SolvablePK) throw TypeError("builtin sets live on SolvablePK");
    if (std::find(kBuiltins.begin(), kBuiltins.end(), name) == kBuiltins.end())
        throw InputError("unknown builtin set '" + name + "'");
    SetExpr e;
    e.kind = NodeKind::Builtin;
    e.group = g;
    e.name = name;
    e.sturmian = params;
    if (name == "cx1.B") Cx1Params::from_spec(params).validate();
    return make(std::move(e));
}

SetExprPtr universe(const GroupDescriptor& g) { return complement(explicit_set(g, {})); }

bool contains_product(const SetExpr& e) {
    if (e.kind == NodeKind::ProductSet) return true;
    for (const auto& c : e.children)
        if (contains_product(*c)) return true;
    return false;
}

bool member(const SetExpr& e, const Element& g) {
    if (!e.group.contains(g)) throw TypeError("element not in " + e.group.name());
    switch (e.kind) {
        case NodeKind::Explicit:
            return std::binary_search(e.elements.begin(), e.elements.end(), g);
        case NodeKind::Singleton:
            return e.elements.front() == g;
        case NodeKind::Periodic:
            return std::binary_search(e.residues.begin(), e.residues.end(), floor_mod(std::get<IntElt>(g).n, e.modulus));
        case NodeKind::HalfLine:
            return e.sign > 0 ? std::get<IntElt>(g).n >= 1 : std::get<IntElt>(g).n <= -1;
        case NodeKind::Sturmian:
            return sturmian_member(e.sturmian, std::get<IntElt>(g).n);
        case NodeKind::TwistedSturmian:
            return twisted_member(e.sturmian, std::get<DihElt>(g).m, std::get<DihElt>(g).eps);
        case NodeKind::Union:
            for (const auto& c : e.children)
                if (member(*c, g)) return true;
            return false;
        case NodeKind::Intersect:
            for (const auto& c : e.children)
                if (!member(*c, g)) return false;
            return true;
        case NodeKind::Complement:
            return !member(*e.children[0], g);
        case NodeKind::Translate: {
            const Element ti = inverse(e.group, e.elements[0]);
            return member(*e.children[0], e.left ? group_op(e.group, ti, g) : group_op(e.group, g, ti));
        }
        case NodeKind::InverseSet:
            return member(*e.children[0], inverse(e.group, g));
        case NodeKind::ProductSet:
            throw UnsupportedQuery("membership in a product set needs a window (use product_window)");
        case NodeKind::Builtin: {
            const CxContext ctx(e.group.param);
            const auto& x = std::get<AffineElt>(g);
            if (e.name == "S") return member_S(ctx, x);
            if (e.name == "SinvS") return member_SinvS(ctx, x);
            if (e.name == "T") return member_T(ctx, x);
            if (e.name == "NL2") return member_NL2(x);
            if (e.name == "cx1.A") return cx1_member_A(ctx, x);
            if (e.name == "cx1.B") return cx1_member_B(ctx, Cx1Params::from_spec(e.sturmian), x);
            if (e.name == "cx1.AB") return cx1_member_AB(ctx, x);
            throw InputError("unknown builtin '" + e.name + "'");
        }
    }
    return false;
}

IntBounds int_bounds(const SetExpr& e) {
    IntBounds b;
    switch (e.kind) {
        case NodeKind::Explicit:
        case NodeKind::Singleton:
            if (!e.elements.empty() && e.group.kind == GroupKind::IntLine) {
                b.lo = std::get<IntElt>(e.elements.front()).n;
                b.hi = std::get<IntElt>(e.elements.back()).n;
            } else if (e.elements.empty()) {
                b.lo = 0;
                b.hi = -1;
            }
            return b;
        case NodeKind::HalfLine:
            if (e.sign > 0)
                b.lo = 1;
            else
                b.hi = -1;
            return b;
        case NodeKind::Union: {
            bool all_lo = true, all_hi = true;
            for (const auto& c : e.children) {
                IntBounds cb = int_bounds(*c);
                if (cb.lo && cb.hi && *cb.lo > *cb.hi) continue;  // empty
                if (cb.lo && all_lo)
                    b.lo = b.lo ? std::min(*b.lo, *cb.lo) : *cb.lo;
                else
                    all_lo = false;
                if (cb.hi && all_hi)
                    b.hi = b.hi ? std::max(*b.hi, *cb.hi) : *cb.hi;
                else
                    all_hi = false;
            }
            if (!all_lo) b.lo.reset();
            if (!all_hi) b.hi.reset();
            if (!b.lo && !b.hi && all_lo && all_hi) {
                b.lo = 0;
                b.hi = -1;
            }
            return b;
        }
        case NodeKind::Intersect:
            for (const auto& c : e.children) {
                IntBounds cb = int_bounds(*c);
                if (cb.lo) b.lo = b.lo ? std::max(*b.lo, *cb.lo) : *cb.lo;
                if (cb.hi) b.hi = b.hi ? std::min(*b.hi, *cb.hi) : *cb.hi;
            }
            return b;
        case NodeKind::Translate: {
            if (e.group.kind != GroupKind::IntLine) return b;
            IntBounds cb = int_bounds(*e.children[0]);
            const std::int64_t t = std::get<IntElt>(e.elements[0]).n;
            if (cb.lo) b.lo = *cb.lo + t;
            if (cb.hi) b.hi = *cb.hi + t;
            return b;
        }
        case NodeKind::InverseSet: {
            IntBounds cb = int_bounds(*e.children[0]);
            if (cb.hi) b.lo = -*cb.hi;
            if (cb.lo) b.hi = -*cb.lo;
            return b;
        }
        case NodeKind::ProductSet: {
            IntBounds x = int_bounds(*e.children[0]), y = int_bounds(*e.children[1]);
            if (x.lo && y.lo) b.lo = *x.lo + *y.lo;
            if (x.hi && y.hi) b.hi = *x.hi + *y.hi;
            return b;
        }
        default:
            return b;
    }
}

namespace {

std::mutex g_fftw_mutex;

void or_shifted(std::vector<std::uint8_t>& out, const std::vector<std::uint8_t>& src, std::uint64_t offset) {
    std::uint8_t* dst = out.data() + offset;
    const std::uint8_t* s = src.data();
    const std::uint64_t n = src.size();
    for (std::uint64_t j = 0; j < n; ++j) dst[j] |= s[j];
}

std::vector<std::uint8_t> convolve_fft(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    const std::uint64_t need = a.size() + b.size() - 1;
    std::uint64_t N = 1;
    while (N < need) N <<= 1;
    require_budget(N * (2 * sizeof(double) + 2 * sizeof(fftw_complex) / 2) + need, "FFT sumset");
    const std::uint64_t H = N / 2 + 1;
    double* fa = fftw_alloc_real(N);
    double* fb = fftw_alloc_real(N);
    fftw_complex* ca = fftw_alloc_complex(H);
    fftw_complex* cb = fftw_alloc_complex(H);
    if (!fa || !fb || !ca || !cb) {
        fftw_free(fa);
        fftw_free(fb);
        fftw_free(ca);
        fftw_free(cb);
        throw ResourceError("FFT allocation failed");
    }
    fftw_plan pa, pb, pc;
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        pa = fftw_plan_dft_r2c_1d(static_cast<int>(N), fa, ca, FFTW_ESTIMATE);
        pb = fftw_plan_dft_r2c_1d(static_cast<int>(N), fb, cb, FFTW_ESTIMATE);
        pc = fftw_plan_dft_c2r_1d(static_cast<int>(N), ca, fa, FFTW_ESTIMATE);
    }
    std::fill(fa, fa + N, 0.0);
    std::fill(fb, fb + N, 0.0);
    for (std::uint64_t i = 0; i < a.size(); ++i) fa[i] = a[i];
    for (std::uint64_t i = 0; i < b.size(); ++i) fb[i] = b[i];
    fftw_execute(pa);
    fftw_execute(pb);
    for (std::uint64_t i = 0; i < H; ++i) {
        const double re = ca[i][0] * cb[i][0] - ca[i][1] * cb[i][1];
        const double im = ca[i][0] * cb[i][1] + ca[i][1] * cb[i][0];
        ca[i][0] = re;
        ca[i][1] = im;
    }
    fftw_execute(pc);
    std::vector<std::uint8_t> out(need);
    const double half = 0.5 * static_cast<double>(N);
    for (std::uint64_t i = 0; i < need; ++i) out[i] = fa[i] > half;
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_destroy_plan(pa);
        fftw_destroy_plan(pb);
        fftw_destroy_plan(pc);
    }
    fftw_free(fa);
    fftw_free(fb);
    fftw_free(ca);
    fftw_free(cb);
    return out;
}

struct EvalCtx {
    const GroupDescriptor& group;
    const BoxParams& box;
    std::uint64_t n;
    std::vector<Element> elems;
    bool have_elems = false;

    const std::vector<Element>& elements() {
        if (!have_elems) {
            elems = enumerate_box(group, box);
            have_elems = true;
        }
        return elems;
    }
};

std::vector<std::uint8_t> eval_mask(const SetExprPtr& e, EvalCtx& c, bool& exact);

std::vector<std::uint8_t> per_element(const SetExpr& e, EvalCtx& c) {
    if (contains_product(e)) throw UnsupportedQuery("product set below a translate/inverse/builtin node");
    std::vector<std::uint8_t> mask(c.n, 0);
    if (c.group.kind == GroupKind::IntLine) {
        parallel_for(c.n, [&](std::uint64_t b, std::uint64_t end) {
            for (std::uint64_t i = b; i < end; ++i) mask[i] = member(e, IntElt{c.box.lo + static_cast<std::int64_t>(i)});
        });
        return mask;
    }
    const auto& els = c.elements();
    parallel_for(c.n, [&](std::uint64_t b, std::uint64_t end) {
        for (std::uint64_t i = b; i < end; ++i) mask[i] = member(e, els[i]);
    });
    return mask;
}

std::vector<std::uint8_t> eval_mask(const SetExprPtr& ep, EvalCtx& c, bool& exact) {
    const SetExpr& e = *ep;
    if (!(e.group == c.group)) throw TypeError("expression group " + e.group.name() + " differs from window group");
    const bool line = c.group.kind == GroupKind::IntLine;
    std::vector<std::uint8_t> mask;
    switch (e.kind) {
        case NodeKind::Explicit:
        case NodeKind::Singleton:
            mask.assign(c.n, 0);
            for (const auto& x : e.elements) {
                std::int64_t idx = box_index(c.group, c.box, x);
                if (idx >= 0) mask[static_cast<std::uint64_t>(idx)] = 1;
            }
            return mask;
        case NodeKind::Periodic: {
            mask.assign(c.n, 0);
            std::vector<std::uint8_t> hit(e.modulus, 0);
            for (auto r : e.residues) hit[r] = 1;
            std::int64_t r = floor_mod(c.box.lo, e.modulus);
            for (std::uint64_t i = 0; i < c.n; ++i) {
                mask[i] = hit[r];
                if (++r == e.modulus) r = 0;
            }
            return mask;
        }
        case NodeKind::HalfLine:
            mask.assign(c.n, 0);
            for (std::uint64_t i = 0; i < c.n; ++i) {
                const std::int64_t x = c.box.lo + static_cast<std::int64_t>(i);
                mask[i] = e.sign > 0 ? x >= 1 : x <= -1;
            }
            return mask;
        case NodeKind::Sturmian:
        case NodeKind::TwistedSturmian:
            return sturmian_members(e.sturmian, c.group, c.box).mask;
        case NodeKind::Union:
        case NodeKind::Intersect: {
            mask = eval_mask(e.children[0], c, exact);
            for (std::size_t k = 1; k < e.children.size(); ++k) {
                auto m = eval_mask(e.children[k], c, exact);
                if (e.kind == NodeKind::Union)
                    for (std::uint64_t i = 0; i < c.n; ++i) mask[i] |= m[i];
                else
                    for (std::uint64_t i = 0; i < c.n; ++i) mask[i] &= m[i];
            }
            return mask;
        }
        case NodeKind::Complement: {
            bool child_exact = true;
            mask = eval_mask(e.children[0], c, child_exact);
            if (!child_exact) exact = false;
            for (auto& v : mask) v ^= 1;
            return mask;
        }
        case NodeKind::Translate:
            if (line) {
                const std::int64_t t = std::get<IntElt>(e.elements[0]).n;
                WindowSet w = materialize(e.children[0], BoxParams::interval(c.box.lo - t, c.box.hi - t));
                if (!w.exact) exact = false;
                return std::move(w.mask);
            }
            return per_element(e, c);
        case NodeKind::InverseSet:
            if (line) {
                WindowSet w = materialize(e.children[0], BoxParams::interval(-c.box.hi, -c.box.lo));
                if (!w.exact) exact = false;
                std::reverse(w.mask.begin(), w.mask.end());
                return std::move(w.mask);
            }
            return per_element(e, c);
        case NodeKind::ProductSet: {
            WindowSet w = product_window(e.children[0], e.children[1], c.box);
            if (!w.exact) exact = false;
            return std::move(w.mask);
        }
        case NodeKind::Builtin:
            return per_element(e, c);
    }
    return mask;
}

std::optional<std::vector<Element>> finite_elements(const SetExpr& e) {
    if (e.kind == NodeKind::Explicit || e.kind == NodeKind::Singleton) return e.elements;
    if (e.kind == NodeKind::Union) {
        std::vector<Element> all;
        for (const auto& c : e.children) {
            auto f = finite_elements(*c);
            if (!f) return std::nullopt;
            all.insert(all.end(), f->begin(), f->end());
        }
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        return all;
    }
    if (e.kind == NodeKind::Intersect) {
        for (std::size_t k = 0; k < e.children.size(); ++k) {
            auto f = finite_elements(*e.children[k]);
            if (!f) continue;
            std::vector<Element> kept;
            for (const auto& x : *f) {
                bool in = true;
                for (std::size_t j = 0; j < e.children.size() && in; ++j)
                    if (j != k) in = member(*e.children[j], x);
                if (in) kept.push_back(x);
            }
            return kept;
        }
    }
    return std::nullopt;
}

BoxParams inflate(const GroupDescriptor& g, const BoxParams& box) {
    switch (g.kind) {
        case GroupKind::IntLine:
        case GroupKind::DihedralInf: {
            const std::int64_t d = box.hi - box.lo + 1;
            return BoxParams::interval(box.lo - d, box.hi + d);
        }
        case GroupKind::IntLattice: {
            auto r = box.ranges;
            for (auto& [a, b] : r) {
                const std::int64_t d = b - a + 1;
                a -= d;
                b += d;
            }
            return BoxParams::lattice(r);
        }
        case GroupKind::SolvablePK:
            return BoxParams::solvable(2 * box.n, checked_mul(std::max<std::int64_t>(box.J, 1),
                                                            checked_pow(g.param, box.n)));
        default:
            return box;
    }
}

WindowSet generic_product(const SetExprPtr& a, const SetExprPtr& b, const BoxParams& out) {
    const GroupDescriptor& g = a->group;
    WindowSet w;
    w.group = g;
    w.box = out;
    const auto outs = enumerate_box(g, out);
    w.mask.assign(outs.size(), 0);
    if (g.kind == GroupKind::Cyclic || g.kind == GroupKind::FiniteTable) {
        WindowSet ma = materialize(a, out), mb = materialize(b, out);
        w.exact = ma.exact && mb.exact;
        for (std::uint64_t i = 0; i < outs.size(); ++i) {
            if (!ma.mask[i]) continue;
            for (std::uint64_t j = 0; j < outs.size(); ++j)
                if (mb.mask[j]) w.mask[box_index(g, out, group_op(g, outs[i], outs[j]))] = 1;
        }
        return w;
    }
    auto fa = finite_elements(*a);
    auto fb = finite_elements(*b);
    if (fa && !contains_product(*b)) {
        std::vector<Element> inv;
        for (const auto& x : *fa) inv.push_back(inverse(g, x));
        require_budget(outs.size() * inv.size() / 16, "finite-operand product");
        parallel_for(outs.size(), [&](std::uint64_t lo, std::uint64_t hi) {
            for (std::uint64_t i = lo; i < hi; ++i)
                for (const auto& ai : inv)
                    if (member(*b, group_op(g, ai, outs[i]))) {
                        w.mask[i] = 1;
                        break;
                    }
        });
        return w;
    }
    if (fb && !contains_product(*a)) {
        std::vector<Element> inv;
        for (const auto& x : *fb) inv.push_back(inverse(g, x));
        require_budget(outs.size() * inv.size() / 16, "finite-operand product");
        parallel_for(outs.size(), [&](std::uint64_t lo, std::uint64_t hi) {
            for (std::uint64_t i = lo; i < hi; ++i)
                for (const auto& bi : inv)
                    if (member(*a, group_op(g, outs[i], bi))) {
                        w.mask[i] = 1;
                        break;
                    }
        });
        return w;
    }
    if (contains_product(*b)) throw UnsupportedQuery("nested products with infinite operands are not supported");
    // Lower approximation: factors a taken from an inflated box.
    const BoxParams wa = inflate(g, out);
    WindowSet ma = materialize(a, wa);
    std::vector<Element> as = ma.members();
    const double work = static_cast<double>(as.size()) * static_cast<double>(outs.size());
    if (work > 2e8) throw ResourceError("inflated product window needs " + std::to_string(work) + " membership tests");
    for (auto& x : as) x = inverse(g, x);
    parallel_for(outs.size(), [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i)
            for (const auto& ai : as)
                if (member(*b, group_op(g, ai, outs[i]))) {
                    w.mask[i] = 1;
                    break;
                }
    });
    w.exact = false;
    return w;
}

}  // namespace

WindowSet materialize(const SetExprPtr& e, const BoxParams& window) {
    WindowSet w;
    w.group = e->group;
    w.box = window;
    const std::uint64_t n = box_size(e->group, window);
    require_budget(n * 2, "materialized window");
    EvalCtx c{e->group, window, n, {}, false};
    bool exact = true;
    w.mask = eval_mask(e, c, exact);
    w.exact = exact;
    return w;
}

WindowSet int_restrict(const WindowSet& w, std::int64_t lo, std::int64_t hi) {
    WindowSet out = int_window(lo, hi);
    out.exact = w.exact;
    const std::int64_t a = std::max(lo, w.box.lo), b = std::min(hi, w.box.hi);
    for (std::int64_t x = a; x <= b; ++x) out.mask[x - lo] = w.mask[x - w.box.lo];
    return out;
}

WindowSet int_sumset(const WindowSet& a, const WindowSet& b) {
    require_int_line(a.group, "int_sumset");
    require_int_line(b.group, "int_sumset");
    WindowSet out = int_window(a.box.lo + b.box.lo, a.box.hi + b.box.hi);
    out.exact = a.exact && b.exact;
    const WindowSet& small = a.count() <= b.count() ? a : b;
    const WindowSet& large = &small == &a ? b : a;
    const std::uint64_t cs = small.count();
    if (cs == 0 || large.count() == 0) return out;
    if (cs <= 256 || static_cast<double>(cs) * static_cast<double>(large.size()) <= 5e7) {
        for (std::uint64_t i = 0; i < small.size(); ++i)
            if (small.mask[i]) or_shifted(out.mask, large.mask, i);
        return out;
    }
    out.mask = convolve_fft(a.mask, b.mask);
    return out;
}

WindowSet product_window(const SetExprPtr& a, const SetExprPtr& b, const BoxParams& out) {
    const GroupDescriptor& g = common_group({a, b});
    if (g.kind != GroupKind::IntLine) return generic_product(a, b, out);
    const IntBounds ba = int_bounds(*a), bb = int_bounds(*b);
    const std::int64_t lo = out.lo, hi = out.hi;
    bool exact = true;
    std::int64_t a0, a1, b0, b1;
    if (ba.lo && ba.hi) {
        a0 = *ba.lo, a1 = *ba.hi, b0 = lo - a1, b1 = hi - a0;
    } else if (bb.lo && bb.hi) {
        b0 = *bb.lo, b1 = *bb.hi, a0 = lo - b1, a1 = hi - b0;
    } else if (ba.lo && bb.lo) {
        a0 = *ba.lo, a1 = hi - *bb.lo, b0 = *bb.lo, b1 = hi - *ba.lo;
    } else if (ba.hi && bb.hi) {
        a0 = lo - *bb.hi, a1 = *ba.hi, b0 = lo - *ba.hi, b1 = *bb.hi;
    } else {
        const std::int64_t d = hi - lo + 1;
        a0 = lo - d, a1 = hi + d;
        if (ba.lo) a0 = std::max(a0, *ba.lo);
        if (ba.hi) a1 = std::min(a1, *ba.hi);
        b0 = lo - a1, b1 = hi - a0;
        if (bb.lo) b0 = std::max(b0, *bb.lo);
        if (bb.hi) b1 = std::min(b1, *bb.hi);
        exact = false;
    }
    if (a0 > a1 || b0 > b1) {
        WindowSet w = int_window(lo, hi);
        return w;
    }
    WindowSet ma = materialize(a, BoxParams::interval(a0, a1));
    WindowSet mb = materialize(b, BoxParams::interval(b0, b1));
    WindowSet sum = int_sumset(ma, mb);
    WindowSet w = int_restrict(sum, lo, hi);
    w.exact = exact && ma.exact && mb.exact;
    return w;
}

namespace {

json node_to_json(const SetExpr& e) {
    json j;
    auto kids = [&] {
        json arr = json::array();
        for (const auto& c : e.children) arr.push_back(node_to_json(*c));
        return arr;
    };
    switch (e.kind) {
        case NodeKind::Explicit: {
            json els = json::array();
            for (const auto& x : e.elements) els.push_back(element_to_json(e.group, x));
            return {{"node", "Explicit"}, {"elements", els}};
        }
        case NodeKind::Periodic:
            return {{"node", "Periodic"}, {"m", e.modulus}, {"residues", e.residues}};
        case NodeKind::HalfLine:
            return {{"node", "HalfLine"}, {"sign", e.sign}};
        case NodeKind::Sturmian:
            return {{"node", "Sturmian"}, {"spec", sturmian_to_json(e.sturmian)}};
        case NodeKind::TwistedSturmian:
            return {{"node", "TwistedSturmian"}, {"spec", sturmian_to_json(e.sturmian)}};
        case NodeKind::Singleton:
            return {{"node", "Singleton"}, {"element", element_to_json(e.group, e.elements[0])}};
        case NodeKind::Union:
            return {{"node", "Union"}, {"children", kids()}};
        case NodeKind::Intersect:
            return {{"node", "Intersect"}, {"children", kids()}};
        case NodeKind::Complement:
            return {{"node", "Complement"}, {"child", node_to_json(*e.children[0])}};
        case NodeKind::Translate:
            return {{"node", "Translate"},
                    {"element", element_to_json(e.group, e.elements[0])},
                    {"side", e.left ? "left" : "right"},
                    {"child", node_to_json(*e.children[0])}};
        case NodeKind::ProductSet:
            return {{"node", "ProductSet"}, {"children", kids()}};
        case NodeKind::InverseSet:
            return {{"node", "InverseSet"}, {"child", node_to_json(*e.children[0])}};
        case NodeKind::Builtin:
            j = {{"node", "Builtin"}, {"name", e.name}};
            if (e.name == "cx1.B") j["params"] = sturmian_to_json(e.sturmian);
            return j;
    }
    return j;
}

SetExprPtr node_from_json(const GroupDescriptor& g, const json& j) {
    const std::string node = j.at("node").get<std::string>();
    auto kids = [&] {
        std::vector<SetExprPtr> out;
        for (const auto& c : j.at("children")) out.push_back(node_from_json(g, c));
        return out;
    };
    auto typed = [&](SetExprPtr e) {
        if (!(e->group == g)) throw TypeError(node + " node does not live in " + g.name());
        return e;
    };
    if (node == "Explicit") {
        std::vector<Element> els;
        for (const auto& x : j.at("elements")) els.push_back(element_from_json(g, x));
        return explicit_set(g, std::move(els));
    }
    if (node == "Periodic")
        return typed(periodic(j.at("m").get<std::int64_t>(), j.at("residues").get<std::vector<std::int64_t>>()));
    if (node == "HalfLine") return typed(half_line(j.at("sign").get<int>()));
    if (node == "Sturmian") return typed(sturmian_set(sturmian_from_json(j.at("spec"))));
    if (node == "TwistedSturmian") return typed(twisted_sturmian(sturmian_from_json(j.at("spec"))));
    if (node == "Singleton") return singleton(g, element_from_json(g, j.at("element")));
    if (node == "Union") return set_union(kids());
    if (node == "Intersect") return set_intersect(kids());
    if (node == "Complement") return complement(node_from_json(g, j.at("child")));
    if (node == "Translate")
        return translate(element_from_json(g, j.at("element")), node_from_json(g, j.at("child")),
                         j.value("side", std::string("left")) != "right");
    if (node == "ProductSet") {
        auto k = kids();
        if (k.size() != 2) throw InputError("ProductSet takes two children");
        return product_set(k[0], k[1]);
    }
    if (node == "InverseSet") return inverse_set(node_from_json(g, j.at("child")));
    if (node == "Builtin") {
        SturmianSpec params;
        if (j.contains("params")) params = sturmian_from_json(j.at("params"));
        return builtin(g, j.at("name").get<std::string>(), params);
    }
    throw InputError("unknown node '" + node + "'");
}

}  // namespace

json set_to_json(const SetExprPtr& e) {
    return {{"schema_version", 1}, {"group", descriptor_to_json(e->group)}, {"expr", node_to_json(*e)}};
}

SetExprPtr set_from_json(const json& doc) {
    try {
        GroupDescriptor g = doc.contains("group") ? descriptor_from_json(doc.at("group")) : GroupDescriptor::int_line();
        return node_from_json(g, doc.contains("expr") ? doc.at("expr") : doc);
    } catch (const json::exception& e) {
        throw InputError(std::string("bad set expression: ") + e.what());
    }
}

SetExprPtr load_set(const std::string& text) {
    try {
        if (std::filesystem::exists(text)) {
            std::ifstream in(text);
            return set_from_json(json::parse(in));
        }
        return set_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
        throw InputError(std::string("cannot parse set expression: ") + e.what());
    }
}

}  // namespace sumset

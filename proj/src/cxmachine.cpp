#include "sumset/cxmachine.hpp"

#include <algorithm>
#include <cmath>

#include "sumset/errors.hpp"
#include "sumset/parallel.hpp"

namespace sumset {

using nlohmann::json;

CxContext::CxContext(std::int64_t p_) : p(p_) {
    if (p < 2) throw PreconditionError("p must be >= 2");
}

Element contracting_conjugator(const CxContext& ctx, const std::vector<Element>& F) {
    const GroupDescriptor g = ctx.group();
    std::int64_t min_val = 0;
    for (const auto& f : F) {
        if (!g.contains(f) || std::get<AffineElt>(f).k != 0) throw PreconditionError("F must lie in N = Z[1/p] x {0}");
        const PAdic& a = std::get<AffineElt>(f).a;
        if (!a.is_zero()) min_val = std::min(min_val, a.val);
    }
    const Element c = AffineElt{PAdic{}, -min_val};
    for (const auto& x : conjugate_set(g, c, F)) {
        const auto& e = std::get<AffineElt>(x);
        if (e.k != 0 || !e.a.is_integer()) throw std::logic_error("conjugator failed to land in Lambda");
    }
    return c;
}

bool member_S(const CxContext&, const AffineElt& e) { return e.a.in_pk_z(e.k); }

bool member_SinvS(const CxContext&, const AffineElt& e) { return e.k >= 0 ? e.a.is_integer() : e.a.in_pk_z(e.k); }

Cx1Params Cx1Params::make(const Rational& epsilon, const QuadIrr& alpha) {
    return make(epsilon, alpha, TorusInterval::closed(Rational(0), epsilon * Rational(2)));
}

Cx1Params Cx1Params::make(const Rational& epsilon, const QuadIrr& alpha, const TorusInterval& I_o) {
    Cx1Params c;
    c.epsilon = epsilon;
    c.alpha = alpha;
    c.I_o = I_o;
    c.validate();
    return c;
}

void Cx1Params::validate() const {
    if (!(epsilon > Rational(0) && epsilon < Rational(1, 2))) throw PreconditionError("epsilon must lie in (0, 1/2)");
    if (!alpha.is_irrational()) throw PreconditionError("alpha must be irrational");
    if (I_o.measure() != epsilon * Rational(2)) throw PreconditionError("I_o must have measure 2 epsilon");
}

SturmianSpec Cx1Params::as_spec() const {
    SturmianSpec s;
    s.alpha = alpha;
    s.interval = I_o;
    return s;
}

Cx1Params Cx1Params::from_spec(const SturmianSpec& s) {
    Cx1Params c;
    c.alpha = s.alpha;
    c.I_o = s.interval;
    c.epsilon = s.interval.measure() / Rational(2);
    return c;
}

bool cx1_member_A(const CxContext& ctx, const AffineElt& e) { return e.k % 2 == 0 && member_S(ctx, e); }

bool cx1_member_B(const CxContext& ctx, const Cx1Params& params, const AffineElt& e) {
    if (e.k == 0 && e.a.is_zero()) return true;
    if (e.k % 2 == 0) return false;
    return frac_in_interval(e.k - 1, params.alpha, params.I_o) && member_T(ctx, e);
}

bool cx1_member_AB(const CxContext& ctx, const AffineElt& e) {
    if (cx1_member_A(ctx, e)) return true;
    return e.k % 2 != 0 && !e.a.in_pk_z(e.k);
}

std::int64_t cx1_ab_witness_shift(const Cx1Params& params, std::int64_t k) {
    std::int64_t i = k + 1;
    if (i % 2 != 0) ++i;
    for (int step = 0; step < 1000000; ++step, i += 2)
        if (frac_in_interval(k - i - 1, params.alpha, params.I_o)) return i;
    throw NotFound("no witness shift found");
}

Cx1Sets build_cx1(const CxContext& ctx, const Cx1Params& params) {
    params.validate();
    const GroupDescriptor g = ctx.group();
    Cx1Sets s;
    s.params = params;
    s.A = builtin(g, "cx1.A");
    s.B = builtin(g, "cx1.B", params.as_spec());
    s.AB = builtin(g, "cx1.AB", params.as_spec());
    return s;
}

namespace {

// #{ j in [-J, J] : j p^-n in p^m Z }.
std::int64_t count_divisible(std::int64_t p, int n, std::int64_t J, std::int64_t m) {
    const std::int64_t e = m + n;
    if (e <= 0) return 2 * J + 1;
    std::int64_t d = 1;
    for (std::int64_t i = 0; i < e; ++i) {
        if (d > J / p) return 1;
        d *= p;
    }
    return 2 * (J / d) + 1;
}

std::int64_t level_count(const CxContext& ctx, const Cx1Params& params, Cx1Set which, int n, std::int64_t J,
                         std::int64_t k) {
    const std::int64_t full = 2 * J + 1;
    const std::int64_t p = ctx.p;
    const bool odd = k % 2 != 0;
    auto sinvs = [&] { return k >= 0 ? count_divisible(p, n, J, 0) : count_divisible(p, n, J, k); };
    switch (which) {
        case Cx1Set::S:
            return count_divisible(p, n, J, k);
        case Cx1Set::SinvS:
            return sinvs();
        case Cx1Set::NL2:
            return odd ? 0 : full;
        case Cx1Set::A:
            return odd ? 0 : count_divisible(p, n, J, k);
        case Cx1Set::B: {
            std::int64_t c = k == 0 ? 1 : 0;
            if (odd && frac_in_interval(k - 1, params.alpha, params.I_o)) c += full - sinvs();
            return c;
        }
        case Cx1Set::AB:
            return odd ? full - count_divisible(p, n, J, k) : count_divisible(p, n, J, k);
    }
    return 0;
}

ProxyResult proxy(const CxContext& ctx, const Cx1Params& params, Cx1Set which, int n, std::int64_t J, bool upper) {
    ProxyResult r;
    const double size = static_cast<double>(2 * n + 1) * static_cast<double>(2 * J + 1);
    bool first = true;
    for (std::int64_t s = -4 * n; s <= 4 * n; s += 2) {
        std::int64_t c = 0;
        for (std::int64_t k = -n; k <= n; ++k) c += level_count(ctx, params, which, n, J, k + s);
        const double v = static_cast<double>(c) / size;
        r.per_shift.emplace_back(s, v);
        if (first || (upper ? v > r.value : v < r.value)) {
            r.value = v;
            r.best_shift = s;
            first = false;
        }
    }
    return r;
}

}  // namespace

ProxyResult cx1_upper_proxy(const CxContext& ctx, const Cx1Params& params, Cx1Set which, int n, std::int64_t J) {
    return proxy(ctx, params, which, n, J, true);
}

ProxyResult cx1_lower_proxy(const CxContext& ctx, const Cx1Params& params, Cx1Set which, int n, std::int64_t J) {
    return proxy(ctx, params, which, n, J, false);
}

std::vector<IndependencePoint> independence_check(const CxContext& ctx, const SetExprPtr& C, const SetExprPtr& D,
                                                  int n_min, int n_max, std::int64_t J_exponent) {
    const GroupDescriptor g = ctx.group();
    if (!(C->group == g) || !(D->group == g)) throw TypeError("independence_check needs sets in " + g.name());
    std::vector<IndependencePoint> out;
    for (int n = n_min; n <= n_max; ++n) {
        const std::int64_t J = checked_pow(ctx.p, static_cast<int>(J_exponent * n));
        const BoxParams box = BoxParams::solvable(n, J);
        const auto els = enumerate_box(g, box);
        // spot-check the declared invariances on a deterministic sample
        const std::uint64_t stride = std::max<std::uint64_t>(1, els.size() / 97);
        for (std::uint64_t i = 0; i < els.size(); i += stride) {
            for (std::int64_t j : {1, -3, 7}) {
                const Element nu = AffineElt{PAdic::make(j, -n, ctx.p), 0};
                if (member(C, group_op(g, nu, els[i])) != member(C, els[i]))
                    throw InputError("C is not N-invariant at " + to_string(g, els[i]));
            }
            for (std::int64_t l : {1, 2, -1}) {
                const Element el = AffineElt{PAdic{}, l};
                if (member(D, group_op(g, el, els[i])) != member(D, els[i]))
                    throw InputError("D is not L-invariant at " + to_string(g, els[i]));
            }
        }
        const std::int64_t cc = parallel_sum(els.size(), [&](std::uint64_t b, std::uint64_t e) {
            std::int64_t c = 0;
            for (std::uint64_t i = b; i < e; ++i) c += member(C, els[i]);
            return c;
        });
        const std::int64_t cd = parallel_sum(els.size(), [&](std::uint64_t b, std::uint64_t e) {
            std::int64_t c = 0;
            for (std::uint64_t i = b; i < e; ++i) c += member(D, els[i]);
            return c;
        });
        const std::int64_t ccd = parallel_sum(els.size(), [&](std::uint64_t b, std::uint64_t e) {
            std::int64_t c = 0;
            for (std::uint64_t i = b; i < e; ++i) c += member(C, els[i]) && member(D, els[i]);
            return c;
        });
        IndependencePoint pt;
        pt.n = n;
        const double size = static_cast<double>(els.size());
        pt.rho_c = cc / size;
        pt.rho_d = cd / size;
        pt.rho_cd = ccd / size;
        pt.error = std::fabs(pt.rho_cd - pt.rho_c * pt.rho_d);
        out.push_back(pt);
    }
    return out;
}

LLambdaReport verify_prop_L_Lambda(const CxContext& ctx, int n_max, std::int64_t J_exponent) {
    LLambdaReport r;
    const Cx1Params dummy = Cx1Params::make(Rational(1, 5), QuadIrr::golden_conjugate());
    r.thick_ok = true;
    for (int n = 1; n <= n_max; ++n) {
        const std::int64_t J = checked_pow(ctx.p, static_cast<int>(J_exponent * n));
        // F_n g^-1 with g = (0, 2n) moves level k to k - 2n <= -n, where every
        // x in p^-n Z lies in p^(k-2n) Z.
        LLambdaReport::Thick t;
        t.n = n;
        t.witness = AffineElt{PAdic{}, 2 * n};
        t.box_size = static_cast<std::uint64_t>(2 * n + 1) * static_cast<std::uint64_t>(2 * J + 1);
        std::uint64_t inside = 0;
        for (std::int64_t k = -n; k <= n; ++k)
            inside += static_cast<std::uint64_t>(count_divisible(ctx.p, n, J, k - 2 * n));
        t.inside = inside;
        if (inside != t.box_size) r.thick_ok = false;
        r.thick.push_back(t);
        if (n >= 2) r.lower.push_back({n, cx1_lower_proxy(ctx, dummy, Cx1Set::SinvS, n, J).value});
    }
    r.lower_decreasing = true;
    for (std::size_t i = 1; i < r.lower.size(); ++i)
        if (r.lower[i].proxy > r.lower[i - 1].proxy) r.lower_decreasing = false;
    return r;
}

BallCheck check_closed_forms(const CxContext& ctx, const Cx1Params& params, int n, std::int64_t J) {
    const GroupDescriptor g = ctx.group();
    const BoxParams ball = BoxParams::solvable(n, J);
    const auto els = enumerate_box(g, ball);
    BallCheck bc;
    bc.ball_size = els.size();

    // S = L Lambda from pairs (0, k)(m, 0), |k| <= n, |m| <= J.
    std::vector<std::uint8_t> s_oracle(els.size(), 0);
    for (std::int64_t k = -n; k <= n; ++k)
        for (std::int64_t m = -J; m <= J; ++m) {
            const Element x = group_op(g, AffineElt{PAdic{}, k}, AffineElt{PAdic::integer(m, ctx.p), 0});
            const std::int64_t idx = box_index(g, ball, x);
            if (idx >= 0) s_oracle[idx] = 1;
        }
    std::vector<Element> s_list;
    for (std::uint64_t i = 0; i < els.size(); ++i) {
        const bool closed = member_S(ctx, std::get<AffineElt>(els[i]));
        if (closed != static_cast<bool>(s_oracle[i])) ++bc.s_mismatch;
        if (s_oracle[i]) s_list.push_back(els[i]);
    }

    // S^-1 S from all pairs of S cap ball.
    std::vector<Element> s_inv;
    for (const auto& s : s_list) s_inv.push_back(inverse(g, s));
    std::vector<std::uint8_t> q_oracle(els.size(), 0);
    parallel_for(s_inv.size(), [&](std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t i = b; i < e; ++i)
            for (const auto& t : s_list) {
                const std::int64_t idx = box_index(g, ball, group_op(g, s_inv[i], t));
                if (idx >= 0) q_oracle[idx] = 1;
            }
    });
    for (std::uint64_t i = 0; i < els.size(); ++i)
        if (member_SinvS(ctx, std::get<AffineElt>(els[i])) != static_cast<bool>(q_oracle[i])) ++bc.sinvs_mismatch;

    // AB: soundness over pairs in the ball, completeness through the witness shift.
    std::vector<Element> a_list, b_list;
    for (const auto& x : els) {
        const auto& e = std::get<AffineElt>(x);
        if (cx1_member_A(ctx, e)) a_list.push_back(x);
        if (cx1_member_B(ctx, params, e)) b_list.push_back(x);
    }
    std::vector<std::uint8_t> unsound(a_list.size(), 0);
    parallel_for(a_list.size(), [&](std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t i = b; i < e; ++i)
            for (const auto& y : b_list) {
                const Element x = group_op(g, a_list[i], y);
                if (!cx1_member_AB(ctx, std::get<AffineElt>(x))) ++unsound[i];
            }
    });
    for (auto u : unsound) bc.ab_mismatch += u;
    for (const auto& x : els) {
        const auto& e = std::get<AffineElt>(x);
        if (!cx1_member_AB(ctx, e) || cx1_member_A(ctx, e)) continue;
        const std::int64_t i = cx1_ab_witness_shift(params, e.k);
        const AffineElt a{PAdic{}, i};
        const AffineElt b{pshift(e.a, -i), e.k - i};
        if (!cx1_member_A(ctx, a) || !cx1_member_B(ctx, params, b) || !(group_op(g, a, b) == x)) ++bc.ab_mismatch;
    }
    return bc;
}

json cxmachine_report(const CxContext& ctx, const Cx1Params& params, int n, bool& pass) {
    const std::int64_t J = checked_pow(ctx.p, 2 * n);
    const double eps = params.epsilon.to_double();
    const ProxyResult a = cx1_upper_proxy(ctx, params, Cx1Set::A, n, J);
    const ProxyResult b = cx1_upper_proxy(ctx, params, Cx1Set::B, n, J);
    const ProxyResult ab = cx1_upper_proxy(ctx, params, Cx1Set::AB, n, J);
    const Cx1Sets sets = build_cx1(ctx, params);
    const auto indep = independence_check(ctx, builtin(ctx.group(), "NL2"), builtin(ctx.group(), "S"), 2, n);
    const auto ll = verify_prop_L_Lambda(ctx, n);
    const BallCheck ball = check_closed_forms(ctx, params, 3, 700);
    const double tol = 0.05;

    json checks = json::array();
    auto check = [&](const std::string& name, bool ok, json detail) {
        checks.push_back({{"name", name}, {"pass", ok}, {"detail", std::move(detail)}});
        pass = pass && ok;
    };
    pass = true;
    check("d*-proxy(A) near 1/2", std::fabs(a.value - 0.5) <= tol, {{"value", a.value}, {"target", 0.5}, {"tol", tol}});
    check("d*-proxy(B) near epsilon", std::fabs(b.value - eps) <= tol, {{"value", b.value}, {"target", eps}, {"tol", tol}});
    check("d*-proxy(AB) <= 1/2 + tol", ab.value <= 0.5 + tol, {{"value", ab.value}, {"bound", 0.5 + tol}});
    bool decreasing = true;
    json series = json::array();
    for (std::size_t i = 0; i < indep.size(); ++i) {
        series.push_back({{"n", indep[i].n}, {"error", indep[i].error}, {"rho_C", indep[i].rho_c},
                          {"rho_D", indep[i].rho_d}, {"rho_CD", indep[i].rho_cd}});
        if (i > 0 && indep[i].error > indep[i - 1].error) decreasing = false;
    }
    check("independence error decreasing and <= 0.05", decreasing && indep.back().error <= tol, {{"series", series}});
    json lower = json::array();
    for (const auto& l : ll.lower) lower.push_back({{"n", l.n}, {"proxy", l.proxy}});
    check("S thick along boxes, S^-1 S lower proxy decreasing",
          ll.thick_ok && ll.lower_decreasing && ll.lower.back().proxy <= 0.2,
          {{"thick_witness_k", 2 * n}, {"lower_series", lower}});
    check("closed forms match ball oracle", ball.s_mismatch == 0 && ball.sinvs_mismatch == 0 && ball.ab_mismatch == 0,
          {{"ball_size", ball.ball_size},
           {"S_mismatch", ball.s_mismatch},
           {"SinvS_mismatch", ball.sinvs_mismatch},
           {"AB_mismatch", ball.ab_mismatch}});
    return {{"schema_version", 1},
            {"command", "cxmachine"},
            {"p", ctx.p},
            {"epsilon", params.epsilon.str()},
            {"alpha", {params.alpha.p(), params.alpha.q(), params.alpha.r(), params.alpha.d()}},
            {"I_o", interval_to_json(params.I_o)},
            {"scale", {{"n", n}, {"J", J}}},
            {"sets", {{"A", set_to_json(sets.A)}, {"B", set_to_json(sets.B)}}},
            {"proxies", {{"A", a.value}, {"B", b.value}, {"AB", ab.value}, {"A_shift", a.best_shift},
                         {"B_shift", b.best_shift}, {"AB_shift", ab.best_shift}}},
            {"checks", checks},
            {"pass", pass}};
}

}  // namespace sumset

#include "sumset/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sumset/errors.hpp"
#include "sumset/structure.hpp"

namespace sumset {

using nlohmann::json;

json Assertion::to_json() const {
    return {{"name", name}, {"lhs", lhs}, {"op", op}, {"rhs", rhs}, {"margin", margin}, {"pass", pass}};
}

Assertion make_assertion(std::string name, double lhs, const std::string& op, double rhs) {
    Assertion a{std::move(name), lhs, op, rhs, 0, false};
    if (op == "<" || op == "<=") {
        a.margin = rhs - lhs;
    } else if (op == ">" || op == ">=") {
        a.margin = lhs - rhs;
    } else {
        throw InputError("unknown comparison " + op);
    }
    a.pass = (op.size() == 2) ? a.margin >= 0 : a.margin > 0;
    return a;
}

Assertion near_assertion(std::string name, double value, double target, double tol) {
    return make_assertion(std::move(name), std::abs(value - target), "<=", tol);
}

void ScenarioReport::finish() {
    pass = std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

json ScenarioReport::to_json() const {
    json m = json::object();
    for (const auto& [k, v] : measured) m[k] = v;
    json as = json::array();
    for (const auto& a : assertions) as.push_back(a.to_json());
    return {{"schema_version", 1}, {"scenario", id}, {"params", params}, {"measured", m},
            {"assertions", as},    {"details", details}, {"pass", pass}};
}

SetExprPtr int_interval(std::int64_t lo, std::int64_t hi) {
    return set_intersect({translate(IntElt{lo - 1}, half_line(1)), translate(IntElt{hi + 1}, half_line(-1))});
}

namespace {

const FolnerFamily& sym_family() {
    static const FolnerFamily f{GroupDescriptor::int_line(), FolnerFamily::Kind::Symmetric};
    return f;
}

SturmianSpec spec_of(const QuadIrr& alpha, const TorusInterval& I) {
    SturmianSpec s;
    s.alpha = alpha;
    s.interval = I;
    s.validate();
    return s;
}

struct Scale {
    std::int64_t n;
    BoxParams box;
    explicit Scale(std::int64_t n_) : n(n_), box(BoxParams::interval(-n_, n_)) {}
};

double lower_density(const WindowSet& w, std::int64_t n, std::vector<SeriesRow>* rows = nullptr) {
    DensityPair d = density_along(w, sym_family(), n);
    if (rows) *rows = d.rows;
    return d.lower.value;
}

double banach_upper(const WindowSet& w, std::int64_t n, std::int64_t L) {
    L = std::min(L, 2 * n + 1);
    return banach_density(w, true, L, -n, n - L + 1).value;
}

json base_params(const std::string& id, const QuadIrr& alpha, const TorusInterval& I, const ScenarioOptions& o) {
    return {{"scenario", id},          {"alpha", alpha.str()},     {"interval", interval_to_json(I)},
            {"m_I", I.measure().str()}, {"n", o.n},                 {"tol", o.tolerance()},
            {"banach_L", o.banach_L},  {"m_max", o.m_max},         {"gap_bound", o.gap_bound},
            {"thick_L", o.thick_L}};
}

std::uint64_t count_not_contained(const WindowSet& small, const WindowSet& big) {
    std::uint64_t bad = 0;
    for (std::uint64_t i = 0; i < small.size(); ++i)
        if (small.mask[i] && !big.contains(small.at(i))) ++bad;
    return bad;
}

}  // namespace

ScenarioReport verify_base_identities(const QuadIrr& alpha, const TorusInterval& I, const ScenarioOptions& o) {
    if (!alpha.is_irrational()) throw PreconditionError("alpha must be irrational");
    ScenarioReport r;
    r.id = "base";
    r.params = base_params("base", alpha, I, o);
    const Scale s(o.n);
    const double m = I.measure().to_double(), tol = o.tolerance();
    const SetExprPtr C = sturmian_set(spec_of(alpha, I));

    const double dCpos = lower_density(materialize(set_intersect({C, half_line(1)}), s.box), s.n);
    const double dCneg = lower_density(materialize(set_intersect({C, half_line(-1)}), s.box), s.n);
    const double dC = lower_density(materialize(C, s.box), s.n, &r.series);
    r.measure("lower_density(C cap N)", dCpos);
    r.measure("lower_density(C cap -N)", dCneg);
    r.measure("lower_density(C)", dC);
    r.add(near_assertion("lower_density(C cap N) ~ m(I)/2", dCpos, m / 2, tol));
    r.add(near_assertion("lower_density(C cap -N) ~ m(I)/2", dCneg, m / 2, tol));
    r.add(near_assertion("lower_density(C) ~ m(I)", dC, m, tol));

    if (I.measure() < Rational(1, 2)) {
        // C + C is the Sturmian set of I + I.
        const SetExprPtr CC = sturmian_set(spec_of(alpha, interval_sum(I, I)));
        const double dCC = lower_density(materialize(set_intersect({CC, half_line(1)}), s.box), s.n);
        r.measure("lower_density((C+C) cap N)", dCC);
        r.add(near_assertion("lower_density((C+C) cap N) ~ m(I)", dCC, m, tol));

        const std::int64_t K = std::min(o.identity_window, o.n);
        const WindowSet low = product_window(C, C, BoxParams::interval(-K, K));
        const WindowSet exact = materialize(CC, BoxParams::interval(-K, K));
        const std::uint64_t outside = count_not_contained(low, exact);
        r.details["sumset_identity"] = {{"window", {-K, K}},
                                        {"windowed_sumset_count", low.count()},
                                        {"identity_count", exact.count()},
                                        {"windowed_exact", low.exact},
                                        {"windowed_not_in_identity", outside}};
        r.add(make_assertion("windowed C+C outside Sturmian(I+I)", static_cast<double>(outside), "<=", 0));
    } else {
        r.details["sumset_identity"] = "skipped: m(I) >= 1/2";
    }
    r.finish();
    return r;
}

ScenarioReport run_e1(const QuadIrr& alpha, const TorusInterval& I, const ScenarioOptions& o) {
    if (!(I.measure() < Rational(1, 3))) throw PreconditionError("e1 needs m(I) < 1/3");
    ScenarioReport r;
    r.id = "e1";
    r.params = base_params("e1", alpha, I, o);
    const Scale s(o.n);
    const double m = I.measure().to_double(), tol = o.tolerance();
    const SetExprPtr C = sturmian_set(spec_of(alpha, I));
    const SetExprPtr N = half_line(1);
    const SetExprPtr A = set_intersect({C, N});
    const SetExprPtr B = set_union({C, N});

    const WindowSet wA = materialize(A, s.box);
    const WindowSet wB = materialize(B, s.box);
    const auto witnesses = detect_periodic_superset(wA, o.m_max, o.banach_L);
    r.add(make_assertion("periodic supersets of A (m <= m_max)", static_cast<double>(witnesses.size()), "<=", 0));
    const SyndeticResult syn = is_syndetic_at_scale(wB, o.gap_bound, -s.n, s.n);
    r.add(make_assertion("max gap of B", static_cast<double>(syn.max_gap), "<=", static_cast<double>(o.gap_bound)));

    const WindowSet sum_low = product_window(A, B, s.box);
    const std::int64_t run = max_run_span(sum_low, 1, -s.n, s.n);
    r.add(make_assertion("longest interval in A+B", static_cast<double>(run), ">=", static_cast<double>(o.thick_L)));

    // A + B lies in (C + C) u {2, 3, ...}, and C + C is the Sturmian set of I + I.
    const SetExprPtr envelope =
        set_union({sturmian_set(spec_of(alpha, interval_sum(I, I))), translate(IntElt{1}, half_line(1))});
    const WindowSet wEnv = materialize(envelope, s.box);
    const std::uint64_t outside = count_not_contained(sum_low, wEnv);
    const double dAB_upper = lower_density(wEnv, s.n);
    const double dAB_lower = lower_density(sum_low, s.n, &r.series);
    const double dA = banach_upper(wA, s.n, o.banach_L);
    const double dB = lower_density(wB, s.n);
    r.measure("banach_upper(A)", dA);
    r.measure("lower_density(B)", dB);
    r.measure("lower_density(A+B) lower bound", dAB_lower);
    r.measure("lower_density(A+B) upper bound", dAB_upper);
    r.details["sumset_window_exact"] = sum_low.exact;
    r.details["sumset_outside_envelope"] = outside;
    r.add(make_assertion("windowed A+B outside envelope", static_cast<double>(outside), "<=", 0));
    r.add(near_assertion("banach_upper(A) ~ m(I)", dA, m, tol));
    r.add(near_assertion("lower_density(B) ~ (1 + m(I))/2", dB, (1 + m) / 2, tol));
    r.add(make_assertion("lower_density(A+B) <= m(I) + 1/2 + tol", dAB_upper, "<=", m + 0.5 + tol));
    r.add(make_assertion("m(I) + 1/2 + tol < d*(A) + lower_density(B) - tol", m + 0.5 + tol, "<", dA + dB - tol));
    r.add(make_assertion("d*(A) + lower_density(B) < 1", dA + dB, "<", 1));
    r.finish();
    return r;
}

ScenarioReport run_e2(const QuadIrr& alpha, const TorusInterval& I, const ScenarioOptions& o) {
    if (!(I.measure() < Rational(1, 2))) throw PreconditionError("e2 needs m(I) < 1/2");
    ScenarioReport r;
    r.id = "e2";
    r.params = base_params("e2", alpha, I, o);
    const Scale s(o.n);
    const double m = I.measure().to_double(), tol = o.tolerance();
    const SetExprPtr A = set_intersect({sturmian_set(spec_of(alpha, I)), half_line(1)});

    const WindowSet wA = materialize(A, s.box);
    const auto witnesses = detect_periodic_superset(wA, o.m_max, o.banach_L);
    r.add(make_assertion("periodic supersets of A (m <= m_max)", static_cast<double>(witnesses.size()), "<=", 0));
    const SyndeticResult syn = is_syndetic_at_scale(wA, o.gap_bound, -s.n, s.n);
    r.add(make_assertion("max gap of B", static_cast<double>(syn.max_gap), ">", static_cast<double>(o.gap_bound)));

    const WindowSet sum = product_window(A, A, s.box);
    const std::int64_t run = max_run_span(sum, 1, -s.n, s.n);
    r.add(make_assertion("longest interval in A+B", static_cast<double>(run), "<", static_cast<double>(o.thick_L)));

    const double dAB = lower_density(sum, s.n, &r.series);
    const double dA = banach_upper(wA, s.n, o.banach_L);
    const double dB = lower_density(wA, s.n);
    r.measure("banach_upper(A)", dA);
    r.measure("lower_density(B)", dB);
    r.measure("lower_density(A+B)", dAB);
    r.details["sumset_window_exact"] = sum.exact;
    r.add(near_assertion("banach_upper(A) ~ m(I)", dA, m, tol));
    r.add(near_assertion("lower_density(B) ~ m(I)/2", dB, m / 2, tol));
    r.add(make_assertion("lower_density(A+B) <= m(I) + tol", dAB, "<=", m + tol));
    r.add(make_assertion("m(I) + tol < d*(A) + lower_density(B) - tol", m + tol, "<", dA + dB - tol));
    r.add(make_assertion("d*(A) + lower_density(B) < 1", dA + dB, "<", 1));
    r.finish();
    return r;
}

ScenarioReport run_e3(const QuadIrr& alpha, const TorusInterval& I, const ScenarioOptions& o) {
    const std::int64_t n0 = find_shift_n(alpha, I, o.shift_bound);
    ScenarioReport r;
    r.id = "e3";
    r.params = base_params("e3", alpha, I, o);
    r.params["n0"] = n0;
    const Scale s(o.n);
    const double m = I.measure().to_double(), tol = o.tolerance();
    const SetExprPtr C = sturmian_set(spec_of(alpha, I));
    const SetExprPtr B = set_intersect({C, half_line(1)});
    const SetExprPtr A = set_union({B, explicit_ints({n0})});

    const WindowSet wA = materialize(A, s.box);
    const WindowSet wB = materialize(B, s.box);
    const SpreadOutVerdict so = spread_out_witness_Z(wA, o.m_max, o.banach_L);
    r.details["spread_out"] = so.to_json();
    r.add(make_assertion("periodic supersets of A (m <= m_max)", so.spread_out ? 0.0 : 1.0, "<=", 0));
    const SyndeticResult syn = is_syndetic_at_scale(wB, o.gap_bound, -s.n, s.n);
    r.add(make_assertion("max gap of B", static_cast<double>(syn.max_gap), ">", static_cast<double>(o.gap_bound)));

    const WindowSet sum = product_window(A, B, s.box);
    std::int64_t span = 0, span_m = 1;
    for (std::int64_t mm = 1; mm <= o.run_m_max; ++mm) {
        const std::int64_t sp = max_run_span(sum, mm, -s.n, s.n);
        if (sp > span) span = sp, span_m = mm;
    }
    r.details["longest_periodic_run"] = {{"span", span}, {"m", span_m}};
    r.add(make_assertion("longest periodic run in A+B (m <= run_m_max)", static_cast<double>(span), "<",
                         static_cast<double>(o.run_L)));

    const double dAB = lower_density(sum, s.n, &r.series);
    const double dA = banach_upper(wA, s.n, o.banach_L);
    const double dB = lower_density(wB, s.n);
    r.measure("banach_upper(A)", dA);
    r.measure("lower_density(B)", dB);
    r.measure("lower_density(A+B)", dAB);
    r.details["sumset_window_exact"] = sum.exact;
    r.add(near_assertion("banach_upper(A) ~ m(I)", dA, m, tol));
    r.add(near_assertion("lower_density(B) ~ m(I)/2", dB, m / 2, tol));
    r.add(near_assertion("lower_density(A+B) ~ 3 m(I)/2", dAB, 1.5 * m, tol));
    r.add(make_assertion("d*(A) + lower_density(B) < 1", dA + dB, "<", 1));

    // Construction identity on a small window: the windowed sumset against
    // brute-force pairs, and containment in (C + C) u (C + n0).
    const std::int64_t K = std::min(o.identity_window, o.n);
    std::vector<std::int64_t> as, bs;
    for (std::int64_t x = std::min<std::int64_t>(-K, n0); x <= K; ++x) {
        if (x >= -s.n && x <= s.n ? wA.contains(x) : member(A, IntElt{x})) as.push_back(x);
        if (x >= 1 && wB.contains(x)) bs.push_back(x);
    }
    std::set<std::int64_t> brute;
    for (std::int64_t a : as)
        for (std::int64_t b : bs)
            if (a + b >= -K && a + b <= K) brute.insert(a + b);
    std::uint64_t mismatch = 0;
    for (std::int64_t x = -K; x <= K; ++x)
        if (sum.contains(x) != (brute.count(x) > 0)) ++mismatch;
    const SetExprPtr cover =
        set_union({sturmian_set(spec_of(alpha, interval_sum(I, I))), translate(IntElt{n0}, C)});
    const std::uint64_t outside =
        count_not_contained(int_restrict(sum, -K, K), materialize(cover, BoxParams::interval(-K, K)));
    r.details["identity_window"] = {-K, K};
    r.add(make_assertion("A+B vs brute-force pairs, mismatches", static_cast<double>(mismatch), "<=", 0));
    r.add(make_assertion("A+B outside (C+C) u (C+n0)", static_cast<double>(outside), "<=", 0));
    r.finish();
    return r;
}

ScenarioReport run_scenario(const std::string& id, const QuadIrr& alpha, const TorusInterval& I,
                            const ScenarioOptions& o) {
    if (id == "base") return verify_base_identities(alpha, I, o);
    if (id == "e1") return run_e1(alpha, I, o);
    if (id == "e2") return run_e2(alpha, I, o);
    if (id == "e3") return run_e3(alpha, I, o);
    throw InputError("unknown scenario '" + id + "' (base, e1, e2, e3)");
}

ScenarioReport kneser_z_check(const std::string& id, const SetExprPtr& a, const SetExprPtr& b,
                              const ScenarioOptions& o) {
    if (a->group.kind != GroupKind::IntLine || b->group.kind != GroupKind::IntLine)
        throw TypeError("kneser-z works on IntLine sets");
    ScenarioReport r;
    r.id = id;
    r.params = {{"A", set_to_json(a)}, {"B", set_to_json(b)}, {"n", o.n},         {"banach_L", o.banach_L},
                {"gap_bound", o.gap_bound}, {"thick_L", o.thick_L}, {"slack", o.kneser_slack},
                {"a_radius", o.a_radius}};
    const Scale s(o.n);
    const WindowSet wA = materialize(a, s.box);
    const WindowSet wB = materialize(b, s.box);

    const auto witnesses = detect_periodic_superset(wA, o.m_max, o.banach_L);
    r.add(make_assertion("periodic supersets of A with margin (m <= m_max)", static_cast<double>(witnesses.size()),
                         "<=", 0));
    const SyndeticResult syn = is_syndetic_at_scale(wB, o.gap_bound, -s.n, s.n);
    r.add(make_assertion("max gap of B", static_cast<double>(syn.max_gap), "<=", static_cast<double>(o.gap_bound)));

    const SetExprPtr a_used = o.a_radius > 0 ? set_intersect({a, int_interval(-o.a_radius, o.a_radius)}) : a;
    const WindowSet sum = product_window(a_used, b, s.box);
    const std::int64_t run = max_run_span(sum, 1, -s.n, s.n);
    const bool thick = run >= o.thick_L;
    const double dA = banach_upper(wA, s.n, o.banach_L);
    const double dB = lower_density(wB, s.n);
    const double dAB = lower_density(sum, s.n, &r.series);
    r.measure("banach_upper(A)", dA);
    r.measure("lower_density(B)", dB);
    r.measure("lower_density(A+B) lower bound", dAB);
    r.details["longest_interval_in_sumset"] = run;
    r.details["sumset_thick_at_scale"] = thick;
    r.details["inequality_applies"] = !thick;
    if (!thick)
        r.add(make_assertion("lower_density(A+B) >= d*(A) + lower_density(B) - slack", dAB, ">=",
                             dA + dB - o.kneser_slack));
    r.finish();
    return r;
}

std::vector<KneserCase> kneser_z_cases() {
    const QuadIrr golden = QuadIrr::golden_conjugate();
    const QuadIrr root2 = parse_alpha("sqrt2-1");
    auto st = [](const QuadIrr& al, Rational lo, Rational hi) {
        return sturmian_set(spec_of(al, TorusInterval::closed(lo, hi)));
    };
    auto R = [](std::int64_t p, std::int64_t q) { return Rational(p, q); };
    std::vector<KneserCase> cases;
    auto add = [&](SetExprPtr a, SetExprPtr b) {
        char id[16];
        std::snprintf(id, sizeof id, "kz%02zu", cases.size() + 1);
        cases.push_back({id, std::move(a), std::move(b)});
    };
    for (const QuadIrr& al : {golden, root2}) {
        add(st(al, R(0, 1), R(1, 10)), st(al, R(0, 1), R(1, 5)));
        add(st(al, R(0, 1), R(3, 10)), st(al, R(1, 2), R(7, 10)));
        add(st(al, R(1, 10), R(1, 4)), set_union({st(al, R(0, 1), R(1, 10)), st(al, R(2, 5), R(1, 2))}));
        add(st(al, R(0, 1), R(1, 5)), set_union({st(al, R(0, 1), R(3, 10)), st(al, R(3, 5), R(13, 20))}));
        add(st(al, R(1, 5), R(9, 20)), st(al, R(7, 10), R(19, 20)));
        add(st(al, R(0, 1), R(1, 20)), st(al, R(0, 1), R(1, 2)));
        add(st(al, R(0, 1), R(3, 20)), st(al, R(9, 10), R(1, 10)));
        add(st(al, R(0, 1), R(2, 5)), st(al, R(0, 1), R(7, 10)));
        add(st(al, R(0, 1), R(1, 5)), set_union({st(al, R(0, 1), R(1, 10)), periodic(3, {0})}));
    }
    // Different rotations and mixed unions.
    add(st(golden, R(0, 1), R(1, 4)), st(root2, R(0, 1), R(1, 4)));
    add(st(root2, R(1, 3), R(1, 2)), set_union({st(golden, R(0, 1), R(1, 5)), periodic(5, {0, 2})}));
    return cases;
}

json DoublingCheck::to_json() const { return {{"ok", ok}, {"worst_ratio", worst_ratio}, {"worst", worst}}; }

DoublingCheck compare_doubled(const ScenarioReport& at_n, const ScenarioReport& at_2n) {
    DoublingCheck d;
    for (const auto& a : at_n.assertions) {
        if (a.margin <= 0) continue;
        auto it = std::find_if(at_2n.assertions.begin(), at_2n.assertions.end(),
                               [&](const Assertion& b) { return b.name == a.name; });
        if (it == at_2n.assertions.end()) continue;
        const double ratio = it->margin / a.margin;
        if (ratio < d.worst_ratio) d.worst_ratio = ratio, d.worst = a.name;
    }
    d.ok = d.worst_ratio >= 0.5;
    return d;
}

}  // namespace sumset

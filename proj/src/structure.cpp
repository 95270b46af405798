#include "sumset/structure.hpp"

#include <algorithm>

#include "sumset/density.hpp"
#include "sumset/errors.hpp"
#include "sumset/parallel.hpp"
#include "sumset/rational.hpp"

namespace sumset {

using nlohmann::json;

json PeriodicWitness::to_json() const {
    return {{"m", m}, {"residues", residues}, {"density", density}, {"banach_upper", banach_upper},
            {"margin_ok", margin_ok}};
}

std::int64_t default_banach_length(std::int64_t width) {
    return std::clamp<std::int64_t>(width / 20, 1, 10000);
}

namespace {

void require_int_line(const WindowSet& w, const char* what) {
    if (w.group.kind != GroupKind::IntLine) throw TypeError(std::string(what) + " needs IntLine");
}

double window_banach_upper(const WindowSet& w, std::int64_t L) {
    const std::int64_t width = w.box.hi - w.box.lo + 1;
    if (L <= 0) L = default_banach_length(width);
    L = std::min(L, width);
    return banach_density(w, true, L, w.box.lo, w.box.hi - L + 1).value;
}

}  // namespace

std::vector<PeriodicWitness> detect_periodic_superset(const WindowSet& w, std::int64_t mMax, std::int64_t L) {
    require_int_line(w, "detect_periodic_superset");
    if (mMax < 1) return {};
    std::vector<std::int64_t> members;
    for (std::uint64_t i = 0; i < w.size(); ++i)
        if (w.mask[i]) members.push_back(w.at(i));
    const double dstar = window_banach_upper(w, L);
    std::vector<std::optional<PeriodicWitness>> found(static_cast<std::size_t>(mMax));
    parallel_for(static_cast<std::uint64_t>(mMax), [&](std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t idx = b; idx < e; ++idx) {
            const std::int64_t m = static_cast<std::int64_t>(idx) + 1;
            std::vector<char> hit(static_cast<std::size_t>(m), 0);
            std::int64_t distinct = 0;
            for (std::int64_t y : members) {
                char& h = hit[static_cast<std::size_t>(floor_mod(y, m))];
                if (!h) {
                    h = 1;
                    if (++distinct == m) break;
                }
            }
            if (distinct == m || distinct == 0) continue;
            PeriodicWitness pw;
            pw.m = m;
            for (std::int64_t r = 0; r < m; ++r)
                if (hit[static_cast<std::size_t>(r)]) pw.residues.push_back(r);
            pw.density = static_cast<double>(distinct) / static_cast<double>(m);
            pw.banach_upper = dstar;
            pw.margin_ok = pw.density < dstar + 1.0 / static_cast<double>(m);
            if (pw.margin_ok) found[idx] = pw;
        }
    });
    std::vector<PeriodicWitness> out;
    for (auto& f : found)
        if (f) out.push_back(std::move(*f));
    return out;
}

std::vector<PeriodicWitness> detect_periodic_superset(const SetExprPtr& a, std::int64_t lo, std::int64_t hi,
                                                      std::int64_t mMax, std::int64_t L) {
    if (a->group.kind != GroupKind::IntLine) throw TypeError("detect_periodic_superset needs IntLine");
    return detect_periodic_superset(materialize(a, BoxParams::interval(lo, hi)), mMax, L);
}

json SpreadOutVerdict::to_json() const {
    return {{"spread_out_at_scale", spread_out},
            {"window", {lo, hi}},
            {"m_max", m_max},
            {"witness", witness ? witness->to_json() : json(nullptr)}};
}

SpreadOutVerdict spread_out_witness_Z(const WindowSet& w, std::int64_t mMax, std::int64_t L) {
    SpreadOutVerdict v;
    v.lo = w.box.lo;
    v.hi = w.box.hi;
    v.m_max = mMax;
    auto found = detect_periodic_superset(w, mMax, L);
    v.spread_out = found.empty();
    if (!found.empty()) v.witness = found.front();
    return v;
}

SpreadOutVerdict spread_out_witness_Z(const SetExprPtr& a, std::int64_t lo, std::int64_t hi, std::int64_t mMax,
                                      std::int64_t L) {
    if (a->group.kind != GroupKind::IntLine) throw TypeError("spread_out_witness_Z needs IntLine");
    return spread_out_witness_Z(materialize(a, BoxParams::interval(lo, hi)), mMax, L);
}

namespace {

// Calls f(first, last) for every maximal run of consecutive progression
// members y = r mod m inside [lo, hi].
template <class F>
void for_each_run(const WindowSet& w, std::int64_t m, std::int64_t r, std::int64_t lo, std::int64_t hi, F&& f) {
    std::int64_t y = lo + floor_mod(r - lo, m);
    std::optional<std::int64_t> start;
    for (; y <= hi; y += m) {
        if (w.contains(y)) {
            if (!start) start = y;
        } else if (start) {
            f(*start, y - m);
            start.reset();
        }
    }
    if (start) f(*start, y - m);
}

void check_scan(const WindowSet& w, std::int64_t m, std::int64_t lo, std::int64_t hi) {
    require_int_line(w, "periodic run scan");
    if (m < 1) throw PreconditionError("modulus must be positive");
    if (lo > hi) throw PreconditionError("empty scan range");
    if (lo < w.box.lo || hi > w.box.hi) throw PreconditionError("window does not cover the scan range");
}

}  // namespace

std::optional<RunWitness> find_periodic_run(const WindowSet& w, std::int64_t m, std::int64_t L, std::int64_t lo,
                                            std::int64_t hi) {
    check_scan(w, m, lo, hi);
    if (L < 1 || hi - lo + 1 < L) return std::nullopt;
    std::optional<RunWitness> best;
    for (std::int64_t r = 0; r < m; ++r) {
        for_each_run(w, m, r, lo, hi, [&](std::int64_t first, std::int64_t last) {
            const std::int64_t x0 = std::max(lo, first - m + 1);
            const std::int64_t x1 = std::min(hi - L + 1, last + m - L);
            // the window must still contain a term of the run
            const std::int64_t x = std::max(x0, first - L + 1);
            if (x <= x1 && (!best || x < best->x)) best = RunWitness{x, r};
        });
    }
    return best;
}

std::int64_t max_run_span(const WindowSet& w, std::int64_t m, std::int64_t lo, std::int64_t hi) {
    check_scan(w, m, lo, hi);
    std::int64_t best = 0;
    for (std::int64_t r = 0; r < m; ++r)
        for_each_run(w, m, r, lo, hi, [&](std::int64_t first, std::int64_t last) {
            best = std::max(best, std::min(hi, last + m - 1) - std::max(lo, first - m + 1) + 1);
        });
    return best;
}

json ContainmentResult::to_json() const {
    return {{"contained", contained},
            {"first_violation", first_violation ? json(*first_violation) : json(nullptr)},
            {"measure", measure},
            {"banach_upper", banach_upper},
            {"density_ok", density_ok},
            {"ok", ok}};
}

ContainmentResult verify_sturmian_containment(const SetExprPtr& a, const SturmianSpec& candidate, std::int64_t lo,
                                              std::int64_t hi, double tol, std::int64_t L) {
    if (a->group.kind != GroupKind::IntLine) throw TypeError("verify_sturmian_containment needs IntLine");
    candidate.validate();
    const BoxParams box = BoxParams::interval(lo, hi);
    const WindowSet wa = materialize(a, box);
    const WindowSet wc = sturmian_members(candidate, GroupDescriptor::int_line(), box);
    ContainmentResult r;
    r.contained = true;
    for (std::uint64_t i = 0; i < wa.size(); ++i)
        if (wa.mask[i] && !wc.mask[i]) {
            r.contained = false;
            r.first_violation = wa.at(i);
            break;
        }
    r.measure = candidate.interval.length().to_double();
    r.banach_upper = window_banach_upper(wa, L);
    r.density_ok = std::abs(r.measure - r.banach_upper) <= tol;
    r.ok = r.contained && r.density_ok;
    return r;
}

}  // namespace sumset

#include "sumset/density.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "sumset/errors.hpp"
#include "sumset/parallel.hpp"

namespace sumset {

using nlohmann::json;

BoxParams FolnerFamily::box(std::int64_t n) const {
    if (n < 1) throw PreconditionError("Folner index must be >= 1");
    switch (kind) {
        case Kind::Symmetric:
            if (group.kind == GroupKind::IntLattice)
                return BoxParams::lattice(std::vector<std::pair<std::int64_t, std::int64_t>>(group.param, {-n, n}));
            if (group.kind == GroupKind::SolvablePK)
                return BoxParams::solvable(static_cast<int>(n), checked_pow(group.param, static_cast<int>(J_exponent * n)));
            if (group.kind == GroupKind::Cyclic || group.kind == GroupKind::FiniteTable) return BoxParams::whole();
            return BoxParams::interval(-n, n);
        case Kind::Positive:
            return BoxParams::interval(1, n);
        case Kind::Shifted:
            return BoxParams::interval(checked_mul(shift, n), checked_mul(shift, n) + n - 1);
        case Kind::Box:
            return BoxParams::solvable(static_cast<int>(n), checked_pow(group.param, static_cast<int>(J_exponent * n)));
        case Kind::Skew:
            return BoxParams::solvable(static_cast<int>(n), checked_pow(group.param, static_cast<int>(2 * n)),
                                       BoxParams::Shape::Skew);
    }
    throw PreconditionError("unknown family");
}

std::string FolnerFamily::name() const {
    switch (kind) {
        case Kind::Symmetric:
            return "sym";
        case Kind::Positive:
            return "pos";
        case Kind::Shifted:
            return "shifted";
        case Kind::Box:
            return "box";
        case Kind::Skew:
            return "skew";
    }
    return "?";
}

FolnerFamily FolnerFamily::parse(const GroupDescriptor& group, const std::string& name) {
    FolnerFamily f;
    f.group = group;
    if (name == "sym")
        f.kind = Kind::Symmetric;
    else if (name == "pos")
        f.kind = Kind::Positive;
    else if (name == "shifted")
        f.kind = Kind::Shifted;
    else if (name == "box")
        f.kind = Kind::Box;
    else if (name == "skew")
        f.kind = Kind::Skew;
    else
        throw InputError("unknown family '" + name + "' (sym, pos, shifted, box, skew)");
    const bool line_family = f.kind == Kind::Positive || f.kind == Kind::Shifted;
    if (line_family && group.kind != GroupKind::IntLine) throw TypeError(name + " family needs IntLine");
    if ((f.kind == Kind::Box || f.kind == Kind::Skew) && group.kind != GroupKind::SolvablePK)
        throw TypeError(name + " family needs SolvablePK");
    return f;
}

std::string to_string(DensityMode m) {
    switch (m) {
        case DensityMode::UpperAlong:
            return "upper_along";
        case DensityMode::LowerAlong:
            return "lower_along";
        case DensityMode::BanachUpper:
            return "banach_upper";
        case DensityMode::BanachLower:
            return "banach_lower";
    }
    return "?";
}

json to_json(const DensityEstimate& d) {
    json series = json::array();
    for (auto [n, v] : d.series) series.push_back({n, v});
    return {{"mode", to_string(d.mode)}, {"value", d.value}, {"scale", d.scale}, {"exact", d.exact}, {"series", series}};
}

double default_tolerance(std::int64_t n) {
    const double x = static_cast<double>(n);
    return std::max(0.01, 20.0 * std::log(x) / x);
}

namespace {

std::vector<std::int64_t> prefix_sums(const std::vector<std::uint8_t>& mask) {
    std::vector<std::int64_t> P(mask.size() + 1, 0);
    for (std::size_t i = 0; i < mask.size(); ++i) P[i + 1] = P[i] + mask[i];
    return P;
}

std::set<std::int64_t> sample_points(std::int64_t n0, std::int64_t nMax) {
    std::set<std::int64_t> pts;
    if (nMax <= 2000) {
        for (std::int64_t n = 1; n <= nMax; ++n) pts.insert(n);
        return pts;
    }
    for (double x = 1; x < static_cast<double>(nMax); x *= 1.25) pts.insert(static_cast<std::int64_t>(x));
    const std::int64_t span = nMax - n0;
    for (int i = 0; i <= 20; ++i) pts.insert(n0 + span * i / 20);
    pts.insert(nMax);
    return pts;
}

std::int64_t tail_start(std::int64_t nMax, double tail) {
    if (tail <= 0 || tail > 1) throw PreconditionError("tail fraction must lie in (0, 1]");
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((1.0 - tail) * static_cast<double>(nMax))));
}

DensityPair finish(const std::vector<SeriesRow>& tail_rows, std::vector<SeriesRow> rows, const FolnerFamily& family,
                   std::int64_t nMax, double tail, bool exact) {
    DensityPair d;
    d.upper.mode = DensityMode::UpperAlong;
    d.lower.mode = DensityMode::LowerAlong;
    d.upper.value = 0;
    d.lower.value = 1;
    for (const auto& r : tail_rows) {
        d.upper.value = std::max(d.upper.value, r.ratio);
        d.lower.value = std::min(d.lower.value, r.ratio);
    }
    const json scale = {{"family", family.name()}, {"group", family.group.name()}, {"nMax", nMax}, {"tail", tail}};
    for (auto* e : {&d.upper, &d.lower}) {
        e->scale = scale;
        e->exact = exact;
        for (const auto& r : rows) e->series.emplace_back(r.n, r.ratio);
    }
    d.rows = std::move(rows);
    return d;
}

}  // namespace

DensityPair density_along(const WindowSet& w, const FolnerFamily& family, std::int64_t nMax, double tail) {
    if (w.group.kind != GroupKind::IntLine) throw TypeError("window density needs an IntLine window");
    if (nMax < 1) throw PreconditionError("nMax must be >= 1");
    const auto P = prefix_sums(w.mask);
    const std::int64_t n0 = tail_start(nMax, tail);
    auto row = [&](std::int64_t n) {
        const BoxParams b = family.box(n);
        if (b.lo < w.box.lo || b.hi > w.box.hi) throw PreconditionError("window does not cover F_n");
        SeriesRow r;
        r.n = n;
        r.size = static_cast<std::uint64_t>(b.hi - b.lo + 1);
        r.count = static_cast<std::uint64_t>(P[b.hi - w.box.lo + 1] - P[b.lo - w.box.lo]);
        r.ratio = static_cast<double>(r.count) / static_cast<double>(r.size);
        return r;
    };
    std::vector<SeriesRow> tail_rows;
    for (std::int64_t n = n0; n <= nMax; ++n) tail_rows.push_back(row(n));
    std::vector<SeriesRow> rows;
    for (auto n : sample_points(n0, nMax)) rows.push_back(row(n));
    return finish(tail_rows, std::move(rows), family, nMax, tail, w.exact);
}

DensityPair density_along(const SetExprPtr& expr, const FolnerFamily& family, std::int64_t nMax, double tail) {
    if (!(expr->group == family.group)) throw TypeError("expression and family live in different groups");
    if (nMax < 1) throw PreconditionError("nMax must be >= 1");
    if (family.group.kind == GroupKind::IntLine) {
        std::int64_t lo = 0, hi = 0;
        bool first = true;
        for (std::int64_t n : {std::int64_t{1}, nMax}) {
            const BoxParams b = family.box(n);
            lo = first ? b.lo : std::min(lo, b.lo);
            hi = first ? b.hi : std::max(hi, b.hi);
            first = false;
        }
        return density_along(materialize(expr, BoxParams::interval(lo, hi)), family, nMax, tail);
    }
    const std::int64_t n0 = tail_start(nMax, tail);
    std::vector<SeriesRow> rows, tail_rows;
    bool exact = true;
    for (std::int64_t n = 1; n <= nMax; ++n) {
        const WindowSet w = materialize(expr, family.box(n));
        exact = exact && w.exact;
        SeriesRow r;
        r.n = n;
        r.size = w.size();
        r.count = w.count();
        r.ratio = static_cast<double>(r.count) / static_cast<double>(r.size);
        rows.push_back(r);
        if (n >= n0) tail_rows.push_back(r);
    }
    return finish(tail_rows, std::move(rows), family, nMax, tail, exact);
}

std::int64_t max_window_count(const WindowSet& w, std::int64_t L, std::int64_t lo, std::int64_t hi) {
    if (w.group.kind != GroupKind::IntLine) throw TypeError("max_window_count needs IntLine");
    if (L < 1 || lo > hi) throw PreconditionError("bad window scan parameters");
    if (lo < w.box.lo || hi + L - 1 > w.box.hi) throw PreconditionError("window does not cover the scan range");
    const auto P = prefix_sums(w.mask);
    std::int64_t best = 0;
    for (std::int64_t x = lo; x <= hi; ++x) best = std::max(best, P[x + L - w.box.lo] - P[x - w.box.lo]);
    return best;
}

DensityEstimate banach_density(const WindowSet& w, bool upper, std::int64_t L, std::int64_t lo, std::int64_t hi) {
    if (w.group.kind != GroupKind::IntLine) throw TypeError("window Banach density needs IntLine");
    if (L < 1 || lo > hi) throw PreconditionError("bad Banach scan parameters");
    if (lo < w.box.lo || hi + L - 1 > w.box.hi) throw PreconditionError("window does not cover the scan range");
    const auto P = prefix_sums(w.mask);
    auto extremal = [&](std::int64_t len) {
        std::int64_t best = upper ? 0 : len;
        for (std::int64_t x = lo; x <= hi; ++x) {
            const std::int64_t c = P[x + len - w.box.lo] - P[x - w.box.lo];
            best = upper ? std::max(best, c) : std::min(best, c);
        }
        return static_cast<double>(best) / static_cast<double>(len);
    };
    DensityEstimate d;
    d.mode = upper ? DensityMode::BanachUpper : DensityMode::BanachLower;
    d.exact = w.exact;
    d.scale = {{"L", L}, {"search", {lo, hi}}};
    std::int64_t len = std::max<std::int64_t>(1, L >> 6);
    for (; len < L; len *= 2) d.series.emplace_back(len, extremal(len));
    d.value = extremal(L);
    d.series.emplace_back(L, d.value);
    return d;
}

namespace {

DensityEstimate lattice_banach(const SetExprPtr& expr, bool upper, std::int64_t L, std::int64_t lo, std::int64_t hi) {
    const int d = static_cast<int>(expr->group.param);
    const std::int64_t side = hi - lo + L;
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges(d, {lo, hi + L - 1});
    const WindowSet w = materialize(expr, BoxParams::lattice(ranges));
    // d-dimensional prefix sums with a leading zero slab per axis.
    const std::int64_t s1 = side + 1;
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::uint64_t>(s1);
    require_budget(total * sizeof(std::int64_t), "lattice prefix sums");
    std::vector<std::int64_t> P(total, 0);
    std::vector<std::int64_t> stride(d);
    stride[d - 1] = 1;
    for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * s1;
    for (std::uint64_t idx = 0; idx < w.mask.size(); ++idx) {
        std::uint64_t rem = idx, pos = 0;
        for (int i = d - 1; i >= 0; --i) {
            pos += (rem % side + 1) * stride[i];
            rem /= side;
        }
        P[pos] = w.mask[idx];
    }
    for (int axis = 0; axis < d; ++axis)
        for (std::uint64_t pos = 0; pos < total; ++pos)
            if ((pos / stride[axis]) % s1 != 0) P[pos] += P[pos - stride[axis]];
    auto box_sum = [&](const std::vector<std::int64_t>& x, std::int64_t len) {
        std::int64_t s = 0;
        for (int corner = 0; corner < (1 << d); ++corner) {
            std::int64_t pos = 0;
            int flips = 0;
            for (int i = 0; i < d; ++i) {
                const bool far = corner >> i & 1;
                pos += (x[i] - lo + (far ? len : 0)) * stride[i];
                flips += !far;
            }
            s += (flips % 2 ? -1 : 1) * P[pos];
        }
        return s;
    };
    auto extremal = [&](std::int64_t len) {
        const double vol = std::pow(static_cast<double>(len), d);
        double best = upper ? 0.0 : 1.0;
        std::vector<std::int64_t> x(d, lo);
        for (;;) {
            const double v = static_cast<double>(box_sum(x, len)) / vol;
            best = upper ? std::max(best, v) : std::min(best, v);
            int i = d - 1;
            while (i >= 0 && ++x[i] > hi) x[i--] = lo;
            if (i < 0) break;
        }
        return best;
    };
    DensityEstimate e;
    e.mode = upper ? DensityMode::BanachUpper : DensityMode::BanachLower;
    e.exact = w.exact;
    e.scale = {{"L", L}, {"search", {lo, hi}}, {"dimension", d}};
    for (std::int64_t len = std::max<std::int64_t>(1, L >> 6); len < L; len *= 2) e.series.emplace_back(len, extremal(len));
    e.value = extremal(L);
    e.series.emplace_back(L, e.value);
    return e;
}

}  // namespace

DensityEstimate banach_density(const SetExprPtr& expr, bool upper, std::int64_t L, std::int64_t lo, std::int64_t hi) {
    if (expr->group.kind == GroupKind::IntLattice) return lattice_banach(expr, upper, L, lo, hi);
    if (expr->group.kind != GroupKind::IntLine)
        throw UnsupportedQuery("Banach density by window scans is implemented for IntLine and IntLattice; use "
                               "density_along over translated boxes for " +
                               expr->group.name());
    if (L < 1 || lo > hi) throw PreconditionError("bad Banach scan parameters");
    return banach_density(materialize(expr, BoxParams::interval(lo, hi + L - 1)), upper, L, lo, hi);
}

ThickResult is_thick_at_scale(const WindowSet& w, std::int64_t L, std::int64_t lo, std::int64_t hi) {
    if (w.group.kind != GroupKind::IntLine) throw TypeError("thickness scan needs IntLine");
    if (L < 1 || lo > hi) throw PreconditionError("bad thickness scan parameters");
    if (lo < w.box.lo || hi + L - 1 > w.box.hi) throw PreconditionError("window does not cover the scan range");
    ThickResult r;
    std::int64_t run = 0;  // members ending at y
    for (std::int64_t y = lo; y <= hi + L - 1; ++y) {
        run = w.contains(y) ? run + 1 : 0;
        if (run >= L) {
            r.thick = true;
            r.witness = y - L + 1;
            return r;
        }
    }
    return r;
}

ThickResult is_thick_at_scale(const SetExprPtr& expr, std::int64_t L, std::int64_t lo, std::int64_t hi) {
    if (expr->group.kind != GroupKind::IntLine) throw UnsupportedQuery("thickness scans are implemented for IntLine");
    if (L < 1 || lo > hi) throw PreconditionError("bad thickness scan parameters");
    return is_thick_at_scale(materialize(expr, BoxParams::interval(lo, hi + L - 1)), L, lo, hi);
}

SyndeticResult is_syndetic_at_scale(const WindowSet& w, std::int64_t gap_bound, std::int64_t lo, std::int64_t hi) {
    if (w.group.kind != GroupKind::IntLine) throw TypeError("syndeticity scan needs IntLine");
    if (lo > hi) throw PreconditionError("bad syndeticity scan range");
    if (lo < w.box.lo || hi > w.box.hi) throw PreconditionError("window does not cover the scan range");
    SyndeticResult r;
    std::int64_t prev = lo - 1;
    for (std::int64_t y = lo; y <= hi; ++y)
        if (w.contains(y)) {
            r.max_gap = std::max(r.max_gap, y - prev);
            prev = y;
        }
    r.max_gap = std::max(r.max_gap, hi + 1 - prev);
    r.syndetic = r.max_gap <= gap_bound;
    return r;
}

SyndeticResult is_syndetic_at_scale(const SetExprPtr& expr, std::int64_t gap_bound, std::int64_t lo, std::int64_t hi) {
    if (expr->group.kind != GroupKind::IntLine) throw UnsupportedQuery("syndeticity scans are implemented for IntLine");
    return is_syndetic_at_scale(materialize(expr, BoxParams::interval(lo, hi)), gap_bound, lo, hi);
}

Rational folner_defect(const FolnerFamily& family, std::int64_t n, const Element& g) {
    const GroupDescriptor& G = family.group;
    if (!G.contains(g)) throw TypeError("element not in " + G.name());
    const BoxParams box = family.box(n);
    const std::uint64_t size = box_size(G, box);
    std::int64_t outside = 0;
    if (G.kind == GroupKind::IntLine) {
        outside = std::min<std::int64_t>(std::llabs(std::get<IntElt>(g).n), static_cast<std::int64_t>(size));
    } else {
        const auto els = enumerate_box(G, box);
        outside = parallel_sum(els.size(), [&](std::uint64_t b, std::uint64_t e) {
            std::int64_t c = 0;
            for (std::uint64_t i = b; i < e; ++i) c += box_index(G, box, group_op(G, g, els[i])) < 0;
            return c;
        });
    }
    return Rational(2 * outside, static_cast<std::int64_t>(size));
}

void write_csv(std::ostream& out, const std::vector<SeriesRow>& rows) {
    out << "n,size,count,ratio\n";
    out.precision(12);
    for (const auto& r : rows) out << r.n << ',' << r.size << ',' << r.count << ',' << r.ratio << '\n';
}

}  // namespace sumset

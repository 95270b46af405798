#include "sumset/sturmian.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "sumset/errors.hpp"
#include "sumset/parallel.hpp"

namespace sumset {

using nlohmann::json;

TorusInterval TorusInterval::from_length(const Rational& lo, const Rational& len) {
    if (len < Rational(0)) throw PreconditionError("negative interval length");
    TorusInterval I;
    I.lo_ = lo.frac();
    I.len_ = len > Rational(1) ? Rational(1) : len;
    if (I.len_ == Rational(1)) I.lo_ = Rational(0);
    return I;
}

TorusInterval TorusInterval::closed(const Rational& lo, const Rational& hi) {
    if (hi - lo >= Rational(1)) return full();
    Rational len = (hi - lo).frac();
    return from_length(lo, len);
}

TorusInterval TorusInterval::full() { return from_length(Rational(0), Rational(1)); }

bool TorusInterval::contains(const Rational& x) const {
    if (is_full()) return true;
    return (x - lo_).frac() <= len_;
}

bool TorusInterval::contains(const QuadIrr& x) const { return Arc::of(*this).contains(x); }

std::string TorusInterval::str() const {
    if (is_full()) return "[0, 1)";
    return "[" + lo_.str() + ", " + (lo_ + len_).str() + "]";
}

bool Arc::contains(const QuadIrr& x) const {
    if (len >= Rational(1)) return true;
    return (x - start).frac() <= QuadIrr(len);
}

TorusInterval interval_sum(const TorusInterval& I, const TorusInterval& J) {
    return TorusInterval::from_length(I.lo() + J.lo(), I.length() + J.length());
}

Arc interval_translate(const TorusInterval& I, const QuadIrr& alpha, std::int64_t n) {
    return {(QuadIrr(I.lo()) + n * alpha).frac(), I.length()};
}

bool interval_disjoint(const Arc& a, const Arc& b) { return !a.contains(b.start) && !b.contains(a.start); }

bool frac_in_interval(std::int64_t n, const QuadIrr& alpha, const TorusInterval& I) {
    if (I.is_full()) return true;
    return ((n * alpha) - QuadIrr(I.lo())).frac() <= QuadIrr(I.length());
}

std::int64_t find_shift_n(const QuadIrr& alpha, const TorusInterval& I, std::int64_t bound) {
    if (!alpha.is_irrational()) throw PreconditionError("alpha must be irrational");
    if (I.measure() * Rational(3) >= Rational(1))
        throw PreconditionError("find_shift_n needs m(I) < 1/3, got " + I.measure().str());
    const Arc sum = Arc::of(interval_sum(I, I));
    for (std::int64_t n = 1; n <= bound; ++n)
        for (std::int64_t s : {n, -n})
            if (interval_disjoint(sum, interval_translate(I, alpha, s))) return s;
    throw NotFound("no shift n with |n| <= " + std::to_string(bound));
}

void SturmianSpec::validate() const {
    if (!alpha.is_irrational()) throw PreconditionError("Sturmian alpha must be irrational");
    if (offset_sign != 1 && offset_sign != -1) throw PreconditionError("offset sign must be +1 or -1");
}

bool sturmian_member(const SturmianSpec& spec, std::int64_t n) {
    return frac_in_interval(checked_sub(n, spec.offset_m), spec.alpha, spec.interval.shifted(spec.offset_c));
}

bool twisted_member(const SturmianSpec& spec, std::int64_t m, int eps) {
    const std::int64_t e = eps * spec.offset_sign;
    return frac_in_interval(checked_sub(m, e * spec.offset_m), spec.alpha,
                            spec.interval.shifted(e > 0 ? spec.offset_c : -spec.offset_c));
}

namespace {

long double to_ld(const Rational& r) { return static_cast<long double>(r.num()) / static_cast<long double>(r.den()); }

}  // namespace

SturmianTester::SturmianTester(const SturmianSpec& spec)
    : spec_(spec),
      alpha_(spec.alpha.approx()),
      shifted_(spec.interval.shifted(spec.offset_c)),
      shifted_neg_(spec.interval.shifted(-spec.offset_c)),
      lo_pos_(to_ld(shifted_.lo())),
      lo_neg_(to_ld(shifted_neg_.lo())),
      len_(to_ld(spec.interval.length())) {
    spec.validate();
}

bool SturmianTester::frac_test(std::int64_t n, const TorusInterval& I, long double lo) const {
    if (I.is_full()) return true;
    const long double v = static_cast<long double>(n) * alpha_ - lo;
    const long double t = v - std::floor(v);
    const long double margin = 1e-12L + std::fabs(static_cast<long double>(n)) * 1e-17L;
    if (t > margin && t < len_ - margin) return true;
    if (t > len_ + margin && t < 1.0L - margin) return false;
    return frac_in_interval(n, spec_.alpha, I);
}

bool SturmianTester::operator()(std::int64_t n) const { return frac_test(n - spec_.offset_m, shifted_, lo_pos_); }

bool SturmianTester::operator()(std::int64_t m, int eps) const {
    const std::int64_t e = eps * spec_.offset_sign;
    return e > 0 ? frac_test(m - spec_.offset_m, shifted_, lo_pos_) : frac_test(m + spec_.offset_m, shifted_neg_, lo_neg_);
}

WindowSet sturmian_members(const SturmianSpec& spec, const GroupDescriptor& group, const BoxParams& window) {
    if (spec.twisted && group.kind != GroupKind::DihedralInf)
        throw TypeError("twisted Sturmian sets live on DihedralInf");
    if (!spec.twisted && group.kind != GroupKind::IntLine) throw TypeError("Sturmian sets live on IntLine");
    const SturmianTester test(spec);
    WindowSet w;
    w.group = group;
    w.box = window;
    const std::uint64_t n = box_size(group, window);
    require_budget(n, "Sturmian window");
    w.mask.assign(n, 0);
    parallel_for(n, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            if (spec.twisted) {
                // enumeration order (m,-1), (m,+1)
                const std::int64_t m = window.lo + static_cast<std::int64_t>(i / 2);
                w.mask[i] = test(m, i % 2 ? 1 : -1);
            } else {
                w.mask[i] = test(window.lo + static_cast<std::int64_t>(i));
            }
        }
    });
    return w;
}

Equidistribution equidistribution_check(const QuadIrr& alpha, const TorusInterval& I, std::int64_t n) {
    if (n < 1) throw PreconditionError("equidistribution_check needs n >= 1");
    SturmianSpec spec;
    spec.alpha = alpha;
    spec.interval = I;
    const SturmianTester test(spec);
    const std::int64_t count = parallel_sum(static_cast<std::uint64_t>(n), [&](std::uint64_t begin, std::uint64_t end) {
        std::int64_t c = 0;
        for (std::uint64_t k = begin; k < end; ++k) c += test(static_cast<std::int64_t>(k) + 1);
        return c;
    });
    Equidistribution e;
    e.count = count;
    e.n = n;
    e.ratio = static_cast<double>(count) / static_cast<double>(n);
    e.discrepancy = std::fabs(e.ratio - I.measure().to_double());
    return e;
}

QuadIrr parse_alpha(const std::string& text) {
    if (text == "golden") return QuadIrr::golden_conjugate();
    if (text == "sqrt2-1") return QuadIrr(-1, 1, 1, 2);
    std::stringstream in(text);
    std::int64_t v[4];
    char sep = 0;
    for (int i = 0; i < 4; ++i) {
        if (!(in >> v[i])) throw InputError("alpha must be 'golden' or 'p,q,r,d', got '" + text + "'");
        if (i < 3 && (!(in >> sep) || sep != ',')) throw InputError("alpha must be 'p,q,r,d', got '" + text + "'");
    }
    QuadIrr a(v[0], v[1], v[2], v[3]);
    if (!a.is_irrational()) throw InputError("alpha must be irrational");
    return a;
}

json interval_to_json(const TorusInterval& I) {
    if (I.is_full()) return {{"full", true}};
    return {{"lo", I.lo().str()}, {"hi", I.hi().str()}};
}

TorusInterval interval_from_json(const json& j) {
    try {
        if (j.value("full", false)) return TorusInterval::full();
        return TorusInterval::closed(Rational::parse(j.at("lo").get<std::string>()),
                                     Rational::parse(j.at("hi").get<std::string>()));
    } catch (const json::exception& e) {
        throw InputError(std::string("bad interval: ") + e.what());
    }
}

json sturmian_to_json(const SturmianSpec& spec) {
    return {{"alpha", {spec.alpha.p(), spec.alpha.q(), spec.alpha.r(), spec.alpha.d()}},
            {"interval", interval_to_json(spec.interval)},
            {"offset", {{"c", spec.offset_c.str()}, {"m", spec.offset_m}, {"sign", spec.offset_sign}}},
            {"twisted", spec.twisted}};
}

SturmianSpec sturmian_from_json(const json& j) {
    try {
        SturmianSpec s;
        if (j.contains("alpha")) {
            const auto& a = j.at("alpha");
            if (a.is_string())
                s.alpha = parse_alpha(a.get<std::string>());
            else
                s.alpha = QuadIrr(a.at(0).get<std::int64_t>(), a.at(1).get<std::int64_t>(), a.at(2).get<std::int64_t>(),
                                  a.at(3).get<std::int64_t>());
        }
        s.interval = interval_from_json(j.at("interval"));
        if (j.contains("offset")) {
            const auto& o = j.at("offset");
            s.offset_c = Rational::parse(o.value("c", std::string("0")));
            s.offset_m = o.value("m", std::int64_t{0});
            s.offset_sign = o.value("sign", 1);
        }
        s.twisted = j.value("twisted", false);
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw InputError(std::string("bad Sturmian spec: ") + e.what());
    }
}

}  // namespace sumset

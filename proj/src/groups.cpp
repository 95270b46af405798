#include "sumset/groups.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numeric>

#include "sumset/errors.hpp"

namespace sumset {

using nlohmann::json;

PAdic PAdic::make(std::int64_t num, std::int64_t val, std::int64_t p) {
    if (p < 2) throw PreconditionError("p must be >= 2");
    if (num == 0) return {};
    while (num % p == 0) {
        num /= p;
        val = checked_add(val, 1);
    }
    return {num, val};
}

PAdic PAdic::from_rational(const Rational& x, std::int64_t p) {
    // x lies in Z[1/p] iff its reduced denominator divides some p^k.
    std::int64_t rest = x.den();
    for (std::int64_t g; (g = std::gcd(rest, p)) > 1;) rest /= g;
    if (rest != 1) throw InputError("denominator of " + x.str() + " does not divide a power of " + std::to_string(p));
    std::int64_t pk = 1, k = 0;
    while (pk % x.den() != 0) {
        pk = checked_mul(pk, p);
        ++k;
    }
    return make(checked_mul(x.num(), pk / x.den()), -k, p);
}

Rational PAdic::to_rational(std::int64_t p) const {
    if (num == 0) return Rational(0);
    if (val >= 0) return Rational(checked_mul(num, checked_pow(p, static_cast<int>(val))));
    return Rational(num, checked_pow(p, static_cast<int>(-val)));
}

long double PAdic::approx(std::int64_t p) const {
    if (num == 0) return 0.0L;
    return static_cast<long double>(num) * std::pow(static_cast<long double>(p), static_cast<long double>(val));
}

PAdic padd(std::int64_t p, const PAdic& a, const PAdic& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const std::int64_t m = std::min(a.val, b.val);
    auto lift = [&](const PAdic& x) {
        return checked_mul(x.num, checked_pow(p, static_cast<int>(checked_sub(x.val, m))));
    };
    return PAdic::make(checked_add(lift(a), lift(b)), m, p);
}

PAdic pneg(const PAdic& a) { return {checked_sub(0, a.num), a.val}; }

PAdic pshift(const PAdic& a, std::int64_t k) {
    if (a.is_zero()) return a;
    return {a.num, checked_add(a.val, k)};
}

GroupDescriptor GroupDescriptor::lattice(std::int64_t d) {
    if (d < 1) throw PreconditionError("lattice dimension must be >= 1");
    return {GroupKind::IntLattice, d, nullptr, {}};
}

GroupDescriptor GroupDescriptor::cyclic(std::int64_t m) {
    if (m < 1) throw PreconditionError("cyclic modulus must be >= 1");
    return {GroupKind::Cyclic, m, nullptr, {}};
}

GroupDescriptor GroupDescriptor::finite(FiniteGroupPtr table, std::string id) {
    if (!table) throw PreconditionError("finite group descriptor needs a table");
    return {GroupKind::FiniteTable, table->order(), std::move(table), std::move(id)};
}

GroupDescriptor GroupDescriptor::dihedral_inf() { return {GroupKind::DihedralInf, 0, nullptr, {}}; }

GroupDescriptor GroupDescriptor::solvable(std::int64_t p) {
    if (p < 2) throw PreconditionError("SolvablePK needs p >= 2");
    return {GroupKind::SolvablePK, p, nullptr, {}};
}

bool GroupDescriptor::contains(const Element& g) const {
    switch (kind) {
        case GroupKind::IntLine:
            return std::holds_alternative<IntElt>(g);
        case GroupKind::IntLattice:
            return std::holds_alternative<VecElt>(g) &&
                   static_cast<std::int64_t>(std::get<VecElt>(g).v.size()) == param;
        case GroupKind::Cyclic:
            return std::holds_alternative<ResElt>(g) && std::get<ResElt>(g).r >= 0 && std::get<ResElt>(g).r < param;
        case GroupKind::FiniteTable:
            return std::holds_alternative<TableElt>(g) && std::get<TableElt>(g).i >= 0 &&
                   std::get<TableElt>(g).i < param;
        case GroupKind::DihedralInf:
            return std::holds_alternative<DihElt>(g) &&
                   (std::get<DihElt>(g).eps == 1 || std::get<DihElt>(g).eps == -1);
        case GroupKind::SolvablePK: {
            if (!std::holds_alternative<AffineElt>(g)) return false;
            const PAdic& a = std::get<AffineElt>(g).a;
            return a.is_zero() || a.num % param != 0;
        }
    }
    return false;
}

std::string GroupDescriptor::name() const {
    switch (kind) {
        case GroupKind::IntLine:
            return "IntLine";
        case GroupKind::IntLattice:
            return "IntLattice(" + std::to_string(param) + ")";
        case GroupKind::Cyclic:
            return "Cyclic(" + std::to_string(param) + ")";
        case GroupKind::FiniteTable:
            return "FiniteTable(" + table_id + ")";
        case GroupKind::DihedralInf:
            return "DihedralInf";
        case GroupKind::SolvablePK:
            return "SolvablePK(" + std::to_string(param) + ")";
    }
    return "?";
}

namespace {

void check_member(const GroupDescriptor& desc, const Element& g) {
    if (!desc.contains(g)) throw TypeError("element does not belong to " + desc.name());
}

}  // namespace

Element identity(const GroupDescriptor& desc) {
    switch (desc.kind) {
        case GroupKind::IntLine:
            return IntElt{0};
        case GroupKind::IntLattice:
            return VecElt{std::vector<std::int64_t>(desc.param, 0)};
        case GroupKind::Cyclic:
            return ResElt{0};
        case GroupKind::FiniteTable:
            return TableElt{desc.table->identity()};
        case GroupKind::DihedralInf:
            return DihElt{0, 1};
        case GroupKind::SolvablePK:
            return AffineElt{};
    }
    throw TypeError("unknown group kind");
}

Element group_op(const GroupDescriptor& desc, const Element& g, const Element& h) {
    check_member(desc, g);
    check_member(desc, h);
    switch (desc.kind) {
        case GroupKind::IntLine:
            return IntElt{checked_add(std::get<IntElt>(g).n, std::get<IntElt>(h).n)};
        case GroupKind::IntLattice: {
            VecElt out = std::get<VecElt>(g);
            const auto& w = std::get<VecElt>(h).v;
            for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = checked_add(out.v[i], w[i]);
            return out;
        }
        case GroupKind::Cyclic:
            return ResElt{(std::get<ResElt>(g).r + std::get<ResElt>(h).r) % desc.param};
        case GroupKind::FiniteTable:
            return TableElt{desc.table->op(std::get<TableElt>(g).i, std::get<TableElt>(h).i)};
        case GroupKind::DihedralInf: {
            const auto& x = std::get<DihElt>(g);
            const auto& y = std::get<DihElt>(h);
            return DihElt{checked_add(x.m, x.eps * y.m), x.eps * y.eps};
        }
        case GroupKind::SolvablePK: {
            const auto& x = std::get<AffineElt>(g);
            const auto& y = std::get<AffineElt>(h);
            return AffineElt{padd(desc.param, x.a, pshift(y.a, x.k)), checked_add(x.k, y.k)};
        }
    }
    throw TypeError("unknown group kind");
}

Element inverse(const GroupDescriptor& desc, const Element& g) {
    check_member(desc, g);
    switch (desc.kind) {
        case GroupKind::IntLine:
            return IntElt{checked_sub(0, std::get<IntElt>(g).n)};
        case GroupKind::IntLattice: {
            VecElt out = std::get<VecElt>(g);
            for (auto& c : out.v) c = checked_sub(0, c);
            return out;
        }
        case GroupKind::Cyclic:
            return ResElt{(desc.param - std::get<ResElt>(g).r) % desc.param};
        case GroupKind::FiniteTable:
            return TableElt{desc.table->inverse(std::get<TableElt>(g).i)};
        case GroupKind::DihedralInf: {
            const auto& x = std::get<DihElt>(g);
            return DihElt{checked_sub(0, x.eps * x.m), x.eps};
        }
        case GroupKind::SolvablePK: {
            const auto& x = std::get<AffineElt>(g);
            return AffineElt{pneg(pshift(x.a, checked_sub(0, x.k))), checked_sub(0, x.k)};
        }
    }
    throw TypeError("unknown group kind");
}

std::vector<Element> conjugate_set(const GroupDescriptor& desc, const Element& g, const std::vector<Element>& F) {
    const Element gi = inverse(desc, g);
    std::vector<Element> out;
    out.reserve(F.size());
    for (const auto& f : F) out.push_back(group_op(desc, group_op(desc, g, f), gi));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Element affine_elt(std::int64_t p, const Rational& a, std::int64_t k) { return AffineElt{PAdic::from_rational(a, p), k}; }

std::string to_string(const GroupDescriptor& desc, const Element& g) {
    return std::visit(
        [&](const auto& e) -> std::string {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, IntElt>) {
                return std::to_string(e.n);
            } else if constexpr (std::is_same_v<T, VecElt>) {
                std::string s = "(";
                for (std::size_t i = 0; i < e.v.size(); ++i) s += (i ? "," : "") + std::to_string(e.v[i]);
                return s + ")";
            } else if constexpr (std::is_same_v<T, ResElt>) {
                return std::to_string(e.r) + " mod " + std::to_string(desc.param);
            } else if constexpr (std::is_same_v<T, DihElt>) {
                return "(" + std::to_string(e.m) + "," + (e.eps > 0 ? "+1" : "-1") + ")";
            } else if constexpr (std::is_same_v<T, AffineElt>) {
                std::string a;
                try {
                    a = e.a.to_rational(desc.param).str();
                } catch (const std::overflow_error&) {
                    a = std::to_string(e.a.num) + "*" + std::to_string(desc.param) + "^" + std::to_string(e.a.val);
                }
                return "(" + a + "," + std::to_string(e.k) + ")";
            } else {
                if (desc.table && !desc.table->labels().empty()) return desc.table->labels()[e.i];
                return "#" + std::to_string(e.i);
            }
        },
        g);
}

json element_to_json(const GroupDescriptor& desc, const Element& g) {
    check_member(desc, g);
    switch (desc.kind) {
        case GroupKind::IntLine:
            return std::get<IntElt>(g).n;
        case GroupKind::IntLattice:
            return std::get<VecElt>(g).v;
        case GroupKind::Cyclic:
            return std::get<ResElt>(g).r;
        case GroupKind::FiniteTable:
            return std::get<TableElt>(g).i;
        case GroupKind::DihedralInf:
            return json::array({std::get<DihElt>(g).m, std::get<DihElt>(g).eps});
        case GroupKind::SolvablePK: {
            const auto& e = std::get<AffineElt>(g);
            return json::array({e.a.to_rational(desc.param).str(), e.k});
        }
    }
    throw TypeError("unknown group kind");
}

Element element_from_json(const GroupDescriptor& desc, const json& j) {
    try {
        Element g;
        switch (desc.kind) {
            case GroupKind::IntLine:
                g = IntElt{j.get<std::int64_t>()};
                break;
            case GroupKind::IntLattice:
                g = VecElt{j.get<std::vector<std::int64_t>>()};
                break;
            case GroupKind::Cyclic:
                g = ResElt{floor_mod(j.get<std::int64_t>(), desc.param)};
                break;
            case GroupKind::FiniteTable:
                g = TableElt{j.get<int>()};
                break;
            case GroupKind::DihedralInf:
                g = DihElt{j.at(0).get<std::int64_t>(), j.at(1).get<int>()};
                break;
            case GroupKind::SolvablePK: {
                const auto& a = j.at(0);
                Rational r = a.is_string() ? Rational::parse(a.get<std::string>()) : Rational(a.get<std::int64_t>());
                g = affine_elt(desc.param, r, j.at(1).get<std::int64_t>());
                break;
            }
        }
        check_member(desc, g);
        return g;
    } catch (const json::exception& e) {
        throw InputError(std::string("bad element for ") + desc.name() + ": " + e.what());
    }
}

json descriptor_to_json(const GroupDescriptor& desc) {
    switch (desc.kind) {
        case GroupKind::IntLine:
            return {{"kind", "IntLine"}};
        case GroupKind::IntLattice:
            return {{"kind", "IntLattice"}, {"d", desc.param}};
        case GroupKind::Cyclic:
            return {{"kind", "Cyclic"}, {"m", desc.param}};
        case GroupKind::FiniteTable:
            return {{"kind", "FiniteTable"}, {"id", desc.table_id}};
        case GroupKind::DihedralInf:
            return {{"kind", "DihedralInf"}};
        case GroupKind::SolvablePK:
            return {{"kind", "SolvablePK"}, {"p", desc.param}};
    }
    throw TypeError("unknown group kind");
}

GroupDescriptor descriptor_from_json(const json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "IntLine") return GroupDescriptor::int_line();
        if (kind == "IntLattice") return GroupDescriptor::lattice(j.at("d").get<std::int64_t>());
        if (kind == "Cyclic") return GroupDescriptor::cyclic(j.at("m").get<std::int64_t>());
        if (kind == "DihedralInf") return GroupDescriptor::dihedral_inf();
        if (kind == "SolvablePK") return GroupDescriptor::solvable(j.at("p").get<std::int64_t>());
        if (kind == "FiniteTable") {
            const std::string id = j.at("id").get<std::string>();
            if (std::filesystem::exists(id))
                return GroupDescriptor::finite(std::make_shared<const FiniteGroup>(FiniteGroup::load(id)), id);
            return GroupDescriptor::finite(std::make_shared<const FiniteGroup>(small_groups::by_name(id)), id);
        }
        throw InputError("unknown group kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw InputError(std::string("bad group descriptor: ") + e.what());
    }
}

BoxParams BoxParams::interval(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw PreconditionError("empty interval box");
    BoxParams b;
    b.lo = lo;
    b.hi = hi;
    return b;
}

BoxParams BoxParams::lattice(std::vector<std::pair<std::int64_t, std::int64_t>> ranges) {
    for (auto [a, b] : ranges)
        if (a > b) throw PreconditionError("empty lattice range");
    BoxParams box;
    box.ranges = std::move(ranges);
    return box;
}

BoxParams BoxParams::solvable(int n, std::int64_t J, Shape shape) {
    if (n < 0 || J < 0) throw PreconditionError("solvable box needs n, J >= 0");
    if (shape == Shape::Skew && (n < 1 || J < 1)) throw PreconditionError("skew box needs n, J >= 1");
    BoxParams b;
    b.n = n;
    b.J = J;
    b.shape = shape;
    return b;
}

std::uint64_t box_size(const GroupDescriptor& desc, const BoxParams& box) {
    auto width = [](std::int64_t lo, std::int64_t hi) { return static_cast<std::uint64_t>(hi - lo + 1); };
    switch (desc.kind) {
        case GroupKind::IntLine:
            return width(box.lo, box.hi);
        case GroupKind::DihedralInf:
            return 2 * width(box.lo, box.hi);
        case GroupKind::IntLattice: {
            if (static_cast<std::int64_t>(box.ranges.size()) != desc.param)
                throw PreconditionError("lattice box dimension mismatch");
            std::uint64_t s = 1;
            for (auto [a, b] : box.ranges) s *= width(a, b);
            return s;
        }
        case GroupKind::Cyclic:
        case GroupKind::FiniteTable:
            return static_cast<std::uint64_t>(desc.param);
        case GroupKind::SolvablePK:
            if (box.shape == BoxParams::Shape::Skew) return static_cast<std::uint64_t>(box.n) * box.J;
            return static_cast<std::uint64_t>(2 * box.n + 1) * static_cast<std::uint64_t>(2 * box.J + 1);
    }
    return 0;
}

bool box_contains(const GroupDescriptor& desc, const BoxParams& box, const Element& g) {
    if (!desc.contains(g)) return false;
    switch (desc.kind) {
        case GroupKind::IntLine: {
            auto n = std::get<IntElt>(g).n;
            return n >= box.lo && n <= box.hi;
        }
        case GroupKind::DihedralInf: {
            auto m = std::get<DihElt>(g).m;
            return m >= box.lo && m <= box.hi;
        }
        case GroupKind::IntLattice: {
            const auto& v = std::get<VecElt>(g).v;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i] < box.ranges[i].first || v[i] > box.ranges[i].second) return false;
            return true;
        }
        case GroupKind::Cyclic:
        case GroupKind::FiniteTable:
            return true;
        case GroupKind::SolvablePK:
            return box_index(desc, box, g) >= 0;
    }
    return false;
}

namespace {

// j with a = j p^-shift, if a lies in p^-shift Z and |j| fits.
bool scaled_numerator(const PAdic& a, std::int64_t p, std::int64_t shift, std::int64_t& j) {
    if (a.is_zero()) {
        j = 0;
        return true;
    }
    const std::int64_t e = a.val + shift;
    if (e < 0) return false;
    if (e > 62) return false;
    try {
        j = checked_mul(a.num, checked_pow(p, static_cast<int>(e)));
    } catch (const std::overflow_error&) {
        return false;
    }
    return true;
}

}  // namespace

std::int64_t box_index(const GroupDescriptor& desc, const BoxParams& box, const Element& g) {
    if (!desc.contains(g)) return -1;
    switch (desc.kind) {
        case GroupKind::IntLine: {
            auto n = std::get<IntElt>(g).n;
            return n >= box.lo && n <= box.hi ? n - box.lo : -1;
        }
        case GroupKind::DihedralInf: {
            const auto& e = std::get<DihElt>(g);
            if (e.m < box.lo || e.m > box.hi) return -1;
            return 2 * (e.m - box.lo) + (e.eps > 0 ? 1 : 0);
        }
        case GroupKind::IntLattice: {
            const auto& v = std::get<VecElt>(g).v;
            std::int64_t idx = 0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                auto [a, b] = box.ranges[i];
                if (v[i] < a || v[i] > b) return -1;
                idx = idx * (b - a + 1) + (v[i] - a);
            }
            return idx;
        }
        case GroupKind::Cyclic:
            return std::get<ResElt>(g).r;
        case GroupKind::FiniteTable:
            return std::get<TableElt>(g).i;
        case GroupKind::SolvablePK: {
            const auto& e = std::get<AffineElt>(g);
            std::int64_t j = 0;
            if (box.shape == BoxParams::Shape::Skew) {
                if (e.k < 0 || e.k >= box.n) return -1;
                if (!scaled_numerator(e.a, desc.param, box.n - e.k, j)) return -1;
                if (j < 0 || j >= box.J) return -1;
                return e.k * box.J + j;
            }
            if (e.k < -box.n || e.k > box.n) return -1;
            if (!scaled_numerator(e.a, desc.param, box.n, j)) return -1;
            if (j < -box.J || j > box.J) return -1;
            return (e.k + box.n) * (2 * box.J + 1) + (j + box.J);
        }
    }
    return -1;
}

std::uint64_t memory_budget_bytes() {
    std::uint64_t mb = 4096;
    if (const char* env = std::getenv("SUMSET_MEMORY_MB")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) mb = v;
    }
    return mb << 20;
}

void require_budget(std::uint64_t bytes, const std::string& what) {
    if (bytes > memory_budget_bytes())
        throw ResourceError(what + " needs " + std::to_string(bytes >> 20) + " MiB, over the budget of " +
                            std::to_string(memory_budget_bytes() >> 20) + " MiB (SUMSET_MEMORY_MB)");
}

std::vector<Element> enumerate_box(const GroupDescriptor& desc, const BoxParams& box) {
    const std::uint64_t n = box_size(desc, box);
    std::uint64_t per = sizeof(Element);
    if (desc.kind == GroupKind::IntLattice) per += desc.param * sizeof(std::int64_t);
    require_budget(n * per, "box enumeration");
    std::vector<Element> out;
    out.reserve(n);
    switch (desc.kind) {
        case GroupKind::IntLine:
            for (std::int64_t x = box.lo; x <= box.hi; ++x) out.push_back(IntElt{x});
            break;
        case GroupKind::DihedralInf:
            for (std::int64_t x = box.lo; x <= box.hi; ++x) {
                out.push_back(DihElt{x, -1});
                out.push_back(DihElt{x, 1});
            }
            break;
        case GroupKind::IntLattice: {
            std::vector<std::int64_t> v(box.ranges.size());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = box.ranges[i].first;
            for (std::uint64_t c = 0; c < n; ++c) {
                out.push_back(VecElt{v});
                for (std::size_t i = v.size(); i-- > 0;) {
                    if (++v[i] <= box.ranges[i].second) break;
                    v[i] = box.ranges[i].first;
                }
            }
            break;
        }
        case GroupKind::Cyclic:
            for (std::int64_t r = 0; r < desc.param; ++r) out.push_back(ResElt{r});
            break;
        case GroupKind::FiniteTable:
            for (int i = 0; i < desc.param; ++i) out.push_back(TableElt{i});
            break;
        case GroupKind::SolvablePK: {
            const std::int64_t p = desc.param;
            if (box.shape == BoxParams::Shape::Skew) {
                for (std::int64_t k = 0; k < box.n; ++k)
                    for (std::int64_t j = 0; j < box.J; ++j) out.push_back(AffineElt{PAdic::make(j, k - box.n, p), k});
            } else {
                for (std::int64_t k = -box.n; k <= box.n; ++k)
                    for (std::int64_t j = -box.J; j <= box.J; ++j) out.push_back(AffineElt{PAdic::make(j, -box.n, p), k});
            }
            break;
        }
    }
    return out;
}

}  // namespace sumset

#include "sumset/finite_group.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "sumset/errors.hpp"

namespace sumset {

FiniteGroup::FiniteGroup(Table table, std::vector<std::string> labels, std::string name)
    : table_(std::move(table)), labels_(std::move(labels)), name_(std::move(name)) {
    const int n = order();
    if (n < 1) throw InputError("group table must be non-empty");
    if (!labels_.empty() && static_cast<int>(labels_.size()) != n)
        throw InputError("label row has " + std::to_string(labels_.size()) + " entries, expected " + std::to_string(n));
    for (const auto& row : table_) {
        if (static_cast<int>(row.size()) != n) throw InputError("Cayley table is not square");
        for (int v : row)
            if (v < 0 || v >= n) throw InputError("Cayley table entry out of range");
    }
    identity_ = -1;
    for (int e = 0; e < n && identity_ < 0; ++e) {
        bool ok = true;
        for (int x = 0; x < n && ok; ++x) ok = table_[e][x] == x && table_[x][e] == x;
        if (ok) identity_ = e;
    }
    if (identity_ < 0) throw InputError("Cayley table has no identity");
    inverse_.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (table_[a][b] == identity_ && table_[b][a] == identity_) inverse_[a] = b;
        if (inverse_[a] < 0) throw InputError("element " + std::to_string(a) + " has no inverse");
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                    throw InputError("Cayley table is not associative");
}

bool FiniteGroup::is_abelian() const {
    for (int a = 0; a < order(); ++a)
        for (int b = a + 1; b < order(); ++b)
            if (table_[a][b] != table_[b][a]) return false;
    return true;
}

FiniteGroup FiniteGroup::parse(std::istream& in, std::string name) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty Cayley table file");
    std::istringstream header(line);
    std::string keyword;
    int n = 0;
    if (!(header >> keyword >> n) || keyword != "order" || n < 1)
        throw InputError("first line must be 'order n'");
    Table table(n, std::vector<int>(n));
    for (int r = 0; r < n; ++r) {
        if (!std::getline(in, line)) throw InputError("Cayley table truncated at row " + std::to_string(r));
        std::istringstream row(line);
        for (int c = 0; c < n; ++c)
            if (!(row >> table[r][c])) throw InputError("Cayley table row " + std::to_string(r) + " is short");
    }
    std::vector<std::string> labels;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string tok;
        while (row >> tok) labels.push_back(tok);
        if (!labels.empty()) break;
    }
    return FiniteGroup(std::move(table), std::move(labels), std::move(name));
}

FiniteGroup FiniteGroup::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open Cayley table file " + path);
    return parse(in, path);
}

void FiniteGroup::write(std::ostream& out) const {
    out << "order " << order() << '\n';
    for (const auto& row : table_) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
        out << '\n';
    }
    if (!labels_.empty()) {
        for (std::size_t i = 0; i < labels_.size(); ++i) out << (i ? " " : "") << labels_[i];
        out << '\n';
    }
}

std::string FiniteGroup::to_text() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

namespace small_groups {

FiniteGroup cyclic(int n) {
    if (n < 1) throw PreconditionError("cyclic group order must be >= 1");
    FiniteGroup::Table t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return FiniteGroup(std::move(t), {}, "Z" + std::to_string(n));
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
    const int na = a.order(), nb = b.order();
    FiniteGroup::Table t(na * nb, std::vector<int>(na * nb));
    // index = i * nb + j
    for (int x = 0; x < na * nb; ++x)
        for (int y = 0; y < na * nb; ++y)
            t[x][y] = a.op(x / nb, y / nb) * nb + b.op(x % nb, y % nb);
    return FiniteGroup(std::move(t), {}, a.name() + "x" + b.name());
}

FiniteGroup dihedral(int n) {
    if (n < 1) throw PreconditionError("dihedral parameter must be >= 1");
    // r^i s^e * r^j s^f = r^(i + (-1)^e j) s^(e+f)
    FiniteGroup::Table t(2 * n, std::vector<int>(2 * n));
    for (int x = 0; x < 2 * n; ++x)
        for (int y = 0; y < 2 * n; ++y) {
            int i = x % n, e = x / n, j = y % n, f = y / n;
            int k = ((e ? i - j : i + j) % n + n) % n;
            t[x][y] = k + n * ((e + f) % 2);
        }
    return FiniteGroup(std::move(t), {}, "D" + std::to_string(n));
}

FiniteGroup dicyclic(int n) {
    if (n < 1) throw PreconditionError("dicyclic parameter must be >= 1");
    // a^i x^e with a^(2n) = 1, x^2 = a^n, x a x^-1 = a^-1
    const int m = 2 * n;
    FiniteGroup::Table t(2 * m, std::vector<int>(2 * m));
    for (int u = 0; u < 2 * m; ++u)
        for (int v = 0; v < 2 * m; ++v) {
            int i = u % m, e = u / m, j = v % m, f = v / m;
            int k = e ? i - j : i + j;
            int xs = e + f;
            if (xs == 2) {
                k += n;
                xs = 0;
            }
            t[u][v] = ((k % m) + m) % m + m * xs;
        }
    return FiniteGroup(std::move(t), {}, n == 2 ? "Q8" : "Dic" + std::to_string(n));
}

FiniteGroup from_permutations(const std::vector<std::vector<int>>& generators, std::string name) {
    if (generators.empty()) throw PreconditionError("need at least one generator");
    const std::size_t degree = generators.front().size();
    std::vector<int> id(degree);
    for (std::size_t i = 0; i < degree; ++i) id[i] = static_cast<int>(i);
    std::map<std::vector<int>, int> index{{id, 0}};
    std::vector<std::vector<int>> elems{id};
    auto compose = [&](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> c(degree);
        for (std::size_t i = 0; i < degree; ++i) c[i] = a[b[i]];
        return c;
    };
    for (std::size_t head = 0; head < elems.size(); ++head) {
        for (const auto& g : generators) {
            auto c = compose(elems[head], g);
            if (index.emplace(c, static_cast<int>(elems.size())).second) elems.push_back(std::move(c));
        }
        if (elems.size() > static_cast<std::size_t>(kMaxMaskOrder) * 64)
            throw ResourceError("permutation group too large");
    }
    const int n = static_cast<int>(elems.size());
    FiniteGroup::Table t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = index.at(compose(elems[a], elems[b]));
    return FiniteGroup(std::move(t), {}, std::move(name));
}

FiniteGroup symmetric(int n) {
    if (n < 1) throw PreconditionError("symmetric degree must be >= 1");
    if (n == 1) return cyclic(1);
    std::vector<int> swap(n), cycle(n);
    for (int i = 0; i < n; ++i) {
        swap[i] = i;
        cycle[i] = (i + 1) % n;
    }
    std::swap(swap[0], swap[1]);
    return from_permutations({swap, cycle}, "S" + std::to_string(n));
}

FiniteGroup alternating(int n) {
    if (n < 3) return cyclic(1);
    std::vector<std::vector<int>> gens;
    for (int k = 2; k < n; ++k) {
        std::vector<int> p(n);
        for (int i = 0; i < n; ++i) p[i] = i;
        p[0] = 1;
        p[1] = k;
        p[k] = 0;
        gens.push_back(p);
    }
    return from_permutations(gens, "A" + std::to_string(n));
}

FiniteGroup by_name(const std::string& name) {
    if (auto x = name.find('x'); x != std::string::npos)
        return direct_product(by_name(name.substr(0, x)), by_name(name.substr(x + 1)));
    auto number = [&](std::size_t prefix) {
        try {
            std::size_t used = 0;
            int v = std::stoi(name.substr(prefix), &used);
            if (used + prefix != name.size()) throw InputError("bad group name " + name);
            return v;
        } catch (const std::logic_error&) {
            throw InputError("unknown group name '" + name + "'");
        }
    };
    if (name.rfind("Dic", 0) == 0) return dicyclic(number(3));
    if (name.empty()) throw InputError("empty group name");
    switch (name[0]) {
        case 'Z':
            return cyclic(number(1));
        case 'D':
            return dihedral(number(1));
        case 'S':
            return symmetric(number(1));
        case 'A':
            return alternating(number(1));
        case 'Q': {
            int order = number(1);
            if (order < 8 || order % 4 != 0) throw InputError("quaternion-type group needs order 4n, n >= 2");
            auto g = dicyclic(order / 4);
            return FiniteGroup(g.table(), {}, name);
        }
        default:
            throw InputError("unknown group name '" + name + "'");
    }
}

}  // namespace small_groups

namespace {

Mask closure(const FiniteGroup& k, Mask generators) {
    Mask h = generators | (Mask{1} << k.identity());
    for (;;) {
        Mask next = h;
        for (int a = 0; a < k.order(); ++a) {
            if (!mask_has(h, a)) continue;
            for (int b = 0; b < k.order(); ++b)
                if (mask_has(h, b)) next |= Mask{1} << k.op(a, b);
        }
        if (next == h) return h;
        h = next;
    }
}

void require_mask_order(const FiniteGroup& k) {
    if (k.order() > kMaxMaskOrder) throw ResourceError("group order exceeds 64-element mask limit");
}

}  // namespace

bool is_subgroup(const FiniteGroup& k, Mask h) {
    if (!mask_has(h, k.identity())) return false;
    for (int a = 0; a < k.order(); ++a) {
        if (!mask_has(h, a)) continue;
        if (!mask_has(h, k.inverse(a))) return false;
        for (int b = 0; b < k.order(); ++b)
            if (mask_has(h, b) && !mask_has(h, k.op(a, b))) return false;
    }
    return true;
}

bool is_normal(const FiniteGroup& k, Mask h) {
    for (int g = 0; g < k.order(); ++g)
        for (int x = 0; x < k.order(); ++x)
            if (mask_has(h, x) && !mask_has(h, k.op(k.op(g, x), k.inverse(g)))) return false;
    return true;
}

std::vector<Mask> subgroups_of(const FiniteGroup& k) {
    require_mask_order(k);
    std::vector<Mask> found{closure(k, 0)};
    for (std::size_t head = 0; head < found.size(); ++head) {
        const Mask h = found[head];
        for (int g = 0; g < k.order(); ++g) {
            if (mask_has(h, g)) continue;
            Mask c = closure(k, h | (Mask{1} << g));
            if (std::find(found.begin(), found.end(), c) == found.end()) found.push_back(c);
        }
    }
    std::sort(found.begin(), found.end(), [](Mask a, Mask b) {
        int ca = mask_count(a), cb = mask_count(b);
        return ca != cb ? ca < cb : a < b;
    });
    return found;
}

std::vector<Quotient> quotients_of(const FiniteGroup& k, int max_order) {
    if (k.order() > max_order)
        throw ResourceError("group order " + std::to_string(k.order()) + " exceeds quotient bound " +
                            std::to_string(max_order));
    std::vector<Quotient> out;
    for (Mask n : subgroups_of(k)) {
        if (!is_normal(k, n)) continue;
        const int order = k.order();
        std::vector<int> proj(order, -1);
        std::vector<int> reps;
        for (int g = 0; g < order; ++g) {
            if (proj[g] >= 0) continue;
            const int idx = static_cast<int>(reps.size());
            reps.push_back(g);
            for (int x = 0; x < order; ++x)
                if (mask_has(n, x)) proj[k.op(g, x)] = idx;
        }
        const int m = static_cast<int>(reps.size());
        FiniteGroup::Table t(m, std::vector<int>(m));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) t[a][b] = proj[k.op(reps[a], reps[b])];
        auto group = std::make_shared<const FiniteGroup>(std::move(t), std::vector<std::string>{},
                                                         k.name() + "/N" + std::to_string(mask_count(n)));
        out.push_back(Quotient{n, std::move(group), std::move(proj)});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Quotient& a, const Quotient& b) { return a.group->order() < b.group->order(); });
    return out;
}

}  // namespace sumset

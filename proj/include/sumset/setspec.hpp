#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumset/groups.hpp"
#include "sumset/sturmian.hpp"
#include "sumset/window.hpp"

namespace sumset {

enum class NodeKind {
    Explicit,
    Periodic,
    HalfLine,
    Sturmian,
    TwistedSturmian,
    Singleton,
    Union,
    Intersect,
    Complement,
    Translate,
    ProductSet,
    InverseSet,
    Builtin,
};

struct SetExpr;
using SetExprPtr = std::shared_ptr<const SetExpr>;

// Immutable AST node. Every node carries the group it lives in.
struct SetExpr {
    NodeKind kind = NodeKind::Explicit;
    GroupDescriptor group;
    std::vector<Element> elements;       // Explicit (sorted), Singleton, Translate (the g)
    std::int64_t modulus = 0;            // Periodic
    std::vector<std::int64_t> residues;  // Periodic, sorted
    int sign = 1;                        // HalfLine
    bool left = true;                    // Translate: g A (left) or A g (right)
    SturmianSpec sturmian;               // Sturmian, TwistedSturmian, cx1.B parameters
    std::string name;                    // Builtin
    std::vector<SetExprPtr> children;
};

// Constructors. They validate kinds and parameters.
SetExprPtr explicit_set(const GroupDescriptor& g, std::vector<Element> elements);
SetExprPtr explicit_ints(std::vector<std::int64_t> values);
SetExprPtr periodic(std::int64_t m, std::vector<std::int64_t> residues);
// sign > 0: {1, 2, 3, ...}; sign < 0: {-1, -2, ...}.
SetExprPtr half_line(int sign);
SetExprPtr sturmian_set(const SturmianSpec& spec);
SetExprPtr twisted_sturmian(const SturmianSpec& spec);
SetExprPtr singleton(const GroupDescriptor& g, const Element& e);
SetExprPtr set_union(std::vector<SetExprPtr> parts);
SetExprPtr set_intersect(std::vector<SetExprPtr> parts);
SetExprPtr complement(SetExprPtr a);
SetExprPtr translate(const Element& g, SetExprPtr a, bool left = true);
SetExprPtr product_set(SetExprPtr a, SetExprPtr b);
SetExprPtr inverse_set(SetExprPtr a);
// Builtin names: S, SinvS, T, NL2, cx1.A, cx1.B, cx1.AB (SolvablePK only).
// cx1.B and cx1.AB read alpha and I_o from params.
SetExprPtr builtin(const GroupDescriptor& g, const std::string& name, const SturmianSpec& params = {});
SetExprPtr universe(const GroupDescriptor& g);

bool contains_product(const SetExpr& e);

// Exact membership. Throws UnsupportedQuery on ProductSet nodes and
// TypeError if g is not in the expression's group.
bool member(const SetExpr& e, const Element& g);
inline bool member(const SetExprPtr& e, const Element& g) { return member(*e, g); }

// mask[i] = member(e, box[i]); ProductSet nodes go through product_window.
WindowSet materialize(const SetExprPtr& e, const BoxParams& window);

// Conservative support bounds on IntLine (nullopt = unbounded).
struct IntBounds {
    std::optional<std::int64_t> lo, hi;
};
IntBounds int_bounds(const SetExpr& e);

// (AB) restricted to the output window. exact is set when operand windows
// provably contain every factorisation; otherwise the mask is a lower
// approximation computed with operand windows inflated by the window width.
WindowSet product_window(const SetExprPtr& a, const SetExprPtr& b, const BoxParams& out);

// Sumset of two IntLine masks: result covers [a.lo + b.lo, a.hi + b.hi].
WindowSet int_sumset(const WindowSet& a, const WindowSet& b);
// Restrict/extend an IntLine mask to [lo, hi] (outside positions are 0).
WindowSet int_restrict(const WindowSet& w, std::int64_t lo, std::int64_t hi);

// JSON document: {"schema_version": 1, "group": ..., "expr": node}.
nlohmann::json set_to_json(const SetExprPtr& e);
SetExprPtr set_from_json(const nlohmann::json& doc);
SetExprPtr load_set(const std::string& path_or_inline_json);

}  // namespace sumset

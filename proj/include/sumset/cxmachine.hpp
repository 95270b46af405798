#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumset/groups.hpp"
#include "sumset/quadirr.hpp"
#include "sumset/setspec.hpp"
#include "sumset/sturmian.hpp"

namespace sumset {

// G = Z[1/p] x| Z with N = Z[1/p] x {0}, Lambda = Z x {0}, L = {0} x Z.
struct CxContext {
    std::int64_t p = 2;

    explicit CxContext(std::int64_t p_ = 2);
    GroupDescriptor group() const { return GroupDescriptor::solvable(p); }
};

// g = (0, k), k = max(0, -min valuation over F), with g F g^-1 inside Lambda
// checked before returning.
Element contracting_conjugator(const CxContext& ctx, const std::vector<Element>& F);

// S = L Lambda = {(x, k) : x in p^k Z}.
bool member_S(const CxContext& ctx, const AffineElt& e);
// S^-1 S: x in Z when k >= 0, x in p^k Z when k < 0.
bool member_SinvS(const CxContext& ctx, const AffineElt& e);
inline bool member_T(const CxContext& ctx, const AffineElt& e) { return !member_SinvS(ctx, e); }
inline bool member_NL2(const AffineElt& e) { return e.k % 2 == 0; }

struct Cx1Params {
    Rational epsilon{1, 5};
    QuadIrr alpha = QuadIrr::golden_conjugate();
    TorusInterval I_o;  // closed, measure 2 epsilon

    // Defaults I_o = [0, 2 epsilon].
    static Cx1Params make(const Rational& epsilon, const QuadIrr& alpha);
    static Cx1Params make(const Rational& epsilon, const QuadIrr& alpha, const TorusInterval& I_o);
    void validate() const;
    SturmianSpec as_spec() const;
    static Cx1Params from_spec(const SturmianSpec& s);
};

// A = N L_2 cap S; B = (N r (L_2 cap C_o) cap T) + {e} with r = (0, 1);
// AB = A + {(x, k) : k odd, x not in p^k Z}.
bool cx1_member_A(const CxContext& ctx, const AffineElt& e);
bool cx1_member_B(const CxContext& ctx, const Cx1Params& params, const AffineElt& e);
bool cx1_member_AB(const CxContext& ctx, const AffineElt& e);
// Even i > k with (k - i - 1) alpha in I_o; gives (0, i) in A and
// (p^-i x, k - i) in B whose product is (x, k).
std::int64_t cx1_ab_witness_shift(const Cx1Params& params, std::int64_t k);

struct Cx1Sets {
    SetExprPtr A, B, AB;
    Cx1Params params;
};
Cx1Sets build_cx1(const CxContext& ctx, const Cx1Params& params);

// Density proxies over right translates F (0, 2t), |2t| <= 4n, of the
// default box F = {(j p^-n, k) : |k| <= n, |j| <= J}. Counting is done on
// (j, k) directly, without materialising the box.
struct ProxyResult {
    double value = 0;        // max (or min) over translates
    std::int64_t best_shift = 0;
    std::vector<std::pair<std::int64_t, double>> per_shift;
};
enum class Cx1Set { A, B, AB, S, SinvS, NL2 };
ProxyResult cx1_upper_proxy(const CxContext& ctx, const Cx1Params& params, Cx1Set which, int n, std::int64_t J);
ProxyResult cx1_lower_proxy(const CxContext& ctx, const Cx1Params& params, Cx1Set which, int n, std::int64_t J);

// |rho(C cap D) - rho(C) rho(D)| on default boxes, for n in [n_min, n_max].
struct IndependencePoint {
    int n = 0;
    double rho_c = 0, rho_d = 0, rho_cd = 0, error = 0;
};
// C must be N-invariant and D L-invariant; both are spot-checked on box
// samples and an InputError is thrown if the check fails.
std::vector<IndependencePoint> independence_check(const CxContext& ctx, const SetExprPtr& C, const SetExprPtr& D,
                                                  int n_min, int n_max, std::int64_t J_exponent = 2);

struct LLambdaReport {
    struct Thick {
        int n = 0;
        Element witness;             // g with F_n g^-1 inside S
        std::uint64_t box_size = 0;
        std::uint64_t inside = 0;    // |F_n g^-1 cap S|
    };
    struct Lower {
        int n = 0;
        double proxy = 0;            // min over translates of rho(S^-1 S)
    };
    std::vector<Thick> thick;
    std::vector<Lower> lower;
    bool thick_ok = false;
    bool lower_decreasing = false;
};
LLambdaReport verify_prop_L_Lambda(const CxContext& ctx, int n_max, std::int64_t J_exponent = 2);

// Closed forms against pairwise products of S cap ball: returns the number
// of mismatches (0 expected). Ball = default box with parameters (n, J).
struct BallCheck {
    std::uint64_t ball_size = 0;
    std::uint64_t s_mismatch = 0;
    std::uint64_t sinvs_mismatch = 0;
    std::uint64_t ab_mismatch = 0;
};
BallCheck check_closed_forms(const CxContext& ctx, const Cx1Params& params, int n, std::int64_t J);

nlohmann::json cxmachine_report(const CxContext& ctx, const Cx1Params& params, int n, bool& pass);

}  // namespace sumset

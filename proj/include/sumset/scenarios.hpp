#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sumset/density.hpp"
#include "sumset/quadirr.hpp"
#include "sumset/setspec.hpp"
#include "sumset/sturmian.hpp"

namespace sumset {

// lhs op rhs, with margin > 0 (or >= 0 for non-strict ops) meaning pass.
struct Assertion {
    std::string name;
    double lhs = 0;
    std::string op;  // "<", "<=", ">", ">="
    double rhs = 0;
    double margin = 0;
    bool pass = false;

    nlohmann::json to_json() const;
};

Assertion make_assertion(std::string name, double lhs, const std::string& op, double rhs);
// |value - target| <= tol
Assertion near_assertion(std::string name, double value, double target, double tol);

struct ScenarioReport {
    std::string id;
    nlohmann::json params;
    std::vector<std::pair<std::string, double>> measured;
    std::vector<Assertion> assertions;
    nlohmann::json details = nlohmann::json::object();
    std::vector<SeriesRow> series;  // lower-density series of the headline set
    bool pass = false;

    void add(Assertion a) { assertions.push_back(std::move(a)); }
    void measure(const std::string& name, double v) { measured.emplace_back(name, v); }
    void finish();
    nlohmann::json to_json() const;
};

struct ScenarioOptions {
    std::int64_t n = 1000000;
    double tol = -1;                 // < 0: default_tolerance(n)
    std::int64_t banach_L = 10000;   // window length for d*
    std::int64_t m_max = 50;         // periodic-superset scan
    std::int64_t gap_bound = 100;    // syndetic at scale: every gap <= gap_bound
    std::int64_t thick_L = 1000;     // thick at scale: an interval of this length inside
    std::int64_t run_L = 10000;      // piecewise-periodic run length
    std::int64_t run_m_max = 6;
    std::int64_t shift_bound = 1000;
    std::int64_t identity_window = 10000;
    double kneser_slack = 0.02;
    std::int64_t a_radius = 20000;   // kneser-z: A truncated to [-a_radius, a_radius]

    double tolerance() const { return tol >= 0 ? tol : default_tolerance(n); }
};

// {x : lo <= x <= hi} as an IntLine expression.
SetExprPtr int_interval(std::int64_t lo, std::int64_t hi);

ScenarioReport verify_base_identities(const QuadIrr& alpha, const TorusInterval& I, const ScenarioOptions& o = {});
ScenarioReport run_e1(const QuadIrr& alpha, const TorusInterval& I, const ScenarioOptions& o = {});
ScenarioReport run_e2(const QuadIrr& alpha, const TorusInterval& I, const ScenarioOptions& o = {});
ScenarioReport run_e3(const QuadIrr& alpha, const TorusInterval& I, const ScenarioOptions& o = {});
// "base", "e1", "e2", "e3".
ScenarioReport run_scenario(const std::string& id, const QuadIrr& alpha, const TorusInterval& I,
                            const ScenarioOptions& o = {});

// Kneser-type inequality d_(A+B) >= d*(A) + d_(B) - slack at scale, checked
// when A+B is not thick at scale. A is truncated to [-a_radius, a_radius]
// for the sumset, which can only shrink A+B.
ScenarioReport kneser_z_check(const std::string& id, const SetExprPtr& a, const SetExprPtr& b,
                              const ScenarioOptions& o = {});

struct KneserCase {
    std::string id;
    SetExprPtr a, b;
};
// Twenty pairs: A Sturmian, B a syndetic union of Sturmian and periodic sets.
std::vector<KneserCase> kneser_z_cases();

// Re-check at doubled n: every positive margin may shrink by at most half.
struct DoublingCheck {
    bool ok = true;
    double worst_ratio = 1;  // min over assertions of margin(2n) / margin(n)
    std::string worst;
    nlohmann::json to_json() const;
};
DoublingCheck compare_doubled(const ScenarioReport& at_n, const ScenarioReport& at_2n);

}  // namespace sumset

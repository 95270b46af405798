#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "sumset/setspec.hpp"
#include "sumset/sturmian.hpp"
#include "sumset/window.hpp"

namespace sumset {

// A proper union of residue classes mod m containing A on the scanned window.
struct PeriodicWitness {
    std::int64_t m = 0;
    std::vector<std::int64_t> residues;
    double density = 0;       // |residues| / m
    double banach_upper = 0;  // d*(A) at the scan scale
    bool margin_ok = false;   // density < banach_upper + 1/m

    nlohmann::json to_json() const;
};

// Default Banach scale for a window of the given width.
std::int64_t default_banach_length(std::int64_t width);

// Residues of A cap [lo, hi] for m = 1..mMax. A witness is emitted when the
// residue set is proper and its density is below d*(A) + 1/m.
std::vector<PeriodicWitness> detect_periodic_superset(const WindowSet& w, std::int64_t mMax, std::int64_t L = 0);
std::vector<PeriodicWitness> detect_periodic_superset(const SetExprPtr& a, std::int64_t lo, std::int64_t hi,
                                                      std::int64_t mMax, std::int64_t L = 0);

struct SpreadOutVerdict {
    bool spread_out = false;  // at this (window, mMax)
    std::optional<PeriodicWitness> witness;
    std::int64_t lo = 0, hi = 0, m_max = 0;

    nlohmann::json to_json() const;
};
SpreadOutVerdict spread_out_witness_Z(const WindowSet& w, std::int64_t mMax, std::int64_t L = 0);
SpreadOutVerdict spread_out_witness_Z(const SetExprPtr& a, std::int64_t lo, std::int64_t hi, std::int64_t mMax,
                                      std::int64_t L = 0);

struct RunWitness {
    std::int64_t x = 0;  // leftmost start
    std::int64_t r = 0;  // residue mod m, in [0, m)
};
// Leftmost x in [lo, hi - L + 1] and r with {y in [x, x + L) : y = r mod m}
// a nonempty subset of A.
std::optional<RunWitness> find_periodic_run(const WindowSet& w, std::int64_t m, std::int64_t L, std::int64_t lo,
                                            std::int64_t hi);
// Largest L for which find_periodic_run(w, m, L, lo, hi) succeeds (0 if A is
// empty on the range). For m = 1 this is the longest interval inside A.
std::int64_t max_run_span(const WindowSet& w, std::int64_t m, std::int64_t lo, std::int64_t hi);

struct ContainmentResult {
    bool contained = false;
    std::optional<std::int64_t> first_violation;
    double measure = 0;       // m(I) of the candidate
    double banach_upper = 0;  // d*(A) at the scan scale
    bool density_ok = false;
    bool ok = false;

    nlohmann::json to_json() const;
};
ContainmentResult verify_sturmian_containment(const SetExprPtr& a, const SturmianSpec& candidate, std::int64_t lo,
                                              std::int64_t hi, double tol, std::int64_t L = 0);

}  // namespace sumset

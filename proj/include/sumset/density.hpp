#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sumset/groups.hpp"
#include "sumset/setspec.hpp"

namespace sumset {

// n -> F_n.
//   Symmetric: [-n, n] (IntLine), [-n, n] x {-1,1} (DihedralInf), [-n, n]^d (IntLattice)
//   Positive:  [1, n] (IntLine)
//   Shifted:   [shift*n, shift*n + n - 1] (IntLine)
//   Box:       default SolvablePK box with J = p^(J_exponent*n)
//   Skew:      skew SolvablePK box with J = p^(2n)
struct FolnerFamily {
    enum class Kind { Symmetric, Positive, Shifted, Box, Skew };

    GroupDescriptor group;
    Kind kind = Kind::Symmetric;
    std::int64_t shift = 10;
    int J_exponent = 2;

    BoxParams box(std::int64_t n) const;
    std::string name() const;
    // "sym", "pos", "shifted", "box", "skew".
    static FolnerFamily parse(const GroupDescriptor& group, const std::string& name);
};

struct SeriesRow {
    std::int64_t n = 0;
    std::uint64_t size = 0;
    std::uint64_t count = 0;
    double ratio = 0;
};

enum class DensityMode { UpperAlong, LowerAlong, BanachUpper, BanachLower };
std::string to_string(DensityMode m);

struct DensityEstimate {
    DensityMode mode = DensityMode::UpperAlong;
    double value = 0;
    nlohmann::json scale;
    std::vector<std::pair<std::int64_t, double>> series;
    // false when the underlying window was only a lower approximation.
    bool exact = true;
};
nlohmann::json to_json(const DensityEstimate& d);

struct DensityPair {
    DensityEstimate upper, lower;
    std::vector<SeriesRow> rows;  // sampled series for CSV output
};

// Tail statistic over n in [ceil((1 - tail) nMax), nMax].
DensityPair density_along(const SetExprPtr& expr, const FolnerFamily& family, std::int64_t nMax, double tail = 0.2);
// Same, from a pre-materialised IntLine window that covers every F_n used.
DensityPair density_along(const WindowSet& w, const FolnerFamily& family, std::int64_t nMax, double tail = 0.2);

// Extremal window counts |A cap (x + [0, L)^d)| / L^d over x in [lo, hi]^d.
// IntLine and IntLattice only; the series doubles L up to the requested L.
DensityEstimate banach_density(const SetExprPtr& expr, bool upper, std::int64_t L, std::int64_t lo, std::int64_t hi);
// IntLine window covering [lo, hi + L - 1].
DensityEstimate banach_density(const WindowSet& w, bool upper, std::int64_t L, std::int64_t lo, std::int64_t hi);
// max_x |A cap [x, x + L)| for IntLine windows (exact count).
std::int64_t max_window_count(const WindowSet& w, std::int64_t L, std::int64_t lo, std::int64_t hi);

struct ThickResult {
    bool thick = false;
    std::optional<std::int64_t> witness;  // leftmost x with [x, x + L) inside A
};
ThickResult is_thick_at_scale(const SetExprPtr& expr, std::int64_t L, std::int64_t lo, std::int64_t hi);
ThickResult is_thick_at_scale(const WindowSet& w, std::int64_t L, std::int64_t lo, std::int64_t hi);

struct SyndeticResult {
    bool syndetic = false;
    std::int64_t max_gap = 0;  // gaps of A cap [lo, hi] padded with lo - 1 and hi + 1
};
SyndeticResult is_syndetic_at_scale(const SetExprPtr& expr, std::int64_t gap_bound, std::int64_t lo, std::int64_t hi);
SyndeticResult is_syndetic_at_scale(const WindowSet& w, std::int64_t gap_bound, std::int64_t lo, std::int64_t hi);

// Exact |F_n \ g F_n| doubled, over |F_n|.
Rational folner_defect(const FolnerFamily& family, std::int64_t n, const Element& g);

void write_csv(std::ostream& out, const std::vector<SeriesRow>& rows);

// max(0.01, 20 log n / n).
double default_tolerance(std::int64_t n);

}  // namespace sumset

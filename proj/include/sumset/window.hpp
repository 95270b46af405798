#pragma once

#include <cstdint>
#include <vector>

#include "sumset/groups.hpp"

namespace sumset {

// A finite window (box) of a group together with a membership mask over
// the box's enumeration order. exact is false when the mask is only known
// to be a subset of the true set restricted to the window.
struct WindowSet {
    GroupDescriptor group;
    BoxParams box;
    std::vector<std::uint8_t> mask;
    bool exact = true;

    std::uint64_t size() const { return mask.size(); }
    std::uint64_t count() const;
    // Members in enumeration order.
    std::vector<Element> members() const;
    // IntLine only: the integer at index i.
    std::int64_t at(std::uint64_t i) const { return box.lo + static_cast<std::int64_t>(i); }
    bool contains(std::int64_t n) const {
        return n >= box.lo && n <= box.hi && mask[static_cast<std::uint64_t>(n - box.lo)];
    }
};

// Empty IntLine window mask for [lo, hi], with the budget check.
WindowSet int_window(std::int64_t lo, std::int64_t hi);

}  // namespace sumset

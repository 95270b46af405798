#include "sumset/window.hpp"

#include <numeric>

namespace sumset {

std::uint64_t WindowSet::count() const { return std::accumulate(mask.begin(), mask.end(), std::uint64_t{0}); }

std::vector<Element> WindowSet::members() const {
    std::vector<Element> out;
    if (group.kind == GroupKind::IntLine) {
        for (std::uint64_t i = 0; i < mask.size(); ++i)
            if (mask[i]) out.push_back(IntElt{at(i)});
        return out;
    }
    auto all = enumerate_box(group, box);
    for (std::uint64_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.push_back(std::move(all[i]));
    return out;
}

WindowSet int_window(std::int64_t lo, std::int64_t hi) {
    WindowSet w;
    w.group = GroupDescriptor::int_line();
    w.box = BoxParams::interval(lo, hi);
    const std::uint64_t n = box_size(w.group, w.box);
    require_budget(n, "integer window");
    w.mask.assign(n, 0);
    return w;
}

}  // namespace sumset

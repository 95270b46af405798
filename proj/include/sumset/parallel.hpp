#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace sumset {

// Worker count shared by all data-parallel scans. Defaults to the hardware
// concurrency; results never depend on it.
int worker_count();
void set_worker_count(int n);

// Calls body(begin, end) on disjoint chunks covering [0, n).
template <class Body>
void parallel_for(std::uint64_t n, Body&& body) {
    const std::uint64_t workers = std::min<std::uint64_t>(static_cast<std::uint64_t>(worker_count()), n / 4096 + 1);
    if (workers <= 1) {
        body(std::uint64_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::uint64_t step = (n + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t b = w * step, e = std::min(n, b + step);
        if (b < e) pool.emplace_back([&body, b, e] { body(b, e); });
    }
    for (auto& t : pool) t.join();
}

// Sum of chunk(begin, end) over a partition of [0, n).
template <class Chunk>
std::int64_t parallel_sum(std::uint64_t n, Chunk&& chunk) {
    const std::uint64_t workers = std::min<std::uint64_t>(static_cast<std::uint64_t>(worker_count()), n / 4096 + 1);
    std::vector<std::int64_t> part(workers, 0);
    const std::uint64_t step = (n + workers - 1) / std::max<std::uint64_t>(workers, 1);
    auto run = [&](std::uint64_t w) {
        const std::uint64_t lo = w * step, hi = std::min(n, lo + step);
        if (lo < hi) part[w] = chunk(lo, hi);
    };
    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    std::int64_t s = 0;
    for (auto v : part) s += v;
    return s;
}

}  // namespace sumset

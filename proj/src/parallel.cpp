#include "sumset/parallel.hpp"

#include <atomic>

namespace sumset {

namespace {

std::atomic<int> g_workers{0};

}  // namespace

int worker_count() {
    int n = g_workers.load();
    if (n > 0) return n;
    n = static_cast<int>(std::thread::hardware_concurrency());
    return n > 0 ? n : 1;
}

void set_worker_count(int n) { g_workers.store(n > 0 ? n : 0); }

}  // namespace sumset

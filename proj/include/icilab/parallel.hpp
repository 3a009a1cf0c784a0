#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace icilab {

// Worker-thread count: ICILAB_THREADS if set, else hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("ICILAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Static block partition of [0, n) over the workers; worker w runs
// fn(i, w) sequentially over its own slice. Results must depend only on i,
// never on the partition, so outputs stay identical for any thread count.
inline void parallel_for(int n, const std::function<void(int index, int worker)>& fn) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        const int lo = static_cast<int>(static_cast<long long>(n) * w / workers);
        const int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
        pool.emplace_back([lo, hi, w, &fn] {
            for (int i = lo; i < hi; ++i) fn(i, w);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace icilab

#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace toppct {

// threads <= 0 means "use all hardware threads".
inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Static partition of [0, n) into contiguous chunks, fn(begin, end) per
// chunk. Callers must write only to slots they own; results must not depend
// on chunk boundaries, so any thread count produces identical output.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (n == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), n);
    if (workers <= 1) {
        fn(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace toppct

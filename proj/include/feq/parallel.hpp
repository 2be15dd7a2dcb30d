#ifndef FEQ_PARALLEL_HPP
#define FEQ_PARALLEL_HPP

#include <cstdlib>
#include <thread>
#include <vector>

namespace feq {

inline int default_threads() {
    if (const char* env = std::getenv("FE_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? (int)hc : 1;
}

// Deterministic-by-index parallel loop: f(i) must depend only on i and write
// only to slot i of its output.
template <class F>
void parallel_for(int n, F&& f, int threads = 0) {
    if (threads <= 0) threads = default_threads();
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        int lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&f, lo, hi] {
            for (int i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

// splitmix64: tiny deterministic generator, stable across platforms
struct SplitMix {
    uint64_t s;
    explicit SplitMix(uint64_t seed) : s(seed) {}
    uint64_t next() {
        uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

} // namespace feq

#endif

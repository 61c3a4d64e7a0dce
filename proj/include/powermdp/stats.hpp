#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace powermdp {

/// Monte Carlo estimate with a two-sided Hoeffding radius.
struct EstimateWithCI {
    double estimate = 0.0;
    double ci_radius = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double confidence = 0.95;

    double lo() const { return estimate - ci_radius; }
    double hi() const { return estimate + ci_radius; }
};

/// Radius for means of values bounded on an interval of width `range`.
inline double hoeffding_radius(std::uint64_t n, double range,
                               double confidence = 0.95) {
    double delta = 1.0 - confidence;
    return range * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

/// Radius for probabilities (range 1).
inline double hoeffding_radius_prob(std::uint64_t n, double confidence = 0.95) {
    return hoeffding_radius(n, 1.0, confidence);
}

inline unsigned worker_count() {
    if (const char* env = std::getenv("POWERMDP_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Mean of fn(0..n-1) on any number of workers. Work is cut into fixed-size
/// chunks; each chunk is summed in index order and chunk sums are reduced in
/// chunk order, so the result is bit-identical for every worker count.
inline double parallel_mean(std::uint64_t n,
                            const std::function<double(std::uint64_t)>& fn) {
    if (n == 0) return 0.0;
    constexpr std::uint64_t kChunk = 4096;
    const std::uint64_t nchunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(nchunks, 0.0);
    unsigned workers = worker_count();
    if (workers <= 1 || nchunks == 1) {
        for (std::uint64_t c = 0; c < nchunks; ++c) {
            double acc = 0.0;
            for (std::uint64_t i = c * kChunk; i < std::min(n, (c + 1) * kChunk); ++i)
                acc += fn(i);
            partial[c] = acc;
        }
    } else {
        std::atomic<std::uint64_t> next{0};
        auto work = [&] {
            for (;;) {
                std::uint64_t c = next.fetch_add(1);
                if (c >= nchunks) return;
                double acc = 0.0;
                for (std::uint64_t i = c * kChunk; i < std::min(n, (c + 1) * kChunk); ++i)
                    acc += fn(i);
                partial[c] = acc;
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w + 1 < workers; ++w) pool.emplace_back(work);
        work();
        for (auto& t : pool) t.join();
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total / static_cast<double>(n);
}

}  // namespace powermdp

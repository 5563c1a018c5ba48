#pragma once

#include <cstdint>

namespace hopset {

/// Depth/work ledger for the round-synchronous machine the algorithms are
/// specified against. `rounds` counts the nominal synchronous rounds a
/// round-faithful execution would take (independent of the sequential
/// shortcuts the simulation uses); `work` counts primitive operations the
/// simulation actually performed.
struct CostMeter {
    std::uint64_t rounds = 0;
    std::uint64_t work = 0;

    void add_rounds(std::uint64_t r) { rounds += r; }
    void add_work(std::uint64_t w) { work += w; }
    void merge(const CostMeter& o) {
        rounds += o.rounds;
        work += o.work;
    }
};

/// ceil(log2(x)) for x >= 1.
inline int ceil_log2(std::uint64_t x) {
    int b = 0;
    std::uint64_t p = 1;
    while (p < x) {
        p <<= 1;
        ++b;
    }
    return b;
}

}  // namespace hopset

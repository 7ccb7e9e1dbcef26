#pragma once

#include <cstdint>

namespace ergolab {

// SplitMix64.  Tiny, fast, and identical on every platform, which is what we
// need for byte-reproducible experiment output.  Not crypto.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53 random bits
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Derives an independent child seed for work item `stream` under `base`.
// Every parallel task seeds its own Rng this way, so results do not depend on
// which thread runs which item or in what order.
inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
    Rng r(base ^ (stream + 1) * 0xd1342543de82ef95ULL);
    r.next_u64();
    return r.next_u64();
}

} // namespace ergolab

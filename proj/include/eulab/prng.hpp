#ifndef EULAB_PRNG_HPP
#define EULAB_PRNG_HPP

#include <cstdint>
#include <vector>

namespace eulab {

// SplitMix64: tiny, platform-independent, and stable across runs, which is all
// the experiment pipeline needs (reproducibility is a documented contract;
// statistical quality beyond that is not). Never std::random here: the
// standard does not pin distribution algorithms, and CSV output must be
// byte-identical for a fixed seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Modulo bias is irrelevant at these ranges and keeping
    // the mapping trivial keeps it stable.
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

    // Uniform in [lo, hi] inclusive.
    long long between(long long lo, long long hi) {
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[below(items.size())];
    }

    bool coin() { return (next_u64() & 1u) != 0; }

    // Independent substream for trial `k` of a seeded run.
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t k) {
        SplitMix64 mixer(seed ^ (0xa0761d6478bd642full + k * 0xe7037ed1a0b428dbull));
        mixer.next_u64();
        return mixer;
    }

private:
    std::uint64_t state_;
};

} // namespace eulab

#endif

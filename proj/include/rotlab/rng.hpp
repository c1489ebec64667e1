#pragma once

// Counter-based random stream: value i of stream s under seed k is
// splitmix64(k ^ splitmix64(s) + i * golden), so any element can be
// regenerated independently of the others. This is the generator named in
// the report metadata ("splitmix64-counter").

#include <cstdint>

namespace rotlab {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(seed ^ splitmix64(stream)) {}

    std::uint64_t at(std::uint64_t counter) const { return splitmix64(key_ + counter * 0x9e3779b97f4a7c15ULL); }
    std::uint64_t next() { return at(counter_++); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    long long integer(long long lo, long long hi) {
        return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    static constexpr const char* name = "splitmix64-counter";

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace rotlab

#ifndef VMLFN_RNG_HPP
#define VMLFN_RNG_HPP

#include <cmath>
#include <cstdint>

namespace vmlfn {

// "splitmix64-counter": a counter-based generator built on the splitmix64
// finalizer. Output i of stream s under seed k is mix(key(k,s) + i*gamma),
// a pure function of (seed, stream, counter), so sequences are reproducible
// bit-for-bit and substreams never overlap state.
class CounterRng {
  public:
    static constexpr const char* kName = "splitmix64-counter";

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ mix(stream + 0x1d8af4f3e64a95cbULL))) {}

    // independent generator for a tagged substream of the same seed
    CounterRng substream(std::uint64_t tag) const {
        CounterRng r(0);
        r.key_ = mix(key_ ^ mix(tag + 0x94d049bb133111ebULL));
        r.counter_ = 0;
        return r;
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    // uniform in [0,1) with 53 random bits
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Box-Muller; one value per call, the paired value is cached
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace vmlfn

#endif

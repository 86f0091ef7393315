#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace srreg {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Substream key for (seed, replicate, purpose); purposes keep the base
/// draws of a replicate byte-identical whether or not contamination or
/// transforms are applied.
inline uint64_t substream_seed(uint64_t seed, uint64_t replicate, uint64_t purpose) {
    return splitmix64(splitmix64(splitmix64(seed) ^ replicate) ^ (purpose + 0x51ed270b));
}

/// Deterministic random stream with explicitly pinned normal/uniform
/// generation (Marsaglia polar for normals), independent of the standard
/// library's distribution implementations.
class RandomStream {
public:
    explicit RandomStream(uint64_t seed) : engine_(seed), has_spare_(false), spare_(0.0) {}

    double uniform() {  // (0, 1)
        uint64_t bits = engine_();
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    /// Student t with 3 degrees of freedom: Z / sqrt(chi2_3 / 3).
    double student_t3() {
        double z = normal();
        double a = normal(), b = normal(), c = normal();
        double chi2 = a * a + b * b + c * c;
        return z / std::sqrt(chi2 / 3.0);
    }

    uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_;
    double spare_;
};

}  // namespace srreg

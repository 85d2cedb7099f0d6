#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ltir {

// Deterministic, platform-independent Gaussian generator (splitmix64 +
// Box-Muller). std::normal_distribution is implementation-defined, which
// would break the bit-identical reproducibility contract across toolchains.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : state_(seed) {}

    // Derive an independent stream, e.g. one per B-scan row.
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
        GaussianRng mix(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        return mix.next_u64();
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1].
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace ltir

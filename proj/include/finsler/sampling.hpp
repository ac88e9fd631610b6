#pragma once

#include <cstdint>

#include "finsler/metric.hpp"

namespace finsler {

// Deterministic, platform-independent generator (splitmix64). The standard
// distributions are implementation-defined, which would break the
// byte-identical-report contract.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform(double lo, double hi) {
        double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

private:
    std::uint64_t state_;
};

// Rejection-samples a point satisfying all constraints with clearance
// `margin`. Throws DomainError when no admissible point is found within
// maxAttempts draws.
PointState samplePoint(const MetricSpec& spec, const Box& box, Rng& rng,
                       double margin = kNearMargin, int maxAttempts = 100000);

// Deterministic batch: the whole batch is drawn from one generator stream.
std::vector<PointState> samplePoints(const MetricSpec& spec, const Box& box, int count,
                                     std::uint64_t seed, double margin = kNearMargin);

}  // namespace finsler

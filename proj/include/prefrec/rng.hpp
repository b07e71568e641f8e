#pragma once

#include <cmath>
#include <cstdint>

#include "prefrec/geometry.hpp"

namespace prefrec {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based generator: output i is mix64(seed-derived base + i), so a
// stream is a pure function of (seed, counter). Substreams split by mixing
// the master seed with the stream index, which keeps per-problem and
// per-replication draws independent of evaluation order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : root_(seed), base_(mix64(seed ^ 0x8f2d3a4b5c6d7e8fULL)), counter_(0) {}

    std::uint64_t next_u64() { return mix64(base_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    // Uniform on [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    double normal() {
        // Box-Muller; consumes two uniforms per call.
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    std::uint64_t root_seed() const { return root_; }

    Rng substream(std::uint64_t index) const { return Rng(root_ ^ mix64(index + 0x51ed2701ab43c1e5ULL)); }

private:
    std::uint64_t root_;
    std::uint64_t base_;
    std::uint64_t counter_;
};

// Uniform draw from the closed simplex via normalized exponential spacings.
Point sample_unit_simplex(std::size_t d, Rng& rng);

Point sample_box(const Box& box, Rng& rng);

// Uniform lambda draw for the space: simplex kinds sample the simplex, the
// others sample their compact support box.
Point sample_point(const AlternativeSpace& space, Rng& rng);

// Random sum-zero unit index vector (a nonconstant expected-utility index).
std::vector<double> sample_eu_index(std::size_t d, Rng& rng);

}  // namespace prefrec

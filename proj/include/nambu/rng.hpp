#pragma once

#include "nambu/fields.hpp"
#include "nambu/poly.hpp"
#include "nambu/scalars.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace nambu {

/// Deterministic seeded generator.  All randomized batteries draw from this
/// wrapper only; the mapping from raw bits to values is fixed here so a seed
/// fully determines every sample stream.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    double uniform(double lo, double hi) {
        // fixed 53-bit mapping, independent of libstdc++ distribution details
        const std::uint64_t bits = engine_() >> 11;
        const double u = static_cast<double>(bits) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    std::vector<double> point_in(const Box& box) {
        std::vector<double> x(box.lo.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = uniform(box.lo[i], box.hi[i]);
        return x;
    }

    /// Rational grid point strictly inside the box (denominator `den`).
    std::vector<Rat> rational_point_in(const Box& box, int den = 16) {
        std::vector<Rat> x(box.lo.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            auto lo_ticks = static_cast<std::int64_t>(std::ceil(box.lo[i] * den)) + 1;
            auto hi_ticks = static_cast<std::int64_t>(std::floor(box.hi[i] * den)) - 1;
            if (lo_ticks > hi_ticks) {
                lo_ticks = static_cast<std::int64_t>(std::llround(0.5 * (box.lo[i] + box.hi[i]) * den));
                hi_ticks = lo_ticks;
            }
            x[i] = Rat(uniform_int(lo_ticks, hi_ticks), den);
        }
        return x;
    }

    /// Random polynomial of total degree <= deg over the given variables
    /// (1-based indices), with small rational coefficients.
    ExactPoly polynomial(int n, const std::vector<int>& vars, int deg, int coeff_range = 3);

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

}  // namespace nambu

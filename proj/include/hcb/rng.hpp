#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hcb {

/// Deterministic counter-based random stream (splitmix64).
///
/// Identical (seed, stream_id) pairs produce identical draw sequences on
/// every platform: the generator is pure 64-bit integer arithmetic and all
/// distribution transforms below are hand-rolled (std:: distributions are
/// implementation-defined and would not replay across standard libraries).
/// Distinct stream ids start from independently mixed states, so streams
/// can be handed to parallel trials without coordination.
class RngStream {
public:
    static constexpr const char* kAlgorithm = "splitmix64";

    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : state_(mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^ mix(stream_id + 0xBF58476D1CE4E5B9ULL))),
          seed_(seed),
          stream_id_(stream_id) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Derive a child stream; children of distinct ids are independent.
    RngStream split(std::uint64_t child_id) const {
        return RngStream(mix(seed_ ^ mix(stream_id_)), child_id);
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform in [0, 1) with 53 bits of mantissa.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("RngStream::below: n must be positive");
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    /// Standard normal via Box-Muller (two uniforms per call, no cached spare,
    /// so copies of a stream replay identically).
    double normal() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Poisson via Knuth's product method; fine for the small means used here.
    std::uint64_t poisson(double mean) {
        if (!(mean >= 0.0)) throw std::invalid_argument("RngStream::poisson: mean must be >= 0");
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= next_double();
        } while (p > limit);
        return k - 1;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
    std::uint64_t seed_;
    std::uint64_t stream_id_;
};

}  // namespace hcb

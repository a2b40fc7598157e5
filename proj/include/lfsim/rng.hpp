// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

#include "lfsim/geometry.hpp"

namespace lfsim {

namespace detail {
// splitmix64 finalizer; a 64-bit bijection with full avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}
inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}  // namespace detail

/// Counter-based random stream keyed by (seed, stream id).
///
/// Identical (seed, stream) pairs reproduce identical draw sequences, and
/// substream() derives statistically independent child streams from index
/// words. Simulation code keys substreams by structural indices
/// (phase/RP/AP/sample/trial), which makes every result independent of
/// iteration order and of how work is split across threads. Streams are
/// single-owner: concurrency is achieved by splitting, never by sharing.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {
        state_ = detail::mix64(detail::mix64(seed + detail::kGolden) ^ stream);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// Child stream for index `word`. Distinct sibling words always yield
    /// distinct stream ids (mix64 is a bijection in the combined key).
    RngStream substream(std::uint64_t word) const {
        return RngStream(seed_, detail::mix64(stream_ + detail::kGolden + word));
    }

    std::uint64_t next_u64() {
        state_ += detail::kGolden;
        return detail::mix64(state_);
    }

    /// Uniform draw in (0, 1].
    double uniform01() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal draw via Box-Muller (two uniforms per call, no
    /// cached spare, so consumption per call is fixed and platform-free).
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_;
};

/// Top-level substream tags. Every random quantity in the simulation hangs
/// off the master stream under exactly one of these, so offline surveys,
/// test-point placement and online measurements never share draws.
namespace stream_tags {
inline constexpr std::uint64_t kOffline = 1;     ///< database build, per (RP, AP, sample)
inline constexpr std::uint64_t kTestPoints = 2;  ///< test-point placement, per trial
inline constexpr std::uint64_t kOnline = 3;      ///< online measurements, per (trial, AP)
inline constexpr std::uint64_t kProfile = 4;     ///< auxiliary signal-profile sampling
}  // namespace stream_tags

}  // namespace lfsim

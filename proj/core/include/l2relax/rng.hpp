#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace l2relax {

/// Reproducible random stream identified by (seed, stream_id).
///
/// The generator is xoshiro256** whose 256-bit state is expanded from
/// splitmix64 applied to a mix of seed and stream id. Distinct stream ids give
/// statistically independent streams, so Monte Carlo replication r always uses
/// stream r regardless of which thread runs it. Normal deviates use the
/// Marsaglia polar method implemented here, so draws do not depend on the
/// standard library's distribution implementations.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Child stream keyed by `tag`; deterministic in (seed, stream_id, tag).
    [[nodiscard]] RngStream substream(std::uint64_t tag) const;

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n); n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) noexcept;
    double normal() noexcept;

    template <typename It>
    void shuffle(It first, It last) noexcept {
        const auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) {
            const auto j = uniform_index(i);
            std::swap(first[i - 1], first[j]);
        }
    }

    // UniformRandomBitGenerator interface.
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept { return next_u64(); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::array<std::uint64_t, 4> state_{};
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace l2relax

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace vartopic {

/**
 * Philox4x32-10 counter-based generator.
 *
 * The 64-bit seed is the key; the 128-bit counter is split into a 64-bit
 * stream id (high words) and a 64-bit block index (low words). Streams with
 * different ids never overlap, so `stream(id)` gives independent,
 * reproducible substreams that can be consumed from any thread.
 *
 * Satisfies UniformRandomBitGenerator.
 */
class Philox {
  public:
    using result_type = std::uint32_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Philox(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Independent generator on stream `id` under the same seed, positioned at its start.
    Philox stream(std::uint64_t id) const noexcept { return Philox(seed_, id); }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Uniform double in the open interval (0, 1) with 53 random bits.
    double uniform() noexcept;

    /// The raw 10-round bijection.
    static Block encrypt(Block counter, Key key) noexcept;

  private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_index_ = 0;
    Block buffer_{};
    unsigned used_ = 4;
};

// Samplers. All draw exclusively from the supplied generator.

double standard_normal(Philox& rng);

/// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 uses the U^(1/shape) boost.
double gamma_variate(Philox& rng, double shape);

/// log of a Gamma(shape, 1) variate; stays finite for tiny shapes where the
/// variate itself underflows.
double log_gamma_variate(Philox& rng, double shape);

/// Poisson(mean): multiplication method below 10, PTRS transformed rejection above.
std::uint64_t poisson_variate(Philox& rng, double mean);

/// Negative binomial in the (size, mu) parameterization, as a Gamma-Poisson mixture.
std::uint64_t negative_binomial_variate(Philox& rng, double size, double mu);

} // namespace vartopic

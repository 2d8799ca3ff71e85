#include "vartopic/rng.hpp"

#include <cmath>

namespace vartopic {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

} // namespace

Philox::Philox(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id) {}

Philox::Block Philox::encrypt(Block ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

void Philox::refill() noexcept {
    const Block counter{static_cast<std::uint32_t>(block_index_),
                        static_cast<std::uint32_t>(block_index_ >> 32),
                        static_cast<std::uint32_t>(stream_id_),
                        static_cast<std::uint32_t>(stream_id_ >> 32)};
    const Key key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    buffer_ = encrypt(counter, key);
    ++block_index_;
    used_ = 0;
}

Philox::result_type Philox::operator()() noexcept {
    if (used_ == 4)
        refill();
    return buffer_[used_++];
}

double Philox::uniform() noexcept {
    const std::uint64_t hi = (*this)() >> 5; // 27 bits
    const std::uint64_t lo = (*this)() >> 6; // 26 bits
    const std::uint64_t bits = (hi << 26) | lo;
    // (bits + 0.5) / 2^53 lies strictly inside (0, 1).
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double standard_normal(Philox& rng) {
    // Marsaglia polar method; the second variate is discarded to keep the
    // generator the only state.
    for (;;) {
        const double x = 2.0 * rng.uniform() - 1.0;
        const double y = 2.0 * rng.uniform() - 1.0;
        const double s = x * x + y * y;
        if (s > 0.0 && s < 1.0)
            return x * std::sqrt(-2.0 * std::log(s) / s);
    }
}

namespace {

double marsaglia_tsang(Philox& rng, double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = standard_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2)
            return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

} // namespace

double gamma_variate(Philox& rng, double shape) {
    if (shape >= 1.0)
        return marsaglia_tsang(rng, shape);
    return std::exp(log_gamma_variate(rng, shape));
}

double log_gamma_variate(Philox& rng, double shape) {
    if (shape >= 1.0)
        return std::log(marsaglia_tsang(rng, shape));
    const double boosted = marsaglia_tsang(rng, shape + 1.0);
    return std::log(boosted) + std::log(rng.uniform()) / shape;
}

std::uint64_t poisson_variate(Philox& rng, double mean) {
    if (!(mean > 0.0))
        return 0;
    if (mean < 10.0) {
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double product = rng.uniform();
        while (product > limit) {
            ++k;
            product *= rng.uniform();
        }
        return k;
    }
    // Hormann (1993), PTRS.
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr)
            return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us))
            continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - std::lgamma(k + 1.0))
            return static_cast<std::uint64_t>(k);
    }
}

std::uint64_t negative_binomial_variate(Philox& rng, double size, double mu) {
    const double rate = gamma_variate(rng, size) * (mu / size);
    return poisson_variate(rng, rate);
}

} // namespace vartopic

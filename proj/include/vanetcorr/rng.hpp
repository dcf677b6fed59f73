#pragma once

// Philox4x32-10 counter-based generator. A (seed, stream) pair names an
// independent sequence, so each Monte Carlo sample can own its stream and
// results do not depend on how samples are scheduled across threads.

#include <array>
#include <cmath>
#include <cstdint>

namespace vanetcorr {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter block(Counter ctr, Key key) noexcept {
        ctr = round(ctr, key);
        for (int r = 1; r < 10; ++r) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
            ctr = round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter round(const Counter& ctr, const Key& key) noexcept {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
};

// Sequential variates from one Philox stream. Distribution transforms are
// written out here so draws are bit-identical across standard libraries.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

    std::uint64_t next_u64() noexcept {
        if (position_ == 2) {
            const Philox4x32::Counter ctr = {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                             static_cast<std::uint32_t>(stream_),
                                             static_cast<std::uint32_t>(stream_ >> 32)};
            buffer_ = Philox4x32::block(ctr, key_);
            ++block_;
            position_ = 0;
        }
        const std::uint64_t out =
            (static_cast<std::uint64_t>(buffer_[2 * position_]) << 32) | buffer_[2 * position_ + 1];
        ++position_;
        return out;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on the open interval (0, 1).
    double uniform_open() noexcept { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    // Strictly positive exponential variate.
    double exponential(double rate) noexcept { return -std::log(uniform_open()) / rate; }

    std::uint64_t blocks_used() const noexcept { return block_; }

private:
    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    int position_ = 2;
};

}  // namespace vanetcorr

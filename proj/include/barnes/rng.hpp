#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace barnes
{
//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based generator.
 *
 * The 64-bit seed is the key; the 128-bit counter is split into a 64-bit
 * block index and a 64-bit stream index, so (seed, stream) pairs give
 * independent sequences without shared state.
 */
class Philox
{
  public:
    using result_type = std::uint32_t;
    using Block = std::array<std::uint32_t, 4>;

    Philox(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream)
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max()
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()()
    {
        if (used_ == 4)
        {
            buffer_ = generate(
                {static_cast<std::uint32_t>(block_),
                 static_cast<std::uint32_t>(block_ >> 32),
                 static_cast<std::uint32_t>(stream_),
                 static_cast<std::uint32_t>(stream_ >> 32)},
                key_);
            ++block_;
            used_ = 0;
        }
        return buffer_[used_++];
    }

    //! Uniform on the open interval (0, 1) with 53 random bits
    double uniform()
    {
        std::uint64_t const hi = (*this)() >> 5;
        std::uint64_t const lo = (*this)() >> 6;
        double const u = static_cast<double>((hi << 26) | lo) * 0x1p-53;
        return u + 0x1p-54;
    }

    //! Exponential with unit rate
    double exponential() { return -std::log(uniform()); }

    //! Raw bijection: ten rounds on counter `ctr` with key `key`
    static Block generate(Block ctr, std::array<std::uint32_t, 2> key)
    {
        for (int round = 0; round < 10; ++round)
        {
            if (round > 0)
            {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            std::uint64_t const p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            std::uint64_t const p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            auto const hi0 = static_cast<std::uint32_t>(p0 >> 32);
            auto const lo0 = static_cast<std::uint32_t>(p0);
            auto const hi1 = static_cast<std::uint32_t>(p1 >> 32);
            auto const lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

  private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Block buffer_{};
    int used_ = 4;
};

}  // namespace barnes

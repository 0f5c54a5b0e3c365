#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace steinspc {

/// One step of splitmix64; advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Stateless 64-bit finalizer (the splitmix64 output function).
std::uint64_t mix64(std::uint64_t x) noexcept;

/*!
 * xoshiro256** engine.
 *
 * Satisfies UniformRandomBitGenerator so it plugs into <random>
 * distributions. Seeded from a single 64-bit word through splitmix64.
 */
class Xoshiro256
{
  public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept;

    friend bool operator==(Xoshiro256 const&, Xoshiro256 const&) = default;

  private:
    std::array<std::uint64_t, 4> s_;
};

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Xoshiro256& rng) noexcept
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/*!
 * Deterministic substream for replication `replication` of work item
 * `cell` under master seed `seed`.
 *
 * The stream depends only on the triple, never on which worker runs it or
 * in what order, so parallel results are independent of the worker count.
 */
Xoshiro256 make_substream(std::uint64_t seed,
                          std::uint64_t cell,
                          std::uint64_t replication) noexcept;

}  // namespace steinspc

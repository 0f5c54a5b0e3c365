#include "steinspc/rng.hpp"

namespace steinspc {

std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    state += 0x9e3779b97f4a7c15ULL;
    return mix64(state);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) noexcept
{
    for (auto& word : s_)
    {
        word = splitmix64(seed);
    }
}

namespace {
constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
{
    return (x << k) | (x >> (64 - k));
}
}  // namespace

Xoshiro256::result_type Xoshiro256::operator()() noexcept
{
    std::uint64_t const result = rotl(s_[1] * 5, 7) * 9;
    std::uint64_t const t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

Xoshiro256 make_substream(std::uint64_t seed,
                          std::uint64_t cell,
                          std::uint64_t replication) noexcept
{
    // Chained finalizers keep nearby (cell, replication) pairs far apart.
    std::uint64_t key = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    key = mix64(key ^ mix64(cell + 0xbb67ae8584caa73bULL));
    key = mix64(key ^ mix64(replication + 0x3c6ef372fe94f82bULL));
    return Xoshiro256{key};
}

}  // namespace steinspc

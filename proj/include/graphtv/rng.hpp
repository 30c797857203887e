#ifndef GRAPHTV_RNG_HPP
#define GRAPHTV_RNG_HPP

#include <cstdint>
#include <random>

namespace graphtv {

// splitmix64; used to derive independent stream seeds from (seed, indices)
// so that parallel schedules never change results.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed)
{
    return splitmix64(seed);
}

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t head, Rest... rest)
{
    return derive_seed(splitmix64(seed ^ splitmix64(head)), rest...);
}

inline std::mt19937_64 make_rng(std::uint64_t seed)
{
    return std::mt19937_64(splitmix64(seed));
}

} // namespace graphtv

#endif

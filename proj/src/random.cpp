#include "paracontrol/random.hpp"

namespace paracontrol {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t lane)
{
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (stream * 0xd1b54a32d192ed03ULL);
    std::uint64_t b = splitmix64(s);
    s = b ^ (lane * 0x8cb92ba72f3d8dd7ULL);
    return Rng(splitmix64(s));
}

double uniform_open(Rng& rng)
{
    // 53 random bits, shifted off zero
    return (double(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace paracontrol

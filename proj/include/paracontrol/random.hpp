#ifndef PARACONTROL_RANDOM_HPP
#define PARACONTROL_RANDOM_HPP

#include <cstdint>
#include <random>

namespace paracontrol {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t& state);

// independent generator for (seed, stream, lane); lane separates uses within one stream
Rng make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t lane = 0);

// uniform on the open interval (0, 1)
double uniform_open(Rng& rng);

}  // namespace paracontrol

#endif

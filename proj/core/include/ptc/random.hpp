#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ptc {

// Seed of a named substream derived from a master seed. Different names give
// statistically independent engines; the same (seed, name) always gives the
// same engine.
std::uint64_t substream_seed(std::uint64_t master, std::string_view name);

inline std::mt19937_64 substream(std::uint64_t master, std::string_view name) {
  return std::mt19937_64(substream_seed(master, name));
}

}  // namespace ptc

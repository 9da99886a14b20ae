#pragma once

#include <cstdint>
#include <random>

#include "tccsim/codec.hpp"
#include "tccsim/config.hpp"

namespace tccsim::testing {

inline Block random_block(std::mt19937_64& rng) {
  Block b{};
  for (std::size_t i = 0; i < kWordsPerBlock; ++i) store_word(b, i, rng());
  return b;
}

inline Block filled_block(std::uint8_t v) {
  Block b{};
  b.fill(v);
  return b;
}

inline void flip_bit(Block& b, unsigned bit) { b[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8)); }

/// Small hierarchy for tests that need evictions.
inline SimConfig toy_config(Scheme scheme, std::uint64_t l1_bytes = 512, unsigned l1_ways = 2,
                            std::uint64_t l2_bytes = 8192, unsigned l2_ways = 4) {
  SimConfig c;
  c.scheme = scheme;
  c.l1 = {l1_bytes, l1_ways, 3};
  c.l2 = {l2_bytes, l2_ways, 12};
  c.validate();
  return c;
}

}  // namespace tccsim::testing

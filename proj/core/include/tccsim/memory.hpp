#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>

#include "tccsim/codec.hpp"

namespace tccsim {

inline constexpr std::uint64_t kDefaultEccRegionBase = std::uint64_t{1} << 36;
inline constexpr unsigned kEccGroupSize = 8;

/// Sparse main memory. Blocks never written read back as zeros.
class MemoryImage {
 public:
  Block read_block(std::uint64_t addr) const;
  void write_block(std::uint64_t addr, const Block& block);

  std::size_t size() const { return blocks_.size(); }
  const std::map<std::uint64_t, Block>& blocks() const { return blocks_; }

  /// Blocks with address strictly below `limit`, all-zero blocks dropped.
  MemoryImage region_below(std::uint64_t limit) const;

  friend bool operator==(const MemoryImage&, const MemoryImage&) = default;

  /// Binary dump: for each block in address order, a little-endian u64
  /// address followed by the 64-byte payload.
  void dump(std::ostream& out) const;
  static MemoryImage load(std::istream& in);

 private:
  std::map<std::uint64_t, Block> blocks_;
};

/// Where block-ECCs of L2 frames live in memory.
struct EccGeometry {
  std::uint64_t ecc_region_base = kDefaultEccRegionBase;
  unsigned l2_sets = 0;
  unsigned l2_ways = 0;

  std::uint64_t region_bytes() const { return std::uint64_t{l2_sets} * l2_ways * 8; }
  bool in_region(std::uint64_t addr) const {
    return addr >= ecc_region_base && addr < ecc_region_base + region_bytes();
  }
  void validate() const;
};

struct EccSlot {
  std::uint64_t block_addr = 0;
  unsigned byte_offset = 0;

  friend bool operator==(const EccSlot&, const EccSlot&) = default;
};

/// Frames in the same way of eight consecutive sets share one ECC memory block.
EccSlot ecc_address(unsigned set, unsigned way, const EccGeometry& geom);

}  // namespace tccsim

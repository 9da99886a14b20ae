#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tccsim/codec.hpp"

namespace tccsim {

struct CacheGeometry {
  std::uint64_t capacity_bytes = 0;
  unsigned ways = 0;
  unsigned latency_cycles = 0;

  unsigned sets() const { return static_cast<unsigned>(capacity_bytes / (kBlockBytes * ways)); }
  unsigned lines() const { return sets() * ways; }
  /// Throws ConfigError unless capacity = sets * ways * 64 with sets a power of two.
  void validate(const char* name) const;
};

struct LineMeta {
  std::uint64_t tag = 0;
  bool valid = false;
  bool dirty = false;
  std::uint8_t lru_rank = 0;  // 0 = MRU, ways-1 = LRU
  ParitySignature parity{};
};

struct CacheLine {
  LineMeta meta;
  Block data{};
};

struct Victim {
  std::uint64_t addr = 0;
  Block data{};
  bool dirty = false;
};

struct LookupResult {
  unsigned set = 0;
  std::optional<unsigned> way;  // engaged on hit

  bool hit() const { return way.has_value(); }
};

/// Set-associative write-back cache with true LRU and a stored parity byte per
/// line. Addresses are byte addresses; all operations work on 64-byte blocks.
class Cache {
 public:
  explicit Cache(const CacheGeometry& geom);

  const CacheGeometry& geometry() const { return geom_; }
  unsigned sets() const { return sets_; }
  unsigned ways() const { return geom_.ways; }

  unsigned set_of(std::uint64_t addr) const { return static_cast<unsigned>((addr / kBlockBytes) % sets_); }
  std::uint64_t tag_of(std::uint64_t addr) const { return (addr / kBlockBytes) / sets_; }
  std::uint64_t line_addr(unsigned set, unsigned way) const;

  /// Does not update LRU.
  LookupResult lookup(std::uint64_t addr) const;

  /// Install `addr` as MRU. The address must miss. Returns the evicted line if
  /// the set was full.
  std::optional<Victim> fill(std::uint64_t addr, const Block& data, bool dirty);

  /// Frame that the next fill of `set` would use: the first invalid way, or the LRU way.
  unsigned victim_way(unsigned set) const;
  /// Install into a specific frame, which must be invalid. Becomes MRU.
  void install(unsigned set, unsigned way, std::uint64_t addr, const Block& data, bool dirty);
  void invalidate(unsigned set, unsigned way);
  /// Clear the dirty flag; LRU order is unchanged.
  void clean(unsigned set, unsigned way);

  void touch(unsigned set, unsigned way);
  /// Replace the line data and recompute stored parity. Marks the line dirty
  /// when `set_dirty`; otherwise the dirty flag is left as is.
  void write_line(unsigned set, unsigned way, const Block& data, bool set_dirty);
  const CacheLine& read_line(unsigned set, unsigned way) const;
  /// Frame contents regardless of validity.
  const CacheLine& peek(unsigned set, unsigned way) const { return at(set, way); }
  bool valid(unsigned set, unsigned way) const { return at(set, way).meta.valid; }

  /// XOR bits into the stored data/parity without touching any metadata.
  void corrupt(unsigned set, unsigned way, std::span<const unsigned> data_bits, std::uint8_t parity_mask);

  /// True when LRU ranks in every set form a permutation of 0..ways-1.
  bool lru_consistent() const;

 private:
  CacheLine& at(unsigned set, unsigned way);
  const CacheLine& at(unsigned set, unsigned way) const;
  void require_valid(unsigned set, unsigned way) const;

  CacheGeometry geom_;
  unsigned sets_;
  std::vector<CacheLine> lines_;
};

/// One signature byte per L1 frame, indexed by (l1_set, l1_way).
class SignatureCache {
 public:
  SignatureCache(unsigned l1_sets, unsigned l1_ways);

  std::uint8_t read(unsigned set, unsigned way) const;
  void write(unsigned set, unsigned way, std::uint8_t sig);
  std::size_t entries() const { return entries_.size(); }

 private:
  std::size_t index(unsigned set, unsigned way) const;

  unsigned sets_;
  unsigned ways_;
  std::vector<std::uint8_t> entries_;
};

}  // namespace tccsim

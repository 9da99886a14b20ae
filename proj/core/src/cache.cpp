#include "tccsim/cache.hpp"

#include <bit>
#include <string>

#include "tccsim/errors.hpp"

namespace tccsim {

void CacheGeometry::validate(const char* name) const {
  const std::string n(name);
  if (ways == 0 || ways > 64) throw ConfigError(n + ": ways must be in 1..64");
  if (capacity_bytes == 0 || capacity_bytes % (kBlockBytes * ways) != 0)
    throw ConfigError(n + ": capacity must be a multiple of 64 * ways");
  if (!std::has_single_bit(capacity_bytes / (kBlockBytes * ways)))
    throw ConfigError(n + ": set count must be a power of two");
}

Cache::Cache(const CacheGeometry& geom) : geom_(geom), sets_(0) {
  geom_.validate("cache");
  sets_ = geom_.sets();
  lines_.resize(std::size_t{sets_} * geom_.ways);
  for (unsigned s = 0; s < sets_; ++s)
    for (unsigned w = 0; w < geom_.ways; ++w) at(s, w).meta.lru_rank = static_cast<std::uint8_t>(w);
}

CacheLine& Cache::at(unsigned set, unsigned way) { return lines_[std::size_t{set} * geom_.ways + way]; }
const CacheLine& Cache::at(unsigned set, unsigned way) const {
  return lines_[std::size_t{set} * geom_.ways + way];
}

void Cache::require_valid(unsigned set, unsigned way) const {
  if (set >= sets_ || way >= geom_.ways) throw UsageError("cache frame out of range");
  if (!at(set, way).meta.valid) throw UsageError("operation on an invalid cache line");
}

std::uint64_t Cache::line_addr(unsigned set, unsigned way) const {
  return (at(set, way).meta.tag * sets_ + set) * kBlockBytes;
}

LookupResult Cache::lookup(std::uint64_t addr) const {
  LookupResult r;
  r.set = set_of(addr);
  const std::uint64_t tag = tag_of(addr);
  for (unsigned w = 0; w < geom_.ways; ++w) {
    const LineMeta& m = at(r.set, w).meta;
    if (m.valid && m.tag == tag) {
      r.way = w;
      break;
    }
  }
  return r;
}

unsigned Cache::victim_way(unsigned set) const {
  unsigned lru = 0;
  for (unsigned w = 0; w < geom_.ways; ++w) {
    const LineMeta& m = at(set, w).meta;
    if (!m.valid) return w;
    if (m.lru_rank == geom_.ways - 1) lru = w;
  }
  return lru;
}

std::optional<Victim> Cache::fill(std::uint64_t addr, const Block& data, bool dirty) {
  const LookupResult r = lookup(addr);
  if (r.hit()) throw UsageError("fill of an address already present in the cache");
  const unsigned way = victim_way(r.set);
  std::optional<Victim> victim;
  if (at(r.set, way).meta.valid) {
    const CacheLine& l = at(r.set, way);
    victim = Victim{line_addr(r.set, way), l.data, l.meta.dirty};
    invalidate(r.set, way);
  }
  install(r.set, way, addr, data, dirty);
  return victim;
}

void Cache::install(unsigned set, unsigned way, std::uint64_t addr, const Block& data, bool dirty) {
  if (set != set_of(addr)) throw UsageError("install: address does not map to this set");
  CacheLine& l = at(set, way);
  if (l.meta.valid) throw UsageError("install into an occupied frame");
  l.meta.tag = tag_of(addr);
  l.meta.valid = true;
  l.meta.dirty = dirty;
  l.meta.parity = parity_signature(data);
  l.data = data;
  touch(set, way);
}

void Cache::invalidate(unsigned set, unsigned way) {
  require_valid(set, way);
  LineMeta& m = at(set, way).meta;
  m.valid = false;
  m.dirty = false;
}

void Cache::clean(unsigned set, unsigned way) {
  require_valid(set, way);
  at(set, way).meta.dirty = false;
}

void Cache::touch(unsigned set, unsigned way) {
  require_valid(set, way);
  const std::uint8_t rank = at(set, way).meta.lru_rank;
  for (unsigned w = 0; w < geom_.ways; ++w) {
    LineMeta& m = at(set, w).meta;
    if (m.lru_rank < rank) ++m.lru_rank;
  }
  at(set, way).meta.lru_rank = 0;
}

void Cache::write_line(unsigned set, unsigned way, const Block& data, bool set_dirty) {
  require_valid(set, way);
  CacheLine& l = at(set, way);
  l.data = data;
  l.meta.parity = parity_signature(data);
  if (set_dirty) l.meta.dirty = true;
}

const CacheLine& Cache::read_line(unsigned set, unsigned way) const {
  require_valid(set, way);
  return at(set, way);
}

void Cache::corrupt(unsigned set, unsigned way, std::span<const unsigned> data_bits, std::uint8_t parity_mask) {
  require_valid(set, way);
  CacheLine& l = at(set, way);
  for (unsigned bit : data_bits) {
    if (bit >= kBlockBytes * 8) throw UsageError("fault bit position out of range");
    l.data[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
  }
  l.meta.parity.bits ^= parity_mask;
}

bool Cache::lru_consistent() const {
  for (unsigned s = 0; s < sets_; ++s) {
    std::uint64_t seen = 0;
    for (unsigned w = 0; w < geom_.ways; ++w) {
      const unsigned r = at(s, w).meta.lru_rank;
      if (r >= geom_.ways || (seen >> r & 1u)) return false;
      seen |= std::uint64_t{1} << r;
    }
  }
  return true;
}

SignatureCache::SignatureCache(unsigned l1_sets, unsigned l1_ways)
    : sets_(l1_sets), ways_(l1_ways), entries_(std::size_t{l1_sets} * l1_ways, 0) {}

std::size_t SignatureCache::index(unsigned set, unsigned way) const {
  if (set >= sets_ || way >= ways_) throw UsageError("signature cache index out of range");
  return std::size_t{set} * ways_ + way;
}

std::uint8_t SignatureCache::read(unsigned set, unsigned way) const { return entries_[index(set, way)]; }
void SignatureCache::write(unsigned set, unsigned way, std::uint8_t sig) { entries_[index(set, way)] = sig; }

}  // namespace tccsim

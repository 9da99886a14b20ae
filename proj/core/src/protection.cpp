#include "tccsim/protection.hpp"

#include <algorithm>
#include <string>

#include "tccsim/config.hpp"
#include "tccsim/errors.hpp"

namespace tccsim {
namespace {

constexpr std::uint64_t block_of(std::uint64_t addr) { return addr & ~std::uint64_t{kBlockBytes - 1}; }

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::Conventional: return "conventional";
    case Scheme::Mmecc: return "mmecc";
    case Scheme::Tcc: return "tcc";
  }
  return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

Hierarchy::Hierarchy(const SimConfig& cfg)
    : scheme_(cfg.scheme),
      l1_(cfg.l1),
      l2_(cfg.l2),
      sigs_(l1_.sets(), l1_.ways()),
      ecc_geom_(cfg.ecc_geometry()) {
  ecc_geom_.validate();
  if (scheme_ == Scheme::Conventional) ecc_array_.resize(std::size_t{l2_.sets()} * l2_.ways());
}

std::uint64_t Hierarchy::load(std::uint64_t addr) {
  ++counters_.l1_reads;
  const L1Frame f = ensure_in_l1(block_of(addr));
  return load_word(l1_.read_line(f.set, f.way).data, (addr % kBlockBytes) / 8);
}

void Hierarchy::store(std::uint64_t addr, std::uint64_t value) {
  ++counters_.l1_writes;
  const L1Frame f = ensure_in_l1(block_of(addr));
  Block data = l1_.read_line(f.set, f.way).data;
  store_word(data, (addr % kBlockBytes) / 8, value);
  l1_.write_line(f.set, f.way, data, true);
}

Hierarchy::L1Frame Hierarchy::ensure_in_l1(std::uint64_t block_addr) {
  if (block_addr >= ecc_geom_.ecc_region_base) throw UsageError("CPU access at or above the ECC region base");
  const LookupResult r = l1_.lookup(block_addr);
  if (r.hit()) {
    l1_.touch(r.set, *r.way);
    return {r.set, *r.way};
  }
  ++counters_.l1_misses;

  // Free the L1 frame before touching L2 so the victim's write-back cannot
  // evict the incoming block from L2.
  const unsigned way = l1_.victim_way(r.set);
  if (l1_.valid(r.set, way)) {
    const CacheLine victim = l1_.read_line(r.set, way);
    const std::uint64_t victim_addr = l1_.line_addr(r.set, way);
    if (victim.meta.dirty) {
      l1_.clean(r.set, way);
      handle_writeback(victim_addr, victim.data, r.set, way);
    }
    // The write-back may already have back-invalidated this frame.
    if (l1_.valid(r.set, way) && l1_.line_addr(r.set, way) == victim_addr) l1_.invalidate(r.set, way);
  }

  const Block data = handle_l1_fill(block_addr);
  // Nested L2 activity only ever invalidates L1 lines, so the frame is still free.
  const unsigned target = l1_.victim_way(r.set);
  l1_.install(r.set, target, block_addr, data, false);
  if (scheme_ == Scheme::Tcc) {
    ++counters_.sig_writes;
    sigs_.write(r.set, target, parity_signature(data).bits);
  }
  return {r.set, target};
}

Block Hierarchy::handle_l1_fill(std::uint64_t addr) {
  ++counters_.l2_reads;
  LookupResult r = l2_.lookup(addr);
  unsigned way = 0;
  if (r.hit()) {
    way = *r.way;
  } else {
    ++counters_.l2_misses;
    way = make_room_l2(r.set);
    ++counters_.memory_reads;
    l2_.install(r.set, way, addr, memory_.read_block(addr), false);
  }
  l2_.touch(r.set, way);
  return l2_read_checked(r.set, way);
}

unsigned Hierarchy::make_room_l2(unsigned set) {
  for (;;) {
    const unsigned way = l2_.victim_way(set);
    if (!l2_.valid(set, way)) return way;
    handle_l2_eviction(set, way);
  }
}

void Hierarchy::handle_l2_eviction(unsigned set, unsigned way) {
  const std::uint64_t addr = l2_.line_addr(set, way);
  if (!is_ecc_addr(addr)) {
    const LookupResult in_l1 = l1_.lookup(addr);
    if (in_l1.hit()) {
      const CacheLine copy = l1_.read_line(in_l1.set, *in_l1.way);
      if (copy.meta.dirty) {
        l1_.clean(in_l1.set, *in_l1.way);
        handle_writeback(addr, copy.data, in_l1.set, *in_l1.way);
      }
      const LookupResult again = l1_.lookup(addr);
      if (again.hit()) l1_.invalidate(again.set, *again.way);
    }
    // Nested activity may have evicted this frame already.
    if (!l2_.valid(set, way) || l2_.line_addr(set, way) != addr) return;
  }

  if (l2_.read_line(set, way).meta.dirty) {
    const Block data = is_ecc_addr(addr) ? l2_.read_line(set, way).data : l2_read_checked(set, way);
    ++counters_.memory_writes;
    memory_.write_block(addr, data);
  }
  l2_.invalidate(set, way);
}

Block Hierarchy::l2_read_checked(unsigned set, unsigned way) {
  const CacheLine& line = l2_.read_line(set, way);
  const std::uint64_t addr = l2_.line_addr(set, way);
  if (is_ecc_addr(addr) || parity_signature(line.data) == line.meta.parity) return line.data;

  if (!line.meta.dirty) {
    ++counters_.memory_reads;
    ++counters_.refetched_clean;
    const Block fresh = memory_.read_block(addr);
    l2_.write_line(set, way, fresh, false);
    return fresh;
  }

  const Block received = line.data;
  const BlockEcc ecc = fetch_block_ecc_for_correction(set, way);
  if (auto fixed = block_correct(received, ecc)) {
    ++counters_.corrected_dirty;
    l2_.write_line(set, way, *fixed, false);
    return *fixed;
  }
  // Detected but unrecoverable: keep the data, resync parity so the error is
  // reported once.
  ++counters_.due_events;
  l2_.write_line(set, way, received, false);
  return received;
}

BlockEcc Hierarchy::fetch_block_ecc_for_correction(unsigned set, unsigned way) {
  if (scheme_ == Scheme::Conventional) return ecc_array_[frame_index(set, way)];
  const EccSlot slot = ecc_address(set, way, ecc_geom_);
  const LookupResult r = l2_.lookup(slot.block_addr);
  if (r.hit()) {
    ++counters_.l2_reads;
    l2_.touch(r.set, *r.way);
    return BlockEcc::from_bytes(l2_.read_line(r.set, *r.way).data.data() + slot.byte_offset);
  }
  ++counters_.memory_reads;
  const Block mem = memory_.read_block(slot.block_addr);
  return BlockEcc::from_bytes(mem.data() + slot.byte_offset);
}

BlockEcc Hierarchy::peek_block_ecc(unsigned set, unsigned way) const {
  if (scheme_ == Scheme::Conventional) return ecc_array_[frame_index(set, way)];
  const EccSlot slot = ecc_address(set, way, ecc_geom_);
  const LookupResult r = l2_.lookup(slot.block_addr);
  const Block src = r.hit() ? l2_.read_line(r.set, *r.way).data : memory_.read_block(slot.block_addr);
  return BlockEcc::from_bytes(src.data() + slot.byte_offset);
}

WritebackClass Hierarchy::classify_writeback(unsigned l1_set, unsigned l1_way, const Block& new_block,
                                             unsigned l2_set, unsigned l2_way) {
  ++counters_.sig_reads;
  if (parity_signature(new_block).bits != sigs_.read(l1_set, l1_way)) return WritebackClass::NonsilentFast;
  ++counters_.l2_reads;
  ++counters_.block_compares;
  const Block old = l2_read_checked(l2_set, l2_way);
  return old == new_block ? WritebackClass::Silent : WritebackClass::NonsilentAliased;
}

void Hierarchy::handle_writeback(std::uint64_t addr, const Block& new_block, unsigned l1_set, unsigned l1_way) {
  const LookupResult r = l2_.lookup(addr);
  if (!r.hit()) throw InvariantError("write-back to a block not resident in L2 (inclusion violated)");
  const unsigned set = r.set;
  const unsigned way = *r.way;
  const std::uint64_t accesses_before = counters_.l2_accesses_total();

  ++counters_.l1_writebacks;
  WritebackEvent ev;
  ev.addr = addr;
  ev.identical = l2_.read_line(set, way).data == new_block;

  auto write_data = [&] {
    ++counters_.l2_writes;
    l2_.write_line(set, way, new_block, true);
    l2_.touch(set, way);
  };

  switch (scheme_) {
    case Scheme::Conventional:
      write_data();
      ++counters_.ecc_computes;
      ecc_array_[frame_index(set, way)] = block_ecc(new_block);
      break;
    case Scheme::Mmecc:
      write_data();
      ++counters_.ecc_computes;
      store_block_ecc(set, way, block_ecc(new_block));
      break;
    case Scheme::Tcc: {
      ev.cls = classify_writeback(l1_set, l1_way, new_block, set, way);
      if (ev.cls == WritebackClass::Silent) {
        ++counters_.silent;
        l2_.touch(set, way);
        break;
      }
      ++(ev.cls == WritebackClass::NonsilentFast ? counters_.nonsilent_fast : counters_.nonsilent_aliased);
      write_data();
      ++counters_.ecc_computes;
      store_block_ecc(set, way, block_ecc(new_block));
      break;
    }
  }

  ev.l2_accesses = static_cast<unsigned>(counters_.l2_accesses_total() - accesses_before);
  if (observer_) observer_(ev);
}

void Hierarchy::store_block_ecc(unsigned set, unsigned way, const BlockEcc& ecc) {
  if (scheme_ == Scheme::Conventional) {
    ecc_array_[frame_index(set, way)] = ecc;
    return;
  }
  const EccSlot slot = ecc_address(set, way, ecc_geom_);
  const auto bytes = ecc.bytes();
  ++counters_.l2_writes;

  auto update_resident = [&](unsigned eset, unsigned eway) {
    ++counters_.ecc_line_extra_writes;
    Block line = l2_.read_line(eset, eway).data;
    std::copy(bytes.begin(), bytes.end(), line.begin() + slot.byte_offset);
    l2_.write_line(eset, eway, line, true);
    l2_.touch(eset, eway);
  };

  LookupResult r = l2_.lookup(slot.block_addr);
  if (r.hit()) {
    update_resident(r.set, *r.way);
    return;
  }
  const unsigned eway = make_room_l2(r.set);
  // A nested write-back in the same group may have installed the line meanwhile.
  r = l2_.lookup(slot.block_addr);
  if (r.hit()) {
    update_resident(r.set, *r.way);
    return;
  }
  ++counters_.ecc_line_installs;
  Block line{};
  if (adjacent_dirty(set, way)) {
    ++counters_.memory_reads;
    line = memory_.read_block(slot.block_addr);
  }
  std::copy(bytes.begin(), bytes.end(), line.begin() + slot.byte_offset);
  l2_.install(r.set, eway, slot.block_addr, line, true);
}

bool Hierarchy::adjacent_dirty(unsigned set, unsigned way) const {
  const unsigned first = set - set % kEccGroupSize;
  for (unsigned s = first; s < first + kEccGroupSize; ++s) {
    if (s == set || !l2_.valid(s, way)) continue;
    const CacheLine& l = l2_.peek(s, way);
    if (l.meta.dirty && !is_ecc_addr(l2_.line_addr(s, way))) return true;
  }
  return false;
}

void Hierarchy::flush() {
  for (unsigned s = 0; s < l1_.sets(); ++s) {
    for (unsigned w = 0; w < l1_.ways(); ++w) {
      if (!l1_.valid(s, w) || !l1_.peek(s, w).meta.dirty) continue;
      const Block data = l1_.peek(s, w).data;
      const std::uint64_t addr = l1_.line_addr(s, w);
      l1_.clean(s, w);
      handle_writeback(addr, data, s, w);
    }
  }
  for (unsigned s = 0; s < l2_.sets(); ++s)
    for (unsigned w = 0; w < l2_.ways(); ++w)
      if (l2_.valid(s, w)) handle_l2_eviction(s, w);
}

}  // namespace tccsim

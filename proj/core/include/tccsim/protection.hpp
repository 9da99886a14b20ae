#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tccsim/cache.hpp"
#include "tccsim/codec.hpp"
#include "tccsim/memory.hpp"
#include "tccsim/scheme.hpp"
#include "tccsim/stats.hpp"

namespace tccsim {

struct SimConfig;

enum class WritebackClass { Silent, NonsilentFast, NonsilentAliased, Unclassified };

/// One L1 -> L2 write-back as seen by the L2. Unclassified for schemes
/// that do not detect silent writes.
struct WritebackEvent {
  std::uint64_t addr = 0;
  WritebackClass cls = WritebackClass::Unclassified;
  /// Ground truth: the written block equals the block already in L2.
  bool identical = false;
  unsigned l2_accesses = 0;
};

/// L1 + inclusive L2 + main memory with one of the three L2 protection
/// schemes. Owns all simulation state; a copy is an independent snapshot.
class Hierarchy {
 public:
  Hierarchy(const SimConfig& cfg);

  Scheme scheme() const { return scheme_; }
  const Counters& counters() const { return counters_; }
  const Cache& l1() const { return l1_; }
  const Cache& l2() const { return l2_; }
  const MemoryImage& memory() const { return memory_; }
  const SignatureCache& signatures() const { return sigs_; }
  const EccGeometry& ecc_geometry() const { return ecc_geom_; }

  /// Called after every L1 -> L2 write-back.
  void set_writeback_observer(std::function<void(const WritebackEvent&)> obs) { observer_ = std::move(obs); }

  /// CPU load of the 8-byte word at `addr`; returns its value.
  std::uint64_t load(std::uint64_t addr);
  /// CPU store (write-allocate into L1).
  void store(std::uint64_t addr, std::uint64_t value);

  /// Write back every dirty L1 line and evict the whole L2 to memory.
  void flush();

  // L2 operations. Frames are (set, way) of the L2.

  /// Parity-checked read of a valid L2 line, repairing it on mismatch: clean
  /// lines are refetched from memory, dirty lines corrected with their
  /// block-ECC. A detected-uncorrectable error is counted and the corrupt
  /// data is returned.
  Block l2_read_checked(unsigned set, unsigned way);

  /// Silent-write classification for the Tcc scheme.
  WritebackClass classify_writeback(unsigned l1_set, unsigned l1_way, const Block& new_block, unsigned l2_set,
                                    unsigned l2_way);

  /// Process a dirty L1 eviction of `addr` (which must be resident in L2).
  void handle_writeback(std::uint64_t addr, const Block& new_block, unsigned l1_set, unsigned l1_way);

  /// Store the block-ECC of frame (set, way) into its memory-mapped slot,
  /// going through the L2.
  void store_block_ecc(unsigned set, unsigned way, const BlockEcc& ecc);

  /// Bring `addr` into L2 (if needed) and return its checked contents.
  Block handle_l1_fill(std::uint64_t addr);

  /// Evict L2 frame (set, way): back-invalidate L1, write dirty data to memory.
  void handle_l2_eviction(unsigned set, unsigned way);

  /// The block-ECC currently recorded for a frame, wherever it lives. Does not
  /// count accesses; used by validators.
  BlockEcc peek_block_ecc(unsigned set, unsigned way) const;

  bool is_ecc_addr(std::uint64_t addr) const { return ecc_geom_.in_region(addr); }

  /// Fault injection hook: XOR bits into an L2 line without updating metadata.
  void corrupt_l2(unsigned set, unsigned way, std::span<const unsigned> data_bits, std::uint8_t parity_mask) {
    l2_.corrupt(set, way, data_bits, parity_mask);
  }

 private:
  struct L1Frame {
    unsigned set;
    unsigned way;
  };

  L1Frame ensure_in_l1(std::uint64_t block_addr);
  unsigned make_room_l2(unsigned set);
  BlockEcc fetch_block_ecc_for_correction(unsigned set, unsigned way);
  bool adjacent_dirty(unsigned set, unsigned way) const;
  std::size_t frame_index(unsigned set, unsigned way) const { return std::size_t{set} * l2_.ways() + way; }

  Scheme scheme_;
  Cache l1_;
  Cache l2_;
  MemoryImage memory_;
  SignatureCache sigs_;
  EccGeometry ecc_geom_;
  std::vector<BlockEcc> ecc_array_;  // Conventional only: one entry per L2 frame
  Counters counters_;
  std::function<void(const WritebackEvent&)> observer_;
};

}  // namespace tccsim

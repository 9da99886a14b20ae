#pragma once

#include <cstdint>

namespace tccsim {

/// Raw event counters accumulated by the cache hierarchy.
struct Counters {
  std::uint64_t l1_reads = 0;
  std::uint64_t l1_writes = 0;
  std::uint64_t l1_misses = 0;
  std::uint64_t l2_reads = 0;
  std::uint64_t l2_writes = 0;
  std::uint64_t l2_misses = 0;
  std::uint64_t l1_writebacks = 0;
  std::uint64_t silent = 0;
  std::uint64_t nonsilent_fast = 0;
  std::uint64_t nonsilent_aliased = 0;
  std::uint64_t ecc_line_installs = 0;
  std::uint64_t ecc_line_extra_writes = 0;
  std::uint64_t memory_reads = 0;
  std::uint64_t memory_writes = 0;
  std::uint64_t corrected_dirty = 0;
  std::uint64_t refetched_clean = 0;
  std::uint64_t due_events = 0;
  std::uint64_t sig_reads = 0;
  std::uint64_t sig_writes = 0;
  std::uint64_t block_compares = 0;
  std::uint64_t ecc_computes = 0;

  std::uint64_t l1_accesses() const { return l1_reads + l1_writes; }
  std::uint64_t l2_accesses_total() const { return l2_reads + l2_writes; }
  std::uint64_t memory_accesses() const { return memory_reads + memory_writes; }

  Counters& operator+=(const Counters& o);
  friend Counters operator+(Counters a, const Counters& b) { return a += b; }
  friend bool operator==(const Counters&, const Counters&) = default;

  /// Visit every counter as (name, value) in declaration order.
  template <class F>
  void for_each(F&& f) const {
    f("l1_reads", l1_reads);
    f("l1_writes", l1_writes);
    f("l1_misses", l1_misses);
    f("l2_reads", l2_reads);
    f("l2_writes", l2_writes);
    f("l2_misses", l2_misses);
    f("l1_writebacks", l1_writebacks);
    f("silent", silent);
    f("nonsilent_fast", nonsilent_fast);
    f("nonsilent_aliased", nonsilent_aliased);
    f("ecc_line_installs", ecc_line_installs);
    f("ecc_line_extra_writes", ecc_line_extra_writes);
    f("memory_reads", memory_reads);
    f("memory_writes", memory_writes);
    f("corrected_dirty", corrected_dirty);
    f("refetched_clean", refetched_clean);
    f("due_events", due_events);
    f("sig_reads", sig_reads);
    f("sig_writes", sig_writes);
    f("block_compares", block_compares);
    f("ecc_computes", ecc_computes);
  }
};

struct Latencies {
  unsigned l1 = 3;
  unsigned l2 = 12;
  unsigned memory = 512;
};

/// Latency proxy: every L1 access, L2 access and memory access charged at its
/// level's latency.
double amat_cycles(const Counters& c, const Latencies& lat);

struct StatsReport {
  Counters counters;
  double silent_fraction = 0.0;  // silent / l1_writebacks
  double l2_miss_rate = 0.0;     // demand misses / demand requests from L1
  double amat_cycles = 0.0;

  static StatsReport derive(const Counters& c, const Latencies& lat);
};

}  // namespace tccsim

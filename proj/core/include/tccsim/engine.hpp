#pragma once

#include <string>
#include <vector>

#include "tccsim/config.hpp"
#include "tccsim/memory.hpp"
#include "tccsim/protection.hpp"
#include "tccsim/stats.hpp"
#include "tccsim/workload.hpp"

namespace tccsim {

/// Trace-driven driver over one Hierarchy. Copyable: a copy is an independent
/// snapshot of the whole simulation.
class Simulator {
 public:
  explicit Simulator(const SimConfig& cfg);

  const SimConfig& config() const { return cfg_; }
  Hierarchy& hierarchy() { return hier_; }
  const Hierarchy& hierarchy() const { return hier_; }
  std::uint64_t steps() const { return steps_; }

  void step(const TraceRecord& rec);
  void run(const Trace& trace);

  /// Stats for everything simulated so far.
  StatsReport report() const { return StatsReport::derive(hier_.counters(), cfg_.latencies()); }

  /// Write all dirty state to memory. Not part of the steady-state stats: call
  /// report() first.
  void flush() { hier_.flush(); }

  /// Data-region memory contents (ECC region excluded).
  MemoryImage data_image() const { return hier_.memory().region_below(cfg_.ecc_region_base); }

 private:
  SimConfig cfg_;
  Hierarchy hier_;
  std::uint64_t steps_ = 0;
};

struct RunResult {
  StatsReport stats;      // before the final flush
  MemoryImage memory;     // full image after the final flush
  MemoryImage data_image; // data region of `memory`
  std::vector<WritebackEvent> writebacks;
};

/// Run `trace` under cfg.scheme, then flush.
RunResult run(const Trace& trace, const SimConfig& cfg, bool record_writebacks = false);

/// Consistency checks on a live hierarchy. Returns an empty list when all hold.
///  - LRU ranks form a permutation in every set of both caches
///  - every valid L1 line is present in L2
///  - stored parity matches data for every valid L2 line
///  - every dirty data line's ECC slot equals block_ecc(data)
std::vector<std::string> validate_hierarchy(const Hierarchy& h, bool check_parity = true);

}  // namespace tccsim

#include <array>

#include "tccsim/energy.hpp"

namespace tccsim {

struct SchemeResult {
  Scheme scheme = Scheme::Conventional;
  StatsReport stats;
  EnergyReport energy;
  MemoryImage data_image;
};

struct Comparison {
  std::array<SchemeResult, 3> results;  // conventional, mmecc, tcc
  bool images_equal = false;

  const SchemeResult& of(Scheme s) const { return results[static_cast<std::size_t>(s)]; }
};

/// Run all three schemes on identical inputs (concurrently) and check that
/// their flushed data images agree.
Comparison compare_schemes(const Trace& trace, const SimConfig& cfg);

}  // namespace tccsim

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tccsim/engine.hpp"
#include "tccsim/workload.hpp"

namespace tccsim {

enum class FaultMode {
  SingleData,      // one data bit
  DoubleSameWord,  // two distinct bits of one 64-bit word
  ParityBit,       // one bit of the stored parity byte
};

enum class TargetFilter {
  AnyData,  // any resident non-ECC line
  Dirty,
  Clean,
  EccLine,  // resident memory-mapped ECC lines
};

enum class Outcome { CorrectedDirty, RefetchedClean, Due, Masked, Sdc };

std::string_view to_string(FaultMode m);
std::string_view to_string(TargetFilter f);
std::string_view to_string(Outcome o);
std::optional<FaultMode> parse_fault_mode(std::string_view s);
std::optional<TargetFilter> parse_target_filter(std::string_view s);

struct InjectionSpec {
  unsigned set = 0;
  unsigned way = 0;
  std::vector<unsigned> data_bits;  // positions < 512, bit b = byte b/8, bit b%8
  std::uint8_t parity_mask = 0;
};

/// Flip bits of a valid L2 line in place; metadata is left untouched so the
/// error surfaces on the line's next read.
void inject(Simulator& sim, const InjectionSpec& spec);

/// Random eligible target, or nullopt when none is resident.
std::optional<InjectionSpec> pick_injection(const Simulator& sim, TargetFilter filter, FaultMode mode, Rng& rng);

struct OutcomeTally {
  std::uint64_t corrected_dirty = 0;
  std::uint64_t refetched_clean = 0;
  std::uint64_t due = 0;
  std::uint64_t masked = 0;
  std::uint64_t sdc = 0;

  std::uint64_t total() const { return corrected_dirty + refetched_clean + due + masked + sdc; }
  void add(Outcome o);
};

struct InjectionRecord {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;      // per-injection seed; replays this injection alone
  std::uint64_t position = 0;  // trace records executed before the fault
  InjectionSpec spec;
  std::uint64_t addr = 0;
  bool dirty = false;
  bool ecc_line = false;
  Outcome outcome = Outcome::Masked;
};

struct CampaignParams {
  std::uint64_t n_injections = 0;
  std::uint64_t seed = 0;
  FaultMode mode = FaultMode::SingleData;
  TargetFilter filter = TargetFilter::AnyData;
  unsigned threads = 1;
};

struct CampaignReport {
  OutcomeTally tally;
  std::vector<InjectionRecord> records;
};

/// Each injection is an independent run: simulate the trace up to a random
/// position, inject into a random eligible L2 line, finish the trace, flush
/// and compare the data image against the fault-free golden run.
CampaignReport campaign(const Trace& trace, const SimConfig& cfg, const CampaignParams& params);

/// Replay a single injection from its per-injection seed.
InjectionRecord replay_injection(const Trace& trace, const SimConfig& cfg, FaultMode mode, TargetFilter filter,
                                 std::uint64_t injection_seed);

}  // namespace tccsim

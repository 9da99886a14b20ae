#pragma once

#include <map>
#include <optional>
#include <string>

#include "tccsim/scheme.hpp"
#include "tccsim/stats.hpp"

namespace tccsim {

/// Per-event dynamic energies (abstract energy units) and leakage powers
/// (energy units per cycle). The defaults are placeholders scaled by storage
/// bits, not derived from any circuit model.
struct EnergyCoefficients {
  double e_l2_access_conventional = 1.125;  // 72/64 of a parity-only line
  double e_l2_access_plain = 1.0;
  double e_mem_access = 10.0;
  double e_sig_read = 0.015625;   // one byte vs a 64-byte line
  double e_sig_write = 0.015625;
  double e_sig_compare = 0.001;
  double e_block_compare = 0.01;
  double e_ecc_compute = 0.04;    // ~4x the XORs of a block compare
  double p_leak_conventional = 0.01125;
  double p_leak_plain = 0.01;
  double p_leak_sigcache = 0.01 / 1024.0;  // 1 KiB signature cache vs 1 MiB L2

  /// Throws ConfigError on a negative coefficient.
  void validate() const;
};

struct EnergyReport {
  double dynamic = 0.0;
  double leakage = 0.0;
  double total = 0.0;
  double cycles = 0.0;
  /// Dynamic energy per event class.
  std::map<std::string, double> breakdown;
};

/// Event-count energy accounting. Leakage is charged over `cycles` when given,
/// otherwise over the run's own latency-proxy cycles.
EnergyReport account(const StatsReport& stats, const EnergyCoefficients& coef, Scheme scheme,
                     std::optional<double> cycles = std::nullopt);

}  // namespace tccsim

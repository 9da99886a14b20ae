#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tccsim/cache.hpp"
#include "tccsim/energy.hpp"
#include "tccsim/memory.hpp"
#include "tccsim/scheme.hpp"
#include "tccsim/stats.hpp"

namespace tccsim {

/// Full simulation configuration. Defaults: 64 KiB 4-way L1 (3 cycles),
/// 1 MiB 8-way L2 (12 cycles), 512-cycle memory, 64-byte blocks, LRU.
struct SimConfig {
  Scheme scheme = Scheme::Tcc;
  CacheGeometry l1{64 * 1024, 4, 3};
  CacheGeometry l2{1024 * 1024, 8, 12};
  unsigned mem_latency = 512;
  std::uint64_t ecc_region_base = kDefaultEccRegionBase;
  EnergyCoefficients energy;

  Latencies latencies() const { return {l1.latency_cycles, l2.latency_cycles, mem_latency}; }
  EccGeometry ecc_geometry() const { return {ecc_region_base, l2.sets(), l2.ways}; }

  /// Set one key from its textual value. Throws ConfigError on unknown keys
  /// or unparsable values.
  void set(std::string_view key, std::string_view value);
  void validate() const;

  /// Every key with its current value, in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Parse flat `key = value` text; `#` starts a comment. Keys not present keep
/// their defaults.
SimConfig parse_config(std::string_view text, SimConfig base = {});
SimConfig load_config(const std::string& path, SimConfig base = {});
std::string format_config(const SimConfig& cfg);

}  // namespace tccsim

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace tccsim {

struct TraceRecord {
  enum class Op : std::uint8_t { Read, Write };

  Op op = Op::Read;
  std::uint64_t addr = 0;   // 8-byte aligned byte address
  std::uint64_t value = 0;  // writes only

  static TraceRecord read(std::uint64_t addr) { return {Op::Read, addr, 0}; }
  static TraceRecord write(std::uint64_t addr, std::uint64_t value) { return {Op::Write, addr, value}; }

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

using Trace = std::vector<TraceRecord>;

// Text format, one record per line:
//   R <hex-addr>
//   W <hex-addr> <16-hex-digit value>
// Blank lines and everything after '#' are ignored.
Trace parse_trace(std::string_view text);
Trace load_trace(const std::string& path);
std::string serialize_trace(const Trace& trace);
void write_trace(std::ostream& out, const Trace& trace);

/// Deterministic RNG used by generators and fault campaigns. Wraps
/// std::mt19937_64 with distribution code that does not depend on the
/// standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

struct GeneratorParams {
  std::uint64_t n_ops = 0;
  std::uint64_t working_set_blocks = 0;
  double write_ratio = 0.5;      // probability that an in-block op is a store
  double silent_fraction = 0.0;  // expected share of silent L1 write-backs
  std::uint64_t seed = 0;
  unsigned l1_sets = 256;        // L1 geometry used to force evictions
  unsigned l1_ways = 4;
};

struct ExpectedWriteback {
  std::uint64_t addr = 0;
  bool silent = false;

  friend bool operator==(const ExpectedWriteback&, const ExpectedWriteback&) = default;
};

struct GeneratedTrace {
  Trace trace;
  /// Write-backs the trace provokes, in order, with their true silence.
  std::vector<ExpectedWriteback> expected;
  std::uint64_t working_set_bytes = 0;
};

/// Episode-structured generator. Each episode picks a working-set block,
/// reads it, issues a few loads/stores to it and then loads l1_ways conflict
/// blocks mapping to the same L1 set, which evicts it. Silent episodes only
/// store values already held by the block; other episodes store at least one
/// fresh value that differs from the block's L2 copy.
GeneratedTrace generate(const GeneratorParams& params);

/// Unstructured random trace over the working set. Each store rewrites the
/// current value with probability `rewrite_prob`, else writes a fresh value.
Trace generate_uniform(std::uint64_t n_ops, std::uint64_t working_set_blocks, double write_ratio,
                       double rewrite_prob, std::uint64_t seed);

}  // namespace tccsim

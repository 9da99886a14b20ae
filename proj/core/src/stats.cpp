#include "tccsim/stats.hpp"

namespace tccsim {

Counters& Counters::operator+=(const Counters& o) {
  l1_reads += o.l1_reads;
  l1_writes += o.l1_writes;
  l1_misses += o.l1_misses;
  l2_reads += o.l2_reads;
  l2_writes += o.l2_writes;
  l2_misses += o.l2_misses;
  l1_writebacks += o.l1_writebacks;
  silent += o.silent;
  nonsilent_fast += o.nonsilent_fast;
  nonsilent_aliased += o.nonsilent_aliased;
  ecc_line_installs += o.ecc_line_installs;
  ecc_line_extra_writes += o.ecc_line_extra_writes;
  memory_reads += o.memory_reads;
  memory_writes += o.memory_writes;
  corrected_dirty += o.corrected_dirty;
  refetched_clean += o.refetched_clean;
  due_events += o.due_events;
  sig_reads += o.sig_reads;
  sig_writes += o.sig_writes;
  block_compares += o.block_compares;
  ecc_computes += o.ecc_computes;
  return *this;
}

double amat_cycles(const Counters& c, const Latencies& lat) {
  return static_cast<double>(c.l1_accesses()) * lat.l1 +
         static_cast<double>(c.l2_accesses_total()) * lat.l2 +
         static_cast<double>(c.memory_accesses()) * lat.memory;
}

StatsReport StatsReport::derive(const Counters& c, const Latencies& lat) {
  StatsReport r;
  r.counters = c;
  if (c.l1_writebacks != 0)
    r.silent_fraction = static_cast<double>(c.silent) / static_cast<double>(c.l1_writebacks);
  // Every L1 miss issues exactly one demand request to L2.
  if (c.l1_misses != 0) r.l2_miss_rate = static_cast<double>(c.l2_misses) / static_cast<double>(c.l1_misses);
  r.amat_cycles = tccsim::amat_cycles(c, lat);
  return r;
}

}  // namespace tccsim

#include "tccsim/energy.hpp"

#include "tccsim/errors.hpp"

namespace tccsim {

void EnergyCoefficients::validate() const {
  const double all[] = {e_l2_access_conventional, e_l2_access_plain, e_mem_access,  e_sig_read,
                        e_sig_write,              e_sig_compare,     e_block_compare, e_ecc_compute,
                        p_leak_conventional,      p_leak_plain,      p_leak_sigcache};
  for (double v : all)
    if (!(v >= 0.0)) throw ConfigError("energy coefficients must be non-negative");
}

EnergyReport account(const StatsReport& stats, const EnergyCoefficients& coef, Scheme scheme,
                     std::optional<double> cycles) {
  coef.validate();
  const Counters& c = stats.counters;
  auto n = [](std::uint64_t v) { return static_cast<double>(v); };

  const double l2_access = scheme == Scheme::Conventional ? coef.e_l2_access_conventional : coef.e_l2_access_plain;

  EnergyReport r;
  r.breakdown["l2_access"] = n(c.l2_accesses_total()) * l2_access;
  r.breakdown["memory_access"] = n(c.memory_accesses()) * coef.e_mem_access;
  r.breakdown["sig_read"] = n(c.sig_reads) * coef.e_sig_read;
  r.breakdown["sig_write"] = n(c.sig_writes) * coef.e_sig_write;
  // Every signature read feeds exactly one signature comparison.
  r.breakdown["sig_compare"] = n(c.sig_reads) * coef.e_sig_compare;
  r.breakdown["block_compare"] = n(c.block_compares) * coef.e_block_compare;
  r.breakdown["ecc_compute"] = n(c.ecc_computes) * coef.e_ecc_compute;
  for (const auto& [_, e] : r.breakdown) r.dynamic += e;

  double power = scheme == Scheme::Conventional ? coef.p_leak_conventional : coef.p_leak_plain;
  if (scheme == Scheme::Tcc) power += coef.p_leak_sigcache;
  r.cycles = cycles.value_or(stats.amat_cycles);
  r.leakage = power * r.cycles;
  r.total = r.dynamic + r.leakage;
  return r;
}

}  // namespace tccsim

#include "tccsim/report.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tccsim/errors.hpp"

namespace tccsim {
namespace {

using nlohmann::json;

const char* const kCompareMetrics[] = {"l2_accesses", "l2_miss_rate", "dynamic_energy", "total_energy",
                                       "amat_cycles"};

json config_json(const SimConfig& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.entries()) j[k] = v;
  return j;
}

json stats_json(const StatsReport& s) {
  json j = json::object();
  s.counters.for_each([&](const char* name, std::uint64_t v) { j[name] = v; });
  j["l2_accesses_total"] = s.counters.l2_accesses_total();
  j["silent_fraction"] = s.silent_fraction;
  j["l2_miss_rate"] = s.l2_miss_rate;
  j["amat_cycles"] = s.amat_cycles;
  return j;
}

json energy_json(const EnergyReport& e) {
  json j = json::object();
  j["dynamic"] = e.dynamic;
  j["leakage"] = e.leakage;
  j["total"] = e.total;
  j["cycles"] = e.cycles;
  j["breakdown"] = e.breakdown;
  return j;
}

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

}  // namespace

std::string simulation_json(const SimConfig& cfg, const StatsReport& stats, const EnergyReport& energy) {
  json j;
  j["scheme"] = std::string(to_string(cfg.scheme));
  j["config"] = config_json(cfg);
  j["stats"] = stats_json(stats);
  j["energy"] = energy_json(energy);
  return j.dump(2) + "\n";
}

std::string simulation_csv(const SimConfig& cfg, const StatsReport& stats, const EnergyReport& energy) {
  std::string header = "scheme";
  std::string row(to_string(cfg.scheme));
  auto col = [&](const std::string& name, const std::string& value) {
    header += "," + name;
    row += "," + value;
  };
  stats.counters.for_each([&](const char* name, std::uint64_t v) { col(name, std::to_string(v)); });
  col("l2_accesses_total", std::to_string(stats.counters.l2_accesses_total()));
  col("silent_fraction", csv_number(stats.silent_fraction));
  col("l2_miss_rate", csv_number(stats.l2_miss_rate));
  col("amat_cycles", csv_number(stats.amat_cycles));
  col("energy_dynamic", csv_number(energy.dynamic));
  col("energy_leakage", csv_number(energy.leakage));
  col("energy_total", csv_number(energy.total));
  for (const auto& [k, v] : energy.breakdown) col("energy_" + k, csv_number(v));
  return header + "\n" + row + "\n";
}

double metric_value(const SchemeResult& r, const std::string& metric) {
  if (metric == "l2_accesses") return static_cast<double>(r.stats.counters.l2_accesses_total());
  if (metric == "l2_miss_rate") return r.stats.l2_miss_rate;
  if (metric == "dynamic_energy") return r.energy.dynamic;
  if (metric == "total_energy") return r.energy.total;
  if (metric == "leakage_energy") return r.energy.leakage;
  if (metric == "amat_cycles") return r.stats.amat_cycles;
  throw UsageError("unknown metric '" + metric + "'");
}

double normalized(const Comparison& cmp, Scheme scheme, const std::string& metric) {
  const double base = metric_value(cmp.of(Scheme::Conventional), metric);
  const double v = metric_value(cmp.of(scheme), metric);
  if (base == 0.0) return v == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return v / base;
}

std::string comparison_json(const SimConfig& cfg, const Comparison& cmp) {
  json j;
  j["config"] = config_json(cfg);
  j["images_equal"] = cmp.images_equal;
  for (const auto& r : cmp.results) {
    const std::string name(to_string(r.scheme));
    j["schemes"][name]["stats"] = stats_json(r.stats);
    j["schemes"][name]["energy"] = energy_json(r.energy);
    for (const char* m : kCompareMetrics) {
      const double v = normalized(cmp, r.scheme, m);
      j["normalized"][m][name] = std::isfinite(v) ? json(v) : json(nullptr);
    }
  }
  return j.dump(2) + "\n";
}

std::string comparison_csv(const Comparison& cmp) {
  std::string out = "metric,conventional,mmecc,tcc,mmecc_norm,tcc_norm\n";
  for (const char* m : kCompareMetrics) {
    out += m;
    for (Scheme s : kAllSchemes) out += "," + csv_number(metric_value(cmp.of(s), m));
    out += "," + csv_number(normalized(cmp, Scheme::Mmecc, m));
    out += "," + csv_number(normalized(cmp, Scheme::Tcc, m));
    out += "\n";
  }
  return out;
}

std::string comparison_table(const Comparison& cmp) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "metric" << std::right << std::setw(14) << "conventional" << std::setw(10)
     << "mmecc" << std::setw(10) << "tcc" << "\n";
  os << std::fixed << std::setprecision(4);
  for (const char* m : kCompareMetrics) {
    os << std::left << std::setw(16) << m << std::right;
    for (Scheme s : kAllSchemes) os << std::setw(s == Scheme::Conventional ? 14 : 10) << normalized(cmp, s, m);
    os << "\n";
  }
  os << "silent writes (tcc): " << cmp.of(Scheme::Tcc).stats.counters.silent << " of "
     << cmp.of(Scheme::Tcc).stats.counters.l1_writebacks << " write-backs\n";
  os << "data images " << (cmp.images_equal ? "identical" : "DIFFER") << " across schemes\n";
  return os.str();
}

std::string campaign_json(const SimConfig& cfg, const CampaignParams& params, const CampaignReport& report) {
  json j;
  j["config"] = config_json(cfg);
  j["campaign"] = {{"n_injections", params.n_injections},
                   {"seed", params.seed},
                   {"mode", std::string(to_string(params.mode))},
                   {"target", std::string(to_string(params.filter))}};
  j["tally"] = {{"corrected_dirty", report.tally.corrected_dirty},
                {"refetched_clean", report.tally.refetched_clean},
                {"due", report.tally.due},
                {"masked", report.tally.masked},
                {"sdc", report.tally.sdc}};
  json recs = json::array();
  for (const auto& r : report.records) {
    recs.push_back({{"index", r.index},
                    {"seed", r.seed},
                    {"position", r.position},
                    {"set", r.spec.set},
                    {"way", r.spec.way},
                    {"addr", r.addr},
                    {"dirty", r.dirty},
                    {"ecc_line", r.ecc_line},
                    {"data_bits", r.spec.data_bits},
                    {"parity_mask", r.spec.parity_mask},
                    {"outcome", std::string(to_string(r.outcome))}});
  }
  j["injections"] = std::move(recs);
  return j.dump(2) + "\n";
}

}  // namespace tccsim

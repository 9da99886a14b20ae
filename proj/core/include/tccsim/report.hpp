#pragma once

#include <string>

#include "tccsim/config.hpp"
#include "tccsim/energy.hpp"
#include "tccsim/engine.hpp"
#include "tccsim/fault.hpp"
#include "tccsim/stats.hpp"

namespace tccsim {

// JSON output uses sorted keys and a trailing newline so identical inputs
// produce byte-identical files.

std::string simulation_json(const SimConfig& cfg, const StatsReport& stats, const EnergyReport& energy);
/// Header row plus one data row.
std::string simulation_csv(const SimConfig& cfg, const StatsReport& stats, const EnergyReport& energy);

std::string comparison_json(const SimConfig& cfg, const Comparison& cmp);
std::string comparison_csv(const Comparison& cmp);
/// Human-readable table, metrics normalized to the conventional scheme.
std::string comparison_table(const Comparison& cmp);

std::string campaign_json(const SimConfig& cfg, const CampaignParams& params, const CampaignReport& report);

/// Value of `metric` for `scheme` divided by the conventional value
/// (1.0 when both are zero).
double normalized(const Comparison& cmp, Scheme scheme, const std::string& metric);
double metric_value(const SchemeResult& r, const std::string& metric);

}  // namespace tccsim

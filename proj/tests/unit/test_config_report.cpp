#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "tccsim/config.hpp"
#include "tccsim/errors.hpp"
#include "tccsim/report.hpp"
#include "test_util.hpp"

using namespace tccsim;
using namespace tccsim::testing;

TEST(Config, Defaults) {
  const SimConfig c;
  EXPECT_EQ(c.scheme, Scheme::Tcc);
  EXPECT_EQ(c.l1.sets(), 256u);
  EXPECT_EQ(c.l2.sets(), 2048u);
  EXPECT_EQ(c.mem_latency, 512u);
  EXPECT_EQ(c.ecc_region_base, std::uint64_t{1} << 36);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ParsesSuffixesHexAndComments) {
  const SimConfig c = parse_config(
      "# comment\n"
      "scheme = mmecc\n"
      "l1_size = 32K   # trailing\n"
      "l2_size=2M\n"
      "\n"
      "ecc_region_base = 0x2000000000\n"
      "e_mem_access = 12.5\n");
  EXPECT_EQ(c.scheme, Scheme::Mmecc);
  EXPECT_EQ(c.l1.capacity_bytes, 32u * 1024);
  EXPECT_EQ(c.l2.capacity_bytes, 2u * 1024 * 1024);
  EXPECT_EQ(c.ecc_region_base, std::uint64_t{0x2000000000});
  EXPECT_DOUBLE_EQ(c.energy.e_mem_access, 12.5);
  EXPECT_EQ(c.l1.ways, 4u);
}

TEST(Config, FormatRoundTrips) {
  SimConfig c;
  c.set("scheme", "conventional");
  c.set("l2_ways", "16");
  c.set("p_leak_sigcache", "0.25");
  const SimConfig d = parse_config(format_config(c));
  EXPECT_EQ(d.entries(), c.entries());
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("l1_ways\n"), ConfigError);
  EXPECT_THROW(parse_config("l1_ways = four\n"), ConfigError);
  EXPECT_THROW(parse_config("scheme = secded\n"), ConfigError);
  EXPECT_THROW(parse_config("l1_size = 1M\nl2_size = 64K\n").validate(), ConfigError);
  EXPECT_THROW(parse_config("l1_size = 3000\n").validate(), ConfigError);
  EXPECT_THROW(parse_config("ecc_region_base = 0x1001\n").validate(), ConfigError);
  EXPECT_THROW(load_config("/nonexistent.cfg"), ConfigError);
  try {
    parse_config("scheme = tcc\n\nnope = 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Config, ShippedFilesLoad) {
  const SimConfig d = load_config(TCCSIM_SOURCE_DIR "/configs/default.cfg");
  d.validate();
  EXPECT_EQ(d.entries(), SimConfig{}.entries());
  const SimConfig t = load_config(TCCSIM_SOURCE_DIR "/configs/toy.cfg");
  EXPECT_EQ(t.l1.sets(), 4u);
  EXPECT_EQ(t.l2.sets(), 32u);
}

namespace {

Comparison small_comparison() {
  return compare_schemes(generate_uniform(3000, 200, 0.5, 0.3, 8), toy_config(Scheme::Tcc));
}

}  // namespace

TEST(Report, SimulationJsonHasStatsAndEnergy) {
  const SimConfig cfg = toy_config(Scheme::Tcc);
  const RunResult r = run(generate_uniform(1000, 50, 0.5, 0.3, 1), cfg);
  const EnergyReport e = account(r.stats, cfg.energy, cfg.scheme);
  const std::string text = simulation_json(cfg, r.stats, e);
  EXPECT_EQ(text.back(), '\n');
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["config"]["scheme"], "tcc");
  EXPECT_EQ(j["stats"]["silent"].get<std::uint64_t>(), r.stats.counters.silent);
  EXPECT_DOUBLE_EQ(j["energy"]["total"].get<double>(), e.total);
  EXPECT_EQ(text, simulation_json(cfg, r.stats, e));
}

TEST(Report, SimulationCsvHasTwoRowsOfEqualWidth) {
  const SimConfig cfg = toy_config(Scheme::Mmecc);
  const RunResult r = run(generate_uniform(1000, 50, 0.5, 0.3, 1), cfg);
  const std::string csv = simulation_csv(cfg, r.stats, account(r.stats, cfg.energy, cfg.scheme));
  const auto nl = csv.find('\n');
  ASSERT_NE(nl, std::string::npos);
  const std::string header = csv.substr(0, nl), row = csv.substr(nl + 1);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(Report, NormalizedMetrics) {
  const Comparison c = small_comparison();
  EXPECT_DOUBLE_EQ(normalized(c, Scheme::Conventional, "l2_accesses"), 1.0);
  const double mm = metric_value(c.of(Scheme::Mmecc), "l2_accesses");
  const double conv = metric_value(c.of(Scheme::Conventional), "l2_accesses");
  EXPECT_DOUBLE_EQ(normalized(c, Scheme::Mmecc, "l2_accesses"), mm / conv);
  EXPECT_DOUBLE_EQ(metric_value(c.of(Scheme::Tcc), "amat_cycles"), c.of(Scheme::Tcc).stats.amat_cycles);
  EXPECT_THROW(metric_value(c.of(Scheme::Tcc), "bogus"), UsageError);
}

TEST(Report, ComparisonOutputsMentionEveryScheme) {
  const Comparison c = small_comparison();
  const std::string table = comparison_table(c);
  const std::string csv = comparison_csv(c);
  for (const char* s : {"conventional", "mmecc", "tcc"}) {
    EXPECT_NE(table.find(s), std::string::npos);
    EXPECT_NE(csv.find(s), std::string::npos);
  }
  const auto j = nlohmann::json::parse(comparison_json(toy_config(Scheme::Tcc), c));
  EXPECT_TRUE(j["images_equal"].get<bool>());
  EXPECT_EQ(j["schemes"].size(), 3u);
}

TEST(Report, CampaignJsonTallies) {
  CampaignParams p;
  p.n_injections = 10;
  p.seed = 3;
  const CampaignReport rep = campaign(generate_uniform(1000, 50, 0.5, 0.3, 1), toy_config(Scheme::Tcc), p);
  const auto j = nlohmann::json::parse(campaign_json(toy_config(Scheme::Tcc), p, rep));
  std::uint64_t sum = 0;
  for (const auto& [k, v] : j["tally"].items()) sum += v.get<std::uint64_t>();
  EXPECT_EQ(sum, 10u);
  EXPECT_EQ(j["injections"].size(), 10u);
}

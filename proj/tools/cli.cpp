#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "tccsim/config.hpp"
#include "tccsim/energy.hpp"
#include "tccsim/engine.hpp"
#include "tccsim/errors.hpp"
#include "tccsim/fault.hpp"
#include "tccsim/report.hpp"
#include "tccsim/workload.hpp"

namespace tccsim::cli {
namespace {

struct CommonInputs {
  std::string trace_path;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string scheme;
  std::string output_path;
};

SimConfig resolve_config(const CommonInputs& in) {
  SimConfig cfg = in.config_path.empty() ? SimConfig{} : load_config(in.config_path);
  for (const auto& kv : in.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!in.scheme.empty()) cfg.set("scheme", in.scheme);
  cfg.validate();
  return cfg;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

void add_common(CLI::App* cmd, CommonInputs& in, bool with_scheme) {
  cmd->add_option("trace", in.trace_path, "Trace file (R <addr> / W <addr> <value>)")->required();
  cmd->add_option("config", in.config_path, "Config file (key = value)");
  cmd->add_option("--set", in.overrides, "Override a config key (key=value); repeatable");
  if (with_scheme)
    cmd->add_option("--scheme", in.scheme, "Protection scheme")
        ->check(CLI::IsMember({"conventional", "mmecc", "tcc"}));
  cmd->add_option("-o,--output", in.output_path, "Output file (default: stdout)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trace-driven L2 cache protection simulator (conventional / mmecc / tcc)", "tccsim"};
  app.require_subcommand(1);

  CommonInputs sim_in;
  std::string sim_format = "json";
  std::string dump_path;
  auto* simulate = app.add_subcommand("simulate", "Simulate one scheme and report stats and energy");
  add_common(simulate, sim_in, true);
  simulate->add_option("--out", sim_format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  simulate->add_option("--dump-memory", dump_path, "Write the flushed memory image (binary)");

  CommonInputs cmp_in;
  std::string cmp_format = "table";
  auto* compare = app.add_subcommand("compare", "Run all three schemes and compare");
  add_common(compare, cmp_in, false);
  compare->add_option("--out", cmp_format, "Report format")->check(CLI::IsMember({"table", "json", "csv"}));

  CommonInputs inj_in;
  std::uint64_t inj_n = 0;
  std::optional<std::uint64_t> inj_seed;
  std::string inj_mode = "single";
  std::string inj_target = "any";
  unsigned inj_threads = 1;
  auto* inject_cmd = app.add_subcommand("inject", "Run a seeded soft-error injection campaign");
  add_common(inject_cmd, inj_in, true);
  inject_cmd->add_option("--n", inj_n, "Number of injections")->required()->check(CLI::PositiveNumber);
  inject_cmd->add_option("--seed", inj_seed, "Campaign seed")->required();
  inject_cmd->add_option("--mode", inj_mode, "Fault pattern")->check(CLI::IsMember({"single", "double", "parity"}));
  inject_cmd->add_option("--target", inj_target, "Eligible lines")
      ->check(CLI::IsMember({"any", "dirty", "clean", "ecc"}));
  inject_cmd->add_option("--threads", inj_threads, "Worker threads")->check(CLI::PositiveNumber);

  GeneratorParams gen;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_config;
  std::string gen_out;
  std::string gen_truth;
  bool gen_uniform = false;
  double gen_rewrite = 0.0;
  auto* gen_trace = app.add_subcommand("gen-trace", "Generate a synthetic trace");
  gen_trace->add_option("--ops", gen.n_ops, "Number of trace records")->required();
  gen_trace->add_option("--working-set", gen.working_set_blocks, "Working set in 64-byte blocks")->required();
  gen_trace->add_option("--write-ratio", gen.write_ratio, "Store probability for in-block ops")
      ->check(CLI::Range(0.0, 1.0));
  gen_trace->add_option("--silent-fraction", gen.silent_fraction, "Expected share of silent write-backs")
      ->check(CLI::Range(0.0, 1.0));
  gen_trace->add_option("--seed", gen_seed, "Generator seed")->required();
  gen_trace->add_option("--config", gen_config, "Config file supplying the L1 geometry");
  gen_trace->add_flag("--uniform", gen_uniform, "Unstructured random trace instead of eviction episodes");
  gen_trace->add_option("--rewrite-prob", gen_rewrite, "With --uniform: chance a store rewrites the current value")
      ->check(CLI::Range(0.0, 1.0));
  gen_trace->add_option("-o,--output", gen_out, "Trace output file (default: stdout)");
  gen_trace->add_option("--truth", gen_truth, "Write expected write-back classes as JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      const SimConfig cfg = resolve_config(sim_in);
      Simulator sim(cfg);
      sim.run(load_trace(sim_in.trace_path));
      const StatsReport stats = sim.report();
      const EnergyReport energy = account(stats, cfg.energy, cfg.scheme);
      emit(sim_format == "csv" ? simulation_csv(cfg, stats, energy) : simulation_json(cfg, stats, energy),
           sim_in.output_path, out);
      if (!dump_path.empty()) {
        sim.flush();
        std::ofstream f(dump_path, std::ios::binary);
        if (!f) throw UsageError("cannot write '" + dump_path + "'");
        sim.hierarchy().memory().dump(f);
      }
      return kExitOk;
    }

    if (compare->parsed()) {
      const SimConfig cfg = resolve_config(cmp_in);
      const Comparison cmp = compare_schemes(load_trace(cmp_in.trace_path), cfg);
      std::string text;
      if (cmp_format == "json")
        text = comparison_json(cfg, cmp);
      else if (cmp_format == "csv")
        text = comparison_csv(cmp);
      else
        text = comparison_table(cmp);
      emit(text, cmp_in.output_path, out);
      if (!cmp.images_equal) {
        err << "error: flushed data images differ across schemes\n";
        return kExitInternal;
      }
      return kExitOk;
    }

    if (inject_cmd->parsed()) {
      const SimConfig cfg = resolve_config(inj_in);
      CampaignParams p;
      p.n_injections = inj_n;
      p.seed = *inj_seed;
      p.mode = *parse_fault_mode(inj_mode);
      p.filter = *parse_target_filter(inj_target);
      p.threads = inj_threads;
      const CampaignReport rep = campaign(load_trace(inj_in.trace_path), cfg, p);
      emit(campaign_json(cfg, p, rep), inj_in.output_path, out);
      return kExitOk;
    }

    if (gen_trace->parsed()) {
      gen.seed = *gen_seed;
      if (!gen_config.empty()) {
        const SimConfig cfg = load_config(gen_config);
        gen.l1_sets = cfg.l1.sets();
        gen.l1_ways = cfg.l1.ways;
      } else {
        const SimConfig defaults;
        gen.l1_sets = defaults.l1.sets();
        gen.l1_ways = defaults.l1.ways;
      }
      if (gen_uniform) {
        emit(serialize_trace(generate_uniform(gen.n_ops, gen.working_set_blocks, gen.write_ratio, gen_rewrite, gen.seed)),
             gen_out, out);
        return kExitOk;
      }
      const GeneratedTrace g = generate(gen);
      emit(serialize_trace(g.trace), gen_out, out);
      if (!gen_truth.empty()) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& e : g.expected) j.push_back({{"addr", e.addr}, {"silent", e.silent}});
        emit(j.dump() + "\n", gen_truth, out);
      }
      return kExitOk;
    }
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ParseError& e) {
    err << "trace error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace tccsim::cli

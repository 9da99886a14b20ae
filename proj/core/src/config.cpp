#include "tccsim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tccsim/errors.hpp"

namespace tccsim {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_uint(std::string_view key, std::string_view v) {
  int base = 10;
  if (v.size() > 2 && v[0] == '0' && (v[1] == 'x' || v[1] == 'X')) {
    base = 16;
    v.remove_prefix(2);
  }
  std::uint64_t mult = 1;
  if (base == 10 && !v.empty()) {
    switch (v.back()) {
      case 'K': case 'k': mult = 1024; break;
      case 'M': case 'm': mult = 1024 * 1024; break;
      case 'G': case 'g': mult = 1024 * 1024 * 1024; break;
      default: break;
    }
    if (mult != 1) v.remove_suffix(1);
  }
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out, base);
  if (ec != std::errc{} || p != v.data() + v.size() || v.empty())
    throw ConfigError("invalid integer for '" + std::string(key) + "': " + std::string(v));
  return out * mult;
}

unsigned parse_small(std::string_view key, std::string_view v) {
  const std::uint64_t x = parse_uint(key, v);
  if (x > 0xFFFFFFFFu) throw ConfigError("value out of range for '" + std::string(key) + "'");
  return static_cast<unsigned>(x);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || v.empty())
    throw ConfigError("invalid number for '" + std::string(key) + "': " + std::string(v));
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fmt_hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

struct EnergyKey {
  const char* name;
  double EnergyCoefficients::*field;
};

constexpr EnergyKey kEnergyKeys[] = {
    {"e_l2_access_conventional", &EnergyCoefficients::e_l2_access_conventional},
    {"e_l2_access_plain", &EnergyCoefficients::e_l2_access_plain},
    {"e_mem_access", &EnergyCoefficients::e_mem_access},
    {"e_sig_read", &EnergyCoefficients::e_sig_read},
    {"e_sig_write", &EnergyCoefficients::e_sig_write},
    {"e_sig_compare", &EnergyCoefficients::e_sig_compare},
    {"e_block_compare", &EnergyCoefficients::e_block_compare},
    {"e_ecc_compute", &EnergyCoefficients::e_ecc_compute},
    {"p_leak_conventional", &EnergyCoefficients::p_leak_conventional},
    {"p_leak_plain", &EnergyCoefficients::p_leak_plain},
    {"p_leak_sigcache", &EnergyCoefficients::p_leak_sigcache},
};

}  // namespace

void SimConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "scheme") {
    auto s = parse_scheme(value);
    if (!s) throw ConfigError("unknown scheme '" + std::string(value) + "'");
    scheme = *s;
  } else if (key == "l1_size") {
    l1.capacity_bytes = parse_uint(key, value);
  } else if (key == "l1_ways") {
    l1.ways = parse_small(key, value);
  } else if (key == "l1_latency") {
    l1.latency_cycles = parse_small(key, value);
  } else if (key == "l2_size") {
    l2.capacity_bytes = parse_uint(key, value);
  } else if (key == "l2_ways") {
    l2.ways = parse_small(key, value);
  } else if (key == "l2_latency") {
    l2.latency_cycles = parse_small(key, value);
  } else if (key == "mem_latency") {
    mem_latency = parse_small(key, value);
  } else if (key == "ecc_region_base") {
    ecc_region_base = parse_uint(key, value);
  } else {
    for (const auto& k : kEnergyKeys) {
      if (key == k.name) {
        energy.*k.field = parse_double(key, value);
        return;
      }
    }
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void SimConfig::validate() const {
  l1.validate("l1");
  l2.validate("l2");
  ecc_geometry().validate();
  energy.validate();
  if (l2.capacity_bytes < l1.capacity_bytes) throw ConfigError("L2 must be at least as large as L1 (inclusion)");
}

std::vector<std::pair<std::string, std::string>> SimConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> out{
      {"scheme", std::string(to_string(scheme))},
      {"l1_size", std::to_string(l1.capacity_bytes)},
      {"l1_ways", std::to_string(l1.ways)},
      {"l1_latency", std::to_string(l1.latency_cycles)},
      {"l2_size", std::to_string(l2.capacity_bytes)},
      {"l2_ways", std::to_string(l2.ways)},
      {"l2_latency", std::to_string(l2.latency_cycles)},
      {"mem_latency", std::to_string(mem_latency)},
      {"ecc_region_base", fmt_hex(ecc_region_base)},
  };
  for (const auto& k : kEnergyKeys) out.emplace_back(k.name, fmt_double(energy.*k.field));
  return out;
}

SimConfig parse_config(std::string_view text, SimConfig cfg) {
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    try {
      cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::string& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

std::string format_config(const SimConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg.entries()) out += k + " = " + v + "\n";
  return out;
}

}  // namespace tccsim

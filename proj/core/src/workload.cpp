#include "tccsim/workload.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "tccsim/codec.hpp"
#include "tccsim/errors.hpp"

namespace tccsim {
namespace {

bool parse_hex(std::string_view tok, std::uint64_t& out) {
  if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) tok.remove_prefix(2);
  if (tok.empty() || tok.size() > 16) return false;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out, 16);
  return ec == std::errc{} && p == tok.data() + tok.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) toks.push_back(line.substr(start, i - start));
  }
  return toks;
}

void append_hex(std::string& out, std::uint64_t v, int min_digits) {
  char buf[16];
  int n = 0;
  do {
    buf[n++] = "0123456789ABCDEF"[v & 0xF];
    v >>= 4;
  } while (v != 0);
  for (int i = n; i < min_digits; ++i) out.push_back('0');
  while (n > 0) out.push_back(buf[--n]);
}

}  // namespace

Trace parse_trace(std::string_view text) {
  Trace trace;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto toks = split_ws(line);
    if (toks.empty()) continue;

    TraceRecord rec;
    if (toks[0] == "R" && toks.size() == 2) {
      rec.op = TraceRecord::Op::Read;
    } else if (toks[0] == "W" && toks.size() == 3) {
      rec.op = TraceRecord::Op::Write;
      if (!parse_hex(toks[2], rec.value)) throw ParseError(lineno, "bad value '" + std::string(toks[2]) + "'");
    } else {
      throw ParseError(lineno, "expected 'R <addr>' or 'W <addr> <value>'");
    }
    if (!parse_hex(toks[1], rec.addr)) throw ParseError(lineno, "bad address '" + std::string(toks[1]) + "'");
    if (rec.addr % 8 != 0) throw ParseError(lineno, "address not 8-byte aligned");
    trace.push_back(rec);
  }
  return trace;
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open trace file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

std::string serialize_trace(const Trace& trace) {
  std::string out;
  out.reserve(trace.size() * 28);
  for (const auto& r : trace) {
    out.push_back(r.op == TraceRecord::Op::Read ? 'R' : 'W');
    out.push_back(' ');
    append_hex(out, r.addr, 1);
    if (r.op == TraceRecord::Op::Write) {
      out.push_back(' ');
      append_hex(out, r.value, 16);
    }
    out.push_back('\n');
  }
  return out;
}

void write_trace(std::ostream& out, const Trace& trace) { out << serialize_trace(trace); }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw UsageError("Rng::below with zero bound");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = 0;
  do x = next();
  while (x >= limit);
  return x % bound;
}

GeneratedTrace generate(const GeneratorParams& p) {
  if (p.working_set_blocks == 0) throw UsageError("working set must contain at least one block");
  if (p.write_ratio < 0 || p.write_ratio > 1 || p.silent_fraction < 0 || p.silent_fraction > 1)
    throw UsageError("ratios must lie in [0, 1]");
  if (p.l1_sets == 0 || p.l1_ways == 0) throw UsageError("L1 geometry must be non-empty");

  GeneratedTrace out;
  Rng rng(p.seed);
  const std::uint64_t set_stride = std::uint64_t{p.l1_sets} * kBlockBytes;
  const std::uint64_t ws_bytes = p.working_set_blocks * kBlockBytes;
  // Conflict blocks live above the working set, aligned so block i of set s
  // maps to L1 set s.
  const std::uint64_t conflict_base = (ws_bytes + set_stride - 1) / set_stride * set_stride;
  out.working_set_bytes = ws_bytes;

  // Value of each word as held by L2/memory (committed) and by the L1 copy.
  std::unordered_map<std::uint64_t, std::uint64_t> committed;
  auto committed_at = [&](std::uint64_t a) {
    auto it = committed.find(a);
    return it == committed.end() ? std::uint64_t{0} : it->second;
  };

  Trace& t = out.trace;
  while (t.size() < p.n_ops) {
    const std::uint64_t block = rng.below(p.working_set_blocks) * kBlockBytes;
    const unsigned l1_set = static_cast<unsigned>((block / kBlockBytes) % p.l1_sets);
    const bool silent = rng.chance(p.silent_fraction);
    const unsigned body = 1 + static_cast<unsigned>(rng.below(8));

    std::array<std::uint64_t, kWordsPerBlock> current{};
    for (unsigned w = 0; w < kWordsPerBlock; ++w) current[w] = committed_at(block + 8 * w);

    auto emit = [&](const TraceRecord& r) {
      if (t.size() >= p.n_ops) return false;
      t.push_back(r);
      return true;
    };

    bool wrote = false;
    bool complete = emit(TraceRecord::read(block + 8 * rng.below(kWordsPerBlock)));
    for (unsigned i = 0; i < body && complete; ++i) {
      const bool force_write = p.write_ratio > 0 && !wrote && i + 1 == body;
      const unsigned w = static_cast<unsigned>(rng.below(kWordsPerBlock));
      const std::uint64_t addr = block + 8 * w;
      if (!(force_write || rng.chance(p.write_ratio))) {
        complete = emit(TraceRecord::read(addr));
        continue;
      }
      std::uint64_t value = current[w];
      // Non-silent episodes write a fresh value first and may write more later.
      // Fresh values never equal the committed word.
      if (!silent && (!wrote || rng.chance(0.5))) {
        const std::uint64_t old = committed_at(addr);
        do value = rng.next();
        while (value == old || value == current[w]);
      }
      if (!(complete = emit(TraceRecord::write(addr, value)))) break;
      current[w] = value;
      wrote = true;
    }
    for (unsigned i = 0; i < p.l1_ways && complete; ++i) {
      const std::uint64_t conflict = conflict_base + (std::uint64_t{i} * p.l1_sets + l1_set) * kBlockBytes;
      complete = emit(TraceRecord::read(conflict + 8 * rng.below(kWordsPerBlock)));
    }
    if (!wrote || !complete) continue;

    for (unsigned w = 0; w < kWordsPerBlock; ++w) {
      if (current[w] != committed_at(block + 8 * w)) committed[block + 8 * w] = current[w];
    }
    out.expected.push_back({block, silent});
  }
  return out;
}

Trace generate_uniform(std::uint64_t n_ops, std::uint64_t working_set_blocks, double write_ratio,
                       double rewrite_prob, std::uint64_t seed) {
  if (working_set_blocks == 0) throw UsageError("working set must contain at least one block");
  Rng rng(seed);
  std::unordered_map<std::uint64_t, std::uint64_t> value;
  Trace t;
  t.reserve(n_ops);
  const std::uint64_t words = working_set_blocks * kWordsPerBlock;
  for (std::uint64_t i = 0; i < n_ops; ++i) {
    const std::uint64_t addr = rng.below(words) * 8;
    if (!rng.chance(write_ratio)) {
      t.push_back(TraceRecord::read(addr));
      continue;
    }
    std::uint64_t& v = value[addr];
    if (!rng.chance(rewrite_prob)) v = rng.next();
    t.push_back(TraceRecord::write(addr, v));
  }
  return t;
}

}  // namespace tccsim

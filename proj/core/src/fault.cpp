#include "tccsim/fault.hpp"

#include <algorithm>
#include <thread>

#include "tccsim/errors.hpp"

namespace tccsim {
namespace {

constexpr unsigned kMaxPositionTries = 256;
constexpr std::size_t kMaxCheckpoints = 32;

std::uint64_t mix(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Checkpoints {
  std::uint64_t interval = 1;
  std::vector<Simulator> states;  // states[k] = after k * interval records
};

struct Golden {
  MemoryImage image;
  Checkpoints cp;
};

Golden golden_run(const Trace& trace, const SimConfig& cfg) {
  Golden g;
  g.cp.interval = std::max<std::uint64_t>(1, (trace.size() + kMaxCheckpoints - 1) / kMaxCheckpoints);
  Simulator sim(cfg);
  for (std::uint64_t i = 0; i < trace.size(); ++i) {
    if (i % g.cp.interval == 0) g.cp.states.push_back(sim);
    sim.step(trace[i]);
  }
  sim.flush();
  g.image = sim.data_image();
  return g;
}

InjectionRecord run_injection(const Trace& trace, const Golden& golden, FaultMode mode, TargetFilter filter,
                              std::uint64_t index, std::uint64_t seed) {
  Rng rng(seed);
  InjectionRecord rec;
  rec.index = index;
  rec.seed = seed;

  for (unsigned attempt = 0; attempt < kMaxPositionTries; ++attempt) {
    const std::uint64_t pos = 1 + rng.below(trace.size());
    const std::size_t k = static_cast<std::size_t>((pos - 1) / golden.cp.interval);
    Simulator sim = golden.cp.states[k];
    for (std::uint64_t i = k * golden.cp.interval; i < pos; ++i) sim.step(trace[i]);

    auto spec = pick_injection(sim, filter, mode, rng);
    if (!spec) continue;

    const CacheLine& line = sim.hierarchy().l2().read_line(spec->set, spec->way);
    rec.position = pos;
    rec.spec = *spec;
    rec.addr = sim.hierarchy().l2().line_addr(spec->set, spec->way);
    rec.dirty = line.meta.dirty;
    rec.ecc_line = sim.hierarchy().is_ecc_addr(rec.addr);

    const Counters before = sim.hierarchy().counters();
    inject(sim, *spec);
    for (std::uint64_t i = pos; i < trace.size(); ++i) sim.step(trace[i]);
    sim.flush();
    const Counters& after = sim.hierarchy().counters();

    const bool image_ok = sim.data_image() == golden.image;
    if (after.due_events > before.due_events)
      rec.outcome = Outcome::Due;
    else if (!image_ok)
      rec.outcome = Outcome::Sdc;
    else if (after.corrected_dirty > before.corrected_dirty)
      rec.outcome = Outcome::CorrectedDirty;
    else if (after.refetched_clean > before.refetched_clean)
      rec.outcome = Outcome::RefetchedClean;
    else
      rec.outcome = Outcome::Masked;
    return rec;
  }
  throw UsageError("no eligible injection target found in the trace");
}

}  // namespace

std::string_view to_string(FaultMode m) {
  switch (m) {
    case FaultMode::SingleData: return "single";
    case FaultMode::DoubleSameWord: return "double";
    case FaultMode::ParityBit: return "parity";
  }
  return "unknown";
}

std::string_view to_string(TargetFilter f) {
  switch (f) {
    case TargetFilter::AnyData: return "any";
    case TargetFilter::Dirty: return "dirty";
    case TargetFilter::Clean: return "clean";
    case TargetFilter::EccLine: return "ecc";
  }
  return "unknown";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::CorrectedDirty: return "corrected_dirty";
    case Outcome::RefetchedClean: return "refetched_clean";
    case Outcome::Due: return "due";
    case Outcome::Masked: return "masked";
    case Outcome::Sdc: return "sdc";
  }
  return "unknown";
}

std::optional<FaultMode> parse_fault_mode(std::string_view s) {
  for (FaultMode m : {FaultMode::SingleData, FaultMode::DoubleSameWord, FaultMode::ParityBit})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

std::optional<TargetFilter> parse_target_filter(std::string_view s) {
  for (TargetFilter f : {TargetFilter::AnyData, TargetFilter::Dirty, TargetFilter::Clean, TargetFilter::EccLine})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

void inject(Simulator& sim, const InjectionSpec& spec) {
  const Cache& l2 = sim.hierarchy().l2();
  if (spec.set >= l2.sets() || spec.way >= l2.ways() || !l2.valid(spec.set, spec.way))
    throw UsageError("injection target is not a valid L2 line");
  sim.hierarchy().corrupt_l2(spec.set, spec.way, spec.data_bits, spec.parity_mask);
}

std::optional<InjectionSpec> pick_injection(const Simulator& sim, TargetFilter filter, FaultMode mode, Rng& rng) {
  const Hierarchy& h = sim.hierarchy();
  const Cache& l2 = h.l2();
  std::vector<std::pair<unsigned, unsigned>> eligible;
  for (unsigned s = 0; s < l2.sets(); ++s) {
    for (unsigned w = 0; w < l2.ways(); ++w) {
      if (!l2.valid(s, w)) continue;
      const bool ecc = h.is_ecc_addr(l2.line_addr(s, w));
      const bool dirty = l2.peek(s, w).meta.dirty;
      bool ok = false;
      switch (filter) {
        case TargetFilter::AnyData: ok = !ecc; break;
        case TargetFilter::Dirty: ok = !ecc && dirty; break;
        case TargetFilter::Clean: ok = !ecc && !dirty; break;
        case TargetFilter::EccLine: ok = ecc; break;
      }
      if (ok) eligible.emplace_back(s, w);
    }
  }
  if (eligible.empty()) return std::nullopt;

  const auto [set, way] = eligible[rng.below(eligible.size())];
  InjectionSpec spec;
  spec.set = set;
  spec.way = way;
  switch (mode) {
    case FaultMode::SingleData:
      spec.data_bits.push_back(static_cast<unsigned>(rng.below(kBlockBytes * 8)));
      break;
    case FaultMode::DoubleSameWord: {
      const unsigned word = static_cast<unsigned>(rng.below(kWordsPerBlock));
      const unsigned a = static_cast<unsigned>(rng.below(64));
      unsigned b = static_cast<unsigned>(rng.below(63));
      if (b >= a) ++b;
      spec.data_bits = {word * 64 + a, word * 64 + b};
      break;
    }
    case FaultMode::ParityBit:
      spec.parity_mask = static_cast<std::uint8_t>(1u << rng.below(8));
      break;
  }
  return spec;
}

void OutcomeTally::add(Outcome o) {
  switch (o) {
    case Outcome::CorrectedDirty: ++corrected_dirty; break;
    case Outcome::RefetchedClean: ++refetched_clean; break;
    case Outcome::Due: ++due; break;
    case Outcome::Masked: ++masked; break;
    case Outcome::Sdc: ++sdc; break;
  }
}

CampaignReport campaign(const Trace& trace, const SimConfig& cfg, const CampaignParams& params) {
  if (params.n_injections == 0) throw UsageError("campaign needs at least one injection");
  if (trace.empty()) throw UsageError("campaign needs a non-empty trace");

  const Golden golden = golden_run(trace, cfg);
  CampaignReport report;
  report.records.resize(params.n_injections);

  auto work = [&](std::uint64_t first, std::uint64_t stride) {
    for (std::uint64_t i = first; i < params.n_injections; i += stride)
      report.records[i] = run_injection(trace, golden, params.mode, params.filter, i, mix(params.seed ^ mix(i)));
  };
  const unsigned threads = std::max(1u, params.threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          work(t, threads);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  for (const auto& r : report.records) report.tally.add(r.outcome);
  return report;
}

InjectionRecord replay_injection(const Trace& trace, const SimConfig& cfg, FaultMode mode, TargetFilter filter,
                                 std::uint64_t injection_seed) {
  if (trace.empty()) throw UsageError("replay needs a non-empty trace");
  return run_injection(trace, golden_run(trace, cfg), mode, filter, 0, injection_seed);
}

}  // namespace tccsim

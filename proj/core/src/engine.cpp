#include "tccsim/engine.hpp"

#include <sstream>

#include "tccsim/errors.hpp"

namespace tccsim {

Simulator::Simulator(const SimConfig& cfg) : cfg_(cfg), hier_((cfg.validate(), cfg)) {}

void Simulator::step(const TraceRecord& rec) {
  if (rec.addr % 8 != 0) throw UsageError("trace address not 8-byte aligned");
  if (rec.op == TraceRecord::Op::Read)
    hier_.load(rec.addr);
  else
    hier_.store(rec.addr, rec.value);
  ++steps_;
}

void Simulator::run(const Trace& trace) {
  for (const auto& rec : trace) step(rec);
}

RunResult run(const Trace& trace, const SimConfig& cfg, bool record_writebacks) {
  Simulator sim(cfg);
  RunResult out;
  if (record_writebacks)
    sim.hierarchy().set_writeback_observer([&out](const WritebackEvent& e) { out.writebacks.push_back(e); });
  sim.run(trace);
  out.stats = sim.report();
  sim.hierarchy().set_writeback_observer(nullptr);
  sim.flush();
  out.memory = sim.hierarchy().memory();
  out.data_image = sim.data_image();
  return out;
}

std::vector<std::string> validate_hierarchy(const Hierarchy& h, bool check_parity) {
  std::vector<std::string> errors;
  auto fail = [&](const std::string& what, unsigned set, unsigned way) {
    std::ostringstream os;
    os << what << " at (" << set << "," << way << ")";
    errors.push_back(os.str());
  };

  const Cache& l1 = h.l1();
  const Cache& l2 = h.l2();
  if (!l1.lru_consistent()) errors.emplace_back("L1 LRU ranks are not a permutation");
  if (!l2.lru_consistent()) errors.emplace_back("L2 LRU ranks are not a permutation");

  for (unsigned s = 0; s < l1.sets(); ++s)
    for (unsigned w = 0; w < l1.ways(); ++w)
      if (l1.valid(s, w) && !l2.lookup(l1.line_addr(s, w)).hit()) fail("L1 line missing from L2", s, w);

  for (unsigned s = 0; s < l2.sets(); ++s) {
    for (unsigned w = 0; w < l2.ways(); ++w) {
      if (!l2.valid(s, w)) continue;
      const CacheLine& line = l2.peek(s, w);
      if (h.is_ecc_addr(l2.line_addr(s, w))) continue;
      if (check_parity && parity_signature(line.data) != line.meta.parity) fail("stale L2 parity", s, w);
      if (line.meta.dirty && h.peek_block_ecc(s, w) != block_ecc(line.data)) fail("dirty line ECC mismatch", s, w);
    }
  }
  return errors;
}

}  // namespace tccsim

#include <future>

namespace tccsim {

Comparison compare_schemes(const Trace& trace, const SimConfig& cfg) {
  std::array<std::future<SchemeResult>, 3> jobs;
  for (std::size_t i = 0; i < kAllSchemes.size(); ++i) {
    jobs[i] = std::async(std::launch::async, [&trace, cfg, s = kAllSchemes[i]] {
      SimConfig scheme_cfg = cfg;
      scheme_cfg.scheme = s;
      RunResult r = run(trace, scheme_cfg);
      SchemeResult out;
      out.scheme = s;
      out.stats = r.stats;
      out.energy = account(r.stats, cfg.energy, s);
      out.data_image = std::move(r.data_image);
      return out;
    });
  }
  Comparison c;
  for (std::size_t i = 0; i < jobs.size(); ++i) c.results[i] = jobs[i].get();
  c.images_equal = c.results[0].data_image == c.results[1].data_image &&
                   c.results[0].data_image == c.results[2].data_image;
  return c;
}

}  // namespace tccsim

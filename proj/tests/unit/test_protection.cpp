#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "tccsim/engine.hpp"
#include "tccsim/errors.hpp"
#include "test_util.hpp"

using namespace tccsim;
using namespace tccsim::testing;

namespace {

// Toy geometry: L1 4 sets x 2 ways, L2 32 sets x 4 ways.
// 0x1000, 0x2000, 0x3000 share L1 set 0 and L2 set 0.
constexpr std::uint64_t A = 0x1000;
constexpr std::uint64_t C1 = 0x2000;
constexpr std::uint64_t C2 = 0x3000;

struct Harness {
  Simulator sim;
  std::vector<WritebackEvent> events;

  explicit Harness(Scheme s) : sim(toy_config(s)) {
    sim.hierarchy().set_writeback_observer([this](const WritebackEvent& e) { events.push_back(e); });
  }
  void r(std::uint64_t a) { sim.step(TraceRecord::read(a)); }
  void w(std::uint64_t a, std::uint64_t v) { sim.step(TraceRecord::write(a, v)); }
  // Push `a` out of its 2-way L1 set with two conflicting loads.
  void evict_l1(std::uint64_t a) {
    r(a + 0x10000);
    r(a + 0x20000);
  }
  const Counters& c() const { return sim.hierarchy().counters(); }
};

std::pair<unsigned, unsigned> l2_frame(const Hierarchy& h, std::uint64_t a) {
  const auto r = h.l2().lookup(a);
  EXPECT_TRUE(r.hit());
  return {r.set, r.way.value_or(0)};
}

}  // namespace

TEST(Writeback, SilentRewriteCostsOneAccessUnderTccAndTwoUnderMmecc) {
  Harness tcc(Scheme::Tcc), mm(Scheme::Mmecc), conv(Scheme::Conventional);
  for (Harness* h : {&tcc, &mm, &conv}) {
    h->r(A);
    h->w(A, 0);  // same value as memory
    h->r(C1);
    h->r(C2);
    ASSERT_EQ(h->events.size(), 1u);
  }
  EXPECT_EQ(tcc.events[0].cls, WritebackClass::Silent);
  EXPECT_TRUE(tcc.events[0].identical);
  EXPECT_EQ(tcc.events[0].l2_accesses, 1u);
  EXPECT_EQ(tcc.c().silent, 1u);
  EXPECT_EQ(tcc.c().ecc_computes, 0u);
  EXPECT_EQ(tcc.c().ecc_line_installs, 0u);
  EXPECT_EQ(mm.events[0].l2_accesses, 2u);
  EXPECT_GE(mm.c().l2_writes, 2u);
  EXPECT_EQ(conv.events[0].l2_accesses, 1u);
}

TEST(Writeback, NewValueTakesTheSignatureMismatchPath) {
  Harness tcc(Scheme::Tcc);
  tcc.w(A, 0xDEADBEEF);
  tcc.evict_l1(A);
  ASSERT_EQ(tcc.events.size(), 1u);
  EXPECT_EQ(tcc.events[0].cls, WritebackClass::NonsilentFast);
  EXPECT_EQ(tcc.events[0].l2_accesses, 2u);
  EXPECT_EQ(tcc.c().block_compares, 0u);
}

TEST(Writeback, SignatureCollisionTakesTheAliasedPath) {
  Harness tcc(Scheme::Tcc);
  // Bit 0 of byte 0 and bit 0 of byte 1: same parity lane, signature unchanged.
  tcc.w(A, 0x0101);
  tcc.evict_l1(A);
  ASSERT_EQ(tcc.events.size(), 1u);
  EXPECT_EQ(tcc.events[0].cls, WritebackClass::NonsilentAliased);
  EXPECT_FALSE(tcc.events[0].identical);
  EXPECT_EQ(tcc.events[0].l2_accesses, 3u);
  EXPECT_EQ(tcc.c().block_compares, 1u);
}

TEST(Writeback, ConventionalIsAlwaysOneAccess) {
  Harness conv(Scheme::Conventional);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t a = 0x1000 + 0x40 * (rng() % 16);
    conv.w(a, rng() % 3);
    conv.evict_l1(a);
  }
  ASSERT_FALSE(conv.events.empty());
  for (const auto& e : conv.events) EXPECT_EQ(e.l2_accesses, 1u);
  EXPECT_EQ(conv.c().ecc_line_installs, 0u);
}

TEST(Writeback, SilentWriteKeepsCleanLineClean) {
  Harness tcc(Scheme::Tcc);
  tcc.r(A);
  tcc.w(A + 8, 0);
  tcc.evict_l1(A);
  const auto [s, w] = l2_frame(tcc.sim.hierarchy(), A);
  EXPECT_FALSE(tcc.sim.hierarchy().l2().read_line(s, w).meta.dirty);

  Harness mm(Scheme::Mmecc);
  mm.r(A);
  mm.w(A + 8, 0);
  mm.evict_l1(A);
  const auto [s2, w2] = l2_frame(mm.sim.hierarchy(), A);
  EXPECT_TRUE(mm.sim.hierarchy().l2().read_line(s2, w2).meta.dirty);
}

TEST(Writeback, SilentWriteOnDirtyLineKeepsItsEcc) {
  Harness tcc(Scheme::Tcc);
  tcc.w(A, 7);
  tcc.evict_l1(A);
  tcc.w(A, 7);
  tcc.evict_l1(A);
  ASSERT_EQ(tcc.events.size(), 2u);
  EXPECT_EQ(tcc.events[1].cls, WritebackClass::Silent);
  const auto [s, w] = l2_frame(tcc.sim.hierarchy(), A);
  EXPECT_TRUE(tcc.sim.hierarchy().l2().read_line(s, w).meta.dirty);
  EXPECT_TRUE(validate_hierarchy(tcc.sim.hierarchy()).empty());
}

TEST(Writeback, NonResidentTargetViolatesInclusion) {
  Simulator sim(toy_config(Scheme::Tcc));
  EXPECT_THROW(sim.hierarchy().handle_writeback(A, Block{}, 0, 0), InvariantError);
}

TEST(Classify, SilentIffBlocksAreIdentical) {
  std::mt19937_64 rng(8);
  Simulator sim(toy_config(Scheme::Tcc));
  Hierarchy& h = sim.hierarchy();
  sim.step(TraceRecord::read(A));
  const auto l1 = h.l1().lookup(A);
  const auto [s, w] = l2_frame(h, A);
  const Block old = h.l2().read_line(s, w).data;
  for (int i = 0; i < 3000; ++i) {
    Block candidate = old;
    const int kind = static_cast<int>(rng() % 3);
    if (kind == 1) flip_bit(candidate, static_cast<unsigned>(rng() % 512));
    if (kind == 2) {
      const unsigned lane = static_cast<unsigned>(rng() % 8);
      flip_bit(candidate, lane + 8 * static_cast<unsigned>(rng() % 32));
      flip_bit(candidate, lane + 8 * (32 + static_cast<unsigned>(rng() % 32)));
    }
    const WritebackClass cls = h.classify_writeback(l1.set, *l1.way, candidate, s, w);
    EXPECT_EQ(cls == WritebackClass::Silent, candidate == old);
    if (kind == 1) EXPECT_EQ(cls, WritebackClass::NonsilentFast);
    if (kind == 2) EXPECT_EQ(cls, WritebackClass::NonsilentAliased);
  }
}

TEST(L1Fill, ColdReadFetchesFromMemoryAndStoresSignature) {
  Harness tcc(Scheme::Tcc);
  tcc.r(A);
  EXPECT_EQ(tcc.c().l1_misses, 1u);
  EXPECT_EQ(tcc.c().l2_misses, 1u);
  EXPECT_EQ(tcc.c().memory_reads, 1u);
  EXPECT_EQ(tcc.c().sig_writes, 1u);
  const Hierarchy& h = tcc.sim.hierarchy();
  const auto l1 = h.l1().lookup(A);
  const auto [s, w] = l2_frame(h, A);
  EXPECT_EQ(h.signatures().read(l1.set, *l1.way), h.l2().read_line(s, w).meta.parity.bits);
}

TEST(L1Fill, L2HitHasNoMemoryTraffic) {
  Harness tcc(Scheme::Tcc);
  tcc.r(A);
  tcc.evict_l1(A);
  const Counters before = tcc.c();
  tcc.r(A);
  EXPECT_EQ(tcc.c().memory_reads, before.memory_reads);
  EXPECT_EQ(tcc.c().l2_misses, before.l2_misses);
  EXPECT_EQ(tcc.c().l2_reads, before.l2_reads + 1);
}

TEST(EccStore, ColdStartInstallsZeroLineThenReusesIt) {
  Harness mm(Scheme::Mmecc);
  mm.w(A, 1);
  mm.evict_l1(A);
  EXPECT_EQ(mm.c().ecc_line_installs, 1u);
  EXPECT_EQ(mm.c().ecc_line_extra_writes, 0u);
  EXPECT_EQ(mm.c().memory_reads, 3u);  // A and the two conflict blocks; no ECC fetch

  // Adjacent frame: same way (0), next set of the same group.
  const std::uint64_t b = A + 0x40;
  mm.w(b, 2);
  mm.evict_l1(b);
  EXPECT_EQ(mm.c().ecc_line_installs, 1u);
  EXPECT_EQ(mm.c().ecc_line_extra_writes, 1u);
  EXPECT_TRUE(validate_hierarchy(mm.sim.hierarchy()).empty());
}

TEST(EccStore, EvictedEccLineIsReadBackWhenAnAdjacentBlockIsDirty) {
  Harness mm(Scheme::Mmecc);
  const Hierarchy& h = mm.sim.hierarchy();
  mm.w(A, 1);  // L2 set 0, way 0
  mm.evict_l1(A);
  mm.w(A + 0x40, 2);  // L2 set 1, way 0: adjacent to A
  mm.evict_l1(A + 0x40);
  ASSERT_EQ(l2_frame(h, A + 0x40).second, 0u);
  const EccSlot slot = ecc_address(0, 0, h.ecc_geometry());
  ASSERT_TRUE(h.l2().lookup(slot.block_addr).hit());

  // Thrash L2 set 0 until the ECC line is written back to memory.
  for (std::uint64_t k = 1; k <= 8; ++k) mm.r(A + k * 0x800 * 4);
  ASSERT_FALSE(h.l2().lookup(slot.block_addr).hit());
  EXPECT_NE(h.memory().read_block(slot.block_addr), Block{});

  // First dirty write into L2 set 2 lands in way 0 of the same group.
  const std::uint64_t c = A + 0x80;
  const Counters before = mm.c();
  mm.w(c, 3);
  mm.evict_l1(c);
  ASSERT_EQ(l2_frame(h, c).second, 0u);
  EXPECT_EQ(mm.c().ecc_line_installs, before.ecc_line_installs + 1);
  // c, two conflict blocks, and the stored ECC block.
  EXPECT_EQ(mm.c().memory_reads, before.memory_reads + 4);
  EXPECT_TRUE(validate_hierarchy(h).empty());
}

TEST(CheckedRead, SingleFlipInDirtyLineIsCorrected) {
  for (Scheme s : kAllSchemes) {
    Harness hs(s);
    hs.w(A, 0x1234);
    hs.evict_l1(A);
    Hierarchy& h = hs.sim.hierarchy();
    const auto [set, way] = l2_frame(h, A);
    const Block good = h.l2().read_line(set, way).data;
    const unsigned bits[] = {77};
    h.corrupt_l2(set, way, bits, 0);
    EXPECT_EQ(h.l2_read_checked(set, way), good) << to_string(s);
    EXPECT_EQ(hs.c().corrected_dirty, 1u);
    EXPECT_EQ(h.l2().read_line(set, way).data, good);
    EXPECT_EQ(h.l2().read_line(set, way).meta.parity, parity_signature(good));
  }
}

TEST(CheckedRead, FlipInCleanLineIsRefetched) {
  Harness tcc(Scheme::Tcc);
  tcc.r(A);
  Hierarchy& h = tcc.sim.hierarchy();
  const auto [set, way] = l2_frame(h, A);
  const unsigned bits[] = {3};
  h.corrupt_l2(set, way, bits, 0);
  const Counters before = tcc.c();
  EXPECT_EQ(h.l2_read_checked(set, way), Block{});
  EXPECT_EQ(tcc.c().refetched_clean, 1u);
  EXPECT_EQ(tcc.c().memory_reads, before.memory_reads + 1);
}

TEST(CheckedRead, DoubleFlipInOneWordIsADue) {
  Harness mm(Scheme::Mmecc);
  mm.w(A, 0xFFFF);
  mm.evict_l1(A);
  Hierarchy& h = mm.sim.hierarchy();
  const auto [set, way] = l2_frame(h, A);
  const unsigned bits[] = {1, 2};  // different parity lanes, so parity notices
  h.corrupt_l2(set, way, bits, 0);
  h.l2_read_checked(set, way);
  EXPECT_EQ(mm.c().due_events, 1u);
  EXPECT_EQ(mm.c().corrected_dirty, 0u);
}

TEST(CheckedRead, EccFetchedFromMemoryWhenLineNotCached) {
  Harness mm(Scheme::Mmecc);
  Hierarchy& h = mm.sim.hierarchy();
  mm.w(A + 0x40, 5);
  mm.evict_l1(A + 0x40);
  const EccSlot slot = ecc_address(1, 0, h.ecc_geometry());
  for (std::uint64_t k = 1; k <= 8; ++k) mm.r(A + k * 0x800 * 4);
  ASSERT_FALSE(h.l2().lookup(slot.block_addr).hit());
  const auto [set, way] = l2_frame(h, A + 0x40);
  const unsigned bits[] = {500};
  h.corrupt_l2(set, way, bits, 0);
  const Counters before = mm.c();
  h.l2_read_checked(set, way);
  EXPECT_EQ(mm.c().corrected_dirty, 1u);
  EXPECT_EQ(mm.c().memory_reads, before.memory_reads + 1);
  EXPECT_EQ(mm.c().l2_reads, before.l2_reads);
}

TEST(L2Eviction, CleanDirtyAndEccVictims) {
  Harness mm(Scheme::Mmecc);
  Hierarchy& h = mm.sim.hierarchy();
  mm.r(A);
  auto [set, way] = l2_frame(h, A);
  Counters before = mm.c();
  h.handle_l2_eviction(set, way);
  EXPECT_EQ(mm.c().memory_writes, before.memory_writes);
  EXPECT_FALSE(h.l1().lookup(A).hit());

  mm.w(A, 9);
  std::tie(set, way) = l2_frame(h, A);
  before = mm.c();
  h.handle_l2_eviction(set, way);  // back-invalidates the dirty L1 copy first
  EXPECT_EQ(mm.c().l1_writebacks, before.l1_writebacks + 1);
  EXPECT_EQ(mm.c().memory_writes, before.memory_writes + 1);
  EXPECT_EQ(load_word(h.memory().read_block(A), 0), 9u);

  const EccSlot slot = ecc_address(set, way, h.ecc_geometry());
  const auto e = h.l2().lookup(slot.block_addr);
  ASSERT_TRUE(e.hit());
  h.handle_l2_eviction(e.set, *e.way);
  EXPECT_TRUE(h.ecc_geometry().in_region(h.memory().blocks().rbegin()->first));
  EXPECT_EQ(BlockEcc::from_bytes(h.memory().read_block(slot.block_addr).data() + slot.byte_offset),
            block_ecc(h.memory().read_block(A)));
}

TEST(CostTable, TccEqualsMmeccMinusSilentPlusAliasedWithoutEvictions) {
  // Large L2, small L1: write-backs happen, L2 never evicts.
  GeneratorParams p;
  p.n_ops = 20000;
  p.working_set_blocks = 256;
  p.silent_fraction = 0.4;
  p.seed = 99;
  p.l1_sets = 4;
  p.l1_ways = 2;
  const Trace t = generate(p).trace;
  SimConfig cfg = toy_config(Scheme::Mmecc, 512, 2, 256 * 1024, 8);
  const RunResult mm = run(t, cfg);
  cfg.scheme = Scheme::Tcc;
  const RunResult tc = run(t, cfg);
  const Counters& m = mm.stats.counters;
  const Counters& c = tc.stats.counters;
  ASSERT_GT(c.silent, 0u);
  EXPECT_EQ(c.l2_accesses_total() + c.silent, m.l2_accesses_total() + c.nonsilent_aliased);
}

#include <benchmark/benchmark.h>

#include "tccsim/codec.hpp"
#include "tccsim/workload.hpp"

using namespace tccsim;

namespace {

Block random_block(Rng& rng) {
  Block b{};
  for (std::size_t w = 0; w < kWordsPerBlock; ++w) store_word(b, w, rng.next());
  return b;
}

void BM_ParitySignature(benchmark::State& state) {
  Rng rng(1);
  const Block b = random_block(rng);
  for (auto _ : state) benchmark::DoNotOptimize(parity_signature(b));
  state.SetBytesProcessed(state.iterations() * kBlockBytes);
}
BENCHMARK(BM_ParitySignature);

void BM_BlockEcc(benchmark::State& state) {
  Rng rng(2);
  const Block b = random_block(rng);
  for (auto _ : state) benchmark::DoNotOptimize(block_ecc(b));
  state.SetBytesProcessed(state.iterations() * kBlockBytes);
}
BENCHMARK(BM_BlockEcc);

void BM_DecodeSingleError(benchmark::State& state) {
  Rng rng(3);
  std::uint64_t word = rng.next();
  WordCheck check = secded_encode(word);
  flip_codeword_bit(word, check, 37);
  for (auto _ : state) benchmark::DoNotOptimize(secded_decode(word, check));
}
BENCHMARK(BM_DecodeSingleError);

void BM_BlockCorrect(benchmark::State& state) {
  Rng rng(4);
  Block b = random_block(rng);
  const BlockEcc ecc = block_ecc(b);
  b[17] ^= 0x10;
  for (auto _ : state) benchmark::DoNotOptimize(block_correct(b, ecc));
}
BENCHMARK(BM_BlockCorrect);

}  // namespace

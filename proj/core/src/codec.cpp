#include "tccsim/codec.hpp"

#include <bit>
#include <cstring>

namespace tccsim {
namespace {

constexpr bool is_power_of_two(unsigned v) { return v != 0 && (v & (v - 1)) == 0; }

struct Layout {
  // position_of[b] = codeword position of data bit b.
  std::array<std::uint8_t, 64> position_of{};
  // data_at[p] = data bit index at position p, or -1 for check/parity slots.
  std::array<std::int8_t, kCodewordBits> data_at{};
  // coverage[i] = data-bit mask covered by check bit 2^i.
  std::array<std::uint64_t, 7> coverage{};
};

constexpr Layout make_layout() {
  Layout l{};
  for (auto& d : l.data_at) d = -1;
  unsigned bit = 0;
  for (unsigned pos = 1; pos < kCodewordBits; ++pos) {
    if (is_power_of_two(pos)) continue;
    l.position_of[bit] = static_cast<std::uint8_t>(pos);
    l.data_at[pos] = static_cast<std::int8_t>(bit);
    for (unsigned i = 0; i < 7; ++i)
      if (pos & (1u << i)) l.coverage[i] |= std::uint64_t{1} << bit;
    ++bit;
  }
  return l;
}

constexpr Layout kLayout = make_layout();
static_assert(kLayout.position_of[0] == 3);
static_assert(kLayout.position_of[63] == 71);

inline unsigned parity64(std::uint64_t v) { return std::popcount(v) & 1u; }

// Seven Hamming check bits, without overall parity.
inline std::uint8_t hamming_bits(std::uint64_t word) {
  std::uint8_t c = 0;
  for (unsigned i = 0; i < 7; ++i)
    c |= static_cast<std::uint8_t>(parity64(word & kLayout.coverage[i]) << i);
  return c;
}

}  // namespace

std::array<std::uint8_t, kWordsPerBlock> BlockEcc::bytes() const {
  std::array<std::uint8_t, kWordsPerBlock> out{};
  for (std::size_t i = 0; i < kWordsPerBlock; ++i) out[i] = checks[i].check;
  return out;
}

BlockEcc BlockEcc::from_bytes(const std::uint8_t* src) {
  BlockEcc e;
  for (std::size_t i = 0; i < kWordsPerBlock; ++i) e.checks[i].check = src[i];
  return e;
}

ParitySignature parity_signature(const Block& block) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < kWordsPerBlock; ++i) acc ^= load_word(block, i);
  acc ^= acc >> 32;
  acc ^= acc >> 16;
  acc ^= acc >> 8;
  return ParitySignature{static_cast<std::uint8_t>(acc)};
}

WordCheck secded_encode(std::uint64_t word) {
  const std::uint8_t c = hamming_bits(word);
  const unsigned overall = parity64(word) ^ (std::popcount(c) & 1u);
  return WordCheck{static_cast<std::uint8_t>(c | (overall << 7))};
}

DecodeOutcome secded_decode(std::uint64_t word, WordCheck check) {
  const std::uint8_t syndrome = (hamming_bits(word) ^ check.check) & 0x7F;
  // Parity over all 72 received bits; zero for a valid codeword.
  const unsigned p = parity64(word) ^ (std::popcount(check.check) & 1u);

  DecodeOutcome out;
  out.word = word;
  if (syndrome == 0 && p == 0) return out;
  if (syndrome == 0) {
    out.kind = DecodeOutcome::Kind::Corrected;
    out.position = 0;
    return out;
  }
  if (p == 0 || syndrome >= kCodewordBits) {
    out.kind = DecodeOutcome::Kind::DetectedUncorrectable;
    return out;
  }
  out.kind = DecodeOutcome::Kind::Corrected;
  out.position = syndrome;
  if (const int bit = kLayout.data_at[syndrome]; bit >= 0) out.word ^= std::uint64_t{1} << bit;
  return out;
}

BlockEcc block_ecc(const Block& block) {
  BlockEcc e;
  for (std::size_t i = 0; i < kWordsPerBlock; ++i) e.checks[i] = secded_encode(load_word(block, i));
  return e;
}

std::optional<Block> block_correct(const Block& block, const BlockEcc& ecc) {
  Block out = block;
  for (std::size_t i = 0; i < kWordsPerBlock; ++i) {
    const DecodeOutcome d = secded_decode(load_word(block, i), ecc.checks[i]);
    if (d.kind == DecodeOutcome::Kind::DetectedUncorrectable) return std::nullopt;
    store_word(out, i, d.word);
  }
  return out;
}

std::uint64_t load_word(const Block& block, std::size_t index) {
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < 8; ++k) v |= std::uint64_t{block[index * 8 + k]} << (8 * k);
  return v;
}

void store_word(Block& block, std::size_t index, std::uint64_t value) {
  for (std::size_t k = 0; k < 8; ++k) block[index * 8 + k] = static_cast<std::uint8_t>(value >> (8 * k));
}

unsigned data_bit_position(unsigned bit) { return kLayout.position_of.at(bit); }

void flip_codeword_bit(std::uint64_t& word, WordCheck& check, unsigned position) {
  if (position == 0) {
    check.check ^= 0x80;
  } else if (is_power_of_two(position)) {
    check.check ^= static_cast<std::uint8_t>(1u << std::countr_zero(position));
  } else {
    word ^= std::uint64_t{1} << kLayout.data_at.at(position);
  }
}

}  // namespace tccsim

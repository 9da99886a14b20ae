#pragma once

// Error detection and correction codes used by the L2 cache.
//
// EDC: 8-bit interleaved parity over a 64-byte block. Lane j of the signature
// is the XOR of bit j of every byte in the block.
//
// ECC: extended Hamming (72,64) SEC-DED per 64-bit word. Codeword positions
// 1, 2, 4, 8, 16, 32, 64 carry check bits, position 0 carries the overall
// parity and the 64 data bits fill the remaining positions 3, 5, 6, 7, 9, ...
// in ascending order (data bit 0 = LSB of the word). The packed check byte
// holds check bit 2^i in bit i (i = 0..6) and the overall parity in bit 7.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

namespace tccsim {

inline constexpr std::size_t kBlockBytes = 64;
inline constexpr std::size_t kWordsPerBlock = 8;
inline constexpr std::size_t kCodewordBits = 72;

using Block = std::array<std::uint8_t, kBlockBytes>;

/// Byte-interleaved parity of a block, stored alongside every L2 line and
/// reused as the silent-write signature.
struct ParitySignature {
  std::uint8_t bits = 0;

  friend constexpr bool operator==(ParitySignature, ParitySignature) = default;
};

/// Packed SEC-DED check byte for one 64-bit word.
struct WordCheck {
  std::uint8_t check = 0;

  friend constexpr bool operator==(WordCheck, WordCheck) = default;
};

/// Check material for one block: index i protects little-endian word i.
struct BlockEcc {
  std::array<WordCheck, kWordsPerBlock> checks{};

  friend bool operator==(const BlockEcc&, const BlockEcc&) = default;

  /// 8-byte on-memory representation (check i at byte i).
  std::array<std::uint8_t, kWordsPerBlock> bytes() const;
  static BlockEcc from_bytes(const std::uint8_t* src);
};

struct DecodeOutcome {
  enum class Kind { NoError, Corrected, DetectedUncorrectable };

  Kind kind = Kind::NoError;
  /// Codeword position that was inverted (0..71); meaningful for Corrected.
  unsigned position = 0;
  /// Repaired data word for NoError/Corrected; the received word otherwise.
  std::uint64_t word = 0;
};

ParitySignature parity_signature(const Block& block);

WordCheck secded_encode(std::uint64_t word);
DecodeOutcome secded_decode(std::uint64_t word, WordCheck check);

BlockEcc block_ecc(const Block& block);

/// Per-word correction. Returns nullopt when any word is detected-uncorrectable.
std::optional<Block> block_correct(const Block& block, const BlockEcc& ecc);

// Word access in little-endian order, word 0 at the lowest address.
std::uint64_t load_word(const Block& block, std::size_t index);
void store_word(Block& block, std::size_t index, std::uint64_t value);

/// Codeword position (1..71) holding data bit `bit` (0..63).
unsigned data_bit_position(unsigned bit);

/// Flip codeword position `position` (0..71) of the pair (word, check).
void flip_codeword_bit(std::uint64_t& word, WordCheck& check, unsigned position);

}  // namespace tccsim

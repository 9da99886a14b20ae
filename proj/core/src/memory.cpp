#include "tccsim/memory.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "tccsim/errors.hpp"

namespace tccsim {
namespace {

void require_aligned(std::uint64_t addr) {
  if (addr % kBlockBytes != 0) {
    char buf[16];
    const auto end = std::to_chars(buf, buf + sizeof buf, addr, 16).ptr;
    throw UsageError("memory address 0x" + std::string(buf, end) + " is not block aligned");
  }
}

bool is_zero(const Block& b) {
  return std::all_of(b.begin(), b.end(), [](std::uint8_t v) { return v == 0; });
}

}  // namespace

Block MemoryImage::read_block(std::uint64_t addr) const {
  require_aligned(addr);
  auto it = blocks_.find(addr);
  return it == blocks_.end() ? Block{} : it->second;
}

void MemoryImage::write_block(std::uint64_t addr, const Block& block) {
  require_aligned(addr);
  blocks_[addr] = block;
}

MemoryImage MemoryImage::region_below(std::uint64_t limit) const {
  MemoryImage out;
  for (auto it = blocks_.begin(); it != blocks_.end() && it->first < limit; ++it)
    if (!is_zero(it->second)) out.blocks_.emplace_hint(out.blocks_.end(), *it);
  return out;
}

void MemoryImage::dump(std::ostream& out) const {
  for (const auto& [addr, block] : blocks_) {
    char raw[8];
    for (int k = 0; k < 8; ++k) raw[k] = static_cast<char>(addr >> (8 * k));
    out.write(raw, sizeof raw);
    out.write(reinterpret_cast<const char*>(block.data()), kBlockBytes);
  }
}

MemoryImage MemoryImage::load(std::istream& in) {
  MemoryImage img;
  char raw[8];
  while (in.read(raw, sizeof raw)) {
    std::uint64_t addr = 0;
    for (int k = 0; k < 8; ++k) addr |= std::uint64_t{static_cast<std::uint8_t>(raw[k])} << (8 * k);
    Block b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), kBlockBytes))
      throw UsageError("truncated memory image");
    img.write_block(addr, b);
  }
  return img;
}

void EccGeometry::validate() const {
  if (ecc_region_base % kBlockBytes != 0) throw ConfigError("ecc_region_base must be 64-byte aligned");
  if (l2_sets == 0 || l2_sets % kEccGroupSize != 0)
    throw ConfigError("L2 set count must be a non-zero multiple of 8 for ECC grouping");
  if (l2_ways == 0) throw ConfigError("L2 must have at least one way");
}

EccSlot ecc_address(unsigned set, unsigned way, const EccGeometry& geom) {
  if (set >= geom.l2_sets || way >= geom.l2_ways)
    throw UsageError("ecc_address: frame (" + std::to_string(set) + "," + std::to_string(way) +
                     ") out of range");
  const std::uint64_t groups_per_way = geom.l2_sets / kEccGroupSize;
  const std::uint64_t group = std::uint64_t{way} * groups_per_way + set / kEccGroupSize;
  return EccSlot{geom.ecc_region_base + kBlockBytes * group, 8 * (set % kEccGroupSize)};
}

}  // namespace tccsim

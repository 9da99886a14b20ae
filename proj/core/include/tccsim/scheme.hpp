#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace tccsim {

/// L2 protection scheme.
///  - Conventional: block-ECC kept in a dedicated array next to the data.
///  - Mmecc: block-ECC mapped to memory and cached in L2 as ordinary data.
///  - Tcc: Mmecc plus silent-write detection that skips the data write,
///    ECC computation and ECC write for silent write-backs.
enum class Scheme { Conventional, Mmecc, Tcc };

inline constexpr std::array<Scheme, 3> kAllSchemes{Scheme::Conventional, Scheme::Mmecc, Scheme::Tcc};

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

}  // namespace tccsim

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lyz {

/// 17 significant digits, enough to round-trip an IEEE double.
std::string format_double(double value);

/// 64-bit FNV-1a, used for report fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);

std::string hex64(std::uint64_t value);

}  // namespace lyz

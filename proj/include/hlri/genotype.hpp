#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "hlri/region.hpp"
#include "hlri/repair_types.hpp"

namespace hlri {

using BitString = std::vector<std::uint8_t>;  // one 0/1 value per bit

inline constexpr int kMinBitsPerVar = 3;
inline constexpr int kMaxBitsPerVar = 16;

/// Mixed real/binary genotype: the distance gene beta and the binary code of
/// the direction box coordinates (bits_per_var bits per variable, MSB first).
struct MixedGenotype {
  double beta = 0.0;
  BitString bits;
  std::vector<double> direction;  // decoded unit vector
  double fitness = 0.0;
  std::optional<RepairOutcome> repair;

  bool repaired() const noexcept { return repair.has_value(); }
};

/// Integer code of variable `index`.
std::uint32_t variable_code(std::span<const std::uint8_t> bits, std::size_t index, int bits_per_var);

/// Box coordinates before normalization:
/// raw_i = a_min_i + code_i * (a_max_i - a_min_i) / (2^bits_per_var - 1).
std::vector<double> decode_raw(std::span<const std::uint8_t> bits, const SearchRegion& region, int bits_per_var);

/// Unit direction of the decoded box point. Throws DecodeError when the raw
/// vector has norm below 1e-12.
std::vector<double> decode(std::span<const std::uint8_t> bits, const SearchRegion& region, int bits_per_var);

struct EncodeResult {
  BitString bits;
  std::size_t clamped = 0;  // components that fell outside the box
};

/// Nearest-code quantization (ties round up); out-of-box components clamp to
/// the nearest bound.
EncodeResult encode(std::span<const double> a, const SearchRegion& region, int bits_per_var);

/// Number of variables whose bit blocks coincide.
std::size_t equal_variables(const MixedGenotype& lhs, const MixedGenotype& rhs, int bits_per_var);

/// Fitness-ordered list with the elite at the front.
struct Population {
  std::vector<MixedGenotype> members;
  std::size_t elite_size = 0;

  std::size_t size() const noexcept { return members.size(); }
  std::span<const MixedGenotype> elite() const {
    return std::span<const MixedGenotype>(members).first(std::min(elite_size, members.size()));
  }
  std::span<const MixedGenotype> non_elite() const {
    return std::span<const MixedGenotype>(members).subspan(std::min(elite_size, members.size()));
  }
  const MixedGenotype& best() const { return members.front(); }
};

/// Stable sort by fitness, descending.
void rank(std::vector<MixedGenotype>& members);
void rank(Population& population);

std::string bits_to_string(std::span<const std::uint8_t> bits);
nlohmann::json to_json(const MixedGenotype& genotype);

}  // namespace hlri

#include "hlri/genotype.hpp"

#include <algorithm>
#include <cmath>

#include "hlri/errors.hpp"

namespace hlri {

namespace {

void check_layout(std::size_t n_bits, const SearchRegion& region, int bits_per_var) {
  if (bits_per_var < kMinBitsPerVar || bits_per_var > kMaxBitsPerVar) {
    throw ContractError("bits_per_var must be in [3, 16]");
  }
  if (n_bits != region.dimension() * static_cast<std::size_t>(bits_per_var)) {
    throw ContractError("bit string length does not match region dimension * bits_per_var");
  }
}

double levels(int bits_per_var) { return static_cast<double>((1u << bits_per_var) - 1u); }

}  // namespace

std::uint32_t variable_code(std::span<const std::uint8_t> bits, std::size_t index, int bits_per_var) {
  std::uint32_t code = 0;
  const std::size_t start = index * static_cast<std::size_t>(bits_per_var);
  for (int b = 0; b < bits_per_var; ++b) code = (code << 1) | (bits[start + b] & 1u);
  return code;
}

std::vector<double> decode_raw(std::span<const std::uint8_t> bits, const SearchRegion& region, int bits_per_var) {
  check_layout(bits.size(), region, bits_per_var);
  std::vector<double> raw(region.dimension());
  const double top = levels(bits_per_var);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = region.a_min[i] + variable_code(bits, i, bits_per_var) * (region.a_max[i] - region.a_min[i]) / top;
  }
  return raw;
}

std::vector<double> decode(std::span<const std::uint8_t> bits, const SearchRegion& region, int bits_per_var) {
  std::vector<double> a = decode_raw(bits, region, bits_per_var);
  double norm = 0.0;
  for (double v : a) norm += v * v;
  norm = std::sqrt(norm);
  if (norm < 1e-12) throw DecodeError("decoded direction has zero length");
  for (double& v : a) v /= norm;
  return a;
}

EncodeResult encode(std::span<const double> a, const SearchRegion& region, int bits_per_var) {
  if (a.size() != region.dimension()) throw ContractError("encode: dimension mismatch");
  check_layout(region.dimension() * static_cast<std::size_t>(bits_per_var), region, bits_per_var);
  EncodeResult out;
  out.bits.assign(a.size() * static_cast<std::size_t>(bits_per_var), 0);
  const double top = levels(bits_per_var);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double lo = region.a_min[i];
    const double hi = region.a_max[i];
    double v = a[i];
    if (v < lo || v > hi) {
      ++out.clamped;
      v = std::clamp(v, lo, hi);
    }
    const double scaled = (hi > lo) ? (v - lo) / (hi - lo) * top : 0.0;
    auto code = static_cast<std::uint32_t>(std::floor(scaled + 0.5));
    code = std::min<std::uint32_t>(code, (1u << bits_per_var) - 1u);
    const std::size_t start = i * static_cast<std::size_t>(bits_per_var);
    for (int b = bits_per_var - 1; b >= 0; --b) {
      out.bits[start + b] = static_cast<std::uint8_t>(code & 1u);
      code >>= 1;
    }
  }
  return out;
}

std::size_t equal_variables(const MixedGenotype& lhs, const MixedGenotype& rhs, int bits_per_var) {
  if (lhs.bits.size() != rhs.bits.size()) throw ContractError("equal_variables: bit lengths differ");
  const auto width = static_cast<std::size_t>(bits_per_var);
  std::size_t equal = 0;
  for (std::size_t start = 0; start < lhs.bits.size(); start += width) {
    if (std::equal(lhs.bits.begin() + start, lhs.bits.begin() + start + width, rhs.bits.begin() + start)) ++equal;
  }
  return equal;
}

void rank(std::vector<MixedGenotype>& members) {
  std::stable_sort(members.begin(), members.end(),
                   [](const MixedGenotype& a, const MixedGenotype& b) { return a.fitness > b.fitness; });
}

void rank(Population& population) { rank(population.members); }

std::string bits_to_string(std::span<const std::uint8_t> bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

nlohmann::json to_json(const MixedGenotype& genotype) {
  nlohmann::json j;
  j["beta"] = genotype.beta;
  j["bits"] = bits_to_string(genotype.bits);
  j["direction"] = genotype.direction;
  j["fitness"] = genotype.fitness;
  if (genotype.repair) {
    j["status"] = to_string(genotype.repair->status);
    j["g"] = genotype.repair->final_g;
  }
  return j;
}

}  // namespace hlri

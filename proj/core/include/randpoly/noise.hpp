#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace randpoly {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stateless bijection from (counter, key) to 128 random bits. Every
/// coefficient draw is addressed by (seed, trial, index), so any subset of
/// trials can be regenerated independently and in any order.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);

  /// Two 64-bit words for the stream position (seed, trial, index).
  static std::array<std::uint64_t, 2> bits(std::uint64_t seed, std::uint64_t trial,
                                           std::uint64_t index);
};

/// Uniform double in the open interval (0, 1) from 64 random bits. Uses 52
/// bits so that the half-step offset stays exactly representable.
inline double to_unit_open(std::uint64_t x) {
  return (static_cast<double>(x >> 12) + 0.5) * 0x1.0p-52;
}

enum class NoiseFamily { gaussian, rademacher, uniform, two_point };

std::string_view to_string(NoiseFamily f);
NoiseFamily noise_family_from_string(std::string_view s);

/// Distribution of the raw coefficient variable eta_j = mu + xi_j.
///
/// Every family is standardized so that xi_j has mean 0 and variance 1:
///   gaussian    N(0, 1)
///   rademacher  +-1 with probability 1/2
///   uniform     uniform on [-sqrt 3, sqrt 3]
///   two_point   2 with probability 1/5, -1/2 with probability 4/5
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::gaussian;
  double mu = 0.0;

  /// Normalized innovation xi for the stream position (seed, trial, index).
  double innovation(std::uint64_t seed, std::uint64_t trial, std::uint64_t index) const;

  /// Raw variable eta = mu + xi.
  double raw(std::uint64_t seed, std::uint64_t trial, std::uint64_t index) const {
    return mu + innovation(seed, trial, index);
  }

  /// Exact E|xi|^3 for the family; finite for all four, so the
  /// (2 + eps0) moment bound holds with eps0 = 1.
  double third_absolute_moment() const;

  /// Whether the innovation has an atom (Rademacher and two-point do).
  bool discrete() const;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

}  // namespace randpoly

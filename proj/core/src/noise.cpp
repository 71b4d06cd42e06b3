#include "randpoly/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace randpoly {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline Philox4x32::Counter round(const Philox4x32::Counter& c, const Philox4x32::Key& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

constexpr double kSqrt3 = 1.7320508075688772;

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    ctr = round(ctr, key);
  }
  return ctr;
}

std::array<std::uint64_t, 2> Philox4x32::bits(std::uint64_t seed, std::uint64_t trial,
                                               std::uint64_t index) {
  const Counter ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  const Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const Counter out = generate(ctr, key);
  return {(static_cast<std::uint64_t>(out[0]) << 32) | out[1],
          (static_cast<std::uint64_t>(out[2]) << 32) | out[3]};
}

std::string_view to_string(NoiseFamily f) {
  switch (f) {
    case NoiseFamily::gaussian: return "gaussian";
    case NoiseFamily::rademacher: return "rademacher";
    case NoiseFamily::uniform: return "uniform";
    case NoiseFamily::two_point: return "two-point";
  }
  return "unknown";
}

NoiseFamily noise_family_from_string(std::string_view s) {
  if (s == "gaussian") return NoiseFamily::gaussian;
  if (s == "rademacher") return NoiseFamily::rademacher;
  if (s == "uniform") return NoiseFamily::uniform;
  if (s == "two-point" || s == "two_point") return NoiseFamily::two_point;
  throw std::invalid_argument("unknown noise family '" + std::string(s) +
                              "' (expected gaussian, rademacher, uniform, two-point)");
}

double NoiseSpec::innovation(std::uint64_t seed, std::uint64_t trial, std::uint64_t index) const {
  const auto w = Philox4x32::bits(seed, trial, index);
  switch (family) {
    case NoiseFamily::gaussian: {
      // Box-Muller, cosine branch only: one draw per stream position.
      const double u1 = to_unit_open(w[0]);
      const double u2 = to_unit_open(w[1]);
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    case NoiseFamily::rademacher:
      return (w[0] >> 63) ? 1.0 : -1.0;
    case NoiseFamily::uniform:
      return kSqrt3 * (2.0 * to_unit_open(w[0]) - 1.0);
    case NoiseFamily::two_point:
      return to_unit_open(w[0]) < 0.2 ? 2.0 : -0.5;
  }
  return 0.0;
}

double NoiseSpec::third_absolute_moment() const {
  switch (family) {
    case NoiseFamily::gaussian: return 2.0 * std::sqrt(2.0 / std::numbers::pi);
    case NoiseFamily::rademacher: return 1.0;
    case NoiseFamily::uniform: return 3.0 * kSqrt3 / 4.0;
    case NoiseFamily::two_point: return 0.2 * 8.0 + 0.8 * 0.125;
  }
  return 0.0;
}

bool NoiseSpec::discrete() const {
  return family == NoiseFamily::rademacher || family == NoiseFamily::two_point;
}

}  // namespace randpoly

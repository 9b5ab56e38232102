#pragma once

#include <cmath>
#include <cstdint>

namespace rsa {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

// Counter-based pseudo random stream. The state is derived by hashing
// (master_seed, stream_a, stream_b), so any (seed, id) pair yields the same
// sequence no matter which thread draws it or in what order streams are
// created. Generation is splitmix64.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_a = 0,
                     std::uint64_t stream_b = 0) {
    std::uint64_t s = detail::mix64(master_seed);
    s = detail::mix64(s ^ (stream_a * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull));
    s = detail::mix64(s ^ (stream_b * 0xBF58476D1CE4E5B9ull + 0x8CB92BA72F3D8DD7ull));
    state_ = s;
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return detail::mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased integer on [0, n); n must be > 0.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  // Standard normal via Box-Muller; pairs are cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream-id tags for the second index space. draw_ensemble uses raw
// (group, member) pairs; everything else uses a high tag so streams never
// collide for any realistic L.
namespace stream_tag {
inline constexpr std::uint64_t kRsrMask = 0xA0000001ull;
inline constexpr std::uint64_t kRprProjection = 0xA0000002ull;
inline constexpr std::uint64_t kCoefficients = 0xB0000001ull;
inline constexpr std::uint64_t kCovariance = 0xB0000002ull;
inline constexpr std::uint64_t kTrainDesign = 0xB0000003ull;
inline constexpr std::uint64_t kTestDesign = 0xB0000004ull;
inline constexpr std::uint64_t kNoise = 0xB0000005ull;
inline constexpr std::uint64_t kFitSeed = 0xB0000006ull;
inline constexpr std::uint64_t kKfold = 0xC0000001ull;
}  // namespace stream_tag

}  // namespace rsa

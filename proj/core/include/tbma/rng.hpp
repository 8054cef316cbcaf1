#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>

namespace tbma {

// One splitmix64 step on a value (stateless form).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// xoshiro256++ generator. Small state, platform-independent output, fast
// enough for Monte Carlo inner loops. Distribution samplers are implemented
// here (not via <random>) so that sequences are identical on every toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) {
      s = splitmix64(s);
      w = s;
    }
  }

  // Independent stream addressed by up to three indices. Used for per-trial
  // and per-sample derivation so results do not depend on worker count.
  static Rng stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                    std::uint64_t c = 0) {
    std::uint64_t s = seed;
    s = splitmix64(s ^ (0x9E3779B97F4A7C15ULL * (a + 1)));
    s = splitmix64(s ^ (0xD1B54A32D192ED03ULL * (b + 1)));
    s = splitmix64(s ^ (0x8CB92BA72F3D8DD7ULL * (c + 1)));
    return Rng(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Pair of independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  // Complex Gaussian with real mean and the given TOTAL variance, split
  // equally between real and imaginary parts.
  std::complex<double> complex_gaussian(double mean, double total_var) {
    const auto [z1, z2] = normal_pair();
    const double s = std::sqrt(0.5 * total_var);
    return {mean + s * z1, s * z2};
  }

  // Poisson by CDF inversion; intended for small means (simulation uses
  // means well below 30).
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double u = uniform();
    double p = std::exp(-mean);
    double cum = p;
    int k = 0;
    const int cap = static_cast<int>(mean + 20.0 * std::sqrt(mean) + 50.0);
    while (u > cum && k < cap) {
      ++k;
      p *= mean / k;
      cum += p;
    }
    return k;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

// Fixed stream tags so different purposes never share a sequence.
namespace stream_tag {
inline constexpr std::uint64_t kTrial = 0x7472AA01;
inline constexpr std::uint64_t kQuantize = 0x7472AA02;
inline constexpr std::uint64_t kDataset = 0x7472AA03;
inline constexpr std::uint64_t kInit = 0x7472AA04;
inline constexpr std::uint64_t kEval = 0x7472AA05;
}  // namespace stream_tag

}  // namespace tbma

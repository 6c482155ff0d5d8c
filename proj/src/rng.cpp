#include "mrbcra/rng.hpp"

#include <cmath>

namespace mrbcra {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer: bijective 64-bit mixer with good avalanche.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t make_key(std::uint64_t seed, std::string_view purpose, std::uint64_t rb,
                       std::uint64_t slot) {
  std::uint64_t k = mix64(seed + kGolden);
  k = mix64(k ^ fnv1a(purpose));
  k = mix64(k ^ (rb + kGolden));
  k = mix64(k ^ (slot + kGolden));
  return k;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::string_view purpose, std::uint64_t rb,
                     std::uint64_t slot)
    : key_(make_key(seed, purpose, rb, slot)) {}

std::uint64_t RngStream::next_u64() {
  counter_ += kGolden;
  return mix64(key_ + counter_);
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
  // Rejection to remove modulo bias.
  const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % n;
}

std::int64_t RngStream::poisson(double mean) {
  if (mean <= 0.0) return 0;
  // Count exponential inter-arrivals fitting in [0, mean); no underflow for
  // large means, unlike the product form.
  double t = 0.0;
  std::int64_t k = -1;
  do {
    t += -std::log(1.0 - uniform01());
    ++k;
  } while (t <= mean);
  return k;
}

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_normal_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_normal_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

std::complex<double> RngStream::cgauss(double var) {
  const double s = std::sqrt(var / 2.0);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

std::complex<double> RngStream::unit_phase() {
  const double a = 2.0 * M_PI * uniform01();
  return {std::cos(a), std::sin(a)};
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose, std::uint64_t a,
                          std::uint64_t b) {
  return make_key(seed, purpose, a, b);
}

}  // namespace mrbcra

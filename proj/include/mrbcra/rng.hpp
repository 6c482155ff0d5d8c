// Deterministic counter-based random streams.
//
// Every consumer derives its own stream from (seed, purpose, rb, slot), so
// per-RB work can run in parallel or sequentially and produce identical
// draws. A stream is a splitmix-style counter generator: the key fixes the
// orbit position, the counter advances it.
#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

namespace mrbcra {

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view purpose, std::uint64_t rb, std::uint64_t slot);

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform01();

  // Uniform integer in [0, n), rejection-sampled (n >= 1).
  std::uint64_t uniform_below(std::uint64_t n);

  // Poisson with the given mean, via exponential inter-arrival summation.
  // Exact for any mean, O(mean) draws per sample.
  std::int64_t poisson(double mean);

  // Standard normal, Box-Muller (pairs cached).
  double normal();

  // Circularly symmetric complex Gaussian with total variance `var`.
  std::complex<double> cgauss(double var);

  // Unit-magnitude complex number with uniform phase.
  std::complex<double> unit_phase();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool have_spare_ = false;
};

// Deterministic function of its inputs; distinct ids give independent streams.
inline RngStream derive_stream(std::uint64_t seed, std::string_view purpose, std::uint64_t rb,
                               std::uint64_t slot) {
  return RngStream(seed, purpose, rb, slot);
}

// Collapses a stream id to a single sub-seed, for components that take a
// plain seed (e.g. per-trial codebook generation).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose, std::uint64_t a,
                          std::uint64_t b);

}  // namespace mrbcra

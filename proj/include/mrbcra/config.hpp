// Protocol and PHY parameters shared by every module.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "mrbcra/errors.hpp"

namespace mrbcra {

// All quantities are per resource block (RB) unless noted. An RB spans L
// subcarriers and carries N spreading codes; the system has M RBs, so the
// band holds J = L*M subcarriers in total.
struct SystemConfig {
  int L = 32;             // spreading-code length (subcarriers per RB)
  int N = 320;            // spreading codes per RB, N >= L
  int M = 8;              // resource blocks
  int T = 640;            // symbols per packet
  int D = 25;             // assumed recovery threshold, 1 <= D < L
  int Kbar = 64;          // rate-control threshold, Kbar > D
  double lambda = 15.0;   // new-arrival rate per RB per slot
  double snr_db = 20.0;   // P/N0 in dB (P normalized to 1)
  std::int64_t slots = 10000;  // simulation horizon
  std::uint64_t seed = 1;      // master RNG seed

  // Virtual bandwidth expansion factor N/L.
  double eta() const { return static_cast<double>(N) / static_cast<double>(L); }
  // Total subcarriers L*M.
  std::int64_t J() const { return static_cast<std::int64_t>(L) * M; }
  // Noise variance N0 with transmit power normalized to 1.
  double noise_var() const { return std::pow(10.0, -snr_db / 10.0); }

  bool operator==(const SystemConfig&) const = default;
};

// Returns cfg unchanged if every invariant holds, throws InvalidConfig naming
// the violated constraint otherwise.
SystemConfig validate_config(const SystemConfig& cfg);

// Flat key-value text serialization. Keys are exactly the field names;
// unknown keys are errors. Doubles are written with enough digits to
// round-trip bit-exactly.
std::string config_to_text(const SystemConfig& cfg);
SystemConfig config_from_text(const std::string& text);
SystemConfig load_config(const std::string& path);
void save_config(const SystemConfig& cfg, const std::string& path);

}  // namespace mrbcra

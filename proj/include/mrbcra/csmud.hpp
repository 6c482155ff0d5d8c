// Physical-layer synthesis of one RB's received matrix and compressed-sensing
// multiuser detection with simultaneous orthogonal matching pursuit.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mrbcra/config.hpp"
#include "mrbcra/errors.hpp"
#include "mrbcra/rng.hpp"

namespace mrbcra {

// L x N matrix of spreading codes; entries iid CSCG with variance 1/L.
struct Codebook {
  Eigen::MatrixXcd entries;
  int L = 0;
  int N = 0;
  std::uint64_t seed = 0;
};

// One transmitting device: which spreading code it chose.
struct ActiveDevice {
  std::uint64_t device_id = 0;
  int sc = 0;
};

// Received matrix for one RB over one packet, with ground truth kept for
// scoring.
struct RbObservation {
  Eigen::MatrixXcd Y;       // L x T
  Eigen::MatrixXcd S_true;  // N x T composite symbols
  Eigen::MatrixXcd noise;   // L x T realization, so Y = C*S_true + noise exactly
  std::vector<ActiveDevice> truth;
  double noise_var = 0.0;
};

struct RecoveryResult {
  std::vector<int> support;            // selected SC indices, in pick order
  Eigen::MatrixXcd S_hat;              // N x T, nonzero only on support rows
  int iterations = 0;
  double residual_energy = 0.0;        // squared Frobenius norm of the residual
  std::vector<double> residual_trace;  // energy after each iteration
  bool ill_conditioned = false;        // stopped early on a near-dependent pick
};

struct RecoveryScore {
  int unsuccessful = 0;
  std::vector<std::uint64_t> successful_device_ids;
};

struct CurvePoint {
  int K = 0;
  double mean_unsuccessful = 0.0;
  double stderr_mean = 0.0;
  int trials = 0;
};

Codebook generate_codebook(int L, int N, std::uint64_t seed);

// Builds Y = C*S + noise per the signal model: each device contributes a
// unit-magnitude symbol with uniform random phase per symbol (power control
// equalizes |h x| to 1), noise iid CSCG with variance cfg.noise_var().
RbObservation synthesize_rb(const SystemConfig& cfg, const Codebook& codebook,
                            const std::vector<ActiveDevice>& active, RngStream& rng);

// Greedy MMV recovery: per iteration select the column maximizing the summed
// residual correlation sum_t |c_n^H r_t|, append it to an updated QR basis,
// and deflate the residual. Stops at max_sparsity columns or when the
// residual energy drops to stop_factor * L * T * noise_var (with a tiny
// relative floor so noiseless problems terminate).
RecoveryResult somp_recover(const Eigen::MatrixXcd& Y, const Codebook& codebook, int max_sparsity,
                            double stop_factor, double noise_var);

// A device succeeds iff it is the unique chooser of its SC and that SC is in
// the recovered support.
RecoveryScore evaluate_recovery(const RbObservation& truth, const RecoveryResult& result);

// Mean unsuccessful-device count versus K over independent (codebook,
// assignment, noise) realizations, with max_sparsity = L-1. Trials run in
// parallel; results are deterministic in `seed`.
std::vector<CurvePoint> empirical_unsuccessful_curve(int L, int N, int T, double snr_db,
                                                     const std::vector<int>& K_range, int trials,
                                                     std::uint64_t seed);

// Largest K whose measured mean stays within slack*K of the collision-only
// value K - K(1-1/N)^{K-1}; the operational recovery threshold D.
int estimate_D(const std::vector<CurvePoint>& curve, int N, double slack);

// CSV with header `K,mean_unsuccessful,stderr,trials`.
std::string curve_to_csv(const std::vector<CurvePoint>& curve);

}  // namespace mrbcra

#include "mrbcra/csmud.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

namespace mrbcra {

Codebook generate_codebook(int L, int N, std::uint64_t seed) {
  if (L < 1 || N < L) throw DomainError("generate_codebook: need 1 <= L <= N");
  Codebook cb;
  cb.L = L;
  cb.N = N;
  cb.seed = seed;
  cb.entries.resize(L, N);
  RngStream rng(seed, "codebook", 0, 0);
  const double var = 1.0 / static_cast<double>(L);
  for (int n = 0; n < N; ++n) {
    for (int l = 0; l < L; ++l) {
      cb.entries(l, n) = rng.cgauss(var);
    }
  }
  return cb;
}

RbObservation synthesize_rb(const SystemConfig& cfg, const Codebook& codebook,
                            const std::vector<ActiveDevice>& active, RngStream& rng) {
  if (codebook.L != cfg.L || codebook.N != cfg.N)
    throw DomainError("synthesize_rb: codebook dimensions do not match config");
  RbObservation obs;
  const int T = cfg.T;
  obs.noise_var = cfg.noise_var();
  obs.truth = active;
  obs.S_true = Eigen::MatrixXcd::Zero(cfg.N, T);
  for (const auto& dev : active) {
    if (dev.sc < 0 || dev.sc >= cfg.N) throw DomainError("synthesize_rb: SC index out of range");
    for (int t = 0; t < T; ++t) {
      obs.S_true(dev.sc, t) += rng.unit_phase();
    }
  }
  obs.noise.resize(cfg.L, T);
  for (int t = 0; t < T; ++t) {
    for (int l = 0; l < cfg.L; ++l) {
      obs.noise(l, t) = rng.cgauss(obs.noise_var);
    }
  }
  obs.Y = codebook.entries * obs.S_true + obs.noise;
  return obs;
}

RecoveryResult somp_recover(const Eigen::MatrixXcd& Y, const Codebook& codebook, int max_sparsity,
                            double stop_factor, double noise_var) {
  const int L = codebook.L;
  const int N = codebook.N;
  const auto T = static_cast<int>(Y.cols());
  if (Y.rows() != L) throw DomainError("somp_recover: Y row count does not match codebook");
  if (max_sparsity < 1 || max_sparsity > L - 1)
    throw DomainError("somp_recover: max_sparsity must be in [1, L-1]");
  if (noise_var < 0.0) throw DomainError("somp_recover: noise_var < 0");

  RecoveryResult res;
  res.S_hat = Eigen::MatrixXcd::Zero(N, T);

  const Eigen::MatrixXcd& C = codebook.entries;
  Eigen::MatrixXcd R = Y;                 // residual
  Eigen::MatrixXcd Phi = C.adjoint() * Y; // correlations C^H R, updated in place
  double energy = R.squaredNorm();
  const double init_energy = energy;
  // Residual floor: the noise criterion, with a relative epsilon so exact
  // (noise-free) reconstructions terminate.
  const double threshold =
      std::max(stop_factor * L * T * noise_var, 1e-20 * init_energy);
  res.residual_energy = energy;
  if (energy <= threshold) return res;

  Eigen::MatrixXcd Q(L, max_sparsity);       // orthonormal basis of picked columns
  Eigen::MatrixXcd Rfac = Eigen::MatrixXcd::Zero(max_sparsity, max_sparsity);
  Eigen::MatrixXcd W(max_sparsity, T);       // rows are q_j^H Y
  std::vector<char> picked(N, 0);
  double diag_min = std::numeric_limits<double>::infinity();
  double diag_max = 0.0;

  int k = 0;
  while (k < max_sparsity) {
    // Select the column with maximal aggregate correlation magnitude.
    Eigen::VectorXd metric = Phi.cwiseAbs().rowwise().sum();
    for (int n = 0; n < N; ++n) {
      if (picked[n]) metric(n) = -1.0;
    }
    int best = -1;
    metric.maxCoeff(&best);
    if (best < 0 || metric(best) < 0.0) break;

    // Orthogonalize the new column against the current basis (two passes).
    Eigen::VectorXcd v = C.col(best);
    const double cnorm = v.norm();
    Eigen::VectorXcd rcol = Eigen::VectorXcd::Zero(max_sparsity);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < k; ++j) {
        const std::complex<double> c = Q.col(j).dot(v);  // q_j^H v
        rcol(j) += c;
        v -= c * Q.col(j);
      }
    }
    const double vnorm = v.norm();
    const double dmin = std::min(diag_min, vnorm);
    const double dmax = std::max(diag_max, std::max(vnorm, 1e-300));
    // Gram condition estimate via the R-diagonal ratio squared.
    if (vnorm <= 1e-14 * cnorm || (dmax / std::max(dmin, 1e-300)) > 1e6) {
      res.ill_conditioned = true;
      break;
    }
    diag_min = dmin;
    diag_max = dmax;

    picked[best] = 1;
    res.support.push_back(best);
    Q.col(k) = v / vnorm;
    rcol(k) = vnorm;
    Rfac.col(k).head(k + 1) = rcol.head(k + 1);

    // Deflate: w = q^H R, R -= q w, Phi -= (C^H q) w, energy -= |w|^2.
    const Eigen::RowVectorXcd w = Q.col(k).adjoint() * R;
    W.row(k) = w;
    R.noalias() -= Q.col(k) * w;
    Phi.noalias() -= (C.adjoint() * Q.col(k)) * w;
    energy = std::max(0.0, energy - w.squaredNorm());
    ++k;
    res.residual_trace.push_back(energy);
    if (energy <= threshold) break;
  }

  res.iterations = k;
  res.residual_energy = energy;

  if (k > 0) {
    // Back-substitute Rfac * X = W for the least-squares coefficients.
    Eigen::MatrixXcd X = W.topRows(k);
    for (int i = k - 1; i >= 0; --i) {
      for (int j = i + 1; j < k; ++j) {
        X.row(i) -= Rfac(i, j) * X.row(j);
      }
      X.row(i) /= Rfac(i, i);
    }
    for (int i = 0; i < k; ++i) {
      res.S_hat.row(res.support[i]) = X.row(i);
    }
  }
  return res;
}

RecoveryScore evaluate_recovery(const RbObservation& truth, const RecoveryResult& result) {
  RecoveryScore score;
  std::set<int> support(result.support.begin(), result.support.end());
  // Occupancy per SC among the true transmitters.
  std::vector<int> count;
  for (const auto& dev : truth.truth) {
    if (dev.sc >= static_cast<int>(count.size())) count.resize(dev.sc + 1, 0);
    ++count[dev.sc];
  }
  for (const auto& dev : truth.truth) {
    if (count[dev.sc] == 1 && support.count(dev.sc)) {
      score.successful_device_ids.push_back(dev.device_id);
    }
  }
  std::sort(score.successful_device_ids.begin(), score.successful_device_ids.end());
  score.unsuccessful =
      static_cast<int>(truth.truth.size()) - static_cast<int>(score.successful_device_ids.size());
  return score;
}

std::vector<CurvePoint> empirical_unsuccessful_curve(int L, int N, int T, double snr_db,
                                                     const std::vector<int>& K_range, int trials,
                                                     std::uint64_t seed) {
  if (trials < 1) throw DomainError("empirical_unsuccessful_curve: trials < 1");
  if (L < 2) throw DomainError("empirical_unsuccessful_curve: L < 2");
  SystemConfig cfg;
  cfg.L = L;
  cfg.N = N;
  cfg.M = 1;
  cfg.T = T;
  cfg.D = L - 1;
  cfg.Kbar = cfg.D + 1;
  cfg.snr_db = snr_db;
  cfg.seed = seed;
  validate_config(cfg);

  std::vector<CurvePoint> curve(K_range.size());
  // One flat list of (K index, trial) jobs, chunked over threads; every job
  // derives its own streams, so the schedule cannot change the numbers.
  struct Job {
    std::size_t ki;
    int trial;
  };
  std::vector<Job> jobs;
  jobs.reserve(K_range.size() * trials);
  for (std::size_t ki = 0; ki < K_range.size(); ++ki) {
    for (int tr = 0; tr < trials; ++tr) jobs.push_back({ki, tr});
  }
  std::vector<double> results(jobs.size(), 0.0);

  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const int K = K_range[jobs[j].ki];
      const auto trial = static_cast<std::uint64_t>(jobs[j].trial);
      const auto kidx = static_cast<std::uint64_t>(jobs[j].ki);
      const Codebook cb =
          generate_codebook(L, N, derive_seed(seed, "curve-codebook", kidx, trial));
      RngStream assign(seed, "curve-assign", kidx, trial);
      std::vector<ActiveDevice> active(K);
      for (int d = 0; d < K; ++d) {
        active[d] = {static_cast<std::uint64_t>(d),
                     static_cast<int>(assign.uniform_below(static_cast<std::uint64_t>(N)))};
      }
      RngStream phy(seed, "curve-phy", kidx, trial);
      const RbObservation obs = synthesize_rb(cfg, cb, active, phy);
      const RecoveryResult rec = somp_recover(obs.Y, cb, L - 1, 1.2, obs.noise_var);
      results[j] = evaluate_recovery(obs, rec).unsuccessful;
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t nthreads = std::min<std::size_t>(hw, jobs.size());
  std::vector<std::thread> pool;
  const std::size_t chunk = (jobs.size() + nthreads - 1) / nthreads;
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t b = t * chunk;
    const std::size_t e = std::min(jobs.size(), b + chunk);
    if (b < e) pool.emplace_back(worker, b, e);
  }
  for (auto& th : pool) th.join();

  for (std::size_t ki = 0; ki < K_range.size(); ++ki) {
    double sum = 0.0, sum2 = 0.0;
    for (int tr = 0; tr < trials; ++tr) {
      const double u = results[ki * trials + tr];
      sum += u;
      sum2 += u * u;
    }
    const double mean = sum / trials;
    const double var = trials > 1 ? std::max(0.0, (sum2 - trials * mean * mean) / (trials - 1)) : 0.0;
    curve[ki] = {K_range[ki], mean, std::sqrt(var / trials), trials};
  }
  return curve;
}

int estimate_D(const std::vector<CurvePoint>& curve, int N, double slack) {
  if (curve.size() < 3) throw InsufficientData("estimate_D: curve has fewer than 3 points");
  int best = 0;
  for (const auto& pt : curve) {
    const double collision_only = unsuccessful_mean(pt.K, N, pt.K);  // no D cap
    if (pt.mean_unsuccessful <= collision_only + slack * pt.K) {
      best = std::max(best, pt.K);
    }
  }
  return best;
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream out;
  out << "K,mean_unsuccessful,stderr,trials\n";
  char buf[64];
  for (const auto& pt : curve) {
    out << pt.K << ',';
    std::snprintf(buf, sizeof(buf), "%.9g", pt.mean_unsuccessful);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.9g", pt.stderr_mean);
    out << buf << ',' << pt.trials << '\n';
  }
  return out.str();
}

}  // namespace mrbcra

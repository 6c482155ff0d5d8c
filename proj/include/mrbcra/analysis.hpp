// Closed-form steady-state and stability analysis of MRB-CRA with fast
// retrial, plus the multichannel-ALOHA reference formulas.
#pragma once

#include <utility>
#include <vector>

#include "mrbcra/config.hpp"
#include "mrbcra/errors.hpp"

namespace mrbcra {

// Steady-state operating point per RB for a given new-arrival rate lambda.
// lambda1 is the total transmitted-packet rate (new + retried), lambda2 the
// collided-packet rate; they satisfy lambda1 = lambda + lambda2.
struct SteadyState {
  double lambda = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double nu1 = 0.0;        // lambda1 * (1 - 1/N)
  double throughput = 0.0; // successful packets per RB per slot
  double delay = 1.0;      // normalized access delay lambda1/lambda (>= 1)
  // Any larger fixed-point roots found on the scanned interval (diagnostic).
  std::vector<double> extra_roots;
};

// Capacity and stability summary for a (N, D) pair.
struct CapacityReport {
  double B_DN = 0.0;             // stability bound D(1-1/N)^(D-1)
  double lambda_max = 0.0;       // largest lambda admitting a steady state
  double lambda1_star = 0.0;     // maximizer attaining lambda_max
  double lambda_max_upper = 0.0; // upper bound dropping the e^{-lambda1/N} factor
  int N_star = 0;                // minimal N with lambda_max_upper < B_DN (D > 1)
};

// Regularized upper incomplete gamma Gamma(D, x)/(D-1)! for integer D >= 1,
// computed by the exact finite sum e^{-x} sum_{n<D} x^n/n!.
double regularized_upper_gamma(int D, double x);

// Mean number of unsuccessful devices among K transmitting in one RB with N
// spreading codes and recovery threshold D: K - K(1-1/N)^{K-1} for K <= D,
// K otherwise.
double unsuccessful_mean(int K, int N, int D);

// Stability bound B_{D,N} = D(1-1/N)^{D-1}; arrival rates below it keep the
// backlog chain positive recurrent. Requires D <= N.
double stability_bound(int D, int N);

// Collided-packet rate lambda2 when the transmitting count is Poisson with
// mean lambda1.
double collided_rate(double lambda1, int N, int D);

// Largest sustainable lambda and its maximizer lambda1*. The objective is
// scanned on (0, D] with step <= 1e-3*D and refined by golden section;
// unimodality is not assumed.
std::pair<double, double> lambda_max(int N, int D);

// Upper bound on lambda_max obtained by dropping the e^{-lambda1/N} factor.
double lambda_max_upper(int N, int D);

// Smallest N >= D with lambda_max_upper(N, D) < B_{D,N}; such N exists for
// every D > 1.
int min_stable_N(int D);

// Smallest root lambda1 of lambda1 e^{-lambda1/N} Gamma(D,nu1)/(D-1)! = lambda
// on [lambda, lambda1*], with all derived steady-state quantities filled in.
// Throws NoSteadyState when lambda exceeds lambda_max.
SteadyState solve_lambda1(double lambda, int N, int D, double tol = 1e-10);

// Throughput per RB at transmitted rate lambda1.
double throughput_cra(double lambda1, int N, int D);

// Multichannel-ALOHA throughput per RB with L orthogonal channels.
double throughput_aloha(double lambda, int L);

// Throughput ratio of CRA over ALOHA at the fully-loaded operating point:
// e^{1 - 1/eta}, >= 2 iff eta >= 1/(1 - ln 2) ~= 3.2589.
double cra_aloha_advantage(double eta);

// Lyapunov drift bound M(lambda - B_{D,N}); negative iff lambda < B_{D,N}.
double drift_bound(const SystemConfig& cfg);

// Convenience bundle of the capacity quantities for one (N, D) pair.
CapacityReport capacity_report(int N, int D);

}  // namespace mrbcra

#include "mrbcra/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace mrbcra {
namespace {

void check_rate_domain(int N, int D) {
  if (D < 1) throw DomainError("D < 1");
  if (N < 1) throw DomainError("N < 1");
  if (D > N) throw DomainError("D > N");
}

// Golden-section maximization on [a, b] to the given argument tolerance.
double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Grid scan on (0, hi] with ~1000 points, then golden refinement around the
// best cell. Returns (max value, argmax).
std::pair<double, double> scan_max(const std::function<double(double)>& f, double hi) {
  const int kPoints = 1000;
  const double step = hi / kPoints;
  double best_x = step;
  double best_v = f(step);
  for (int i = 2; i <= kPoints; ++i) {
    const double x = i * step;
    const double v = f(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  const double lo = std::max(step * 0.5, best_x - step);
  const double up = std::min(hi, best_x + step);
  const double x_star = golden_max(f, lo, up, 1e-8);
  const double v_star = f(x_star);
  if (v_star >= best_v) return {v_star, x_star};
  return {best_v, best_x};
}

}  // namespace

double regularized_upper_gamma(int D, double x) {
  if (D < 1) throw DomainError("regularized_upper_gamma: D < 1");
  if (x < 0.0) throw DomainError("regularized_upper_gamma: x < 0");
  if (x == 0.0) return 1.0;
  if (x > 500.0) {
    // Log-space per-term evaluation; the direct product would underflow.
    double sum = 0.0;
    for (int n = 0; n < D; ++n) {
      sum += std::exp(n * std::log(x) - std::lgamma(n + 1.0) - x);
    }
    return std::min(sum, 1.0);
  }
  // e^{-x} sum_{n=0}^{D-1} x^n/n! with incremental term recursion.
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < D; ++n) {
    term *= x / n;
    sum += term;
  }
  return std::min(std::exp(-x) * sum, 1.0);
}

double unsuccessful_mean(int K, int N, int D) {
  if (K <= 0) return 0.0;
  if (K > D) return static_cast<double>(K);
  if (K == 1) return 0.0;
  const double p = 1.0 - 1.0 / static_cast<double>(N);
  return K - K * std::pow(p, K - 1);
}

double stability_bound(int D, int N) {
  check_rate_domain(N, D);
  const double p = 1.0 - 1.0 / static_cast<double>(N);
  return D * std::pow(p, D - 1);
}

double collided_rate(double lambda1, int N, int D) {
  check_rate_domain(N, D);
  if (lambda1 < 0.0) throw DomainError("collided_rate: lambda1 < 0");
  if (lambda1 == 0.0) return 0.0;
  const double nu1 = lambda1 * (1.0 - 1.0 / static_cast<double>(N));
  const double q = regularized_upper_gamma(D, nu1);
  const double l2 = lambda1 * (1.0 - std::exp(-lambda1 / N) * q);
  return std::clamp(l2, 0.0, lambda1);
}

std::pair<double, double> lambda_max(int N, int D) {
  check_rate_domain(N, D);
  auto objective = [N, D](double l1) {
    const double nu1 = l1 * (1.0 - 1.0 / static_cast<double>(N));
    return l1 * std::exp(-l1 / N) * regularized_upper_gamma(D, nu1);
  };
  const auto [v, x] = scan_max(objective, static_cast<double>(D));
  return {v, x};
}

double lambda_max_upper(int N, int D) {
  check_rate_domain(N, D);
  auto objective = [N, D](double l1) {
    const double nu1 = l1 * (1.0 - 1.0 / static_cast<double>(N));
    return l1 * regularized_upper_gamma(D, nu1);
  };
  return scan_max(objective, static_cast<double>(D)).first;
}

int min_stable_N(int D) {
  if (D <= 1) throw DomainError("min_stable_N: D <= 1");
  // Search cap from the construction with eps = D - lambda_max_upper at the
  // smallest admissible N; lambda_max_upper only shrinks as N grows.
  const double eps = D - lambda_max_upper(D, D);
  int cap = D + 1;
  if (eps > 0.0) {
    cap = std::max(cap, static_cast<int>(std::ceil(D * (D - 1.0) / eps)) + 2);
  }
  for (int attempt = 0; attempt < 4; ++attempt) {
    for (int n = D; n <= cap; ++n) {
      if (lambda_max_upper(n, D) < stability_bound(D, n)) return n;
    }
    cap *= 2;
  }
  throw DomainError("min_stable_N: no N found below search cap for D = " + std::to_string(D));
}

SteadyState solve_lambda1(double lambda, int N, int D, double tol) {
  check_rate_domain(N, D);
  if (lambda < 0.0) throw DomainError("solve_lambda1: lambda < 0");
  if (!(tol > 0.0)) throw DomainError("solve_lambda1: tol must be positive");

  SteadyState ss;
  ss.lambda = lambda;
  if (lambda == 0.0) {
    // Empty system; delay 1 by convention (the lambda -> 0 limit).
    return ss;
  }

  const auto [lmax, l1_star] = lambda_max(N, D);
  if (lambda > lmax + 1e-9 * std::max(1.0, lmax)) {
    throw NoSteadyState("lambda = " + std::to_string(lambda) + " exceeds lambda_max = " +
                        std::to_string(lmax) + " for N = " + std::to_string(N) +
                        ", D = " + std::to_string(D));
  }

  auto g = [&](double l1) {
    const double nu1 = l1 * (1.0 - 1.0 / static_cast<double>(N));
    return l1 * std::exp(-l1 / N) * regularized_upper_gamma(D, nu1) - lambda;
  };

  // Locate the first sign change on [lambda, lambda1*]; g(lambda) <= 0 and
  // g(lambda1*) >= 0 whenever lambda <= lambda_max.
  const double lo0 = lambda;
  const double hi0 = std::max(l1_star, lambda);
  const int kCells = 2000;
  double root = std::numeric_limits<double>::quiet_NaN();
  double prev_x = lo0;
  double prev_g = g(lo0);
  if (std::abs(prev_g) < tol) root = lo0;
  double lo = lo0, hi = hi0;
  bool bracketed = false;
  if (!(root == root)) {  // still NaN
    for (int i = 1; i <= kCells; ++i) {
      const double x = lo0 + (hi0 - lo0) * i / kCells;
      const double gx = g(x);
      if (std::abs(gx) < tol) {
        root = x;
        break;
      }
      if (prev_g < 0.0 && gx >= 0.0) {
        lo = prev_x;
        hi = x;
        bracketed = true;
        break;
      }
      prev_x = x;
      prev_g = gx;
    }
  }
  if (!(root == root) && bracketed) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double gm = g(mid);
      if (std::abs(gm) < tol) {
        root = mid;
        break;
      }
      if (gm < 0.0) lo = mid;
      else hi = mid;
    }
    if (!(root == root)) root = 0.5 * (lo + hi);
  }
  if (!(root == root)) {
    // No crossing found: lambda sits at the maximum (g peaks at ~0). Accept
    // the peak if it is a root within tolerance scaled to the grid.
    if (std::abs(g(l1_star)) <= std::max(tol, 1e-6 * std::max(1.0, lambda))) {
      root = l1_star;
    } else {
      throw NoSteadyState("no fixed point located for lambda = " + std::to_string(lambda));
    }
  }

  ss.lambda1 = root;
  ss.lambda2 = std::max(0.0, root - lambda);
  ss.nu1 = root * (1.0 - 1.0 / static_cast<double>(N));
  ss.throughput = throughput_cra(root, N, D);
  ss.delay = root / lambda;

  // Diagnostic: report any further roots above the returned one.
  double px = root;
  double pg = g(px);
  for (int i = 1; i <= kCells; ++i) {
    const double x = root + (hi0 - root) * i / kCells;
    const double gx = g(x);
    if ((pg < 0.0 && gx >= 0.0) || (pg > 0.0 && gx <= 0.0)) {
      ss.extra_roots.push_back(0.5 * (px + x));
    }
    px = x;
    pg = gx;
  }
  return ss;
}

double throughput_cra(double lambda1, int N, int D) {
  check_rate_domain(N, D);
  if (lambda1 < 0.0) throw DomainError("throughput_cra: lambda1 < 0");
  if (lambda1 == 0.0) return 0.0;
  const double nu1 = lambda1 * (1.0 - 1.0 / static_cast<double>(N));
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n <= D; ++n) {
    term *= nu1 / n;
    sum += term;
  }
  return lambda1 * std::exp(-lambda1) * sum;
}

double throughput_aloha(double lambda, int L) {
  if (L < 1) throw DomainError("throughput_aloha: L < 1");
  if (lambda < 0.0) throw DomainError("throughput_aloha: lambda < 0");
  return lambda * std::exp(-lambda / L);
}

double cra_aloha_advantage(double eta) {
  if (eta < 1.0) throw DomainError("cra_aloha_advantage: eta < 1");
  return std::exp(1.0 - 1.0 / eta);
}

double drift_bound(const SystemConfig& cfg) {
  return cfg.M * (cfg.lambda - stability_bound(cfg.D, cfg.N));
}

CapacityReport capacity_report(int N, int D) {
  CapacityReport r;
  r.B_DN = stability_bound(D, N);
  const auto [lmax, l1s] = lambda_max(N, D);
  r.lambda_max = lmax;
  r.lambda1_star = l1s;
  r.lambda_max_upper = lambda_max_upper(N, D);
  r.N_star = (D > 1) ? min_stable_N(D) : 1;
  return r;
}

}  // namespace mrbcra

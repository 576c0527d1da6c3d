#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "loscap/channel.hpp"

namespace loscap {

/// Cluster sizes, MIMO group sizes and per-level rates/throughputs of the
/// modified hierarchical cooperation scheme. n_seq has h+1 entries with
/// n_seq[h] = n; m_seq and rates have h entries (level k uses m_seq[k-1],
/// rates[k-1]); throughputs has h+1 entries starting at the multihop T_0.
struct HierarchyPlan {
  int h = 1;
  std::size_t n = 0;
  double lambda = 0.0;
  int Q = 3;
  int regime_index = 1;  // b(n, lambda, h)
  std::vector<std::uint64_t> n_seq;
  std::vector<std::uint64_t> m_seq;
  std::vector<double> rates;
  std::vector<double> throughputs;
};

/// Number of nodes per cluster participating in a level-k MIMO shot:
/// G_k = min{n_prev, n_prev / ((n_cur n)^1/2 lambda log2(1/lambda))},
/// floored to an integer >= 1.
double g_k(double n_prev, double n_cur, double n, double lambda);

/// One level of the three-phase recursion:
/// T_k = n_cur m / (9 m n_prev/T_prev + n_cur m/R_k + 9 Q m^2 n_prev/(R_k T_prev)).
double throughput_recursion(double T_prev, double n_prev, double n_cur, double m, double R_k,
                            double Q);

/// Multihop-over-percolation scaling surrogate sqrt(n0)/log2(n0) at the
/// bottom hierarchy level.
double base_throughput(double n0);

/// Achievable MIMO rate surrogate G_k / (log2 n)^7.
double rate_rk(double G_k, double n);

/// Lambda(v) threshold exponent of the regime classifier; Lambda(h) == 1.
double lambda_threshold(int v, int h);

/// Piecewise regime index b(n, lambda, h) in [1 : h+1] from
/// -Lambda(k) < log_n(lambda log2 lambda^-1) <= -Lambda(k-1).
int regime_classifier(std::size_t n, double lambda, int h);

/// (delta_u, tau_u) throughput exponents for regime u.
std::pair<double, double> delta_tau(int u, int h);

/// Closed-form (alpha_{h',k}, beta_{h',k}) exponents of the bottleneck
/// recursion; alpha_{h',h} - beta_{h',h} = delta_{h'} and 2 beta_{h',h} = tau_{h'}.
std::pair<double, double> alpha_beta_exponents(int hp, int k, int h);

/// Real-valued optimal cluster sizes before integer rounding: the linear rule
/// n_{k-1} = n_k^{(k+1)/(k+2)} below level h' and the bottleneck rule
/// n_{k-1} = n_k^{3/(2(2-a))} ((lambda log2 lambda^-1)^2 n)^{(1-2b)/(2(2-a))}
/// at levels h'..h.
std::vector<double> cluster_sizes_real(std::size_t n, double lambda, int h);

HierarchyPlan optimal_cluster_sizes(std::size_t n, double lambda, int h, int Q = 3,
                                    double mu = 10.0);

struct ScalingPrediction {
  int regime_index = 1;
  double delta = 0.0;
  double tau = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool dof_limited = false;
  double lambda_effective = 0.0;  // lambda n^-1/2 for extended inputs
};

/// Desk-scale evaluation of the predicted throughput: lower bound
/// (log2 n)^-(7h+1) min_k n^delta_k (lambda log2 lambda^-1)^-tau_k and the
/// matching upper bound min{lambda^-1 (log2 lambda^-2)^2, n log2 n} after
/// extended inputs are rescaled by lambda' = lambda n^-1/2. dof_limited
/// compares the scaling cores lambda_eff^-1 < n, so the flag flips exactly at
/// beta = 1 dense and beta = 1/2 extended. For extended alpha > 2, the bursty
/// duty-cycle fraction multiplies the lower bound.
ScalingPrediction predicted_throughput(std::size_t n, double lambda, int h, Regime regime,
                                       double alpha = 2.0, double mu = 10.0);

/// Bursty duty cycle for alpha > 2: (active fraction n^(1-alpha/2),
/// throughput multiplier for the extended-regime lower bound).
std::pair<double, double> bursty_adjustment(double n, double alpha);

}  // namespace loscap

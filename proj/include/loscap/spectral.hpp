#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "loscap/geometry.hpp"

namespace loscap {

/// Q_ijkl = a_ik a_il a_jk a_jl cos(2 pi (d_ik - d_il - d_jk + d_jl) / lambda)
/// with a = (L/d)^(alpha/2); i<j index receive nodes, k<l transmit nodes.
struct QSample {
  std::size_t i = 0, j = 0, k = 0, l = 0;
  double value = 0.0;
};

QSample q_term(const ClusterPair& pair, std::size_t i, std::size_t j, std::size_t k, std::size_t l,
               double lambda, double alpha = 2.0);

/// (E[gamma], E[gamma^2]) = ((1/N) tr(F F*), (1/N) tr((F F*)^2)) via
/// Frobenius-style sums, no eigendecomposition.
std::pair<double, double> gamma_trace_moments(const Eigen::MatrixXcd& F);

struct DecayPoint {
  double M = 1.0;
  double lambda = 0.0;
  double mean = 0.0;
  double half_width = 0.0;  // 1.96 * sample sd / sqrt(trials)
  std::uint64_t trials = 0;
};

using DecaySeries = std::vector<DecayPoint>;

/// Monte Carlo mean of q_term over i.i.d. 4-point draws (two uniform in C_T,
/// two uniform in C_R), accumulated in draw order for reproducibility.
DecayPoint estimate_EQ(double D, double L, double lambda, double alpha, std::uint64_t trials,
                       std::uint64_t seed);

/// Full correlated sample mean (4 / (N^2 (N-1)^2)) sum_{i<j,k<l} Q_ijkl of one
/// placement, computed through the trace identity
///   tr((F F*)^2) = sum_{Psi_1} + 4 sum_{i<j,k<l} Q_ijkl.
double full_sample_mean(const ClusterPair& pair, double lambda, double alpha = 2.0);

struct LlnReport {
  struct Row {
    std::size_t N = 0;
    double mean = 0.0;  // sample mean averaged over seeds
    double sd = 0.0;    // spread over seeds
  };
  std::vector<Row> rows;
  std::vector<double> mean_abs_diff;  // mean over seeds of |s(N_t+1) - s(N_t)|
  DecayPoint mc;                      // independent Monte Carlo estimate
};

LlnReport lln_convergence_check(const std::vector<std::size_t>& Ns, double D, double L,
                                double lambda, double alpha, std::size_t n_seeds,
                                std::uint64_t seed, std::uint64_t mc_trials);

/// Least-squares slope of log|mean| against log M. Requires >= 5 points with
/// M > 1 spanning at least two decades of M.
double decay_regression(const DecaySeries& series);

/// Periodic g with g(x) = -g(x + period/2) and max |g| <= 1.
struct PeriodicFn {
  std::function<double(double)> g;
  double period = 2.0 * 3.14159265358979323846;
};

/// Nonnegative h, monotone on each cell of the partition a = x_0 < ... < x_m = b.
struct PiecewiseMonotoneFn {
  std::function<double(double)> h;
  std::vector<double> partition;
};

struct IntegralBoundResult {
  double lhs = 0.0;       // |int_a^b g(c1 x + c2) h(x) dx|
  double rhs = 0.0;       // m * max over window starts of int_x^(x + p/(2|c1|)) h
  double quad_tol = 0.0;  // quadrature error allowance added on the rhs side
  bool ok = false;
};

/// Oscillation-cancellation bound: |int g(c1 x + c2) h| <= m * (largest
/// half-period window mass of h). The maximizing window start is located by a
/// dense grid search plus local refinement.
IntegralBoundResult integral_bound_check(const PeriodicFn& g, const PiecewiseMonotoneFn& h,
                                         double c1, double c2);

}  // namespace loscap

#include "loscap/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace loscap {

namespace {

double log2_inv(double lambda) { return std::log2(1.0 / lambda); }

void check_lambda_dense(std::size_t n, double lambda, double mu) {
  const double nn = static_cast<double>(n);
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must be in (0, 1)");
  if (!(lambda <= std::pow(nn, -0.5) * (1.0 + 1e-12)))
    throw std::invalid_argument("dense regime requires lambda <= n^-1/2");
  if (!(lambda >= std::pow(nn, -mu)))
    throw std::invalid_argument("lambda must be >= n^-mu");
}

}  // namespace

double g_k(double n_prev, double n_cur, double n, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("g_k: requires 0 < lambda < 1");
  if (!(n_prev >= 1.0 && n_prev <= n_cur && n_cur <= n)) throw std::invalid_argument("g_k: requires n_prev <= n_cur <= n");
  const double bottleneck = n_prev / (std::sqrt(n_cur * n) * lambda * log2_inv(lambda));
  return std::max(1.0, std::floor(std::min(n_prev, bottleneck)));
}

double throughput_recursion(double T_prev, double n_prev, double n_cur, double m, double R_k,
                            double Q) {
  if (!(T_prev > 0.0 && n_prev > 0.0 && n_cur > 0.0 && m > 0.0 && R_k > 0.0 && Q >= 0.0))
    throw std::invalid_argument("throughput_recursion: inputs must be positive (Q >= 0)");
  return n_cur * m /
         (9.0 * m * n_prev / T_prev + n_cur * m / R_k + 9.0 * Q * m * m * n_prev / (R_k * T_prev));
}

double base_throughput(double n0) {
  if (!(n0 >= 2.0)) throw std::invalid_argument("base_throughput: requires n0 >= 2");
  return std::sqrt(n0) / std::log2(n0);
}

double rate_rk(double G_k, double n) {
  if (!(G_k >= 1.0 && n >= 2.0)) throw std::invalid_argument("rate_rk: requires G_k >= 1 and n >= 2");
  return G_k / std::pow(std::log2(n), 7.0);
}

double lambda_threshold(int v, int h) {
  if (v < 1 || v > h) throw std::invalid_argument("lambda_threshold: requires 1 <= v <= h");
  const double hv = static_cast<double>(h - v);
  return (std::pow(3.0, hv) * (3.0 + v) - std::pow(2.0, hv)) /
         (std::pow(3.0, hv) * (4.0 + v) - std::pow(2.0, hv + 1.0));
}

int regime_classifier(std::size_t n, double lambda, int h) {
  if (h < 1) throw std::invalid_argument("regime_classifier: requires h >= 1");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("regime_classifier: requires 0 < lambda < 1");
  const double x = std::log2(lambda * log2_inv(lambda)) / std::log2(static_cast<double>(n));
  if (x <= -lambda_threshold(h, h)) return h + 1;
  for (int k = h; k >= 2; --k)
    if (-lambda_threshold(k, h) < x && x <= -lambda_threshold(k - 1, h)) return k;
  return 1;
}

std::pair<double, double> delta_tau(int u, int h) {
  if (u < 1 || u > h + 1) throw std::invalid_argument("delta_tau: requires 1 <= u <= h+1");
  const double p2 = std::pow(2.0, static_cast<double>(h - u));
  const double p3 = std::pow(3.0, static_cast<double>(1 + h - u));
  const double den = p3 + p2 * (u - 1);
  return {u * p2 / den, (p3 - 2.0 * p2) / den};
}

std::pair<double, double> alpha_beta_exponents(int hp, int k, int h) {
  if (hp < 1 || hp > h) throw std::invalid_argument("alpha_beta_exponents: requires 1 <= hp <= h");
  if (k < hp - 1 || k > h) throw std::invalid_argument("alpha_beta_exponents: requires hp-1 <= k <= h");
  const double p3 = std::pow(3.0, static_cast<double>(1 + k - hp));
  const double p2 = std::pow(2.0, static_cast<double>(1 + k - hp));
  const double den = 2.0 * p3 + p2 * (hp - 1);
  return {(p3 + p2 * (hp - 1)) / den, (p3 - p2) / den};
}

std::vector<double> cluster_sizes_real(std::size_t n, double lambda, int h) {
  if (h < 1) throw std::invalid_argument("cluster_sizes_real: requires h >= 1");
  const int hp = regime_classifier(n, lambda, h);
  std::vector<double> ns(static_cast<std::size_t>(h) + 1);
  ns[static_cast<std::size_t>(h)] = static_cast<double>(n);
  const double y = std::pow(lambda * log2_inv(lambda), 2.0) * static_cast<double>(n);
  for (int k = h; k >= 1; --k) {
    double next;
    if (hp == h + 1 || k < hp) {
      next = std::pow(ns[static_cast<std::size_t>(k)], (k + 1.0) / (k + 2.0));
    } else {
      const auto [a, bexp] = alpha_beta_exponents(hp, k - 1, h);
      next = std::pow(ns[static_cast<std::size_t>(k)], 3.0 / (2.0 * (2.0 - a))) *
             std::pow(y, (1.0 - 2.0 * bexp) / (2.0 * (2.0 - a)));
    }
    ns[static_cast<std::size_t>(k - 1)] = std::min(next, ns[static_cast<std::size_t>(k)]);
  }
  return ns;
}

HierarchyPlan optimal_cluster_sizes(std::size_t n, double lambda, int h, int Q, double mu) {
  check_lambda_dense(n, lambda, mu);
  if (Q < 0) throw std::invalid_argument("optimal_cluster_sizes: Q must be >= 0");
  HierarchyPlan plan;
  plan.h = h;
  plan.n = n;
  plan.lambda = lambda;
  plan.Q = Q;
  plan.regime_index = regime_classifier(n, lambda, h);

  const auto real_sizes = cluster_sizes_real(n, lambda, h);
  plan.n_seq.resize(static_cast<std::size_t>(h) + 1);
  plan.n_seq[static_cast<std::size_t>(h)] = n;
  for (int k = h - 1; k >= 0; --k) {
    const double rounded = std::round(real_sizes[static_cast<std::size_t>(k)]);
    const auto upper = plan.n_seq[static_cast<std::size_t>(k + 1)];
    plan.n_seq[static_cast<std::size_t>(k)] =
        static_cast<std::uint64_t>(std::clamp(rounded, 2.0, static_cast<double>(upper)));
  }

  plan.m_seq.resize(static_cast<std::size_t>(h));
  plan.rates.resize(static_cast<std::size_t>(h));
  plan.throughputs.resize(static_cast<std::size_t>(h) + 1);
  plan.throughputs[0] = base_throughput(static_cast<double>(plan.n_seq[0]));
  for (int k = 1; k <= h; ++k) {
    const double n_prev = static_cast<double>(plan.n_seq[static_cast<std::size_t>(k - 1)]);
    const double n_cur = static_cast<double>(plan.n_seq[static_cast<std::size_t>(k)]);
    const double m = g_k(n_prev, n_cur, static_cast<double>(n), lambda);
    const double R = rate_rk(m, static_cast<double>(n));
    plan.m_seq[static_cast<std::size_t>(k - 1)] = static_cast<std::uint64_t>(m);
    plan.rates[static_cast<std::size_t>(k - 1)] = R;
    plan.throughputs[static_cast<std::size_t>(k)] = throughput_recursion(
        plan.throughputs[static_cast<std::size_t>(k - 1)], n_prev, n_cur, m, R, Q);
  }
  return plan;
}

std::pair<double, double> bursty_adjustment(double n, double alpha) {
  if (!(alpha >= 2.0)) throw std::invalid_argument("bursty_adjustment: requires alpha >= 2");
  if (!(n >= 1.0)) throw std::invalid_argument("bursty_adjustment: requires n >= 1");
  const double fraction = std::pow(n, 1.0 - alpha / 2.0);
  return {fraction, fraction};
}

ScalingPrediction predicted_throughput(std::size_t n, double lambda, int h, Regime regime,
                                       double alpha, double mu) {
  if (h < 1) throw std::invalid_argument("predicted_throughput: requires h >= 1");
  const double nn = static_cast<double>(n);
  double lam_eff = lambda;
  if (regime == Regime::Extended) {
    if (!(lambda > 0.0 && lambda < 1.0))
      throw std::invalid_argument("predicted_throughput: extended regime requires 0 < lambda < 1");
    lam_eff = lambda / std::sqrt(nn);
  } else {
    check_lambda_dense(n, lambda, mu);
  }

  ScalingPrediction pred;
  pred.lambda_effective = lam_eff;
  pred.regime_index = regime_classifier(n, lam_eff, h);
  std::tie(pred.delta, pred.tau) = delta_tau(pred.regime_index, h);

  const double loglam = lam_eff * log2_inv(lam_eff);
  double lower = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= h + 1; ++k) {
    const auto [d, t] = delta_tau(k, h);
    lower = std::min(lower, std::pow(nn, d) / std::pow(loglam, t));
  }
  lower /= std::pow(std::log2(nn), 7.0 * h + 1.0);
  if (regime == Regime::Extended && alpha > 2.0) lower *= bursty_adjustment(nn, alpha).second;
  pred.lower_bound = lower;

  const double dof_core = 1.0 / lam_eff;  // sqrt(n)/lambda for extended inputs
  const double dof_term = dof_core * std::pow(std::log2(1.0 / (lam_eff * lam_eff)), 2.0);
  pred.upper_bound = std::min(dof_term, nn * std::log2(nn));
  pred.dof_limited = dof_core < nn;
  return pred;
}

}  // namespace loscap

#include "loscap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "loscap/rng.hpp"

namespace loscap {

namespace {

constexpr double kPi = 3.14159265358979323846;

double cos_phase(double delta_d, double lambda) {
  const long double frac =
      std::fmod(static_cast<long double>(delta_d), static_cast<long double>(lambda)) /
      static_cast<long double>(lambda);
  return std::cos(2.0 * kPi * static_cast<double>(frac));
}

double q_value(const Point& rx_i, const Point& rx_j, const Point& tx_k, const Point& tx_l,
               double L, double lambda, double alpha) {
  const double d_ik = dist(rx_i, tx_k);
  const double d_il = dist(rx_i, tx_l);
  const double d_jk = dist(rx_j, tx_k);
  const double d_jl = dist(rx_j, tx_l);
  const double a = std::pow(L * L * L * L / (d_ik * d_il * d_jk * d_jl), alpha / 2.0);
  return a * cos_phase(d_ik - d_il - d_jk + d_jl, lambda);
}

}  // namespace

QSample q_term(const ClusterPair& pair, std::size_t i, std::size_t j, std::size_t k, std::size_t l,
               double lambda, double alpha) {
  if (!(i < j) || !(k < l)) throw std::invalid_argument("q_term: requires i < j and k < l");
  if (j >= pair.N || l >= pair.N) throw std::invalid_argument("q_term: index out of range");
  QSample s{i, j, k, l, 0.0};
  s.value = q_value(pair.rx[i], pair.rx[j], pair.tx[k], pair.tx[l], pair.L, lambda, alpha);
  return s;
}

std::pair<double, double> gamma_trace_moments(const Eigen::MatrixXcd& F) {
  if (F.rows() != F.cols()) throw std::invalid_argument("gamma_trace_moments: F must be square");
  const double N = static_cast<double>(F.rows());
  const double m1 = F.squaredNorm() / N;                 // tr(F F*) = ||F||_F^2
  const double m2 = (F * F.adjoint()).squaredNorm() / N; // tr((F F*)^2) = ||F F*||_F^2
  return {m1, m2};
}

DecayPoint estimate_EQ(double D, double L, double lambda, double alpha, std::uint64_t trials,
                       std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("estimate_EQ: trials must be >= 1");
  if (!(D > 0.0 && L >= 2.0 * D && lambda > 0.0)) throw std::invalid_argument("estimate_EQ: bad geometry");
  Rng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Point u{rng.uniform(0.0, D), rng.uniform(0.0, D)};
    const Point v{rng.uniform(0.0, D), rng.uniform(0.0, D)};
    const Point s{L + rng.uniform(0.0, D), rng.uniform(0.0, D)};
    const Point tt{L + rng.uniform(0.0, D), rng.uniform(0.0, D)};
    const double q = q_value(s, tt, u, v, L, lambda, alpha);
    sum += q;
    sum_sq += q * q;
  }
  DecayPoint p;
  p.lambda = lambda;
  const double r = D * D / (lambda * L);
  p.M = std::max(1.0, r / (1.0 + std::max(0.0, std::log2(r))));
  const double n = static_cast<double>(trials);
  p.mean = sum / n;
  const double var = std::max(0.0, (sum_sq / n - p.mean * p.mean) * (trials > 1 ? n / (n - 1.0) : 0.0));
  p.half_width = 1.96 * std::sqrt(var / n);
  p.trials = trials;
  return p;
}

double full_sample_mean(const ClusterPair& pair, double lambda, double alpha) {
  const Eigen::Index N = static_cast<Eigen::Index>(pair.N);
  if (N < 2) throw std::invalid_argument("full_sample_mean: needs N >= 2");
  Eigen::MatrixXcd F(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index k = 0; k < N; ++k) {
      const double d = dist(pair.rx[static_cast<std::size_t>(i)], pair.tx[static_cast<std::size_t>(k)]);
      F(i, k) = std::polar(std::pow(pair.L / d, alpha / 2.0),
                           -2.0 * kPi * static_cast<double>(std::fmod(static_cast<long double>(d),
                                                                      static_cast<long double>(lambda)) /
                                                            static_cast<long double>(lambda)));
    }
  }
  const double tr2 = (F * F.adjoint()).squaredNorm();
  const Eigen::MatrixXd A2 = F.cwiseAbs2();
  const double psi1 = A2.rowwise().sum().squaredNorm() + A2.colwise().sum().squaredNorm() -
                      A2.cwiseAbs2().sum();
  const double quad_sum = (tr2 - psi1) / 4.0;
  const double n = static_cast<double>(N);
  return 4.0 * quad_sum / (n * n * (n - 1.0) * (n - 1.0));
}

LlnReport lln_convergence_check(const std::vector<std::size_t>& Ns, double D, double L,
                                double lambda, double alpha, std::size_t n_seeds,
                                std::uint64_t seed, std::uint64_t mc_trials) {
  if (Ns.size() < 2) throw std::invalid_argument("lln_convergence_check: need at least two N values");
  if (n_seeds < 1) throw std::invalid_argument("lln_convergence_check: need at least one seed");
  Rng root(seed);
  LlnReport rep;
  std::vector<std::vector<double>> samples(Ns.size());
  for (std::size_t t = 0; t < Ns.size(); ++t) {
    samples[t].reserve(n_seeds);
    double acc = 0.0;
    for (std::size_t s = 0; s < n_seeds; ++s) {
      const auto pair = ClusterPair::sample(Ns[t], D, L, root.fork(t * n_seeds + s).seed());
      const double v = full_sample_mean(pair, lambda, alpha);
      samples[t].push_back(v);
      acc += v;
    }
    LlnReport::Row row;
    row.N = Ns[t];
    row.mean = acc / static_cast<double>(n_seeds);
    double var = 0.0;
    for (double v : samples[t]) var += (v - row.mean) * (v - row.mean);
    row.sd = n_seeds > 1 ? std::sqrt(var / static_cast<double>(n_seeds - 1)) : 0.0;
    rep.rows.push_back(row);
  }
  for (std::size_t t = 0; t + 1 < Ns.size(); ++t) {
    double acc = 0.0;
    for (std::size_t s = 0; s < n_seeds; ++s) acc += std::abs(samples[t + 1][s] - samples[t][s]);
    rep.mean_abs_diff.push_back(acc / static_cast<double>(n_seeds));
  }
  rep.mc = estimate_EQ(D, L, lambda, alpha, mc_trials, root.fork(0x5ca1ab1eULL).seed());
  return rep;
}

double decay_regression(const DecaySeries& series) {
  std::size_t count = 0;
  double m_min = std::numeric_limits<double>::infinity();
  double m_max = 0.0;
  for (const auto& p : series) {
    if (!(p.M > 1.0)) throw std::invalid_argument("decay_regression: all points must have M > 1");
    ++count;
    m_min = std::min(m_min, p.M);
    m_max = std::max(m_max, p.M);
  }
  if (count < 5) throw std::invalid_argument("decay_regression: need at least 5 points");
  if (!(m_max / m_min >= 100.0)) throw std::invalid_argument("decay_regression: need >= 2 decades of M");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& p : series) {
    const double x = std::log(p.M);
    const double y = std::log(std::abs(p.mean));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(count);
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

// adaptive Simpson with error accumulation
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth, double& err) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 double& err) {
  if (!(b > a)) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 28, err);
}

}  // namespace

IntegralBoundResult integral_bound_check(const PeriodicFn& g, const PiecewiseMonotoneFn& h,
                                         double c1, double c2) {
  if (c1 == 0.0) throw std::invalid_argument("integral_bound_check: c1 must be nonzero");
  if (!(g.period > 0.0)) throw std::invalid_argument("integral_bound_check: period must be > 0");
  if (h.partition.size() < 2) throw std::invalid_argument("integral_bound_check: partition needs >= 2 points");
  if (!std::is_sorted(h.partition.begin(), h.partition.end()))
    throw std::invalid_argument("integral_bound_check: partition must be sorted");
  const double a = h.partition.front();
  const double b = h.partition.back();
  const std::size_t m = h.partition.size() - 1;

  // hypothesis checks on a sampling grid
  double h_scale = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    const double x0 = h.partition[c], x1 = h.partition[c + 1];
    for (int s = 0; s <= 32; ++s) {
      const double x = x0 + (x1 - x0) * s / 32.0;
      const double v = h.h(x);
      h_scale = std::max(h_scale, std::abs(v));
      if (v < -1e-12 * std::max(1.0, h_scale))
        throw std::invalid_argument("integral_bound_check: h must be nonnegative");
    }
  }
  for (int s = 0; s < 64; ++s) {
    const double x = c2 + g.period * s / 64.0;
    if (std::abs(g.g(x) + g.g(x + 0.5 * g.period)) > 1e-9)
      throw std::invalid_argument("integral_bound_check: g must satisfy g(x) = -g(x + p/2)");
  }

  IntegralBoundResult res;
  const double tol = 1e-10 * std::max(1.0, h_scale * (b - a));
  double err = 0.0;
  const auto integrand = [&](double x) { return g.g(c1 * x + c2) * h.h(x); };
  // split at partition points and at the oscillation scale so each piece is smooth
  const double xperiod = g.period / std::abs(c1);
  double total = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    double x0 = h.partition[c];
    const double x1 = h.partition[c + 1];
    const double step = std::min(x1 - x0, 0.5 * xperiod);
    if (!(step > 0.0)) continue;
    while (x0 < x1) {
      const double xe = std::min(x1, x0 + step);
      total += integrate(integrand, x0, xe, tol, err);
      x0 = xe;
    }
  }
  res.lhs = std::abs(total);

  // rhs: m times the largest half-period window mass of h
  const double w = g.period / (2.0 * std::abs(c1));
  const double window_tol = 1e-7 * std::max(1.0, h_scale * std::min(w, b - a));
  const auto window = [&](double x) {
    const double lo = std::max(a, x);
    const double hi = std::min(b, x + w);
    if (!(hi > lo)) return 0.0;
    double werr = 0.0;
    double acc = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      const double s0 = std::max(lo, h.partition[c]);
      const double s1 = std::min(hi, h.partition[c + 1]);
      if (s1 > s0) acc += integrate(h.h, s0, s1, window_tol, werr);
    }
    err = std::max(err, werr);
    return acc;
  };
  double best_x = a - w, best = window(a - w);
  const int grid = 1000;
  for (int i = 1; i <= grid; ++i) {
    const double x = (a - w) + (b - (a - w)) * i / grid;
    const double v = window(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  // local refinement around the best grid start
  double lo = best_x - (b - (a - w)) / grid, hi = best_x + (b - (a - w)) / grid;
  for (int it = 0; it < 40; ++it) {
    const double x1 = lo + (hi - lo) / 3.0, x2 = hi - (hi - lo) / 3.0;
    if (window(x1) < window(x2)) lo = x1;
    else hi = x2;
  }
  best = std::max(best, window(0.5 * (lo + hi)));

  res.rhs = static_cast<double>(m) * best;
  res.quad_tol = 4.0 * err + 1e-9 * std::max(1.0, h_scale * (b - a));
  res.ok = res.lhs <= res.rhs + res.quad_tol;
  return res;
}

}  // namespace loscap

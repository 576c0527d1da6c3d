#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>

#include "loscap/channel.hpp"
#include "loscap/rng.hpp"
#include "loscap/spectral.hpp"

using namespace loscap;

namespace {
constexpr double kPi = 3.14159265358979323846;

// direct scalar recomputation of the defining formula
double q_oracle(const ClusterPair& p, std::size_t i, std::size_t j, std::size_t k, std::size_t l,
                double lambda, double alpha) {
  const double dik = dist(p.rx[i], p.tx[k]);
  const double dil = dist(p.rx[i], p.tx[l]);
  const double djk = dist(p.rx[j], p.tx[k]);
  const double djl = dist(p.rx[j], p.tx[l]);
  const double a = std::pow(p.L / dik, alpha / 2.0) * std::pow(p.L / dil, alpha / 2.0) *
                   std::pow(p.L / djk, alpha / 2.0) * std::pow(p.L / djl, alpha / 2.0);
  return a * std::cos(2.0 * kPi / lambda * (dik - dil - djk + djl));
}
}  // namespace

TEST_CASE("q_term") {
  SUBCASE("mirror-symmetric placement cancels the phase") {
    // rx mirror pair about the horizontal midline, tx on the midline
    const std::vector<Point> tx{{0.2, 0.5}, {0.8, 0.5}};
    const std::vector<Point> rx{{2.3, 0.2}, {2.3, 0.8}};
    const auto pair = ClusterPair::from_points(1.0, 2.0, tx, rx);
    const auto q = q_term(pair, 0, 1, 0, 1, 0.001);
    double prod = 1.0;
    for (const auto& r : pair.rx)
      for (const auto& t : pair.tx) prod *= 2.0 / dist(r, t);
    CHECK(q.value == doctest::Approx(prod).epsilon(1e-9));
  }
  SUBCASE("bounded by a_max^4") {
    Rng rng(3);
    for (int t = 0; t < 2000; ++t) {
      const auto pair = ClusterPair::sample(4, 1.0, 2.0, rng.next_u64());
      const double amax = a_max_bound(1.0, 2.0, 2.0);
      const auto q = q_term(pair, 0, 1, 0, 1, 0.01);
      CHECK(std::abs(q.value) <= amax * amax * amax * amax);
    }
  }
  SUBCASE("matches the direct scalar oracle, alpha 2 and 3") {
    Rng rng(5);
    for (double alpha : {2.0, 3.0}) {
      for (int t = 0; t < 200; ++t) {
        const auto pair = ClusterPair::sample(6, 1.0, 4.0, rng.next_u64());
        const auto q = q_term(pair, 1, 3, 0, 2, 0.02, alpha);
        CHECK(q.value == doctest::Approx(q_oracle(pair, 1, 3, 0, 2, 0.02, alpha)).epsilon(1e-9));
      }
    }
  }
  SUBCASE("index validation") {
    const auto pair = ClusterPair::sample(4, 1.0, 2.0, 1);
    CHECK_THROWS_AS(q_term(pair, 1, 1, 0, 1, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(q_term(pair, 0, 1, 2, 1, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(q_term(pair, 0, 4, 0, 1, 0.01), std::invalid_argument);
  }
}

TEST_CASE("gamma trace moments") {
  SUBCASE("identity") {
    const auto [m1, m2] = gamma_trace_moments(Eigen::MatrixXcd::Identity(7, 7));
    CHECK(m1 == doctest::Approx(1.0));
    CHECK(m2 == doctest::Approx(1.0));
  }
  SUBCASE("all-ones matrix is rank one with eigenvalue N^2") {
    for (Eigen::Index n : {3, 8}) {
      const Eigen::MatrixXcd F = Eigen::MatrixXcd::Ones(n, n);
      const auto [m1, m2] = gamma_trace_moments(F);
      const double N = static_cast<double>(n);
      CHECK(m1 == doctest::Approx(N));
      CHECK(m2 == doctest::Approx(N * N * N));  // (N^2)^2 / N
    }
  }
  SUBCASE("agrees with the eigensolver oracle") {
    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
      const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.below(10));
      Eigen::MatrixXcd F(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) F(i, k) = std::complex<double>(rng.normal(), rng.normal());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(F * F.adjoint(), Eigen::EigenvaluesOnly);
      const double e1 = es.eigenvalues().mean();
      const double e2 = es.eigenvalues().squaredNorm() / static_cast<double>(n);
      const auto [m1, m2] = gamma_trace_moments(F);
      CHECK(m1 == doctest::Approx(e1).epsilon(1e-8));
      CHECK(m2 == doctest::Approx(e2).epsilon(1e-8));
    }
  }
}

TEST_CASE("estimate_EQ") {
  SUBCASE("single trial reproduces deterministically") {
    const auto a = estimate_EQ(1.0, 2.0, 0.01, 2.0, 1, 42);
    const auto b = estimate_EQ(1.0, 2.0, 0.01, 2.0, 1, 42);
    CHECK(a.mean == b.mean);
    CHECK(a.trials == 1);
    CHECK(a.half_width == 0.0);
  }
  SUBCASE("large lambda: phases vanish and the mean exceeds a_min^4 / 2") {
    const double lambda = 1e6;
    const auto p = estimate_EQ(1.0, 2.0, lambda, 2.0, 20000, 9);
    const double amin = a_min_bound(1.0, 2.0, 2.0);
    CHECK(p.mean > 0.5 * amin * amin * amin * amin);
    CHECK(p.M == 1.0);
  }
  SUBCASE("monotone decay in 1/lambda beyond the knee, within 3 combined se") {
    double prev_mean = 1e300, prev_se = 0.0;
    for (int k = 3; k <= 8; ++k) {
      const auto p = estimate_EQ(1.0, 2.0, std::pow(2.0, -k), 2.0, 100000, 1000 + k);
      const double se = p.half_width / 1.96;
      CHECK(p.mean <= prev_mean + 3.0 * std::sqrt(se * se + prev_se * prev_se));
      prev_mean = p.mean;
      prev_se = se;
    }
  }
}

TEST_CASE("full sample mean") {
  SUBCASE("N=2 is the single Q term") {
    const auto pair = ClusterPair::sample(2, 1.0, 2.0, 13);
    const double s = full_sample_mean(pair, 0.01);
    CHECK(s == doctest::Approx(q_term(pair, 0, 1, 0, 1, 0.01).value).epsilon(1e-9));
  }
  SUBCASE("matches the brute-force four-index sum (Psi split), N <= 16") {
    Rng rng(21);
    for (std::size_t N : {4, 9, 16}) {
      const auto pair = ClusterPair::sample(N, 1.0, 2.0, rng.next_u64());
      const double lambda = 0.02;
      double brute = 0.0;
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
          for (std::size_t k = 0; k < N; ++k)
            for (std::size_t l = k + 1; l < N; ++l) brute += q_term(pair, i, j, k, l, lambda).value;
      const double n = static_cast<double>(N);
      brute *= 4.0 / (n * n * (n - 1.0) * (n - 1.0));
      CHECK(full_sample_mean(pair, lambda) == doctest::Approx(brute).epsilon(1e-8));
    }
  }
}

TEST_CASE("lln convergence report") {
  const auto rep = lln_convergence_check({16, 32, 64}, 1.0, 16.0, 0.125, 2.0, 4, 99, 20000);
  REQUIRE(rep.rows.size() == 3);
  REQUIRE(rep.mean_abs_diff.size() == 2);
  CHECK(rep.rows[0].N == 16);
  // successive differences shrink as N doubles
  CHECK(rep.mean_abs_diff[1] < rep.mean_abs_diff[0]);
  // all levels near the Monte Carlo value
  for (const auto& row : rep.rows) CHECK(std::abs(row.mean - rep.mc.mean) < 0.2 * std::abs(rep.mc.mean) + 0.05);
}

TEST_CASE("decay regression") {
  SUBCASE("pure 1/M series has slope exactly -1") {
    DecaySeries s;
    for (int i = 0; i < 6; ++i) {
      DecayPoint p;
      p.M = 1.5 * std::pow(3.0, i);
      p.mean = 0.7 / p.M;
      s.push_back(p);
    }
    CHECK(decay_regression(s) == doctest::Approx(-1.0).epsilon(1e-12));
  }
  SUBCASE("log-corrected series lands in (-1, -0.8) over two decades") {
    DecaySeries s;
    for (int i = 0; i < 9; ++i) {
      DecayPoint p;
      p.M = 1.8 * std::pow(2.0, i);
      p.mean = 0.4 * (1.0 + std::log2(p.M)) / p.M;
      s.push_back(p);
    }
    const double slope = decay_regression(s);
    CHECK(slope > -1.0);
    CHECK(slope < -0.8);
  }
  SUBCASE("insufficient span or count throws") {
    DecaySeries s;
    for (int i = 0; i < 6; ++i) {
      DecayPoint p;
      p.M = 2.0 + i;  // narrow span
      p.mean = 1.0 / p.M;
      s.push_back(p);
    }
    CHECK_THROWS_AS(decay_regression(s), std::invalid_argument);
    DecaySeries few;
    for (int i = 0; i < 4; ++i) {
      DecayPoint p;
      p.M = 2.0 * std::pow(10.0, i);
      p.mean = 1.0 / p.M;
      few.push_back(p);
    }
    CHECK_THROWS_AS(decay_regression(few), std::invalid_argument);
  }
}

TEST_CASE("integral bound checker") {
  PeriodicFn cosfn{[](double x) { return std::cos(x); }, 2.0 * kPi};

  SUBCASE("full period of cos against h = 1 cancels") {
    const double c1 = 1.0;
    PiecewiseMonotoneFn h{[](double) { return 1.0; }, {0.0, 2.0 * kPi}};
    const auto r = integral_bound_check(cosfn, h, c1, 0.0);
    CHECK(r.ok);
    CHECK(r.lhs == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(r.rhs == doctest::Approx(kPi));  // one window of length p/2
  }
  SUBCASE("h(x) = x on [0, 10] with c1 = 2 pi") {
    PiecewiseMonotoneFn h{[](double x) { return x; }, {0.0, 10.0}};
    const auto r = integral_bound_check(cosfn, h, 2.0 * kPi, 0.0);
    CHECK(r.ok);
    // window w = 1/2 ending at the right edge: integral of x over [9.5, 10]
    CHECK(r.rhs == doctest::Approx(0.5 * (10.0 * 10.0 - 9.5 * 9.5)).epsilon(1e-6));
    // exact integral of x cos(2 pi x) over [0, 10] is 0
    CHECK(r.lhs <= 1e-6);
  }
  SUBCASE("hypothesis violations throw") {
    PiecewiseMonotoneFn neg{[](double x) { return x - 5.0; }, {0.0, 10.0}};
    CHECK_THROWS_AS(integral_bound_check(cosfn, neg, 1.0, 0.0), std::invalid_argument);
    PeriodicFn bad{[](double x) { return std::cos(x) + 0.5; }, 2.0 * kPi};  // not antisymmetric
    PiecewiseMonotoneFn h{[](double) { return 1.0; }, {0.0, 1.0}};
    CHECK_THROWS_AS(integral_bound_check(bad, h, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(integral_bound_check(cosfn, h, 0.0, 0.0), std::invalid_argument);
  }
  SUBCASE("piecewise-monotone random family never violates") {
    Rng rng(71);
    for (int t = 0; t < 60; ++t) {
      const double a = rng.uniform(-3.0, 0.0);
      const double b = a + rng.uniform(1.0, 6.0);
      const int cells = 1 + static_cast<int>(rng.below(4));
      std::vector<double> part{a};
      for (int c = 1; c < cells; ++c) part.push_back(rng.uniform(a, b));
      part.push_back(b);
      std::sort(part.begin(), part.end());
      std::vector<double> y0(cells), y1(cells);
      for (int c = 0; c < cells; ++c) {
        y0[c] = rng.uniform(0.0, 2.0);
        y1[c] = rng.uniform(0.0, 2.0);
      }
      PiecewiseMonotoneFn h{[part, y0, y1](double x) {
                              std::size_t c = 0;
                              while (c + 2 < part.size() && x > part[c + 1]) ++c;
                              const double t01 = (x - part[c]) / (part[c + 1] - part[c]);
                              return y0[c] + (y1[c] - y0[c]) * std::clamp(t01, 0.0, 1.0);
                            },
                            part};
      const double c1 = (rng.below(2) ? 1.0 : -1.0) * rng.uniform(0.5, 12.0);
      const double c2 = rng.uniform(-5.0, 5.0);
      const auto r = integral_bound_check(cosfn, h, c1, c2);
      CHECK(r.ok);
    }
  }
}

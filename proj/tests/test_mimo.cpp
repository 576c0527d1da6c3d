#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "loscap/mimo.hpp"
#include "loscap/rng.hpp"

using namespace loscap;

namespace {

Eigen::MatrixXcd random_psd(std::size_t n, double trace_target, Rng& rng) {
  Eigen::MatrixXcd A(n, n);
  for (Eigen::Index r = 0; r < A.rows(); ++r)
    for (Eigen::Index c = 0; c < A.cols(); ++c) A(r, c) = std::complex<double>(rng.normal(), rng.normal());
  Eigen::MatrixXcd S = A * A.adjoint();
  S *= trace_target / S.trace().real();
  return S;
}

NetworkConfig cluster_cfg(double lambda, double alpha = 2.0) {
  NetworkConfig cfg;
  cfg.lambda = lambda;
  cfg.alpha = alpha;
  return cfg;
}

}  // namespace

TEST_CASE("gaussian mutual information on scalars") {
  Eigen::MatrixXcd H(1, 1), Z(1, 1), S(1, 1);
  H(0, 0) = 1.0;
  Z(0, 0) = 0.0;
  S(0, 0) = 1.0;
  CHECK(mutual_information_gaussian(H, Z, 1.0) == doctest::Approx(1.0));
  CHECK(mutual_information_gaussian(H, S, 1.0) == doctest::Approx(std::log2(1.5)));
  H(0, 0) = 0.0;
  CHECK(mutual_information_gaussian(H, S, 1.0) == doctest::Approx(0.0));

  SUBCASE("errors") {
    Eigen::MatrixXcd bad(1, 1);
    bad(0, 0) = -1.0;  // not PSD
    Eigen::MatrixXcd h1(1, 1);
    h1(0, 0) = 1.0;
    CHECK_THROWS_AS(mutual_information_gaussian(h1, bad, 1.0), std::invalid_argument);
    Eigen::MatrixXcd wrong(2, 2);
    wrong.setZero();
    CHECK_THROWS_AS(mutual_information_gaussian(h1, wrong, 1.0), std::invalid_argument);
  }
}

TEST_CASE("DoF limit M") {
  CHECK(dof_limit_M(1.0, 2.0, 1.0) == doctest::Approx(1.0));
  CHECK(dof_limit_M(1.0, 2.0, 0.125) == doctest::Approx(4.0 / 3.0));
  CHECK(dof_limit_M(1.0, 2.0, 0.25) == doctest::Approx(1.0));
  CHECK_THROWS_AS(dof_limit_M(1.0, 1.0, 0.1), std::invalid_argument);  // L < 2D
}

TEST_CASE("rho moments") {
  SUBCASE("zero interference") {
    const Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(5, 5);
    const auto [r1, r2] = rho_moments(Z, 5, 2.0, 1.0, 1.0);
    CHECK(r1 == 0.0);
    CHECK(r2 == 0.0);
  }
  SUBCASE("identity at L=2, G=P=1 gives (4, 16) for any N") {
    for (std::size_t n : {2, 5, 11}) {
      const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
      const auto [r1, r2] = rho_moments(I, n, 2.0, 1.0, 1.0);
      CHECK(r1 == doctest::Approx(4.0));
      CHECK(r2 == doctest::Approx(16.0));
    }
  }
  SUBCASE("trace homogeneity") {
    Rng rng(2);
    const auto S = random_psd(6, 3.7, rng);
    const auto [r1, r2] = rho_moments(S, 6, 2.0, 1.0, 1.0);
    const auto [s1, s2] = rho_moments((2.5 * S).eval(), 6, 2.0, 1.0, 1.0);
    CHECK(s1 == doctest::Approx(2.5 * r1));
    CHECK(s2 == doctest::Approx(2.5 * 2.5 * r2));
  }
  SUBCASE("dimension mismatch") {
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(3, 3);
    CHECK_THROWS_AS(rho_moments(I, 4, 2.0, 1.0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("theorem-2 bound basics") {
  const MimoGeometry geom{4, 1.0, 2.0, 0.01, 1.0, 1.0, 2.0};
  SUBCASE("zero channel, zero interference") {
    ChannelMatrix H;
    H.entries = Eigen::MatrixXcd::Zero(4, 4);
    const auto b = theorem2_bound(H, InterferenceModel::none(4), 0.5, geom);
    CHECK(b.value == 0.0);
  }
  SUBCASE("delta outside [0,1] throws") {
    ChannelMatrix H;
    H.entries = Eigen::MatrixXcd::Identity(4, 4);
    CHECK_THROWS_AS(theorem2_bound(H, InterferenceModel::none(4), 1.5, geom), std::invalid_argument);
  }
  SUBCASE("no interference, delta=1/2: positive whenever the channel is nonzero") {
    const auto pair = ClusterPair::sample(4, 1.0, 2.0, 5);
    const auto H = channel_matrix(pair.tx, pair.rx, cluster_cfg(0.01));
    const auto b = theorem2_bound(H, InterferenceModel::none(4), 0.5, geom);
    CHECK(b.value > 0.0);
    CHECK(b.log_argument > 1.0);
  }
}

TEST_CASE("central inequality: mutual information dominates the bound") {
  Rng rng(101);
  int instances = 0;
  double min_margin = 1e300;
  while (instances < 60) {
    const std::size_t N = std::size_t(4) << rng.below(4);  // 4..32
    const double L = 2.0 * static_cast<double>(1 + rng.below(3));
    const double lambda = std::pow(2.0, -2.0 - 8.0 * rng.uniform());
    const double P = std::pow(10.0, rng.uniform(-1.0, 2.0));
    const auto pair = ClusterPair::sample(N, 1.0, L, rng.next_u64());
    const auto H = channel_matrix(pair.tx, pair.rx, cluster_cfg(lambda));
    InterferenceModel sigma = InterferenceModel::none(N);
    if (instances % 3 == 1) {
      const double tr = P * (H.entries * H.entries.adjoint()).trace().real() * rng.uniform(0.01, 10.0);
      sigma = InterferenceModel::from_sigma(random_psd(N, tr, rng), L, 1.0, P);
    } else if (instances % 3 == 2) {
      // adversarially skewed: one dominant eigendirection
      Eigen::MatrixXcd S = random_psd(N, 1.0, rng);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
      Eigen::VectorXd ev = es.eigenvalues();
      ev.setConstant(1e-4);
      ev(0) = rng.uniform(1.0, 1000.0);
      S = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
      sigma = InterferenceModel::from_sigma(S, L, 1.0, P);
    }
    const double mi = mutual_information_gaussian(H.entries, sigma.sigma, P);
    const MimoGeometry geom{N, 1.0, L, lambda, 1.0, P, 2.0};
    for (int d = 1; d <= 19; ++d) {
      const auto b = theorem2_bound(H, sigma, 0.05 * d, geom);
      CHECK(mi + 1e-9 >= b.value);
      min_margin = std::min(min_margin, mi - b.value);
    }
    ++instances;
  }
  CHECK(min_margin > -1e-9);
}

TEST_CASE("eigenvalue summary and AM-GM step") {
  Rng rng(55);
  const std::size_t N = 16;
  const auto pair = ClusterPair::sample(N, 1.0, 2.0, 4);
  const auto H = channel_matrix(pair.tx, pair.rx, cluster_cfg(0.02));
  const auto S = random_psd(N, 5.0, rng);
  const MimoGeometry geom{N, 1.0, 2.0, 0.02, 1.0, 1.0, 2.0};
  const auto sum = EigenSummary::compute(H.entries, S, geom);

  SUBCASE("trace additivity: E[kappa] = E[chi] + E[gamma]") {
    CHECK(sum.e_kappa == doctest::Approx(sum.e_chi + sum.e_gamma).epsilon(1e-8));
  }
  SUBCASE("E[gamma] bounded by the normalized magnitude extremes") {
    const double amin = a_min_bound(1.0, 2.0, 2.0), amax = a_max_bound(1.0, 2.0, 2.0);
    CHECK(sum.e_gamma >= amin * amin * static_cast<double>(N) - 1e-9);
    CHECK(sum.e_gamma <= amax * amax * static_cast<double>(N) + 1e-9);
  }
  SUBCASE("geometric-vs-arithmetic mean step") {
    const double c = 1.0 / 4.0;  // GP/L^2
    double prod_log = 0.0;
    for (Eigen::Index i = 0; i < sum.chi.size(); ++i) prod_log += std::log1p(c * sum.chi(i));
    CHECK(prod_log <= static_cast<double>(N) * std::log1p(c * sum.e_chi) + 1e-9);
  }
}

TEST_CASE("paley-zygmund") {
  SUBCASE("all equal values") {
    const std::vector<double> v(10, 3.0);
    const auto [lhs, rhs] = paley_zygmund_lower(v, 0.5);
    CHECK(lhs == doctest::Approx(1.0));
    CHECK(rhs == doctest::Approx(0.25));
  }
  SUBCASE("two-point {0, 2} at delta 1/2") {
    const std::vector<double> v{0.0, 2.0};
    const auto [lhs, rhs] = paley_zygmund_lower(v, 0.5);
    CHECK(lhs == doctest::Approx(0.5));
    CHECK(rhs == doctest::Approx(0.125));
  }
  SUBCASE("random sample sets never violate") {
    Rng rng(7);
    for (int t = 0; t < 500; ++t) {
      std::vector<double> v(1 + rng.below(64));
      for (auto& x : v) x = std::abs(rng.normal()) * (rng.below(2) ? 1.0 : 0.1);
      const double delta = rng.uniform();
      const auto [lhs, rhs] = paley_zygmund_lower(v, delta);
      CHECK(lhs >= rhs - 1e-12);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(paley_zygmund_lower({}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(paley_zygmund_lower(std::vector<double>{-1.0}, 0.5), std::invalid_argument);
  }
}

TEST_CASE("trace square inequality") {
  SUBCASE("single identity: equality") {
    const std::vector<Eigen::MatrixXcd> mats{Eigen::MatrixXcd::Identity(2, 2)};
    const auto [lhs, rhs] = trace_sq_inequality(mats);
    CHECK(lhs == doctest::Approx(2.0));
    CHECK(rhs == doctest::Approx(2.0));
  }
  SUBCASE("orthogonal projectors") {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2, 2), B = Eigen::MatrixXcd::Zero(2, 2);
    A(0, 0) = 1.0;
    B(1, 1) = 1.0;
    const auto [lhs, rhs] = trace_sq_inequality(std::vector<Eigen::MatrixXcd>{A, B});
    CHECK(lhs == doctest::Approx(2.0));
    CHECK(rhs == doctest::Approx(4.0));
  }
  SUBCASE("random PSD families never violate") {
    Rng rng(19);
    for (int t = 0; t < 300; ++t) {
      std::vector<Eigen::MatrixXcd> mats;
      const std::size_t dim = 1 + rng.below(6);
      const std::size_t count = 1 + rng.below(4);
      for (std::size_t i = 0; i < count; ++i) mats.push_back(random_psd(dim, rng.uniform(0.1, 10.0), rng));
      const auto [lhs, rhs] = trace_sq_inequality(mats);
      CHECK(lhs <= rhs * (1.0 + 1e-12) + 1e-12);
    }
  }
  SUBCASE("non-PSD input throws") {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(2, 2);
    A(0, 0) = -1.0;
    CHECK_THROWS_AS(trace_sq_inequality(std::vector<Eigen::MatrixXcd>{A}), std::invalid_argument);
  }
}

TEST_CASE("interference covariance") {
  const double L = 2.0;
  const NetworkConfig cfg = cluster_cfg(0.01);
  SUBCASE("no same-slot clusters: zero covariance") {
    const auto pair = ClusterPair::sample(4, 1.0, L, 2);
    const ClusterGrid grid{3, 3, 3.0 * L};
    std::vector<Point> rx = pair.rx;
    for (auto& p : rx) { p.x += grid.cell; p.y += grid.cell; }  // inside center cluster
    const auto sigma = interference_covariance(rx, {1, 1}, grid, 4, 1.0, L, cfg, 77);
    CHECK(sigma.sigma.cwiseAbs().maxCoeff() == 0.0);
    CHECK(sigma.rho1 == 0.0);
  }
  SUBCASE("trace bounded by the min-distance envelope") {
    const std::size_t Gk = 4;
    const double cell = 3.0 * L;
    const ClusterGrid grid{9, 9, cell};
    const auto pair = ClusterPair::sample(Gk, 1.0, L, 3);
    std::vector<Point> rx = pair.rx;
    const double off = 4.0 * cell + 0.5 * cell;
    for (auto& p : rx) { p.x += off - L; p.y += off; }
    const double Pp = 2.5;
    const auto sigma = interference_covariance(rx, {4, 4}, grid, Gk, Pp, L, cfg, 5);
    CHECK(is_psd(sigma.sigma));
    // every interferer points pair sits at distance >= 3 cell - sqrt(2) cell from any rx
    const auto rings = interferer_subgroups({4, 4}, grid);
    double bound = 0.0;
    for (std::size_t i = 0; i < rings.size(); ++i) {
      const double dmin = 3.0 * static_cast<double>(i + 1) * cell - std::sqrt(2.0) * cell;
      bound += static_cast<double>(rings[i].size()) * Pp * cfg.G *
               static_cast<double>(Gk * Gk) * std::pow(dmin, -cfg.alpha);
    }
    CHECK(sigma.sigma.trace().real() <= bound * (1.0 + 1e-9));
    // ring-sum envelope: rho1 / G_k stays under the harmonic sum 8i/(3i)^2
    // after normalizing ring distances by the cluster side
    const double amax_ring = 3.0 / (3.0 - std::sqrt(2.0));  // (3i cell) / dmin_i
    double ring_sum = 0.0;
    for (std::size_t i = 1; i <= rings.size(); ++i)
      ring_sum += 8.0 * static_cast<double>(i) / (9.0 * static_cast<double>(i) * static_cast<double>(i));
    const double rho1_bound = (L / cell) * (L / cell) * (Pp / cfg.P) * static_cast<double>(Gk) *
                              amax_ring * amax_ring * ring_sum;
    CHECK(sigma.rho1 <= rho1_bound * (1.0 + 1e-9));
  }
}

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "loscap/channel.hpp"
#include "loscap/geometry.hpp"

namespace loscap {

/// Geometry and power context of one cooperative MIMO hop.
struct MimoGeometry {
  std::size_t N = 0;
  double D = 1.0;
  double L = 2.0;
  double lambda = 1e-2;
  double G = 1.0;
  double P = 1.0;
  double alpha = 2.0;
};

/// External interference with PSD covariance sigma and its normalized trace
/// moments rho1 = L^alpha/(N G P) tr(sigma), rho2 = L^(2 alpha)/(N (G P)^2) tr(sigma^2).
struct InterferenceModel {
  Eigen::MatrixXcd sigma;
  double rho1 = 0.0;
  double rho2 = 0.0;

  static InterferenceModel from_sigma(Eigen::MatrixXcd sigma, double L, double G, double P,
                                      double alpha = 2.0);
  static InterferenceModel none(std::size_t N);
};

/// Checks Hermitian symmetry and min eigenvalue >= -eps_psd where
/// eps_psd = 1e-9 * tr(sigma)/N (eigensolvers return tiny negatives).
bool is_psd(const Eigen::MatrixXcd& sigma);

std::pair<double, double> rho_moments(const Eigen::MatrixXcd& sigma, std::size_t N, double L,
                                      double G, double P, double alpha = 2.0);

/// log2 det(I + sigma + P H H*) - log2 det(I + sigma), via Cholesky of the
/// two (always positive definite) Hermitian matrices. This is the
/// worst-case-noise mutual information of the cluster MIMO channel and the
/// oracle side of the central inequality.
double mutual_information_gaussian(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& sigma,
                                   double P);

/// M = max{1, (D^2/(lambda L)) / (1 + (log2 D^2/(lambda L))^+)}: the
/// degrees-of-freedom limit of the cluster pair.
double dof_limit_M(double D, double L, double lambda);

/// Empirical eigenvalue moments of the three normalized Hermitian forms
/// entering the capacity bound chain.
struct EigenSummary {
  Eigen::VectorXd kappa;  // (L^a/GP)(sigma + P H H*)
  Eigen::VectorXd chi;    // (L^a/GP) sigma
  Eigen::VectorXd gamma;  // (L^a/G) H H*
  double e_kappa = 0.0, e_kappa2 = 0.0;
  double e_chi = 0.0, e_chi2 = 0.0;
  double e_gamma = 0.0, e_gamma2 = 0.0;

  static EigenSummary compute(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& sigma,
                              const MimoGeometry& geom);
};

struct MimoBound {
  double value = 0.0;     // bits per channel use, >= 0 (clamped when vacuous)
  double delta = 0.0;
  double M = 0.0;
  double prefactor = 0.0;     // delta^2 (E[chi]+E[gamma])^2 / (sqrt(E[chi^2])+sqrt(E[gamma^2]))^2
  double log_argument = 1.0;  // 1 + c((1-d)E[gamma]-d E[chi]) / (1 + c E[chi]), c = GP/L^alpha
};

/// Explicit capacity lower bound of the cooperative MIMO channel, i.e. the
/// final line of the eigenvalue chain
///   C >= N d^2 (E[chi]+E[gamma])^2 / (E[chi^2]^1/2 + E[gamma^2]^1/2)^2
///        * log2(1 + c((1-d)E[gamma] - d E[chi]) / (1 + c E[chi]))
/// evaluated with empirical moments. Reports 0 when the log argument drops
/// below 1 (a vacuous bound is still a valid lower bound).
MimoBound theorem2_bound(const ChannelMatrix& H, const InterferenceModel& interference,
                         double delta, const MimoGeometry& geom);

/// Best delta over the grid {0.05,...,0.95} plus the s^-2 prescription with
/// s = max(1, rho1/N).
MimoBound best_theorem2_bound(const ChannelMatrix& H, const InterferenceModel& interference,
                              const MimoGeometry& geom);

/// Paley-Zygmund check: lhs = fraction of values > (1-delta) * mean,
/// rhs = delta^2 E[v]^2 / E[v^2]; contract lhs >= rhs.
std::pair<double, double> paley_zygmund_lower(std::span<const double> values, double delta);

/// Lemma tr((sum A_i)^2) <= (sum tr^1/2(A_i^2))^2 for PSD A_i; returns (lhs, rhs).
std::pair<double, double> trace_sq_inequality(std::span<const Eigen::MatrixXcd> mats);

/// Covariance of the 9-TDMA interference seen by G_k receive nodes in cluster
/// v: every same-slot cluster contributes P' H_c H_c* with G_k active
/// transmitters drawn uniformly inside it.
InterferenceModel interference_covariance(std::span<const Point> rx, GridCoord v,
                                          const ClusterGrid& grid, std::size_t G_k, double Pprime,
                                          double L, const NetworkConfig& cfg, std::uint64_t seed);

}  // namespace loscap

#include "loscap/mimo.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "loscap/rng.hpp"

namespace loscap {

namespace {

double log2_det_cholesky(const Eigen::MatrixXcd& A) {
  Eigen::LLT<Eigen::MatrixXcd> llt(A);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("log2_det: matrix not positive definite");
  double acc = 0.0;
  const auto& Lm = llt.matrixLLT();
  for (Eigen::Index i = 0; i < A.rows(); ++i) acc += std::log2(Lm(i, i).real());
  return 2.0 * acc;
}

void require_hermitian(const Eigen::MatrixXcd& sigma) {
  if (sigma.rows() != sigma.cols()) throw std::invalid_argument("sigma must be square");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("sigma must be Hermitian");
}

}  // namespace

InterferenceModel InterferenceModel::from_sigma(Eigen::MatrixXcd sigma, double L, double G,
                                                double P, double alpha) {
  if (!is_psd(sigma)) throw std::invalid_argument("InterferenceModel: sigma must be PSD");
  InterferenceModel m;
  const std::size_t N = static_cast<std::size_t>(sigma.rows());
  std::tie(m.rho1, m.rho2) = rho_moments(sigma, N, L, G, P, alpha);
  m.sigma = std::move(sigma);
  return m;
}

InterferenceModel InterferenceModel::none(std::size_t N) {
  InterferenceModel m;
  m.sigma = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  return m;
}

bool is_psd(const Eigen::MatrixXcd& sigma) {
  if (sigma.rows() != sigma.cols()) return false;
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sigma, Eigen::EigenvaluesOnly);
  const double eps_psd = 1e-9 * std::abs(sigma.trace().real()) / static_cast<double>(sigma.rows());
  return es.eigenvalues().minCoeff() >= -eps_psd;
}

std::pair<double, double> rho_moments(const Eigen::MatrixXcd& sigma, std::size_t N, double L,
                                      double G, double P, double alpha) {
  if (sigma.rows() != sigma.cols() || static_cast<std::size_t>(sigma.rows()) != N)
    throw std::invalid_argument("rho_moments: dimension mismatch");
  const double La = std::pow(L, alpha);
  const double tr1 = sigma.trace().real();
  const double tr2 = (sigma * sigma).trace().real();
  const double rho1 = La / (static_cast<double>(N) * G * P) * tr1;
  const double rho2 = La * La / (static_cast<double>(N) * G * P * G * P) * tr2;
  return {rho1, rho2};
}

double mutual_information_gaussian(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& sigma,
                                   double P) {
  if (sigma.rows() != H.rows()) throw std::invalid_argument("mutual_information: dimension mismatch");
  require_hermitian(sigma);
  if (!is_psd(sigma)) throw std::invalid_argument("mutual_information: sigma must be PSD");
  const Eigen::Index N = H.rows();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N, N);
  const Eigen::MatrixXcd S = 0.5 * (sigma + sigma.adjoint().eval());
  const Eigen::MatrixXcd HHs = H * H.adjoint();
  return log2_det_cholesky(I + S + P * HHs) - log2_det_cholesky(I + S);
}

double dof_limit_M(double D, double L, double lambda) {
  if (!(D > 0.0 && L > 0.0 && lambda > 0.0)) throw std::invalid_argument("dof_limit_M: arguments must be > 0");
  if (!(L >= 2.0 * D)) throw std::invalid_argument("dof_limit_M: requires L >= 2D");
  const double r = D * D / (lambda * L);
  const double corr = 1.0 + std::max(0.0, std::log2(r));
  return std::max(1.0, r / corr);
}

EigenSummary EigenSummary::compute(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& sigma,
                                   const MimoGeometry& geom) {
  if (sigma.rows() != H.rows()) throw std::invalid_argument("EigenSummary: dimension mismatch");
  const double La = std::pow(geom.L, geom.alpha);
  const Eigen::MatrixXcd HHs = H * H.adjoint();
  EigenSummary s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  es.compute((La / (geom.G * geom.P)) * (sigma + geom.P * HHs), Eigen::EigenvaluesOnly);
  s.kappa = es.eigenvalues().cwiseMax(0.0);
  es.compute((La / (geom.G * geom.P)) * sigma, Eigen::EigenvaluesOnly);
  s.chi = es.eigenvalues().cwiseMax(0.0);
  es.compute((La / geom.G) * HHs, Eigen::EigenvaluesOnly);
  s.gamma = es.eigenvalues().cwiseMax(0.0);
  const double N = static_cast<double>(H.rows());
  s.e_kappa = s.kappa.mean();
  s.e_kappa2 = s.kappa.squaredNorm() / N;
  s.e_chi = s.chi.mean();
  s.e_chi2 = s.chi.squaredNorm() / N;
  s.e_gamma = s.gamma.mean();
  s.e_gamma2 = s.gamma.squaredNorm() / N;
  return s;
}

MimoBound theorem2_bound(const ChannelMatrix& H, const InterferenceModel& interference,
                         double delta, const MimoGeometry& geom) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("theorem2_bound: delta must be in [0, 1]");
  const EigenSummary s = EigenSummary::compute(H.entries, interference.sigma, geom);
  MimoBound b;
  b.delta = delta;
  b.M = dof_limit_M(geom.D, geom.L, geom.lambda);

  const double c = geom.G * geom.P / std::pow(geom.L, geom.alpha);
  const double num = (1.0 - delta) * s.e_gamma - delta * s.e_chi;
  b.log_argument = 1.0 + c * num / (1.0 + c * s.e_chi);

  const double denom = std::sqrt(s.e_chi2) + std::sqrt(s.e_gamma2);
  if (denom <= 0.0) return b;  // H = 0 and sigma = 0: nothing to bound
  const double mean_sum = s.e_chi + s.e_gamma;
  b.prefactor = delta * delta * mean_sum * mean_sum / (denom * denom);
  if (num <= 0.0) return b;  // vacuous: report 0 rather than a negative bound

  b.value = static_cast<double>(geom.N) * b.prefactor * std::log2(b.log_argument);
  return b;
}

MimoBound best_theorem2_bound(const ChannelMatrix& H, const InterferenceModel& interference,
                              const MimoGeometry& geom) {
  MimoBound best;
  best.value = -1.0;
  for (int i = 1; i <= 19; ++i) {
    const MimoBound b = theorem2_bound(H, interference, 0.05 * i, geom);
    if (b.value > best.value) best = b;
  }
  const double s = std::max(1.0, interference.rho1 / static_cast<double>(geom.N));
  const MimoBound b = theorem2_bound(H, interference, std::min(1.0, 1.0 / (s * s)), geom);
  if (b.value > best.value) best = b;
  return best;
}

std::pair<double, double> paley_zygmund_lower(std::span<const double> values, double delta) {
  if (values.empty()) throw std::invalid_argument("paley_zygmund_lower: empty input");
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("paley_zygmund_lower: delta must be in [0, 1]");
  double m1 = 0.0, m2 = 0.0;
  for (double v : values) {
    if (v < 0.0) throw std::invalid_argument("paley_zygmund_lower: values must be nonnegative");
    m1 += v;
    m2 += v * v;
  }
  const double n = static_cast<double>(values.size());
  m1 /= n;
  m2 /= n;
  std::size_t count = 0;
  for (double v : values)
    if (v > (1.0 - delta) * m1) ++count;
  const double lhs = static_cast<double>(count) / n;
  const double rhs = m2 > 0.0 ? delta * delta * m1 * m1 / m2 : 0.0;
  return {lhs, rhs};
}

std::pair<double, double> trace_sq_inequality(std::span<const Eigen::MatrixXcd> mats) {
  if (mats.empty()) throw std::invalid_argument("trace_sq_inequality: empty input");
  const Eigen::Index dim = mats.front().rows();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  double rhs_root = 0.0;
  for (const auto& A : mats) {
    if (A.rows() != dim || A.cols() != dim) throw std::invalid_argument("trace_sq_inequality: dimension mismatch");
    if (!is_psd(A)) throw std::invalid_argument("trace_sq_inequality: inputs must be PSD");
    sum += A;
    rhs_root += std::sqrt((A * A).trace().real());
  }
  const double lhs = (sum * sum).trace().real();
  return {lhs, rhs_root * rhs_root};
}

InterferenceModel interference_covariance(std::span<const Point> rx, GridCoord v,
                                          const ClusterGrid& grid, std::size_t G_k, double Pprime,
                                          double L, const NetworkConfig& cfg, std::uint64_t seed) {
  const Eigen::Index N = static_cast<Eigen::Index>(rx.size());
  Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(N, N);
  const auto rings = interferer_subgroups(v, grid);
  Rng rng(seed);
  std::size_t cluster_idx = 0;
  for (const auto& ring : rings) {
    for (const auto& c : ring) {
      Rng sub = rng.fork(cluster_idx++);
      std::vector<Point> active(G_k);
      const double x0 = static_cast<double>(c.col) * grid.cell;
      const double y0 = static_cast<double>(c.row) * grid.cell;
      for (auto& p : active) p = {x0 + sub.uniform(0.0, grid.cell), y0 + sub.uniform(0.0, grid.cell)};
      const ChannelMatrix Hc = channel_matrix(active, rx, cfg);
      sigma.noalias() += Pprime * (Hc.entries * Hc.entries.adjoint());
    }
  }
  return InterferenceModel::from_sigma(std::move(sigma), L, cfg.G, cfg.P, cfg.alpha);
}

}  // namespace loscap

#include "loscap/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace loscap {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void validate_network(const NetworkConfig& cfg, double spacing_safety) {
  if (cfg.n < 1) throw std::invalid_argument("NetworkConfig: n must be >= 1");
  if (!(cfg.alpha >= 2.0)) throw std::invalid_argument("NetworkConfig: alpha must be >= 2");
  if (!(cfg.P > 0.0)) throw std::invalid_argument("NetworkConfig: P must be > 0");
  if (!(cfg.G > 0.0)) throw std::invalid_argument("NetworkConfig: G must be > 0");
  if (!(cfg.mu > 0.5)) throw std::invalid_argument("NetworkConfig: mu must be > 1/2");
  if (!(spacing_safety > 0.0 && spacing_safety < 1.0))
    throw std::invalid_argument("NetworkConfig: spacing safety factor must be in (0, 1)");
  const double spacing = cfg.regime == Regime::Dense ? 1.0 / std::sqrt(static_cast<double>(cfg.n)) : 1.0;
  if (!(cfg.lambda < spacing_safety * spacing))
    throw std::invalid_argument("NetworkConfig: lambda must be below the inter-node spacing scale");
  if (!(cfg.lambda >= std::pow(static_cast<double>(cfg.n), -cfg.mu)))
    throw std::invalid_argument("NetworkConfig: lambda must be >= n^-mu");
  if (cfg.Q < 1) throw std::invalid_argument("NetworkConfig: Q must be >= 1");
}

double friis_gain(double lambda, double Gl) {
  if (!(lambda > 0.0)) throw std::invalid_argument("friis_gain: lambda must be > 0");
  if (!(Gl > 0.0)) throw std::invalid_argument("friis_gain: Gl must be > 0");
  return lambda * lambda * Gl / (16.0 * kPi * kPi);
}

double gl_dense(double lambda, std::size_t n) {
  if (!(lambda > 0.0) || n < 1) throw std::invalid_argument("gl_dense: bad arguments");
  return 1.0 / (lambda * lambda * static_cast<double>(n));
}

double gl_extended(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("gl_extended: lambda must be > 0");
  return 1.0 / (lambda * lambda);
}

std::complex<double> channel_gain(double d, const NetworkConfig& cfg) {
  if (!(d > 0.0)) throw std::domain_error("channel_gain: far-field assumption violated (d must be > 0)");
  if (!(cfg.lambda > 0.0)) throw std::invalid_argument("channel_gain: lambda must be > 0");
  const double mag = std::sqrt(cfg.G) * std::pow(d, -cfg.alpha / 2.0);
  const long double frac =
      std::fmod(static_cast<long double>(d), static_cast<long double>(cfg.lambda)) /
      static_cast<long double>(cfg.lambda);
  const double phase = -2.0 * kPi * static_cast<double>(frac);
  return std::polar(mag, phase);
}

ChannelMatrix channel_matrix(std::span<const Point> tx, std::span<const Point> rx,
                             const NetworkConfig& cfg) {
  ChannelMatrix H;
  H.lambda = cfg.lambda;
  H.alpha = cfg.alpha;
  H.G = cfg.G;
  H.entries.resize(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
  for (std::size_t i = 0; i < rx.size(); ++i)
    for (std::size_t k = 0; k < tx.size(); ++k)
      H.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          channel_gain(dist(rx[i], tx[k]), cfg);
  return H;
}

Eigen::MatrixXcd normalized_channel(const ChannelMatrix& H, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("normalized_channel: L must be > 0");
  return (std::pow(L, H.alpha / 2.0) / std::sqrt(H.G)) * H.entries;
}

double a_min_bound(double D, double L, double alpha) {
  return std::pow(1.0 + std::sqrt(2.0) * D / L, -alpha / 2.0);
}

double a_max_bound(double D, double L, double alpha) {
  if (!(L > std::sqrt(2.0) * D)) throw std::invalid_argument("a_max_bound: requires L > sqrt(2) D");
  return std::pow(1.0 - std::sqrt(2.0) * D / L, -alpha / 2.0);
}

}  // namespace loscap

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

#include "loscap/geometry.hpp"

namespace loscap {

enum class Regime { Dense, Extended };

/// Network-wide parameters. `G` is the aggregate Friis gain (an input, not
/// derived from antenna counts; see friis_gain and the gl_* helpers for the
/// per-regime conventions). `mu` bounds the wavelength from below via
/// lambda >= n^-mu and `Q` is the fixed quantization rate of phase 3.
struct NetworkConfig {
  std::size_t n = 1;
  Regime regime = Regime::Dense;
  double lambda = 1e-3;
  double alpha = 2.0;
  double P = 1.0;
  double G = 1.0;
  double mu = 10.0;
  int Q = 3;
};

/// Throws unless the config satisfies the far-field and gain constraints:
/// lambda < safety * spacing (spacing n^-1/2 dense, 1 extended),
/// lambda >= n^-mu with mu > 1/2, alpha >= 2, P > 0, G > 0.
void validate_network(const NetworkConfig& cfg, double spacing_safety = 0.5);

/// Friis aggregate gain lambda^2 * Gl / (16 pi^2).
double friis_gain(double lambda, double Gl);

/// Antenna-gain-product conventions that keep G = Theta(n^-1) in dense
/// networks and G = Theta(1) in extended networks.
double gl_dense(double lambda, std::size_t n);
double gl_extended(double lambda);

/// LOS gain sqrt(G) * d^(-alpha/2) * exp(-j 2 pi d / lambda). The phase is
/// reduced mod lambda in extended precision first; at desk scale d/lambda
/// reaches 1e6 and a naive reduction loses exactly the phase the Q-term
/// statistics depend on.
std::complex<double> channel_gain(double d, const NetworkConfig& cfg);

struct ChannelMatrix {
  Eigen::MatrixXcd entries;  // rows = receivers, cols = transmitters
  double lambda = 0.0;
  double alpha = 2.0;
  double G = 1.0;
};

ChannelMatrix channel_matrix(std::span<const Point> tx, std::span<const Point> rx,
                             const NetworkConfig& cfg);

/// F = (L^(alpha/2) / sqrt(G)) * H, whose entry magnitudes (L/d)^(alpha/2)
/// sit in [a_min, a_max] independent of scale.
Eigen::MatrixXcd normalized_channel(const ChannelMatrix& H, double L);

/// Entry-magnitude bounds for a ClusterPair from the distance extremes
/// d in [L - sqrt(2) D, L + sqrt(2) D].
double a_min_bound(double D, double L, double alpha);
double a_max_bound(double D, double L, double alpha);

}  // namespace loscap

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace loscap {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double dist(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

/// n i.i.d.-uniform points in [0, side]^2, reproducible per seed.
struct Placement {
  std::vector<Point> points;
  double side = 1.0;
  std::uint64_t seed = 0;
};

Placement place_uniform(std::size_t n, double side, std::uint64_t seed);

/// Two horizontally aligned D x D squares whose centers are L >= 2D apart,
/// holding N transmit and N receive nodes. Coordinates use the bottom-left
/// corner of the transmit square as the origin, so the receive square spans
/// [L, L+D] x [0, D].
struct ClusterPair {
  double D = 1.0;
  double L = 2.0;
  std::size_t N = 0;
  std::vector<Point> tx;
  std::vector<Point> rx;

  static ClusterPair sample(std::size_t N, double D, double L, std::uint64_t seed);
  static ClusterPair from_points(double D, double L, std::vector<Point> tx, std::vector<Point> rx);
};

/// 9-TDMA slot of the cluster at (row, col): 3*(row mod 3) + (col mod 3) + 1.
int tdma9_slot(long row, long col);

struct GridCoord {
  long row = 0;
  long col = 0;
};

/// Rectangular grid of equal square clusters of side `cell`.
struct ClusterGrid {
  long rows = 0;
  long cols = 0;
  double cell = 1.0;
};

/// Splits the same-slot clusters around v into rings. Ring i (1-based, stored
/// at index i-1) holds at most 8i clusters, all with center distance >= 3i*cell.
std::vector<std::vector<GridCoord>> interferer_subgroups(GridCoord v, const ClusterGrid& grid);

enum class Region { Gamma1, Gamma2 };

/// Gamma1 iff the infinite line through zu, zv meets the receive square
/// (corner touches count as Gamma1). Exact sign predicate, no tolerance.
Region classify_region(const Point& zu, const Point& zv, const ClusterPair& pair);

/// Signed angle at zs swept between the rays toward zu and zv, in (-pi, pi].
/// Swapping zu and zv negates it; collinear configurations give 0 or pi.
double angle_phi(const Point& zu, const Point& zv, const Point& zs);

/// min |angle_phi| over the four corners of the receive square. Requires
/// (zu, zv) in Gamma2; by the corner-extremality argument this lower-bounds
/// |angle_phi(zu, zv, zs)| over every zs in the receive square.
double phi_corner_min(const Point& zu, const Point& zv, const ClusterPair& pair);

/// Nested square partitions of a placement. Level h is the whole square and
/// level k subdivides every level-(k+1) cell; cells of level k target area
/// areas[k] * side^2. Per-side cell counts round down, edge cells absorb the
/// remainder strip.
struct ClusterHierarchy {
  struct Cell {
    double x0, y0, x1, y1;
    int parent = -1;
  };
  struct Level {
    std::vector<Cell> cells;
    std::vector<int> membership;  // node index -> cell index
  };

  std::vector<double> areas;   // A_k = n_k / n, ascending, areas.back() == 1
  std::vector<Level> levels;   // levels[k] has cells of area ~ areas[k]

  static ClusterHierarchy build(const Placement& placement, const std::vector<double>& areas);
};

}  // namespace loscap

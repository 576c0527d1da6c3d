#include "loscap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "loscap/rng.hpp"

namespace loscap {

Placement place_uniform(std::size_t n, double side, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("place_uniform: n must be >= 1");
  if (!(side > 0.0)) throw std::invalid_argument("place_uniform: side must be > 0");
  Rng rng(seed);
  Placement p;
  p.side = side;
  p.seed = seed;
  p.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(0.0, side);
    const double y = rng.uniform(0.0, side);
    p.points.push_back({x, y});
  }
  return p;
}

ClusterPair ClusterPair::sample(std::size_t N, double D, double L, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("ClusterPair: N must be >= 1");
  if (!(D > 0.0)) throw std::invalid_argument("ClusterPair: D must be > 0");
  if (!(L >= 2.0 * D)) throw std::invalid_argument("ClusterPair: requires L >= 2D");
  Rng rng(seed);
  ClusterPair pair;
  pair.D = D;
  pair.L = L;
  pair.N = N;
  pair.tx.reserve(N);
  pair.rx.reserve(N);
  for (std::size_t i = 0; i < N; ++i) pair.tx.push_back({rng.uniform(0.0, D), rng.uniform(0.0, D)});
  for (std::size_t i = 0; i < N; ++i) pair.rx.push_back({L + rng.uniform(0.0, D), rng.uniform(0.0, D)});
  return pair;
}

ClusterPair ClusterPair::from_points(double D, double L, std::vector<Point> tx, std::vector<Point> rx) {
  if (!(D > 0.0)) throw std::invalid_argument("ClusterPair: D must be > 0");
  if (!(L >= 2.0 * D)) throw std::invalid_argument("ClusterPair: requires L >= 2D");
  if (tx.size() != rx.size() || tx.empty()) throw std::invalid_argument("ClusterPair: tx/rx must be nonempty and equal-sized");
  for (const auto& p : tx)
    if (p.x < 0.0 || p.x > D || p.y < 0.0 || p.y > D) throw std::invalid_argument("ClusterPair: tx point outside C_T");
  for (const auto& p : rx)
    if (p.x < L || p.x > L + D || p.y < 0.0 || p.y > D) throw std::invalid_argument("ClusterPair: rx point outside C_R");
  ClusterPair pair;
  pair.D = D;
  pair.L = L;
  pair.N = tx.size();
  pair.tx = std::move(tx);
  pair.rx = std::move(rx);
  return pair;
}

int tdma9_slot(long row, long col) {
  const long r = ((row % 3) + 3) % 3;
  const long c = ((col % 3) + 3) % 3;
  return static_cast<int>(3 * r + c) + 1;
}

std::vector<std::vector<GridCoord>> interferer_subgroups(GridCoord v, const ClusterGrid& grid) {
  if (v.row < 0 || v.row >= grid.rows || v.col < 0 || v.col >= grid.cols)
    throw std::invalid_argument("interferer_subgroups: v outside grid");
  const int slot = tdma9_slot(v.row, v.col);
  std::vector<std::vector<GridCoord>> rings;
  for (long r = 0; r < grid.rows; ++r) {
    for (long c = 0; c < grid.cols; ++c) {
      if (r == v.row && c == v.col) continue;
      if (tdma9_slot(r, c) != slot) continue;
      // same slot => both offsets are multiples of 3
      const long cheb = std::max(std::labs(r - v.row), std::labs(c - v.col));
      const std::size_t ring = static_cast<std::size_t>(cheb / 3);
      if (rings.size() < ring) rings.resize(ring);
      rings[ring - 1].push_back({r, c});
    }
  }
  return rings;
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

Region classify_region(const Point& zu, const Point& zv, const ClusterPair& pair) {
  if (zu.x == zv.x && zu.y == zv.y) throw std::invalid_argument("classify_region: coincident points");
  const Point corners[4] = {{pair.L, 0.0},
                            {pair.L + pair.D, 0.0},
                            {pair.L + pair.D, pair.D},
                            {pair.L, pair.D}};
  bool pos = false, neg = false, zero = false;
  for (const auto& c : corners) {
    const double s = cross(zu, zv, c);
    if (s > 0.0) pos = true;
    else if (s < 0.0) neg = true;
    else zero = true;
  }
  // all corners strictly on one side <=> the line misses the square
  if (zero || (pos && neg)) return Region::Gamma1;
  return Region::Gamma2;
}

double angle_phi(const Point& zu, const Point& zv, const Point& zs) {
  const double ux = zu.x - zs.x, uy = zu.y - zs.y;
  const double vx = zv.x - zs.x, vy = zv.y - zs.y;
  if ((ux == 0.0 && uy == 0.0) || (vx == 0.0 && vy == 0.0))
    throw std::invalid_argument("angle_phi: vertex coincides with an endpoint");
  const double cr = ux * vy - uy * vx;
  const double dt = ux * vx + uy * vy;
  double phi = std::atan2(cr, dt);
  if (phi == -3.14159265358979323846) phi = 3.14159265358979323846;  // range (-pi, pi]
  return phi;
}

double phi_corner_min(const Point& zu, const Point& zv, const ClusterPair& pair) {
  if (classify_region(zu, zv, pair) != Region::Gamma2)
    throw std::invalid_argument("phi_corner_min: (zu, zv) must lie in Gamma2");
  const Point corners[4] = {{pair.L, 0.0},
                            {pair.L + pair.D, 0.0},
                            {pair.L + pair.D, pair.D},
                            {pair.L, pair.D}};
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : corners) m = std::min(m, std::abs(angle_phi(zu, zv, c)));
  return m;
}

ClusterHierarchy ClusterHierarchy::build(const Placement& placement, const std::vector<double>& areas) {
  if (areas.empty()) throw std::invalid_argument("ClusterHierarchy: areas empty");
  for (std::size_t k = 0; k + 1 < areas.size(); ++k)
    if (!(areas[k] <= areas[k + 1])) throw std::invalid_argument("ClusterHierarchy: areas must be ascending");
  if (std::abs(areas.back() - 1.0) > 1e-12) throw std::invalid_argument("ClusterHierarchy: top area must be 1");

  ClusterHierarchy h;
  h.areas = areas;
  const std::size_t nlevels = areas.size();
  h.levels.resize(nlevels);

  const double side = placement.side;
  const std::size_t n = placement.points.size();

  // top level: the whole square
  auto& top = h.levels[nlevels - 1];
  top.cells.push_back({0.0, 0.0, side, side, -1});
  top.membership.assign(n, 0);

  for (std::size_t lvl = nlevels - 1; lvl-- > 0;) {
    const double target = side * std::sqrt(areas[lvl]);
    auto& cur = h.levels[lvl];
    const auto& up = h.levels[lvl + 1];
    // subdivide every parent cell independently so nesting holds exactly
    std::vector<std::vector<int>> child_base(up.cells.size());
    for (std::size_t pc = 0; pc < up.cells.size(); ++pc) {
      const auto& cell = up.cells[pc];
      const long gx = std::max(1L, static_cast<long>(std::floor((cell.x1 - cell.x0) / target)));
      const long gy = std::max(1L, static_cast<long>(std::floor((cell.y1 - cell.y0) / target)));
      child_base[pc].reserve(static_cast<std::size_t>(gx * gy));
      for (long iy = 0; iy < gy; ++iy) {
        for (long ix = 0; ix < gx; ++ix) {
          Cell c;
          c.x0 = cell.x0 + target * static_cast<double>(ix);
          c.y0 = cell.y0 + target * static_cast<double>(iy);
          c.x1 = (ix == gx - 1) ? cell.x1 : cell.x0 + target * static_cast<double>(ix + 1);
          c.y1 = (iy == gy - 1) ? cell.y1 : cell.y0 + target * static_cast<double>(iy + 1);
          c.parent = static_cast<int>(pc);
          child_base[pc].push_back(static_cast<int>(cur.cells.size()));
          cur.cells.push_back(c);
        }
      }
    }
    cur.membership.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      const int pc = up.membership[i];
      const auto& cell = up.cells[static_cast<std::size_t>(pc)];
      const long gx = std::max(1L, static_cast<long>(std::floor((cell.x1 - cell.x0) / target)));
      const long gy = std::max(1L, static_cast<long>(std::floor((cell.y1 - cell.y0) / target)));
      const auto& p = placement.points[i];
      long ix = static_cast<long>(std::floor((p.x - cell.x0) / target));
      long iy = static_cast<long>(std::floor((p.y - cell.y0) / target));
      ix = std::clamp(ix, 0L, gx - 1);
      iy = std::clamp(iy, 0L, gy - 1);
      cur.membership[i] = child_base[pc][static_cast<std::size_t>(iy * gx + ix)];
    }
  }
  return h;
}

}  // namespace loscap

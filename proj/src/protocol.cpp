#include "loscap/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include "loscap/geometry.hpp"

namespace loscap {

std::vector<std::vector<std::pair<int, int>>> subphase_pairing(int n_prev, int m) {
  if (n_prev < 1 || m < 1 || m > n_prev) throw std::invalid_argument("subphase_pairing: requires 1 <= m <= n_prev");
  std::vector<std::vector<std::pair<int, int>>> phases;
  phases.reserve(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n_prev));
    for (int s = 1; s <= n_prev; ++s) pairs.emplace_back(s, (s + i) % n_prev + 1);
    phases.push_back(std::move(pairs));
  }
  return phases;
}

std::vector<int> relay_set(int n_prev, int s, int m) {
  if (n_prev < 1 || m < 1 || m > n_prev) throw std::invalid_argument("relay_set: requires 1 <= m <= n_prev");
  if (s < 1 || s > n_prev) throw std::invalid_argument("relay_set: source out of range");
  std::vector<int> relays;
  relays.reserve(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) relays.push_back((s - 1 + i) % n_prev + 1);
  return relays;
}

LevelSim simulate_level(int k, const HierarchyPlan& plan, double Q, bool ceiled) {
  if (k < 1 || k > plan.h) throw std::invalid_argument("simulate_level: level out of range");
  const double n_prev = static_cast<double>(plan.n_seq[static_cast<std::size_t>(k - 1)]);
  const double n_cur = static_cast<double>(plan.n_seq[static_cast<std::size_t>(k)]);
  const double m = static_cast<double>(plan.m_seq[static_cast<std::size_t>(k - 1)]);
  const double R = plan.rates[static_cast<std::size_t>(k - 1)];
  const double T_prev = plan.throughputs[static_cast<std::size_t>(k - 1)];

  LevelSim sim;
  sim.schedule.level = k;
  sim.schedule.subphases = static_cast<int>(m);

  // cluster grid inside the level-k square; 9-TDMA over row/col mod 3
  const long clusters = std::max(1L, std::lround(n_cur / n_prev));
  const long side = std::max(1L, static_cast<long>(std::ceil(std::sqrt(static_cast<double>(clusters)))));
  sim.schedule.clusters = clusters;
  sim.schedule.grid_side = side;
  sim.schedule.slot_of_cluster.resize(static_cast<std::size_t>(clusters));
  sim.tdma_valid = true;
  for (long c = 0; c < clusters; ++c)
    sim.schedule.slot_of_cluster[static_cast<std::size_t>(c)] = tdma9_slot(c / side, c % side);
  for (long c1 = 0; c1 < clusters && sim.tdma_valid; ++c1) {
    for (long c2 = c1 + 1; c2 < clusters; ++c2) {
      if (sim.schedule.slot_of_cluster[static_cast<std::size_t>(c1)] !=
          sim.schedule.slot_of_cluster[static_cast<std::size_t>(c2)])
        continue;
      const long dr = std::labs(c1 / side - c2 / side);
      const long dc = std::labs(c1 % side - c2 % side);
      if (std::max(dr, dc) < 3) {
        sim.tdma_valid = false;
        break;
      }
    }
  }

  // subblock conservation ledger over one cluster's pairings and relay sets:
  // each source splits its message into m subblocks, one per relay
  const int np = static_cast<int>(n_prev);
  const int mi = static_cast<int>(m);
  sim.conserved = true;
  if (np >= 1 && mi >= 1 && mi <= np) {
    const auto phases = subphase_pairing(np, mi);
    std::vector<int> received(static_cast<std::size_t>(np), 0);
    for (const auto& phase : phases) {
      std::vector<int> as_src(static_cast<std::size_t>(np), 0);
      std::vector<int> as_dst(static_cast<std::size_t>(np), 0);
      for (const auto& [s, d] : phase) {
        ++as_src[static_cast<std::size_t>(s - 1)];
        ++as_dst[static_cast<std::size_t>(d - 1)];
      }
      for (int v = 0; v < np; ++v)
        if (as_src[static_cast<std::size_t>(v)] != 1 || as_dst[static_cast<std::size_t>(v)] != 1)
          sim.conserved = false;
    }
    for (int s = 1; s <= np; ++s) {
      const auto relays = relay_set(np, s, mi);
      if (static_cast<int>(relays.size()) != mi) sim.conserved = false;
      for (int r : relays) ++received[static_cast<std::size_t>(r - 1)];
    }
    // cyclic relay sets load every node with exactly m subblocks
    for (int v = 0; v < np; ++v)
      if (received[static_cast<std::size_t>(v)] != mi) sim.conserved = false;
  }

  // slot accounting; the real-valued branch mirrors the recursion term-by-term
  const double sub1 = n_prev / T_prev;                 // per subphase, phase 1
  const double shot2 = m / R;                          // per source-destination pair, phase 2
  const double sub3 = Q * m * n_prev / (R * T_prev);   // per subphase, phase 3
  if (ceiled) {
    sim.schedule.phase1 = 9.0 * m * std::ceil(sub1);
    sim.schedule.phase2 = n_cur * std::ceil(shot2);
    sim.schedule.phase3 = 9.0 * m * std::ceil(sub3);
    sim.max_ceil_gap = std::max({std::ceil(sub1) - sub1, std::ceil(shot2) - shot2, std::ceil(sub3) - sub3});
  } else {
    sim.schedule.phase1 = 9.0 * m * n_prev / T_prev;
    sim.schedule.phase2 = n_cur * m / R;
    sim.schedule.phase3 = 9.0 * Q * m * m * n_prev / (R * T_prev);
  }
  sim.throughput = n_cur * m / sim.schedule.total();
  return sim;
}

}  // namespace loscap

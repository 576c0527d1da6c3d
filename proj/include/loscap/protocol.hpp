#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "loscap/planner.hpp"

namespace loscap {

/// Phase-1/3 intra-cluster traffic pattern: m subphases, and in subphase i
/// node s sends to ((s + i) mod n_prev) + 1 (1-based). Every subphase is a
/// permutation: each node is exactly one source and one destination.
std::vector<std::vector<std::pair<int, int>>> subphase_pairing(int n_prev, int m);

/// Relay set of source s inside its cluster: the m cyclically-next node
/// indices after s (1-based), {8, 1, 2} for n_prev = 8, s = 7, m = 3.
std::vector<int> relay_set(int n_prev, int s, int m);

/// Slot ledger of one level of the three-phase scheme.
struct PhaseSchedule {
  int level = 1;
  double phase1 = 0.0;  // 9-TDMA message distribution
  double phase2 = 0.0;  // successive cluster-to-cluster MIMO shots
  double phase3 = 0.0;  // 9-TDMA quantized-observation collection
  long clusters = 0;
  long grid_side = 0;
  int subphases = 0;
  std::vector<int> slot_of_cluster;  // 9-TDMA slot per cluster, row-major
  double total() const { return phase1 + phase2 + phase3; }
};

struct LevelSim {
  PhaseSchedule schedule;
  double throughput = 0.0;
  bool conserved = false;     // per-pair subblock ledger balanced
  bool tdma_valid = false;    // no same-slot clusters at grid distance < 3
  double max_ceil_gap = 0.0;  // largest per-unit ceiled-minus-real slot gap
};

/// Executes level k of the plan symbolically: builds the cluster grid, the
/// 9-TDMA slot map, the subphase pairings and relay sets, and counts time
/// slots. With ceiled = false the slot arithmetic reproduces the
/// three-denominator recursion exactly; with ceiled = true each subphase
/// (phases 1/3) and each source-destination MIMO shot (phase 2) rounds up to
/// whole slots.
LevelSim simulate_level(int k, const HierarchyPlan& plan, double Q, bool ceiled = false);

}  // namespace loscap

#pragma once

// Decentralized subspace pursuit for joint support recovery.
//
// ssp_run simulates simultaneous subspace pursuit with every node talking to
// every other node. dcsp_run simulates the collaborative variant in which
// long messages (correlations, projection coefficients) stay inside each
// node's neighborhood G_l, while only K-length local support estimates and
// residual norms go network-wide; the global estimate is fused by majority
// vote. Both drivers run the nodes in lockstep through a Fabric, so the
// returned wire counter is the exact scalar traffic of the run.
//
// Each node computes its own copy of every network-wide quantity from what
// it received, summing in ascending node order. Nodes therefore agree
// bit-for-bit, which is checked after every fusion step.

#include "dcsp/linalg.hpp"
#include "dcsp/network.hpp"
#include "dcsp/problem.hpp"

#include <cstdint>
#include <vector>

namespace dcsp {

/// One node's iterate.
struct NodeState {
  NodeId id = 0;
  IndexSet support;       ///< S^t, the fused global estimate
  IndexSet candidate;     ///< S~_l^t, at most 2K indices
  IndexSet local_support; ///< Gamma_l^t (collaborative variant only)
  Vector residual;
  double residual_sq_norm = 0.0;

  void set_residual(Vector r) {
    residual = std::move(r);
    residual_sq_norm = residual.squaredNorm();
  }
};

/// Snapshot taken at the end of initialization (iteration 0) and of every
/// iteration, including the one that triggers the stop.
struct IterationLog {
  std::size_t iteration = 0;
  IndexSet support;  ///< S^t as computed this iteration, before any revert
  double residual_sum = 0.0;
  std::vector<std::size_t> candidate_sizes;  ///< |S~_l^t| per node; empty at 0
  std::vector<IndexSet> local_supports;      ///< Gamma_l^t per node (collaborative only)
  std::uint64_t charged_scalars = 0;         ///< cumulative
  bool accepted = true;                      ///< false on the stopping iteration
};

struct RunResult {
  IndexSet support;
  std::size_t iterations = 0;
  WireCounter wire;
  /// Network residual sum after initialization and after each iteration.
  std::vector<double> residual_trace;
  std::vector<IterationLog> log;
  /// True when max_iters ran out before the stop rule fired.
  bool hit_max_iters = false;
};

/// 3K.
std::size_t default_max_iters(std::size_t k) noexcept;

/// Simultaneous subspace pursuit over a full mesh. max_iters = 0 selects
/// default_max_iters. Throws RankDeficient if a projection degenerates.
RunResult ssp_run(const ProblemInstance& instance, std::size_t max_iters = 0);

/// Collaborative subspace pursuit with majority-vote fusion. The topology
/// must have one neighborhood per node of the instance.
RunResult dcsp_run(const ProblemInstance& instance, const Topology& topology,
                   std::size_t max_iters = 0);

/// Largest number of candidate supports exhaustive_decoder will scan.
inline constexpr std::uint64_t kExhaustiveCap = 1'000'000;

/// Support minimizing sum_l ||resid(y_l, A_l(S))||^2 over all K-subsets,
/// lexicographically first on ties. Rank-deficient subsets are skipped.
/// Throws TooLarge if C(N, K) exceeds cap.
IndexSet exhaustive_decoder(const ProblemInstance& instance, std::uint64_t cap = kExhaustiveCap);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

}  // namespace dcsp

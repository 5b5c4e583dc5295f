#pragma once

#include "dcsp/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace dcsp {

struct ProblemConfig {
  std::size_t n = 200;  ///< ambient dimension
  std::size_t m = 50;   ///< measurements per node
  std::size_t k = 10;   ///< sparsity
  std::size_t l = 6;    ///< node count
  std::uint64_t seed = 0;
};

/// Throws ConfigError on hard violations (K < 1, K > N, L < 2, M < 1).
/// Returns human-readable warnings for soft ones (M < 2K, M >= N).
std::vector<std::string> validate(const ProblemConfig& config);

/// One draw of the joint-sparsity model y_l = A_l x_l, all x_l sharing the
/// support true_support.
struct ProblemInstance {
  ProblemConfig config;
  std::vector<Matrix> dictionaries;
  std::vector<Vector> signals;
  std::vector<Vector> measurements;
  IndexSet true_support;

  std::size_t node_count() const noexcept { return dictionaries.size(); }

  /// Checks shapes, shared support and y_l = A_l x_l; throws ConfigError.
  void check() const;
};

/// Gaussian dictionaries, uniform support, Gaussian nonzeros, noiseless
/// measurements. Fully determined by config.seed. Warnings from validate()
/// go to std::clog.
ProblemInstance generate(const ProblemConfig& config);

/// Builds an instance from explicit dictionaries and signals (measurements
/// computed). The support is read off the first signal.
ProblemInstance make_instance(std::vector<Matrix> dictionaries, std::vector<Vector> signals,
                              std::uint64_t seed = 0);

bool success(const IndexSet& estimate, const ProblemInstance& instance);

// Text dump: a "dcsp-instance 1" line, a "N M K L seed" line, the support on
// one line, then per node the M x N dictionary row-major (one row per line),
// the signal, and the measurement vector. Reals are C99 hex floats so a
// round trip is bit-exact.
void save_instance(const ProblemInstance& instance, const std::filesystem::path& path);
ProblemInstance load_instance(const std::filesystem::path& path);

}  // namespace dcsp

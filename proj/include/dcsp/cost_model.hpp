#pragma once

// Closed-form message counts (scalars on the wire, pairwise) for the
// decentralized joint-support algorithms.

#include <cstdint>
#include <string_view>

namespace dcsp {

struct CostParams {
  std::uint64_t n = 0;  ///< ambient dimension
  std::uint64_t k = 0;  ///< sparsity
  std::uint64_t l = 0;  ///< node count
  std::uint64_t g = 0;  ///< neighborhood size, including the node itself
  std::uint64_t t = 0;  ///< iteration count of the algorithm being costed
};

/// Throws ConfigError unless N, K, L, g >= 1 and g <= L.
void validate(const CostParams& p);

enum class CostAlgorithm { JspJomp, Somp, Dcomp, Ssp, Dcsp };

std::string_view to_string(CostAlgorithm a) noexcept;
/// Accepts jsp, jomp, jsp_jomp, somp, dcomp, ssp, dcsp (case-insensitive).
CostAlgorithm cost_algorithm_from_string(std::string_view name);

/// [N + T(N + 2K + 1)](L - 1)L
std::uint64_t cost_ssp(const CostParams& p);

/// N L(g - 1) + K(L - 1)L + T L[(g - 1)(N + 2K) + (K + 1)(L - 1)]
std::uint64_t cost_dcsp(const CostParams& p);

/// Arbitrary topology: degree_excess_sum = sum_l (g_l - 1).
std::uint64_t cost_dcsp_general(std::uint64_t n, std::uint64_t k, std::uint64_t l,
                                std::uint64_t degree_excess_sum, std::uint64_t t);

/// Closed-form count for any algorithm. SOMP and JSP/JOMP ignore T.
std::uint64_t message_cost(CostAlgorithm algorithm, const CostParams& p);

}  // namespace dcsp

#include "dcsp/cost_model.hpp"

#include "dcsp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace dcsp {

void validate(const CostParams& p) {
  if (p.n == 0 || p.k == 0 || p.l == 0 || p.g == 0) {
    throw ConfigError("cost: N, K, L and g must be positive");
  }
  if (p.g > p.l) throw ConfigError("cost: g exceeds L");
}

std::string_view to_string(CostAlgorithm a) noexcept {
  switch (a) {
    case CostAlgorithm::JspJomp: return "jsp_jomp";
    case CostAlgorithm::Somp: return "somp";
    case CostAlgorithm::Dcomp: return "dcomp";
    case CostAlgorithm::Ssp: return "ssp";
    case CostAlgorithm::Dcsp: return "dcsp";
  }
  return "?";
}

CostAlgorithm cost_algorithm_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "jsp" || lower == "jomp" || lower == "jsp_jomp") return CostAlgorithm::JspJomp;
  if (lower == "somp") return CostAlgorithm::Somp;
  if (lower == "dcomp") return CostAlgorithm::Dcomp;
  if (lower == "ssp") return CostAlgorithm::Ssp;
  if (lower == "dcsp") return CostAlgorithm::Dcsp;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

std::uint64_t cost_ssp(const CostParams& p) {
  return (p.n + p.t * (p.n + 2 * p.k + 1)) * (p.l - 1) * p.l;
}

std::uint64_t cost_dcsp_general(std::uint64_t n, std::uint64_t k, std::uint64_t l,
                                std::uint64_t degree_excess_sum, std::uint64_t t) {
  return n * degree_excess_sum + k * (l - 1) * l +
         t * ((n + 2 * k) * degree_excess_sum + (k + 1) * (l - 1) * l);
}

std::uint64_t cost_dcsp(const CostParams& p) {
  return cost_dcsp_general(p.n, p.k, p.l, p.l * (p.g - 1), p.t);
}

std::uint64_t message_cost(CostAlgorithm algorithm, const CostParams& p) {
  switch (algorithm) {
    case CostAlgorithm::JspJomp: return p.k * (p.l - 1) * p.l;
    case CostAlgorithm::Somp: return p.k * p.n * (p.l - 1) * p.l;
    case CostAlgorithm::Dcomp: return p.t * ((p.g - 1) * p.n * p.l + (p.l - 1) * p.l);
    case CostAlgorithm::Ssp: return cost_ssp(p);
    case CostAlgorithm::Dcsp:
      return (p.g - 1) * p.n * p.l + p.k * (p.l - 1) * p.l +
             p.t * p.l * ((p.g - 1) * (p.n + 2 * p.k) + (p.k + 1) * (p.l - 1));
  }
  return 0;
}

}  // namespace dcsp

#pragma once

// Monte Carlo sweeps: recovery frequency against measurements per node, and
// message count / iteration count against network size.

#include "dcsp/cost_model.hpp"
#include "dcsp/problem.hpp"
#include "dcsp/pursuit.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dcsp {

enum class Figure {
  SuccessVsMeasurements,  ///< fig1: sweep M
  MessagesVsNodes,        ///< fig2: sweep L
  IterationsVsNodes,      ///< fig3: sweep L
};

std::string_view to_string(Figure f) noexcept;
/// Name of the swept parameter, "M" or "L".
std::string_view sweep_parameter(Figure f) noexcept;

struct ExperimentConfig {
  std::size_t n = 200;
  std::size_t m = 50;
  std::size_t k = 10;
  std::size_t l = 6;
  std::size_t g = 3;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::size_t max_iters = 0;  ///< 0: 3K
  std::uint64_t dcomp_iterations = 0;  ///< assumed T for the DCOMP curve; 0: K
  std::vector<CostAlgorithm> algorithms;
  std::optional<std::vector<std::size_t>> sweep;
  std::optional<std::string> adjacency;  ///< explicit DCSP topology (fixed L only)
  std::filesystem::path out;

  bool m_set = false;
  bool l_set = false;
};

/// Full-size defaults for the figure.
ExperimentConfig default_config(Figure f);

/// Applies one key=value setting. Keys: N M K L g trials seed jobs
/// max_iters dcomp_T algorithms range adjacency out. Throws ConfigError.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Reads key=value lines ('#' starts a comment) into config.
void load_config_file(ExperimentConfig& config, const std::filesystem::path& path);

/// "a:b:s", "a:b" (step 1), "a,b,c" or a single value.
std::vector<std::size_t> parse_range(std::string_view text);

/// Sweep values after defaults; validates the whole config.
std::vector<std::size_t> resolve_sweep(Figure f, const ExperimentConfig& config);

/// base ^ hash(value, trial), re-mixed with attempt for redraws.
std::uint64_t trial_seed(std::uint64_t base, std::size_t value, std::size_t trial,
                         std::size_t attempt = 0) noexcept;

struct AlgorithmStats {
  CostAlgorithm algorithm = CostAlgorithm::Ssp;
  bool simulated = true;
  std::size_t successes = 0;
  double success_frequency = 0.0;
  double mean_iterations = 0.0;
  double mean_messages = 0.0;    ///< empirical, charged scalars
  double analytic_messages = 0.0;  ///< closed form at each trial's own T
};

struct SweepRow {
  std::size_t value = 0;
  std::size_t trials = 0;
  std::size_t aborted = 0;
  std::vector<AlgorithmStats> stats;

  const AlgorithmStats& at(CostAlgorithm a) const;
};

std::vector<SweepRow> run_sweep(Figure f, const ExperimentConfig& config);

inline std::vector<SweepRow> run_fig1(const ExperimentConfig& c) {
  return run_sweep(Figure::SuccessVsMeasurements, c);
}
inline std::vector<SweepRow> run_fig2(const ExperimentConfig& c) {
  return run_sweep(Figure::MessagesVsNodes, c);
}
inline std::vector<SweepRow> run_fig3(const ExperimentConfig& c) {
  return run_sweep(Figure::IterationsVsNodes, c);
}

/// CSV: '#'-prefixed comment lines recording the configuration, a header
/// row, then one row per swept value.
void write_csv(std::ostream& os, Figure f, const ExperimentConfig& config,
               const std::vector<SweepRow>& rows);
/// Whitespace-separated columns for gnuplot, header as a comment.
void write_dat(std::ostream& os, Figure f, const ExperimentConfig& config,
               const std::vector<SweepRow>& rows);

struct TrialResult {
  IndexSet support;
  bool success = false;
  std::size_t iterations = 0;
  std::uint64_t messages = 0;
  std::uint64_t analytic_messages = 0;
  RunResult run;
};

/// One verbose run on a freshly generated instance. When transcript is not
/// null, per-iteration supports, residual sums and wire tallies are written
/// there.
TrialResult run_single_trial(const ProblemConfig& problem, std::size_t g, CostAlgorithm algorithm,
                             std::size_t max_iters, std::ostream* transcript);

}  // namespace dcsp

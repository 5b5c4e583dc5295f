#include "dcsp/experiment.hpp"

#include "dcsp/errors.hpp"
#include "dcsp/random.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace dcsp {

namespace {

constexpr std::size_t kMaxAttempts = 100;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("setting " + std::string(key) + ": expected a nonnegative integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

bool is_simulated(CostAlgorithm a) { return a == CostAlgorithm::Ssp || a == CostAlgorithm::Dcsp; }

struct AlgorithmOutcome {
  bool success = false;
  std::size_t iterations = 0;
  std::uint64_t messages = 0;
  std::uint64_t analytic = 0;
};

struct TrialOutcome {
  std::size_t aborted = 0;
  std::vector<AlgorithmOutcome> per_algorithm;
};

struct PointSetup {
  ProblemConfig problem;
  std::size_t g = 0;
  std::optional<Topology> topology;  // DCSP neighborhoods
};

PointSetup point_setup(Figure f, const ExperimentConfig& c, std::size_t value) {
  PointSetup p;
  p.problem = ProblemConfig{c.n, c.m, c.k, c.l, 0};
  if (f == Figure::SuccessVsMeasurements) {
    p.problem.m = value;
  } else {
    p.problem.l = value;
  }
  // Networks smaller than the neighborhood collaborate fully.
  p.g = std::min(c.g, p.problem.l);
  if (c.adjacency) {
    p.topology = topology_from_adjacency(p.problem.l, *c.adjacency);
  } else {
    p.topology = ring_topology(p.problem.l, p.g);
  }
  return p;
}

TrialOutcome run_trial(const PointSetup& setup, const ExperimentConfig& c, std::size_t value,
                       std::size_t trial) {
  TrialOutcome outcome;
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt == kMaxAttempts) {
      throw Error("trial " + std::to_string(trial) + " at " + std::to_string(value) +
                  ": rank deficient on every redraw");
    }
    ProblemConfig problem = setup.problem;
    problem.seed = trial_seed(c.seed, value, trial, attempt);
    try {
      const auto inst = generate(problem);
      outcome.per_algorithm.clear();
      for (auto a : c.algorithms) {
        if (!is_simulated(a)) continue;
        const RunResult run = a == CostAlgorithm::Ssp ? ssp_run(inst, c.max_iters)
                                                      : dcsp_run(inst, *setup.topology, c.max_iters);
        AlgorithmOutcome o;
        o.success = success(run.support, inst);
        o.iterations = run.iterations;
        o.messages = run.wire.charged();
        if (a == CostAlgorithm::Ssp) {
          o.analytic = cost_ssp({problem.n, problem.k, problem.l, problem.l, run.iterations});
        } else {
          o.analytic = cost_dcsp_general(problem.n, problem.k, problem.l,
                                         setup.topology->degree_excess_sum(), run.iterations);
        }
        outcome.per_algorithm.push_back(o);
      }
      return outcome;
    } catch (const RankDeficient&) {
      ++outcome.aborted;
    }
  }
}

/// Runs fn(i) for i in [0, count) on `jobs` threads; results land by index so
/// aggregation order never depends on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::string algorithms_text(const std::vector<CostAlgorithm>& algorithms) {
  std::string out;
  for (auto a : algorithms) {
    if (!out.empty()) out += ',';
    out += to_string(a);
  }
  return out;
}

std::vector<std::string> column_names(Figure f, const ExperimentConfig& c) {
  std::vector<std::string> cols{std::string(sweep_parameter(f)), "trials", "aborted"};
  for (auto a : c.algorithms) {
    const std::string name(to_string(a));
    if (is_simulated(a)) {
      cols.push_back(name + "_success");
      cols.push_back(name + "_mean_iters");
      cols.push_back(name + "_mean_messages");
    }
    cols.push_back(name + "_analytic_messages");
  }
  return cols;
}

std::vector<std::string> row_values(const SweepRow& row) {
  auto fmt = [](double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
  };
  std::vector<std::string> out{std::to_string(row.value), std::to_string(row.trials),
                               std::to_string(row.aborted)};
  for (const auto& s : row.stats) {
    if (s.simulated) {
      out.push_back(fmt(s.success_frequency));
      out.push_back(fmt(s.mean_iterations));
      out.push_back(fmt(s.mean_messages));
    }
    out.push_back(fmt(s.analytic_messages));
  }
  return out;
}

void write_preamble(std::ostream& os, Figure f, const ExperimentConfig& c) {
  const auto dcomp_t = c.dcomp_iterations ? c.dcomp_iterations : c.k;
  os << "# dcsp " << to_string(f) << " sweep over " << sweep_parameter(f) << '\n'
     << "# N=" << c.n << " K=" << c.k << " g=" << c.g;
  if (f == Figure::SuccessVsMeasurements) {
    os << " L=" << c.l;
  } else {
    os << " M=" << c.m;
  }
  os << " trials=" << c.trials << " seed=" << c.seed
     << " max_iters=" << (c.max_iters ? c.max_iters : default_max_iters(c.k)) << '\n'
     << "# algorithms=" << algorithms_text(c.algorithms) << '\n';
  if (c.adjacency) os << "# dcsp topology adjacency=" << *c.adjacency << '\n';
  os << "# *_mean_messages: empirical scalars on the wire, averaged over trials\n"
     << "# ssp/dcsp *_analytic_messages: closed form at each trial's own iteration count, averaged\n";
  for (auto a : c.algorithms) {
    if (a == CostAlgorithm::Dcomp) {
      os << "# dcomp_analytic_messages: analytic only, assumes T_DCOMP=" << dcomp_t << '\n';
    } else if (a == CostAlgorithm::Somp || a == CostAlgorithm::JspJomp) {
      os << "# " << to_string(a) << "_analytic_messages: analytic only, no T dependence\n";
    }
  }
}

}  // namespace

std::string_view to_string(Figure f) noexcept {
  switch (f) {
    case Figure::SuccessVsMeasurements: return "fig1";
    case Figure::MessagesVsNodes: return "fig2";
    case Figure::IterationsVsNodes: return "fig3";
  }
  return "?";
}

std::string_view sweep_parameter(Figure f) noexcept {
  return f == Figure::SuccessVsMeasurements ? "M" : "L";
}

ExperimentConfig default_config(Figure f) {
  ExperimentConfig c;
  c.n = 200;
  c.k = 10;
  c.g = 3;
  if (f == Figure::SuccessVsMeasurements) {
    c.l = 6;
    c.m = 50;
    c.trials = 500;
    c.algorithms = {CostAlgorithm::Ssp, CostAlgorithm::Dcsp};
  } else {
    c.m = 50;
    c.l = 6;
    c.trials = 100;
    c.algorithms = f == Figure::MessagesVsNodes
                       ? std::vector{CostAlgorithm::Ssp, CostAlgorithm::Dcsp,
                                     CostAlgorithm::Somp, CostAlgorithm::Dcomp}
                       : std::vector{CostAlgorithm::Ssp, CostAlgorithm::Dcsp};
  }
  return c;
}

std::vector<std::size_t> parse_range(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("range: empty");
  std::vector<std::size_t> out;
  if (text.find(':') != std::string_view::npos) {
    std::vector<std::size_t> parts;
    std::string_view rest = text;
    while (true) {
      const auto colon = rest.find(':');
      parts.push_back(parse_number<std::size_t>("range", rest.substr(0, colon)));
      if (colon == std::string_view::npos) break;
      rest = rest.substr(colon + 1);
    }
    if (parts.size() < 2 || parts.size() > 3) throw ConfigError("range: expected start:stop[:step]");
    const auto step = parts.size() == 3 ? parts[2] : 1;
    if (step == 0) throw ConfigError("range: zero step");
    if (parts[1] < parts[0]) throw ConfigError("range: stop below start");
    for (auto v = parts[0]; v <= parts[1]; v += step) out.push_back(v);
  } else {
    std::string_view rest = text;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      out.push_back(parse_number<std::size_t>("range", rest.substr(0, comma)));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  }
  return out;
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "N") {
    c.n = parse_number<std::size_t>(key, value);
  } else if (key == "M") {
    c.m = parse_number<std::size_t>(key, value);
    c.m_set = true;
  } else if (key == "K") {
    c.k = parse_number<std::size_t>(key, value);
  } else if (key == "L") {
    c.l = parse_number<std::size_t>(key, value);
    c.l_set = true;
  } else if (key == "g") {
    c.g = parse_number<std::size_t>(key, value);
  } else if (key == "trials") {
    c.trials = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "jobs") {
    c.jobs = parse_number<std::size_t>(key, value);
  } else if (key == "max_iters") {
    c.max_iters = parse_number<std::size_t>(key, value);
  } else if (key == "dcomp_T") {
    c.dcomp_iterations = parse_number<std::uint64_t>(key, value);
  } else if (key == "algorithms") {
    c.algorithms.clear();
    std::string_view rest = value;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto name = trim(rest.substr(0, comma));
      if (!name.empty()) c.algorithms.push_back(cost_algorithm_from_string(name));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  } else if (key == "range") {
    c.sweep = parse_range(value);
  } else if (key == "adjacency") {
    c.adjacency = std::string(value);
  } else if (key == "out") {
    c.out = std::filesystem::path(std::string(value));
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

void load_config_file(ExperimentConfig& c, const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::string line;
  for (int lineno = 1; std::getline(is, line); ++lineno) {
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    apply_setting(c, view.substr(0, eq), view.substr(eq + 1));
  }
}

std::vector<std::size_t> resolve_sweep(Figure f, const ExperimentConfig& c) {
  std::vector<std::size_t> values;
  if (c.sweep) {
    values = *c.sweep;
  } else if (f == Figure::SuccessVsMeasurements) {
    values = c.m_set ? std::vector{c.m} : parse_range("22:50:2");
  } else {
    values = c.l_set ? std::vector{c.l} : parse_range("5:40:5");
  }
  if (values.empty()) throw ConfigError("sweep: no values");
  if (c.trials < 1) throw ConfigError("trials must be at least 1");
  if (c.algorithms.empty()) throw ConfigError("no algorithms selected");
  for (auto a : c.algorithms) {
    if (!is_simulated(a) && f != Figure::MessagesVsNodes) {
      throw ConfigError(std::string(to_string(a)) + " is analytic only; use it with fig2");
    }
  }
  if (c.adjacency && f != Figure::SuccessVsMeasurements) {
    throw ConfigError("adjacency requires a fixed L (fig1)");
  }
  if (c.g < 2) throw ConfigError("g must be at least 2");
  for (auto v : values) {
    ProblemConfig p{c.n, c.m, c.k, c.l, 0};
    (f == Figure::SuccessVsMeasurements ? p.m : p.l) = v;
    validate(p);
  }
  return values;
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t value, std::size_t trial,
                         std::size_t attempt) noexcept {
  std::uint64_t s = base ^ mix64(mix64(static_cast<std::uint64_t>(value)) + trial);
  if (attempt != 0) s = mix64(s ^ mix64(attempt));
  return s;
}

const AlgorithmStats& SweepRow::at(CostAlgorithm a) const {
  for (const auto& s : stats) {
    if (s.algorithm == a) return s;
  }
  throw std::out_of_range("SweepRow: algorithm not in sweep");
}

std::vector<SweepRow> run_sweep(Figure f, const ExperimentConfig& c) {
  const auto values = resolve_sweep(f, c);
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (auto value : values) {
    const auto setup = point_setup(f, c, value);
    std::vector<TrialOutcome> outcomes(c.trials);
    parallel_for(c.trials, c.jobs,
                 [&](std::size_t t) { outcomes[t] = run_trial(setup, c, value, t); });

    SweepRow row;
    row.value = value;
    row.trials = c.trials;
    std::size_t sim_index = 0;
    for (auto a : c.algorithms) {
      AlgorithmStats s;
      s.algorithm = a;
      s.simulated = is_simulated(a);
      if (s.simulated) {
        double iters = 0, msgs = 0, analytic = 0;
        for (const auto& o : outcomes) {
          const auto& r = o.per_algorithm[sim_index];
          s.successes += r.success ? 1 : 0;
          iters += static_cast<double>(r.iterations);
          msgs += static_cast<double>(r.messages);
          analytic += static_cast<double>(r.analytic);
        }
        const auto n = static_cast<double>(c.trials);
        s.success_frequency = static_cast<double>(s.successes) / n;
        s.mean_iterations = iters / n;
        s.mean_messages = msgs / n;
        s.analytic_messages = analytic / n;
        ++sim_index;
      } else {
        const auto& p = setup.problem;
        const std::uint64_t t = c.dcomp_iterations ? c.dcomp_iterations : c.k;
        s.analytic_messages = static_cast<double>(message_cost(a, {p.n, p.k, p.l, setup.g, t}));
      }
      row.stats.push_back(s);
    }
    for (const auto& o : outcomes) row.aborted += o.aborted;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_csv(std::ostream& os, Figure f, const ExperimentConfig& c,
               const std::vector<SweepRow>& rows) {
  write_preamble(os, f, c);
  const auto cols = column_names(f, c);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& row : rows) {
    const auto vals = row_values(row);
    for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << vals[i];
    os << '\n';
  }
}

void write_dat(std::ostream& os, Figure f, const ExperimentConfig& c,
               const std::vector<SweepRow>& rows) {
  write_preamble(os, f, c);
  const auto cols = column_names(f, c);
  os << '#';
  for (const auto& col : cols) os << ' ' << col;
  os << '\n';
  for (const auto& row : rows) {
    const auto vals = row_values(row);
    for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? " " : "") << vals[i];
    os << '\n';
  }
}

namespace {

std::string set_text(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out + "}";
}

}  // namespace

TrialResult run_single_trial(const ProblemConfig& problem, std::size_t g, CostAlgorithm algorithm,
                             std::size_t max_iters, std::ostream* transcript) {
  if (!is_simulated(algorithm)) {
    throw ConfigError(std::string(to_string(algorithm)) + " has no simulator");
  }
  const auto inst = generate(problem);
  TrialResult result;
  std::optional<Topology> topology;
  if (algorithm == CostAlgorithm::Ssp) {
    result.run = ssp_run(inst, max_iters);
    result.analytic_messages =
        cost_ssp({problem.n, problem.k, problem.l, problem.l, result.run.iterations});
  } else {
    topology = ring_topology(problem.l, g);
    result.run = dcsp_run(inst, *topology, max_iters);
    result.analytic_messages = cost_dcsp_general(problem.n, problem.k, problem.l,
                                                 topology->degree_excess_sum(),
                                                 result.run.iterations);
  }
  result.support = result.run.support;
  result.success = success(result.support, inst);
  result.iterations = result.run.iterations;
  result.messages = result.run.wire.charged();

  if (transcript) {
    auto& os = *transcript;
    os << std::setprecision(17);
    os << "algorithm " << to_string(algorithm) << " N=" << problem.n << " M=" << problem.m
       << " K=" << problem.k << " L=" << problem.l;
    if (topology) os << " g=" << g;
    os << " seed=" << problem.seed << '\n';
    os << "true support " << set_text(inst.true_support) << '\n';
    if (topology) {
      for (std::size_t l = 1; l <= topology->node_count(); ++l) {
        os << "G_" << l << " = " << set_text(topology->neighborhood(l)) << '\n';
      }
    }
    for (const auto& it : result.run.log) {
      os << "iteration " << it.iteration << (it.accepted ? "" : " (stop, reverted)") << '\n'
         << "  support " << set_text(it.support) << '\n'
         << "  residual sum " << it.residual_sum << '\n';
      if (!it.candidate_sizes.empty()) {
        os << "  candidate sizes";
        for (auto s : it.candidate_sizes) os << ' ' << s;
        os << '\n';
      }
      for (std::size_t l = 0; l < it.local_supports.size(); ++l) {
        os << "  local support node " << l + 1 << ' ' << set_text(it.local_supports[l]) << '\n';
      }
      os << "  charged scalars so far " << it.charged_scalars << '\n';
    }
    os << "wire rounds\n";
    for (const auto& r : result.run.wire.rounds()) {
      os << "  " << r.step << ' '
         << (r.channel == Channel::Neighbor    ? "neighbor"
             : r.channel == Channel::Broadcast ? "broadcast"
                                               : "uncharged")
         << ' ' << r.scalars << '\n';
    }
    os << "final support " << set_text(result.support) << '\n'
       << "success " << (result.success ? "yes" : "no") << '\n'
       << "iterations " << result.iterations << (result.run.hit_max_iters ? " (max_iters)" : "")
       << '\n'
       << "messages neighbor=" << result.run.wire.neighbor_scalars()
       << " broadcast=" << result.run.wire.broadcast_scalars()
       << " charged=" << result.messages << " analytic=" << result.analytic_messages
       << " uncharged=" << result.run.wire.uncharged_scalars() << '\n';
  }
  return result;
}

}  // namespace dcsp

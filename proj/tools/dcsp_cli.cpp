// dcsp: Monte Carlo harness for decentralized joint support recovery.
//
//   dcsp fig1 [--range 22:50:2] [--trials 500] ...   success rate vs M
//   dcsp fig2 [--range 5:40:5] ...                   messages vs L
//   dcsp fig3 ...                                    iterations vs L
//   dcsp trial --algorithm dcsp --seed 7 ...         verbose single run
//   dcsp cost --T 3 ...                              closed-form message counts
//
// Settings come from built-in defaults, then --config FILE (key=value lines),
// then explicit flags.

#include "dcsp/cost_model.hpp"
#include "dcsp/errors.hpp"
#include "dcsp/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

struct Setting {
  std::string key;
  std::string value;
  CLI::Option* option = nullptr;
};

/// Flags shared by every subcommand, captured as text and applied through
/// the same path as config-file entries.
class Settings {
 public:
  void add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    auto& s = *settings_.emplace_back(std::make_unique<Setting>());
    s.key = key;
    s.option = app->add_option(flag, s.value, help);
  }

  void add_common(CLI::App* app) {
    add(app, "--N", "N", "ambient dimension");
    add(app, "--M", "M", "measurements per node");
    add(app, "--K", "K", "sparsity");
    add(app, "--L", "L", "number of nodes");
    add(app, "--g", "g", "neighborhood size including the node itself");
    add(app, "--seed", "seed", "base seed");
    add(app, "--max-iters", "max_iters", "iteration cap (default 3K)");
    app->add_option("--config", config_path_, "key=value settings file; flags win")
        ->check(CLI::ExistingFile);
  }

  void add_sweep(CLI::App* app) {
    add(app, "--trials", "trials", "trials per sweep point");
    add(app, "--algorithms", "algorithms", "comma list: ssp,dcsp[,somp,dcomp,jsp] (fig2)");
    add(app, "--jobs", "jobs", "worker threads");
    add(app, "--out", "out", "CSV output path; a .dat companion is written next to it");
    add(app, "--range", "range", "sweep values: start:stop[:step] or a,b,c");
    add(app, "--dcomp-T", "dcomp_T", "iteration count assumed for the DCOMP analytic curve");
    add(app, "--adjacency", "adjacency", "explicit DCSP neighborhoods, e.g. '1:2,3;2:3,4'");
  }

  void apply(dcsp::ExperimentConfig& config) const {
    if (!config_path_.empty()) dcsp::load_config_file(config, config_path_);
    for (const auto& s : settings_) {
      if (s->option->count() > 0) dcsp::apply_setting(config, s->key, s->value);
    }
  }

 private:
  std::vector<std::unique_ptr<Setting>> settings_;
  std::string config_path_;
};

int run_figure(dcsp::Figure figure, const Settings& settings) {
  auto config = dcsp::default_config(figure);
  settings.apply(config);
  const auto rows = dcsp::run_sweep(figure, config);
  if (config.out.empty()) {
    dcsp::write_csv(std::cout, figure, config, rows);
    return 0;
  }
  std::ofstream csv(config.out);
  if (!csv) throw dcsp::ConfigError("cannot write " + config.out.string());
  dcsp::write_csv(csv, figure, config, rows);
  auto dat_path = config.out;
  dat_path.replace_extension(".dat");
  std::ofstream dat(dat_path);
  if (!dat) throw dcsp::ConfigError("cannot write " + dat_path.string());
  dcsp::write_dat(dat, figure, config, rows);
  std::cerr << "wrote " << config.out.string() << " and " << dat_path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized subspace pursuit simulator"};
  app.require_subcommand(1);

  Settings fig_settings[3];
  const dcsp::Figure figures[3] = {dcsp::Figure::SuccessVsMeasurements,
                                   dcsp::Figure::MessagesVsNodes,
                                   dcsp::Figure::IterationsVsNodes};
  const char* descriptions[3] = {"success frequency vs measurements per node",
                                 "messages on the wire vs network size",
                                 "iterations vs network size"};
  CLI::App* fig_cmds[3];
  for (int i = 0; i < 3; ++i) {
    fig_cmds[i] = app.add_subcommand(std::string(dcsp::to_string(figures[i])), descriptions[i]);
    fig_settings[i].add_common(fig_cmds[i]);
    fig_settings[i].add_sweep(fig_cmds[i]);
  }

  Settings trial_settings;
  auto* trial = app.add_subcommand("trial", "one verbose run with a per-iteration transcript");
  trial_settings.add_common(trial);
  std::string trial_algorithm = "dcsp";
  std::string dump_path;
  trial->add_option("--algorithm", trial_algorithm, "ssp or dcsp")->capture_default_str();
  trial->add_option("--dump", dump_path, "also write the generated instance to this file");

  Settings cost_settings;
  auto* cost = app.add_subcommand("cost", "closed-form message counts for every algorithm");
  cost_settings.add_common(cost);
  std::uint64_t cost_t = 1;
  cost->add_option("--T", cost_t, "iteration count plugged into T-dependent rows")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    for (int i = 0; i < 3; ++i) {
      if (*fig_cmds[i]) return run_figure(figures[i], fig_settings[i]);
    }
    if (*trial) {
      auto config = dcsp::default_config(dcsp::Figure::SuccessVsMeasurements);
      trial_settings.apply(config);
      const dcsp::ProblemConfig problem{config.n, config.m, config.k, config.l, config.seed};
      dcsp::validate(problem);
      const auto algorithm = dcsp::cost_algorithm_from_string(trial_algorithm);
      if (algorithm == dcsp::CostAlgorithm::Dcsp && (config.g < 2 || config.g > config.l)) {
        throw dcsp::ConfigError("trial: need 2 <= g <= L");
      }
      if (!dump_path.empty()) dcsp::save_instance(dcsp::generate(problem), dump_path);
      dcsp::run_single_trial(problem, config.g, algorithm, config.max_iters, &std::cout);
      return 0;
    }
    if (*cost) {
      auto config = dcsp::default_config(dcsp::Figure::SuccessVsMeasurements);
      cost_settings.apply(config);
      const dcsp::CostParams p{config.n, config.k, config.l, config.g, cost_t};
      dcsp::validate(p);
      std::cout << "# N=" << p.n << " K=" << p.k << " L=" << p.l << " g=" << p.g
                << " T=" << p.t << '\n'
                << "algorithm,messages\n";
      for (auto a : {dcsp::CostAlgorithm::JspJomp, dcsp::CostAlgorithm::Somp,
                     dcsp::CostAlgorithm::Dcomp, dcsp::CostAlgorithm::Ssp,
                     dcsp::CostAlgorithm::Dcsp}) {
        std::cout << dcsp::to_string(a) << ',' << dcsp::message_cost(a, p) << '\n';
      }
      return 0;
    }
  } catch (const dcsp::ConfigError& e) {
    std::cerr << "dcsp: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dcsp: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

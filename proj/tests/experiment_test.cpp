#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcsp/errors.hpp"
#include "dcsp/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dcsp;

namespace {

std::string csv(Figure f, const ExperimentConfig& c) {
  std::ostringstream os;
  write_csv(os, f, c, run_sweep(f, c));
  return os.str();
}

}  // namespace

TEST_CASE("range parsing") {
  CHECK(parse_range("22:50:2").size() == 15);
  CHECK(parse_range("5:40:5") == std::vector<std::size_t>{5, 10, 15, 20, 25, 30, 35, 40});
  CHECK(parse_range("3:5") == std::vector<std::size_t>{3, 4, 5});
  CHECK(parse_range("26, 30") == std::vector<std::size_t>{26, 30});
  CHECK(parse_range("7") == std::vector<std::size_t>{7});
  CHECK_THROWS_AS(parse_range("5:1"), ConfigError);
  CHECK_THROWS_AS(parse_range("1:5:0"), ConfigError);
  CHECK_THROWS_AS(parse_range("a"), ConfigError);
  CHECK_THROWS_AS(parse_range(""), ConfigError);
}

TEST_CASE("defaults") {
  const auto f1 = default_config(Figure::SuccessVsMeasurements);
  CHECK(f1.l == 6);
  CHECK(f1.trials == 500);
  CHECK(resolve_sweep(Figure::SuccessVsMeasurements, f1).front() == 22);
  CHECK(resolve_sweep(Figure::SuccessVsMeasurements, f1).back() == 50);
  const auto f2 = default_config(Figure::MessagesVsNodes);
  CHECK(f2.m == 50);
  CHECK(f2.trials == 100);
  CHECK(resolve_sweep(Figure::MessagesVsNodes, f2) == parse_range("5:40:5"));
  CHECK(f2.algorithms.size() == 4);
}

TEST_CASE("settings") {
  auto c = default_config(Figure::SuccessVsMeasurements);
  apply_setting(c, "M", "30");
  CHECK(resolve_sweep(Figure::SuccessVsMeasurements, c) == std::vector<std::size_t>{30});
  apply_setting(c, "range", "26,30");
  CHECK(resolve_sweep(Figure::SuccessVsMeasurements, c) == std::vector<std::size_t>{26, 30});
  apply_setting(c, "algorithms", "dcsp");
  CHECK(c.algorithms == std::vector{CostAlgorithm::Dcsp});
  CHECK_THROWS_AS(apply_setting(c, "bogus", "1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "trials", "-3"), ConfigError);

  apply_setting(c, "algorithms", "somp");
  CHECK_THROWS_AS(resolve_sweep(Figure::SuccessVsMeasurements, c), ConfigError);
  apply_setting(c, "algorithms", "ssp");
  apply_setting(c, "trials", "0");
  CHECK_THROWS_AS(resolve_sweep(Figure::SuccessVsMeasurements, c), ConfigError);
}

TEST_CASE("config file") {
  const auto path = std::filesystem::temp_directory_path() / "dcsp_experiment_test.cfg";
  {
    std::ofstream os(path);
    os << "# comment\nN = 80\nK=4 # trailing\n\nrange=10:12:2\nadjacency=1:2;2:3\n";
  }
  auto c = default_config(Figure::SuccessVsMeasurements);
  load_config_file(c, path);
  CHECK(c.n == 80);
  CHECK(c.k == 4);
  CHECK(*c.sweep == std::vector<std::size_t>{10, 12});
  CHECK(*c.adjacency == "1:2;2:3");
  {
    std::ofstream os(path);
    os << "N 80\n";
  }
  CHECK_THROWS_AS(load_config_file(c, path), ConfigError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config_file(c, path), ConfigError);
}

TEST_CASE("single-trial frequencies are 0 or 1") {
  auto c = default_config(Figure::SuccessVsMeasurements);
  c.trials = 1;
  c.sweep = std::vector<std::size_t>{22, 40};
  for (const auto& row : run_fig1(c)) {
    for (const auto& s : row.stats) {
      CHECK((s.success_frequency == 0.0 || s.success_frequency == 1.0));
    }
  }
}

TEST_CASE("single trial: empirical equals analytic") {
  auto c = default_config(Figure::MessagesVsNodes);
  c.trials = 1;
  c.sweep = std::vector<std::size_t>{5};
  const auto rows = run_fig2(c);
  REQUIRE(rows.size() == 1);
  for (auto a : {CostAlgorithm::Ssp, CostAlgorithm::Dcsp}) {
    CHECK(rows[0].at(a).mean_messages == rows[0].at(a).analytic_messages);
    CHECK(rows[0].at(a).mean_iterations >= 1.0);
  }
  CHECK(rows[0].at(CostAlgorithm::Somp).analytic_messages == 10.0 * 200 * 4 * 5);
  CHECK(rows[0].at(CostAlgorithm::Dcomp).analytic_messages == 10.0 * (2 * 200 * 5 + 4 * 5));
}

TEST_CASE("minimal network") {
  auto c = default_config(Figure::MessagesVsNodes);
  c.trials = 3;
  c.sweep = std::vector<std::size_t>{2};
  const auto rows = run_fig2(c);
  CHECK(rows[0].at(CostAlgorithm::Ssp).mean_messages > 0);
  CHECK(rows[0].at(CostAlgorithm::Dcsp).mean_messages > 0);
}

TEST_CASE("output is independent of the worker count") {
  auto c = default_config(Figure::SuccessVsMeasurements);
  c.trials = 12;
  c.sweep = std::vector<std::size_t>{24, 28};
  c.jobs = 1;
  const auto serial = csv(Figure::SuccessVsMeasurements, c);
  c.jobs = 4;
  CHECK(csv(Figure::SuccessVsMeasurements, c) == serial);
  CHECK(serial.find("M,trials,aborted,ssp_success,ssp_mean_iters") != std::string::npos);
}

TEST_CASE("persistently rank-deficient points give up after bounded redraws") {
  // With M < 2K the candidate set almost never fits in M rows.
  auto c = default_config(Figure::SuccessVsMeasurements);
  c.n = 30;
  c.k = 3;
  c.l = 2;
  c.g = 2;
  c.trials = 5;
  c.sweep = std::vector<std::size_t>{5};
  CHECK_THROWS_WITH_AS(run_fig1(c), doctest::Contains("rank deficient on every redraw"), Error);

  c.sweep = std::vector<std::size_t>{12};
  c.trials = 10;
  CHECK(run_fig1(c)[0].aborted == 0);
}

TEST_CASE("seeds") {
  CHECK(trial_seed(1, 26, 0) != trial_seed(1, 26, 1));
  CHECK(trial_seed(1, 26, 0) != trial_seed(1, 28, 0));
  CHECK(trial_seed(1, 26, 0) != trial_seed(1, 26, 0, 1));
  CHECK(trial_seed(1, 26, 3) == trial_seed(1, 26, 3));
}

TEST_CASE("verbose single trial") {
  const ProblemConfig p{200, 40, 10, 6, 2024};
  std::ostringstream a, b;
  const auto ra = run_single_trial(p, 3, CostAlgorithm::Dcsp, 0, &a);
  run_single_trial(p, 3, CostAlgorithm::Dcsp, 0, &b);
  CHECK(a.str() == b.str());
  CHECK(ra.success);
  CHECK(ra.messages == ra.analytic_messages);
  CHECK(a.str().find("final support") != std::string::npos);

  const auto ssp = run_single_trial(p, 6, CostAlgorithm::Ssp, 0, nullptr);
  const auto full = run_single_trial(p, 6, CostAlgorithm::Dcsp, 0, nullptr);
  CHECK(ssp.support == full.support);
  CHECK_THROWS_AS(run_single_trial(p, 3, CostAlgorithm::Somp, 0, nullptr), ConfigError);
}

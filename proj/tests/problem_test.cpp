#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcsp/errors.hpp"
#include "dcsp/problem.hpp"
#include "dcsp/random.hpp"

#include <cstdio>
#include <filesystem>

using namespace dcsp;

TEST_CASE("generate produces the documented shapes") {
  const auto inst = generate({200, 50, 10, 6, 42});
  CHECK(inst.node_count() == 6);
  CHECK(inst.true_support.size() == 10);
  for (std::size_t l = 0; l < 6; ++l) {
    CHECK(inst.dictionaries[l].rows() == 50);
    CHECK(inst.dictionaries[l].cols() == 200);
    CHECK(inst.measurements[l].size() == 50);
  }
  CHECK_NOTHROW(inst.check());
}

TEST_CASE("generate is deterministic in the seed") {
  const auto a = generate({60, 20, 4, 3, 9});
  const auto b = generate({60, 20, 4, 3, 9});
  const auto c = generate({60, 20, 4, 3, 10});
  CHECK(a.true_support == b.true_support);
  for (std::size_t l = 0; l < 3; ++l) {
    CHECK(a.dictionaries[l] == b.dictionaries[l]);
    CHECK(a.signals[l] == b.signals[l]);
    CHECK(a.measurements[l] == b.measurements[l]);
  }
  CHECK(a.dictionaries[0] != c.dictionaries[0]);
}

TEST_CASE("adding nodes leaves existing nodes' draws alone") {
  const auto small = generate({40, 12, 3, 3, 5});
  const auto big = generate({40, 12, 3, 7, 5});
  CHECK(small.true_support == big.true_support);
  for (std::size_t l = 0; l < 3; ++l) {
    CHECK(small.dictionaries[l] == big.dictionaries[l]);
    CHECK(small.signals[l] == big.signals[l]);
  }
}

TEST_CASE("K = N forces the full support") {
  const auto inst = generate({8, 8, 8, 2, 1});
  CHECK(inst.true_support == IndexSet::range(1, 8));
}

TEST_CASE("signals share the support and the support explains the data") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = generate({50, 16, 5, 4, seed});
    for (std::size_t l = 0; l < inst.node_count(); ++l) {
      for (Eigen::Index i = 0; i < 50; ++i) {
        CHECK((inst.signals[l](i) != 0.0) == inst.true_support.contains(static_cast<std::size_t>(i) + 1));
      }
      const auto& y = inst.measurements[l];
      CHECK(resid(y, column_submatrix(inst.dictionaries[l], inst.true_support)).norm() <=
            1e-9 * y.norm());
    }
  }
}

TEST_CASE("support is close to uniform") {
  // Each index should be picked about K/N of the time.
  std::vector<int> hits(20, 0);
  const int draws = 4000;
  for (int s = 0; s < draws; ++s) {
    for (auto i : generate({20, 6, 3, 2, static_cast<std::uint64_t>(s)}).true_support) ++hits[i - 1];
  }
  for (int h : hits) CHECK(std::abs(h / double(draws) - 0.15) < 0.03);
}

TEST_CASE("gaussian stream has unit moments") {
  RandomStream rng(77);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.gaussian();
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
  CHECK_THROWS(rng.below(0));
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(generate({10, 5, 0, 2, 0}), ConfigError);
  CHECK_THROWS_AS(generate({10, 5, 11, 2, 0}), ConfigError);
  CHECK_THROWS_AS(generate({10, 5, 2, 1, 0}), ConfigError);
  CHECK(validate(ProblemConfig{200, 15, 10, 6, 0}).size() == 1);  // M < 2K warns
  CHECK(validate(ProblemConfig{200, 50, 10, 6, 0}).empty());
}

TEST_CASE("success compares sets") {
  const auto inst = generate({30, 10, 3, 2, 4});
  CHECK(success(inst.true_support, inst));
  auto v = inst.true_support.indices();
  std::reverse(v.begin(), v.end());
  CHECK(success(IndexSet(v), inst));
  v.pop_back();
  CHECK_FALSE(success(IndexSet(v), inst));
}

TEST_CASE("make_instance reads the support off the signals") {
  Matrix a = Matrix::Identity(2, 2);
  Vector x(2);
  x << 0.0, 3.0;
  Vector x2(2);
  x2 << 0.0, -2.0;
  const auto inst = make_instance({a, a}, {x, x2});
  CHECK(inst.true_support == IndexSet{2});
  CHECK(inst.measurements[1](1) == -2.0);
  Vector bad(2);
  bad << 1.0, 0.0;
  CHECK_THROWS_AS(make_instance({a, a}, {x, bad}), ConfigError);
}

TEST_CASE("instance dump round trips bit-exactly") {
  const auto inst = generate({15, 6, 2, 3, 123});
  const auto path = std::filesystem::temp_directory_path() / "dcsp_problem_test.txt";
  save_instance(inst, path);
  const auto back = load_instance(path);
  std::filesystem::remove(path);
  CHECK(back.config.seed == 123);
  CHECK(back.true_support == inst.true_support);
  for (std::size_t l = 0; l < 3; ++l) {
    CHECK(back.dictionaries[l] == inst.dictionaries[l]);
    CHECK(back.signals[l] == inst.signals[l]);
    CHECK(back.measurements[l] == inst.measurements[l]);
  }
  CHECK_THROWS_AS(load_instance(path), ConfigError);
}

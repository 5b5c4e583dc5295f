#include "dcsp/problem.hpp"

#include "dcsp/errors.hpp"
#include "dcsp/random.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace dcsp {

namespace {

constexpr int kSignalRedraws = 16;

std::string describe(const ProblemConfig& c) {
  std::ostringstream os;
  os << "N=" << c.n << " M=" << c.m << " K=" << c.k << " L=" << c.l;
  return os.str();
}

}  // namespace

std::vector<std::string> validate(const ProblemConfig& c) {
  if (c.k < 1) throw ConfigError("problem: K must be at least 1");
  if (c.k > c.n) throw ConfigError("problem: K exceeds N (" + describe(c) + ")");
  if (c.l < 2) throw ConfigError("problem: L must be at least 2");
  if (c.m < 1) throw ConfigError("problem: M must be at least 1");
  std::vector<std::string> warnings;
  if (c.m < 2 * c.k) warnings.push_back("M < 2K, subspace pursuit candidate sets exceed M");
  if (c.m >= c.n) warnings.push_back("M >= N, the system is not underdetermined");
  return warnings;
}

void ProblemInstance::check() const {
  const auto& c = config;
  if (dictionaries.size() != c.l || signals.size() != c.l || measurements.size() != c.l) {
    throw ConfigError("instance: node count mismatch");
  }
  if (true_support.size() != c.k || (!true_support.empty() && true_support.back() > c.n)) {
    throw ConfigError("instance: support does not match K or N");
  }
  for (std::size_t l = 0; l < c.l; ++l) {
    const auto& a = dictionaries[l];
    const auto& x = signals[l];
    if (static_cast<std::size_t>(a.rows()) != c.m || static_cast<std::size_t>(a.cols()) != c.n ||
        static_cast<std::size_t>(x.size()) != c.n ||
        static_cast<std::size_t>(measurements[l].size()) != c.m) {
      throw ConfigError("instance: shape mismatch at node " + std::to_string(l + 1));
    }
    for (std::size_t i = 1; i <= c.n; ++i) {
      const bool nonzero = x[static_cast<Eigen::Index>(i - 1)] != 0.0;
      if (nonzero != true_support.contains(i)) {
        throw ConfigError("instance: signal at node " + std::to_string(l + 1) +
                          " does not match the shared support");
      }
    }
    if ((a * x - measurements[l]).norm() > 1e-12 * std::max(1.0, measurements[l].norm())) {
      throw ConfigError("instance: measurements are not A x");
    }
  }
}

ProblemInstance generate(const ProblemConfig& config) {
  for (const auto& w : validate(config)) {
    std::clog << "dcsp: warning: " << w << " (" << describe(config) << ")\n";
  }
  ProblemInstance inst;
  inst.config = config;
  const auto rows = static_cast<Eigen::Index>(config.m);
  const auto cols = static_cast<Eigen::Index>(config.n);

  {
    RandomStream rng(config.seed, StreamClass::Support, 0);
    std::vector<std::size_t> pool(config.n);
    for (std::size_t i = 0; i < config.n; ++i) pool[i] = i + 1;
    for (std::size_t i = 0; i < config.k; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(config.n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(config.k);
    inst.true_support = IndexSet(std::move(pool));
  }

  inst.dictionaries.reserve(config.l);
  inst.signals.reserve(config.l);
  inst.measurements.reserve(config.l);
  for (std::size_t l = 0; l < config.l; ++l) {
    RandomStream dict_rng(config.seed, StreamClass::Dictionary, l);
    Matrix a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = dict_rng.gaussian();
    }

    RandomStream sig_rng(config.seed, StreamClass::Signal, l);
    Vector x = Vector::Zero(cols);
    for (auto idx : inst.true_support) {
      double value = 0.0;
      for (int attempt = 0; value == 0.0; ++attempt) {
        if (attempt == kSignalRedraws) {
          throw DegenerateSignal("generate: nonzero entry drew 0.0 repeatedly");
        }
        value = sig_rng.gaussian();
      }
      x[static_cast<Eigen::Index>(idx - 1)] = value;
    }

    inst.measurements.push_back(a * x);
    inst.dictionaries.push_back(std::move(a));
    inst.signals.push_back(std::move(x));
  }
  return inst;
}

ProblemInstance make_instance(std::vector<Matrix> dictionaries, std::vector<Vector> signals,
                              std::uint64_t seed) {
  if (dictionaries.empty() || dictionaries.size() != signals.size()) {
    throw ConfigError("make_instance: need one signal per dictionary");
  }
  ProblemInstance inst;
  std::vector<std::size_t> support;
  for (Eigen::Index i = 0; i < signals.front().size(); ++i) {
    if (signals.front()[i] != 0.0) support.push_back(static_cast<std::size_t>(i) + 1);
  }
  inst.true_support = IndexSet(std::move(support));
  inst.config = ProblemConfig{static_cast<std::size_t>(dictionaries.front().cols()),
                              static_cast<std::size_t>(dictionaries.front().rows()),
                              inst.true_support.size(), dictionaries.size(), seed};
  for (std::size_t l = 0; l < dictionaries.size(); ++l) {
    inst.measurements.push_back(dictionaries[l] * signals[l]);
  }
  inst.dictionaries = std::move(dictionaries);
  inst.signals = std::move(signals);
  validate(inst.config);
  inst.check();
  return inst;
}

bool success(const IndexSet& estimate, const ProblemInstance& instance) {
  return estimate == instance.true_support;
}

namespace {

void write_real(std::ostream& os, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  os << buf;
}

void write_row(std::ostream& os, const auto& values, Eigen::Index count) {
  for (Eigen::Index j = 0; j < count; ++j) {
    if (j) os << ' ';
    write_real(os, values(j));
  }
  os << '\n';
}

double read_real(std::istream& is) {
  std::string token;
  if (!(is >> token)) throw ConfigError("load_instance: truncated file");
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) {
    throw ConfigError("load_instance: bad number '" + token + "'");
  }
  return v;
}

}  // namespace

void save_instance(const ProblemInstance& inst, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("save_instance: cannot open " + path.string());
  const auto& c = inst.config;
  os << "dcsp-instance 1\n" << c.n << ' ' << c.m << ' ' << c.k << ' ' << c.l << ' ' << c.seed
     << '\n';
  for (std::size_t i = 0; i < inst.true_support.size(); ++i) {
    os << (i ? " " : "") << inst.true_support[i];
  }
  os << '\n';
  for (std::size_t l = 0; l < c.l; ++l) {
    const auto& a = inst.dictionaries[l];
    for (Eigen::Index i = 0; i < a.rows(); ++i) write_row(os, a.row(i), a.cols());
    write_row(os, inst.signals[l].transpose(), inst.signals[l].size());
    write_row(os, inst.measurements[l].transpose(), inst.measurements[l].size());
  }
  if (!os) throw ConfigError("save_instance: write failed for " + path.string());
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("load_instance: cannot open " + path.string());
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "dcsp-instance" || version != 1) {
    throw ConfigError("load_instance: not a dcsp-instance v1 file");
  }
  ProblemInstance inst;
  auto& c = inst.config;
  if (!(is >> c.n >> c.m >> c.k >> c.l >> c.seed)) throw ConfigError("load_instance: bad header");
  validate(c);
  std::vector<std::size_t> support(c.k);
  for (auto& s : support) {
    if (!(is >> s)) throw ConfigError("load_instance: bad support");
  }
  inst.true_support = IndexSet(std::move(support));
  const auto rows = static_cast<Eigen::Index>(c.m);
  const auto cols = static_cast<Eigen::Index>(c.n);
  for (std::size_t l = 0; l < c.l; ++l) {
    Matrix a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = read_real(is);
    Vector x(cols);
    for (Eigen::Index j = 0; j < cols; ++j) x[j] = read_real(is);
    Vector y(rows);
    for (Eigen::Index i = 0; i < rows; ++i) y[i] = read_real(is);
    inst.dictionaries.push_back(std::move(a));
    inst.signals.push_back(std::move(x));
    inst.measurements.push_back(std::move(y));
  }
  inst.check();
  return inst;
}

}  // namespace dcsp

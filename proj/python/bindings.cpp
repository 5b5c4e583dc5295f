#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dcsp/cost_model.hpp"
#include "dcsp/errors.hpp"
#include "dcsp/experiment.hpp"
#include "dcsp/pursuit.hpp"

#include <map>
#include <sstream>

namespace py = pybind11;
using namespace dcsp;

namespace {

// Index sets cross the boundary as sorted lists of 1-based ints.
std::vector<std::size_t> to_list(const IndexSet& s) { return s.indices(); }

py::dict wire_dict(const WireCounter& w) {
  py::list rounds;
  for (const auto& r : w.rounds()) {
    const char* channel = r.channel == Channel::Neighbor    ? "neighbor"
                          : r.channel == Channel::Broadcast ? "broadcast"
                                                            : "uncharged";
    rounds.append(py::make_tuple(r.step, channel, r.scalars));
  }
  py::dict d;
  d["neighbor"] = w.neighbor_scalars();
  d["broadcast"] = w.broadcast_scalars();
  d["uncharged"] = w.uncharged_scalars();
  d["charged"] = w.charged();
  d["rounds"] = rounds;
  return d;
}

Figure figure_from_string(const std::string& name) {
  if (name == "fig1") return Figure::SuccessVsMeasurements;
  if (name == "fig2") return Figure::MessagesVsNodes;
  if (name == "fig3") return Figure::IterationsVsNodes;
  throw ConfigError("unknown figure '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decentralized subspace pursuit for joint support recovery";

  auto base = py::register_exception<Error>(m, "DcspError", PyExc_RuntimeError);
  py::register_exception<RankDeficient>(m, "RankDeficient", base.ptr());
  py::register_exception<InsufficientDistinct>(m, "InsufficientDistinct", base.ptr());
  py::register_exception<IndexOutOfRange>(m, "IndexOutOfRange", base.ptr());
  py::register_exception<InvalidDegree>(m, "InvalidDegree", base.ptr());
  py::register_exception<DegenerateSignal>(m, "DegenerateSignal", base.ptr());
  py::register_exception<TooLarge>(m, "TooLarge", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  // linear algebra
  m.def("lstsq", &lstsq, py::arg("a"), py::arg("y"));
  m.def("resid", &resid, py::arg("y"), py::arg("a"));
  m.def("correlate", &correlate, py::arg("a"), py::arg("r"));
  m.def(
      "max_ind", [](const Vector& v, std::size_t k) { return to_list(max_ind(v, k)); },
      py::arg("v"), py::arg("k"));
  m.def(
      "max_occ",
      [](const std::vector<std::size_t>& values, std::size_t k) {
        return to_list(max_occ(values, k));
      },
      py::arg("values"), py::arg("k"));
  m.def(
      "column_submatrix",
      [](const Matrix& a, std::vector<std::size_t> s) {
        return column_submatrix(a, IndexSet(std::move(s)));
      },
      py::arg("a"), py::arg("support"));

  // problems
  py::class_<ProblemConfig>(m, "ProblemConfig")
      .def(py::init([](std::size_t n, std::size_t m_, std::size_t k, std::size_t l,
                       std::uint64_t seed) { return ProblemConfig{n, m_, k, l, seed}; }),
           py::arg("N") = 200, py::arg("M") = 50, py::arg("K") = 10, py::arg("L") = 6,
           py::arg("seed") = 0)
      .def_readwrite("N", &ProblemConfig::n)
      .def_readwrite("M", &ProblemConfig::m)
      .def_readwrite("K", &ProblemConfig::k)
      .def_readwrite("L", &ProblemConfig::l)
      .def_readwrite("seed", &ProblemConfig::seed)
      .def("__repr__", [](const ProblemConfig& c) {
        std::ostringstream os;
        os << "ProblemConfig(N=" << c.n << ", M=" << c.m << ", K=" << c.k << ", L=" << c.l
           << ", seed=" << c.seed << ")";
        return os.str();
      });

  py::class_<ProblemInstance>(m, "ProblemInstance")
      .def_readonly("config", &ProblemInstance::config)
      .def_readonly("dictionaries", &ProblemInstance::dictionaries)
      .def_readonly("signals", &ProblemInstance::signals)
      .def_readonly("measurements", &ProblemInstance::measurements)
      .def_property_readonly("true_support",
                             [](const ProblemInstance& p) { return to_list(p.true_support); })
      .def("success", [](const ProblemInstance& p, std::vector<std::size_t> estimate) {
        return success(IndexSet(std::move(estimate)), p);
      });

  m.def(
      "generate",
      [](std::size_t n, std::size_t m_, std::size_t k, std::size_t l, std::uint64_t seed) {
        return generate({n, m_, k, l, seed});
      },
      py::arg("N"), py::arg("M"), py::arg("K"), py::arg("L"), py::arg("seed") = 0);
  m.def("make_instance", &make_instance, py::arg("dictionaries"), py::arg("signals"),
        py::arg("seed") = 0);
  m.def("save_instance", [](const ProblemInstance& p, const std::string& path) {
    save_instance(p, path);
  });
  m.def("load_instance", [](const std::string& path) { return load_instance(path); });

  // network
  py::class_<Topology>(m, "Topology")
      .def(py::init([](const std::vector<std::vector<std::size_t>>& hoods) {
        std::vector<IndexSet> sets;
        for (const auto& h : hoods) sets.emplace_back(h);
        return Topology(std::move(sets));
      }))
      .def_property_readonly("node_count", &Topology::node_count)
      .def_property_readonly("neighborhoods",
                             [](const Topology& t) {
                               std::vector<std::vector<std::size_t>> out;
                               for (const auto& g : t.neighborhoods()) out.push_back(g.indices());
                               return out;
                             })
      .def("neighborhood", [](const Topology& t, NodeId l) { return to_list(t.neighborhood(l)); })
      .def_property_readonly("degree_excess_sum", &Topology::degree_excess_sum)
      .def_property_readonly("is_full_mesh", &Topology::is_full_mesh);
  m.def("ring_topology", &ring_topology, py::arg("L"), py::arg("g"));
  m.def("full_mesh", &Topology::full_mesh, py::arg("L"));
  m.def(
      "topology_from_adjacency",
      [](std::size_t l, const std::string& listing) { return topology_from_adjacency(l, listing); },
      py::arg("L"), py::arg("listing"));

  // pursuit
  py::class_<RunResult>(m, "RunResult")
      .def_property_readonly("support", [](const RunResult& r) { return to_list(r.support); })
      .def_readonly("iterations", &RunResult::iterations)
      .def_readonly("residual_trace", &RunResult::residual_trace)
      .def_readonly("hit_max_iters", &RunResult::hit_max_iters)
      .def_property_readonly("wire", [](const RunResult& r) { return wire_dict(r.wire); })
      .def_property_readonly("log", [](const RunResult& r) {
        py::list out;
        for (const auto& it : r.log) {
          py::dict d;
          d["iteration"] = it.iteration;
          d["support"] = to_list(it.support);
          d["residual_sum"] = it.residual_sum;
          d["candidate_sizes"] = it.candidate_sizes;
          py::list locals;
          for (const auto& s : it.local_supports) locals.append(to_list(s));
          d["local_supports"] = locals;
          d["charged_scalars"] = it.charged_scalars;
          d["accepted"] = it.accepted;
          out.append(d);
        }
        return out;
      });

  m.def("ssp_run", &ssp_run, py::arg("instance"), py::arg("max_iters") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("dcsp_run", &dcsp_run, py::arg("instance"), py::arg("topology"),
        py::arg("max_iters") = 0, py::call_guard<py::gil_scoped_release>());
  m.def(
      "exhaustive_decoder",
      [](const ProblemInstance& p, std::uint64_t cap) { return to_list(exhaustive_decoder(p, cap)); },
      py::arg("instance"), py::arg("cap") = kExhaustiveCap);
  m.def("default_max_iters", &default_max_iters);

  // cost model
  m.def(
      "cost_ssp",
      [](std::uint64_t n, std::uint64_t k, std::uint64_t l, std::uint64_t t) {
        return cost_ssp({n, k, l, l, t});
      },
      py::arg("N"), py::arg("K"), py::arg("L"), py::arg("T"));
  m.def(
      "cost_dcsp",
      [](std::uint64_t n, std::uint64_t k, std::uint64_t l, std::uint64_t g, std::uint64_t t) {
        const CostParams p{n, k, l, g, t};
        validate(p);
        return cost_dcsp(p);
      },
      py::arg("N"), py::arg("K"), py::arg("L"), py::arg("g"), py::arg("T"));
  m.def("cost_dcsp_general", &cost_dcsp_general, py::arg("N"), py::arg("K"), py::arg("L"),
        py::arg("degree_excess_sum"), py::arg("T"));
  m.def(
      "message_cost",
      [](const std::string& algorithm, std::uint64_t n, std::uint64_t k, std::uint64_t l,
         std::uint64_t g, std::uint64_t t) {
        const CostParams p{n, k, l, g, t};
        validate(p);
        return message_cost(cost_algorithm_from_string(algorithm), p);
      },
      py::arg("algorithm"), py::arg("N"), py::arg("K"), py::arg("L"), py::arg("g"),
      py::arg("T") = 0);

  // experiments
  m.def(
      "run_sweep",
      [](const std::string& figure, const std::map<std::string, std::string>& settings) {
        const auto f = figure_from_string(figure);
        auto config = default_config(f);
        for (const auto& [key, value] : settings) apply_setting(config, key, value);
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_sweep(f, config);
        }
        py::list out;
        for (const auto& row : rows) {
          py::dict d;
          d[py::str(std::string(sweep_parameter(f)))] = row.value;
          d["trials"] = row.trials;
          d["aborted"] = row.aborted;
          for (const auto& s : row.stats) {
            const std::string name(to_string(s.algorithm));
            if (s.simulated) {
              d[py::str(name + "_success")] = s.success_frequency;
              d[py::str(name + "_mean_iters")] = s.mean_iterations;
              d[py::str(name + "_mean_messages")] = s.mean_messages;
            }
            d[py::str(name + "_analytic_messages")] = s.analytic_messages;
          }
          out.append(d);
        }
        return out;
      },
      py::arg("figure"), py::arg("settings") = std::map<std::string, std::string>{},
      "Runs fig1/fig2/fig3 with key=value overrides (values as strings).");
  m.def(
      "run_single_trial",
      [](const ProblemConfig& p, std::size_t g, const std::string& algorithm,
         std::size_t max_iters) {
        std::ostringstream os;
        const auto r = run_single_trial(p, g, cost_algorithm_from_string(algorithm), max_iters, &os);
        py::dict d;
        d["support"] = to_list(r.support);
        d["success"] = r.success;
        d["iterations"] = r.iterations;
        d["messages"] = r.messages;
        d["analytic_messages"] = r.analytic_messages;
        d["transcript"] = os.str();
        return d;
      },
      py::arg("problem"), py::arg("g"), py::arg("algorithm") = "dcsp", py::arg("max_iters") = 0);
}

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>

#include "entbound/antisym.hpp"
#include "entbound/experiments.hpp"
#include "entbound/measures.hpp"
#include "entbound/monogamy.hpp"
#include "entbound/product_overlap.hpp"
#include "entbound/qstate.hpp"
#include "entbound/random.hpp"
#include "entbound/serialization.hpp"

namespace py = pybind11;
using namespace entbound;

namespace {

CutSpec parse_cut(const std::string& cut, const MultipartiteState& rho) {
  return CutSpec::parse(cut, static_cast<int>(rho.dims.size()));
}

EstimatorOptions make_options(int restarts, std::uint64_t seed) {
  EstimatorOptions options;
  options.overlap_restarts = restarts;
  options.roof.restarts = restarts;
  options.seed = seed;
  return options;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "certified bounds on bipartite entanglement measures";

  py::class_<MultipartiteState>(m, "State")
      .def(py::init([](const Matrix& matrix, const std::vector<int>& dims,
                       const std::string& label) {
             MultipartiteState state(dims, matrix, label);
             state.validate();
             return state;
           }),
           py::arg("matrix"), py::arg("dims"), py::arg("label") = "")
      .def_readonly("dims", &MultipartiteState::dims)
      .def_readonly("matrix", &MultipartiteState::matrix)
      .def_readonly("label", &MultipartiteState::label)
      .def("purity", &MultipartiteState::purity)
      .def("dim", &MultipartiteState::dim)
      .def("__repr__", [](const MultipartiteState& s) {
        std::string dims;
        for (size_t i = 0; i < s.dims.size(); ++i) {
          if (i) dims += ",";
          dims += std::to_string(s.dims[i]);
        }
        return "<State dims=[" + dims + "]" + (s.label.empty() ? "" : " '" + s.label + "'") +
               ">";
      });

  py::class_<PureState>(m, "PureState")
      .def(py::init([](const Vector& vector, const std::vector<int>& dims,
                       const std::string& label) {
             PureState psi(dims, vector, label);
             psi.validate();
             return psi;
           }),
           py::arg("vector"), py::arg("dims"), py::arg("label") = "")
      .def_readonly("dims", &PureState::dims)
      .def_readonly("vector", &PureState::vector)
      .def_readonly("label", &PureState::label)
      .def("to_state", &PureState::to_state);

  // Core state algebra.
  m.def("tensor",
        static_cast<MultipartiteState (*)(const MultipartiteState&, const MultipartiteState&)>(
            &tensor),
        py::arg("a"), py::arg("b"));
  m.def("partial_trace", &partial_trace, py::arg("rho"), py::arg("keep"));
  m.def("von_neumann_entropy",
        static_cast<double (*)(const MultipartiteState&)>(&von_neumann_entropy),
        py::arg("rho"));
  m.def("trace_distance",
        static_cast<double (*)(const MultipartiteState&, const MultipartiteState&)>(
            &trace_distance),
        py::arg("a"), py::arg("b"));
  m.def("purify", &purify, py::arg("rho"));
  m.def("schmidt_spectrum", &schmidt_spectrum, py::arg("psi"), py::arg("d_a"), py::arg("d_b"));
  m.def("dimension_cap", &dimension_cap);
  m.def("set_dimension_cap", &set_dimension_cap, py::arg("cap"));

  // Seeded sampling.
  m.def(
      "haar_pure",
      [](int dim, std::uint64_t seed) {
        SeededSampler sampler(seed);
        return haar_pure(dim, sampler);
      },
      py::arg("dim"), py::arg("seed") = 1);
  m.def(
      "induced_state",
      [](int n, int s, std::uint64_t seed) {
        SeededSampler sampler(seed);
        return induced_state(n, s, sampler);
      },
      py::arg("n"), py::arg("s"), py::arg("seed") = 1);
  m.def(
      "induced_bipartite",
      [](int d, int s, std::uint64_t seed) {
        SeededSampler sampler(seed);
        return induced_bipartite(d, s, sampler);
      },
      py::arg("d"), py::arg("s"), py::arg("seed") = 1);
  m.def(
      "random_tripartite_induced",
      [](int d, int s, std::uint64_t seed) {
        SeededSampler sampler(seed);
        return random_tripartite_induced(d, s, sampler);
      },
      py::arg("d"), py::arg("s"), py::arg("seed") = 1);
  m.def(
      "random_subspace",
      [](int ambient, int dim, std::uint64_t seed) {
        SeededSampler sampler(seed);
        return random_subspace(ambient, dim, sampler);
      },
      py::arg("ambient"), py::arg("dim"), py::arg("seed") = 1);

  // Measures. Structured results cross the boundary as JSON strings;
  // the package wrapper parses them into dicts.
  m.def("concurrence_two_qubit", &concurrence_two_qubit, py::arg("rho"));
  m.def(
      "ef_two_qubit", [](const MultipartiteState& rho) { return ef_two_qubit(rho).value; },
      py::arg("rho"));
  m.def(
      "entropy_of_entanglement",
      [](const MultipartiteState& rho, const std::string& cut) {
        return entropy_of_entanglement(rho, parse_cut(cut, rho)).value;
      },
      py::arg("rho"), py::arg("cut") = "0|1");
  m.def(
      "estimate_measure_json",
      [](const MultipartiteState& rho, const std::string& cut, const std::string& measure,
         int restarts, std::uint64_t seed) {
        const BoundSet bounds = estimate_measure(rho, parse_cut(cut, rho),
                                                 estimator_from_string(measure),
                                                 make_options(restarts, seed));
        return to_json(bounds).dump();
      },
      py::arg("rho"), py::arg("cut") = "0|1", py::arg("measure") = "er-bounds",
      py::arg("restarts") = 32, py::arg("seed") = 3);
  m.def(
      "max_product_overlap_json",
      [](const MultipartiteState& rho, const std::string& cut, int restarts,
         std::uint64_t seed, bool brute_force_small) {
        OverlapOptions options;
        options.restarts = restarts;
        options.seed = seed;
        options.brute_force_small = brute_force_small;
        const ProductOverlapResult r = max_product_overlap(rho, parse_cut(cut, rho), options);
        return nlohmann::json{{"value", r.value},
                              {"restarts_used", r.restarts_used},
                              {"iterations", r.iterations},
                              {"converged", r.converged},
                              {"certified_global", r.certified_global},
                              {"tol", r.tol}}
            .dump();
      },
      py::arg("rho"), py::arg("cut") = "0|1", py::arg("restarts") = 64, py::arg("seed") = 5,
      py::arg("brute_force_small") = false);

  // Antisymmetric states and the chain.
  m.def(
      "antisymmetric_state", [](int d, int n) { return antisymmetric_state({d, n}); },
      py::arg("d"), py::arg("n"));
  m.def(
      "verify_marginal_property",
      [](int d, int n, int k) { return verify_marginal_property({d, n}, k); }, py::arg("d"),
      py::arg("n"), py::arg("k"));
  m.def(
      "chain_json",
      [](int d, int max_k, const std::string& estimator, std::uint64_t seed) {
        EstimatorOptions options;
        options.seed = seed;
        const auto records = chain_sequence(d, max_k, estimator_from_string(estimator), options);
        return chain_to_json(records).dump();
      },
      py::arg("d"), py::arg("max_k") = 1, py::arg("estimator") = "ee", py::arg("seed") = 3);

  // Monogamy audits.
  m.def(
      "audit_json",
      [](const MultipartiteState& rho, const std::string& cut, const std::string& measure,
         const std::string& f_name, double c, std::uint64_t seed) {
        const CutSpec cut_spec = parse_cut(cut, rho);
        const ConstraintId id = constraint_from_string(f_name);
        std::map<std::string, double> params;
        if (id == ConstraintId::dim_ef || id == ConstraintId::dim_er) {
          params["c"] = c;
          params["d_a"] = static_cast<double>(side_dimension(cut_spec.side_a, rho.dims));
          params["d_b"] = static_cast<double>(side_dimension(cut_spec.side_b, rho.dims));
          params["d_c"] = static_cast<double>(side_dimension(cut_spec.side_c, rho.dims));
        }
        const MonogamyReport report =
            audit(rho, cut_spec, estimator_from_string(measure),
                  ConstraintFunction::make(id, params), make_options(32, seed));
        return to_json(report).dump();
      },
      py::arg("rho"), py::arg("cut") = "0|1|2", py::arg("measure") = "tangle",
      py::arg("f") = "sum", py::arg("c") = 1.0, py::arg("seed") = 3);
  m.def(
      "evaluate_f",
      [](const std::string& f_name, double x, double y,
         const std::map<std::string, double>& params) {
        return evaluate_f(ConstraintFunction::make(constraint_from_string(f_name), params), x,
                          y);
      },
      py::arg("f"), py::arg("x"), py::arg("y"),
      py::arg("params") = std::map<std::string, double>{});

  // Experiments.
  m.def(
      "run_experiment_json",
      [](const std::string& config_json) {
        const ExperimentConfig config =
            ExperimentConfig::from_json(nlohmann::json::parse(config_json));
        const ExperimentResult result = run_experiment(config);
        nlohmann::json records = nlohmann::json::array();
        for (const auto& record : result.records) records.push_back(record);
        return nlohmann::json{{"summary", result.summary}, {"records", std::move(records)}}
            .dump();
      },
      py::arg("config_json"));

  // JSON round-trips for states.
  m.def(
      "state_to_json", [](const MultipartiteState& rho) { return to_json(rho).dump(); },
      py::arg("rho"));
  m.def(
      "state_from_json",
      [](const std::string& text) { return state_from_json(nlohmann::json::parse(text)); },
      py::arg("text"));
}

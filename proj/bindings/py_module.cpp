#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>

#include "json.hpp"

#include "h22/detbounds.hpp"
#include "h22/graph.hpp"
#include "h22/model.hpp"
#include "h22/observables.hpp"
#include "h22/oracle.hpp"
#include "h22/regime.hpp"
#include "h22/rng.hpp"
#include "h22/sampler.hpp"
#include "h22/serialize.hpp"

namespace py = pybind11;
using namespace h22;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pinned hyperbolic sigma-model toolkit";
  m.attr("PINNED_VERTEX") = kPinnedVertex;

  py::class_<PinnedGraph>(m, "PinnedGraph")
      .def(py::init<Eigen::MatrixXd, Eigen::VectorXd, std::vector<std::string>>(),
           py::arg("weights"), py::arg("pinning"),
           py::arg("labels") = std::vector<std::string>{})
      .def_property_readonly("size", &PinnedGraph::size)
      .def_property_readonly("weights", &PinnedGraph::weights)
      .def_property_readonly("pinning", &PinnedGraph::pinning)
      .def_property_readonly("labels", &PinnedGraph::labels)
      .def("weight", &PinnedGraph::weight, py::arg("i"), py::arg("j"))
      .def("max_weight", &PinnedGraph::max_weight)
      .def("min_positive_pinning", &PinnedGraph::min_positive_pinning)
      .def("positive_graph_connected", &PinnedGraph::positive_graph_connected);

  py::enum_<ChainPinning>(m, "ChainPinning")
      .value("EXPLICIT", ChainPinning::kExplicit)
      .value("LAST_VERTEX", ChainPinning::kLastVertexPinned);

  m.def("build_chain", &build_chain, py::arg("length"), py::arg("wbar"), py::arg("alpha"),
        py::arg("mode"), py::arg("pinning") = Eigen::VectorXd(),
        py::arg("extra_edges") = std::vector<std::tuple<int, int, double>>{});
  m.def("hierarchical_level_weights", &hierarchical_level_weights, py::arg("levels"),
        py::arg("wbar"), py::arg("alpha"));
  m.def("hierarchical_pinning_weight", &hierarchical_pinning_weight, py::arg("levels"),
        py::arg("wbar"), py::arg("alpha"));
  m.def("build_hierarchical", &build_hierarchical, py::arg("levels"),
        py::arg("level_weights"), py::arg("pinning"));
  m.def("build_effective_chain", &build_effective_chain, py::arg("length"),
        py::arg("level_weights"), py::arg("pinning_base"));
  m.def("hierarchical_distance", &hierarchical_distance, py::arg("a"), py::arg("b"));
  m.def("box_to_binary", &box_to_binary, py::arg("point"), py::arg("dim"), py::arg("levels"));
  m.def("binary_to_box", &binary_to_box, py::arg("code"), py::arg("dim"), py::arg("levels"));

  py::class_<WeightProfile>(m, "WeightProfile")
      .def(py::init<int, double, double, double>(), py::arg("dim"), py::arg("alpha"),
           py::arg("wbar"), py::arg("scale") = 1.0)
      .def("__call__", &WeightProfile::operator(), py::arg("distance"))
      .def("envelope_floor", &WeightProfile::envelope_floor)
      .def("peak_point", &WeightProfile::peak_point);

  m.def("build_long_range_box", &build_long_range_box, py::arg("dim"), py::arg("levels"),
        py::arg("profile"), py::arg("tail_rel") = 1e-10);

  py::class_<FieldConfig>(m, "FieldConfig")
      .def(py::init(&FieldConfig::zero), py::arg("n"))
      .def_readwrite("u", &FieldConfig::u)
      .def_readwrite("s", &FieldConfig::s);

  m.def("log_density", &log_density, py::arg("graph"), py::arg("config"));
  m.def("log_marginal_density", &log_marginal_density, py::arg("graph"), py::arg("u"));
  m.def("weighted_laplacian", &weighted_laplacian, py::arg("graph"), py::arg("u"));
  m.def("s_covariance", &s_covariance, py::arg("graph"), py::arg("u"));
  m.def("sample_s_given_u", &sample_s_given_u, py::arg("graph"), py::arg("u"), py::arg("rng"));

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
      .def("raw", &RngStream::raw)
      .def("uniform", &RngStream::uniform)
      .def("normal", &RngStream::normal)
      .def("uniform_int", &RngStream::uniform_int, py::arg("bound"));

  py::class_<Observable>(m, "Observable")
      .def_readonly("name", &Observable::name)
      .def_readonly("needs_s", &Observable::needs_s)
      .def(
          "evaluate",
          [](const Observable& self, const PinnedGraph& graph, const FieldConfig& config) {
            return self.eval(graph, config);
          },
          py::arg("graph"), py::arg("config"));

  m.def("cosh_power", &cosh_power, py::arg("vertex"), py::arg("exponent"));
  m.def("cosh_gap_power", &cosh_gap_power, py::arg("vertex_a"), py::arg("vertex_b"),
        py::arg("exponent"));
  m.def("field_square", &field_square, py::arg("vertex"));
  m.def("interaction_product", &interaction_product, py::arg("pairs"), py::arg("exponents"),
        py::arg("deltas") = std::vector<double>{});

  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init<>())
      .def_readwrite("half_width", &QuadratureSpec::half_width)
      .def_readwrite("points_per_axis", &QuadratureSpec::points_per_axis)
      .def_readwrite("marginal", &QuadratureSpec::marginal)
      .def_readwrite("flag_tolerance", &QuadratureSpec::flag_tolerance)
      .def_readwrite("rescale_trigger", &QuadratureSpec::rescale_trigger);

  py::class_<QuadratureResult>(m, "QuadratureResult")
      .def_readonly("value", &QuadratureResult::value)
      .def_readonly("error_indicator", &QuadratureResult::error_indicator)
      .def_readonly("flagged", &QuadratureResult::flagged)
      .def_readonly("dimensions", &QuadratureResult::dimensions)
      .def_readonly("grid_scale", &QuadratureResult::grid_scale);

  m.def("oracle_normalization", &oracle_normalization, py::arg("graph"),
        py::arg("spec") = QuadratureSpec{});
  m.def("oracle_expectation", &oracle_expectation, py::arg("graph"), py::arg("observable"),
        py::arg("spec") = QuadratureSpec{});
  m.def("oracle_expectations", &oracle_expectations, py::arg("graph"),
        py::arg("observables"), py::arg("spec") = QuadratureSpec{});

  py::enum_<UpdateMode>(m, "UpdateMode")
      .value("MARGINAL", UpdateMode::kMarginal)
      .value("JOINT", UpdateMode::kJoint);

  py::class_<SamplerSettings>(m, "SamplerSettings")
      .def(py::init<>())
      .def_readwrite("steps", &SamplerSettings::steps)
      .def_readwrite("burn_in", &SamplerSettings::burn_in)
      .def_readwrite("thin", &SamplerSettings::thin)
      .def_readwrite("chains", &SamplerSettings::chains)
      .def_readwrite("step_size", &SamplerSettings::step_size)
      .def_readwrite("tune", &SamplerSettings::tune)
      .def_readwrite("mode", &SamplerSettings::mode);

  py::class_<EstimateSummary>(m, "EstimateSummary")
      .def_readonly("mean", &EstimateSummary::mean)
      .def_readonly("stderr", &EstimateSummary::stderr_)
      .def_readonly("ess", &EstimateSummary::ess)
      .def_readonly("n_used", &EstimateSummary::n_used);

  py::class_<ChainResult>(m, "ChainResult")
      .def_readonly("chain_id", &ChainResult::chain_id)
      .def_readonly("acceptance_rate", &ChainResult::acceptance_rate)
      .def_readonly("acceptance_warning", &ChainResult::acceptance_warning)
      .def_readonly("samples", &ChainResult::samples);

  py::class_<PooledEstimate>(m, "PooledEstimate")
      .def_readonly("observable", &PooledEstimate::observable)
      .def_readonly("mean", &PooledEstimate::mean)
      .def_readonly("stderr", &PooledEstimate::stderr_)
      .def_readonly("ess", &PooledEstimate::ess)
      .def_readonly("split_rhat", &PooledEstimate::split_rhat)
      .def_readonly("per_chain", &PooledEstimate::per_chain);

  m.def("run_sampler", &run_sampler, py::arg("graph"), py::arg("observables"),
        py::arg("settings"), py::arg("seed"));
  m.def("pool_estimates", &pool_estimates, py::arg("chains"), py::arg("observable"));

  m.def(
      "det_deficit",
      [](const PinnedGraph& graph, const FieldConfig& config, const Eigen::VectorXd& m) {
        const EdgeKernel kernel = make_edge_kernel(graph, config);
        return det_deficit(graph, kernel, m);
      },
      py::arg("graph"), py::arg("config"), py::arg("exponents"),
      "det(Id - M Gamma) over the positive edge system");
  m.def(
      "assumption_holds",
      [](const PinnedGraph& graph, const FieldConfig& config, const Eigen::VectorXd& m) {
        const EdgeKernel kernel = make_edge_kernel(graph, config);
        return assumption_holds(graph, kernel, m);
      },
      py::arg("graph"), py::arg("config"), py::arg("exponents"));
  m.def("assumption_sufficient", &assumption_sufficient, py::arg("graph"), py::arg("edges"),
        py::arg("exponents"));
  m.def(
      "effective_resistance",
      [](int vertex_count, const std::vector<std::tuple<int, int, double>>& conductors,
         int x, int y) {
        ResistorNetwork network;
        network.vertex_count = vertex_count;
        network.conductors = conductors;
        return effective_resistance(network, x, y);
      },
      py::arg("vertex_count"), py::arg("conductors"), py::arg("x"), py::arg("y"));

  py::class_<EdgeSystem>(m, "EdgeSystem")
      .def_static("positive_edges", &EdgeSystem::positive_edges, py::arg("graph"))
      .def_property_readonly("count", &EdgeSystem::count);

  py::class_<RegimeConstants>(m, "RegimeConstants")
      .def_readonly("alpha", &RegimeConstants::alpha)
      .def_readonly("gamma", &RegimeConstants::gamma)
      .def_readonly("kappa", &RegimeConstants::kappa)
      .def_readonly("c1", &RegimeConstants::c1)
      .def_readonly("c3", &RegimeConstants::c3)
      .def_readonly("c4", &RegimeConstants::c4)
      .def_readonly("wbar0", &RegimeConstants::wbar0)
      .def_readonly("cdelta_bound", &RegimeConstants::cdelta_bound);

  py::class_<AdmissibilityReport>(m, "AdmissibilityReport")
      .def_readonly("admissible", &AdmissibilityReport::admissible)
      .def_readonly("kappa_limit", &AdmissibilityReport::kappa_limit)
      .def_readonly("wbar_threshold", &AdmissibilityReport::wbar_threshold)
      .def_readonly("exponent_limit", &AdmissibilityReport::exponent_limit)
      .def_readonly("reasons", &AdmissibilityReport::reasons);

  m.def("regime_constants", &regime_constants, py::arg("alpha"), py::arg("gamma"),
        py::arg("kappa"));
  m.def("check_admissible", &check_admissible, py::arg("kappa"), py::arg("wbar"),
        py::arg("exponent"), py::arg("alpha"));
  m.def("special_case_wbar0", &special_case_wbar0, py::arg("alpha"));
  m.def("sqrt_delta_sum_bound", &sqrt_delta_sum_bound, py::arg("alpha"), py::arg("gamma"));

  m.def(
      "graph_from_json",
      [](const std::string& text) {
        return build_graph(graph_spec_from_json(nlohmann::json::parse(text)));
      },
      py::arg("text"), "build the pinned graph described by a config graph node");
  m.def("sha256_hex", &sha256_hex, py::arg("data"));
}

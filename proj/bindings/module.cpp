// Copyright 2026 The Bosonflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bosonflow/circuit.hpp"
#include "bosonflow/encoding.hpp"
#include "bosonflow/errors.hpp"
#include "bosonflow/experiments.hpp"
#include "bosonflow/fock.hpp"
#include "bosonflow/kernel.hpp"
#include "bosonflow/layer.hpp"
#include "bosonflow/measurement.hpp"
#include "bosonflow/oracle.hpp"
#include "bosonflow/serialize.hpp"
#include "bosonflow/slos.hpp"
#include "bosonflow/train.hpp"
#include "bosonflow/types.hpp"

namespace py = pybind11;
namespace bf = bosonflow;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact differentiable simulation of n-photon linear optics";

  const py::object base_error =
      py::register_exception<bf::Error>(m, "BosonflowError");
  py::register_exception<bf::ParseError>(m, "ParseError", base_error.ptr());

  m.def("basis_size", &bf::basis_size, py::arg("modes"), py::arg("photons"));

  py::class_<bf::FockState>(m, "FockState")
      .def(py::init<const std::vector<int>&>(), py::arg("occupations"))
      .def_static("parse", &bf::FockState::parse, py::arg("text"))
      .def_property_readonly("modes", &bf::FockState::modes)
      .def_property_readonly("photon_count", &bf::FockState::photon_count)
      .def("occupation", &bf::FockState::occupation, py::arg("mode"))
      .def("to_vector", &bf::FockState::to_vector)
      .def("__str__", &bf::FockState::to_string)
      .def("__repr__",
           [](const bf::FockState& s) { return "FockState(" + s.to_string() + ")"; })
      .def("__eq__",
           [](const bf::FockState& a, const bf::FockState& b) { return a == b; })
      .def("__ne__",
           [](const bf::FockState& a, const bf::FockState& b) { return a != b; });

  py::class_<bf::FockBasis>(m, "FockBasis")
      .def(py::init<int, int>(), py::arg("modes"), py::arg("photons"))
      .def_property_readonly("modes", &bf::FockBasis::modes)
      .def_property_readonly("photons", &bf::FockBasis::photons)
      .def_property_readonly("size", &bf::FockBasis::size)
      .def("rank", &bf::FockBasis::rank, py::arg("state"))
      .def("unrank", &bf::FockBasis::unrank, py::arg("index"))
      .def("enumerate", &bf::FockBasis::enumerate)
      .def("first_state", &bf::FockBasis::first_state);

  py::class_<bf::AmplitudeVector>(m, "AmplitudeVector")
      .def(py::init<bf::FockBasis, bf::CVector>(), py::arg("basis"), py::arg("values"))
      .def_readonly("basis", &bf::AmplitudeVector::basis)
      .def_readonly("values", &bf::AmplitudeVector::values);

  py::class_<bf::circuit::Trainable>(m, "Trainable")
      .def(py::init([](std::string name, double init) {
             return bf::circuit::Trainable{std::move(name), init};
           }),
           py::arg("name"), py::arg("init") = 0.0)
      .def_readwrite("name", &bf::circuit::Trainable::name)
      .def_readwrite("init", &bf::circuit::Trainable::init);

  py::class_<bf::circuit::InputFeature>(m, "InputFeature")
      .def(py::init([](std::string name, int feature_index, double scale) {
             return bf::circuit::InputFeature{std::move(name), feature_index, scale};
           }),
           py::arg("name"), py::arg("feature_index"), py::arg("scale") = 1.0)
      .def_readwrite("name", &bf::circuit::InputFeature::name)
      .def_readwrite("feature_index", &bf::circuit::InputFeature::feature_index)
      .def_readwrite("scale", &bf::circuit::InputFeature::scale);

  py::class_<bf::circuit::Fixed>(m, "Fixed")
      .def(py::init([](double value) { return bf::circuit::Fixed{value}; }),
           py::arg("value"))
      .def_readwrite("value", &bf::circuit::Fixed::value);

  py::class_<bf::circuit::ParamCircuit>(m, "ParamCircuit")
      .def(py::init<int>(), py::arg("modes"))
      .def_property_readonly("modes", &bf::circuit::ParamCircuit::modes)
      .def_property_readonly("trainable_names",
                             &bf::circuit::ParamCircuit::trainable_names)
      .def_property_readonly("trainable_inits",
                             &bf::circuit::ParamCircuit::trainable_inits)
      .def_property_readonly("trainable_count",
                             &bf::circuit::ParamCircuit::trainable_count)
      .def_property_readonly("input_feature_count",
                             &bf::circuit::ParamCircuit::input_feature_count)
      .def("add_phase_shifter", &bf::circuit::ParamCircuit::add_phase_shifter,
           py::arg("mode"), py::arg("phase"), py::return_value_policy::reference_internal)
      .def("add_beam_splitter", &bf::circuit::ParamCircuit::add_beam_splitter,
           py::arg("mode"), py::arg("theta"), py::return_value_policy::reference_internal)
      .def("add_static", &bf::circuit::ParamCircuit::add_static, py::arg("first_mode"),
           py::arg("matrix"), py::return_value_policy::reference_internal)
      .def("add_angle_encoding", &bf::circuit::ParamCircuit::add_angle_encoding,
           py::arg("modes"), py::arg("name_prefix") = "x", py::arg("scale") = 1.0,
           py::return_value_policy::reference_internal)
      .def("append", &bf::circuit::ParamCircuit::append, py::arg("other"),
           py::return_value_policy::reference_internal)
      .def("trainable_index", &bf::circuit::ParamCircuit::trainable_index,
           py::arg("name"));

  py::class_<bf::circuit::UnitaryWithDerivatives>(m, "UnitaryWithDerivatives")
      .def_readonly("value", &bf::circuit::UnitaryWithDerivatives::value)
      .def_readonly("dtheta", &bf::circuit::UnitaryWithDerivatives::dtheta)
      .def_readonly("dfeature", &bf::circuit::UnitaryWithDerivatives::dfeature);

  m.def("compile_unitary", &bf::circuit::compile_unitary, py::arg("circuit"),
        py::arg("theta"), py::arg("x") = bf::RVector());
  m.def("compile_all_derivatives", &bf::circuit::compile_all_derivatives,
        py::arg("circuit"), py::arg("theta"), py::arg("x") = bf::RVector());
  m.def("universal_mesh", &bf::circuit::universal_mesh, py::arg("modes"),
        py::arg("name_prefix") = "w", py::arg("seed") = 0);

  py::class_<bf::slos::TransitionGraph>(m, "TransitionGraph")
      .def_property_readonly("modes", &bf::slos::TransitionGraph::modes)
      .def_property_readonly("photons", &bf::slos::TransitionGraph::photons)
      .def_property_readonly("input_modes", &bf::slos::TransitionGraph::input_modes)
      .def_property_readonly("input_norm", &bf::slos::TransitionGraph::input_norm)
      .def_property_readonly("total_edges", &bf::slos::TransitionGraph::total_edges)
      .def_property_readonly("max_level_size",
                             &bf::slos::TransitionGraph::max_level_size)
      .def_property_readonly("output_basis", &bf::slos::TransitionGraph::output_basis);

  py::class_<bf::slos::EvolveResult>(m, "EvolveResult")
      .def_readonly("output", &bf::slos::EvolveResult::output)
      .def_readonly("intermediates", &bf::slos::EvolveResult::intermediates);

  m.def("build_graph", &bf::slos::build_graph, py::arg("modes"), py::arg("input"),
        py::arg("max_states") = bf::slos::kDefaultStateCap,
        py::call_guard<py::gil_scoped_release>());
  m.def("graph_build_count", &bf::slos::graph_build_count);
  m.def(
      "slos_forward",
      [](const bf::slos::TransitionGraph& g, const bf::CMatrix& u, bool check_unitary,
         bool keep_intermediates) {
        return bf::slos::forward(g, u, {check_unitary, keep_intermediates});
      },
      py::arg("graph"), py::arg("u"), py::arg("check_unitary") = true,
      py::arg("keep_intermediates") = false, py::call_guard<py::gil_scoped_release>());
  m.def(
      "slos_forward",
      [](const bf::slos::TransitionGraph& g, const bf::CMatrix& u,
         const bf::FockState& input, bool check_unitary, bool keep_intermediates) {
        return bf::slos::forward(g, u, input, {check_unitary, keep_intermediates});
      },
      py::arg("graph"), py::arg("u"), py::arg("input"), py::arg("check_unitary") = true,
      py::arg("keep_intermediates") = false, py::call_guard<py::gil_scoped_release>());
  m.def(
      "slos_backward",
      [](const bf::slos::TransitionGraph& g, const bf::CMatrix& u,
         const bf::slos::EvolveResult& cached, const bf::CVector& loss_grad) {
        return bf::slos::backward(g, u, cached.intermediates, loss_grad);
      },
      py::arg("graph"), py::arg("u"), py::arg("cached"), py::arg("loss_grad"),
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "slos_backward",
      [](const bf::slos::TransitionGraph& g, const bf::CMatrix& u,
         const bf::FockState& input, const bf::slos::EvolveResult& cached,
         const bf::CVector& loss_grad) {
        return bf::slos::backward(g, u, input, cached.intermediates, loss_grad);
      },
      py::arg("graph"), py::arg("u"), py::arg("input"), py::arg("cached"),
      py::arg("loss_grad"), py::call_guard<py::gil_scoped_release>());

  m.def("permanent", &bf::oracle::permanent, py::arg("a"));
  m.def("oracle_state", &bf::oracle::oracle_state, py::arg("u"), py::arg("input"),
        py::call_guard<py::gil_scoped_release>());
  m.def("haar_unitary", &bf::oracle::haar_unitary, py::arg("modes"), py::arg("seed"));

  py::enum_<bf::measurement::Detector>(m, "Detector")
      .value("PNR", bf::measurement::Detector::PNR)
      .value("Threshold", bf::measurement::Detector::Threshold);

  py::enum_<bf::measurement::ComputationSpace>(m, "ComputationSpace")
      .value("Fock", bf::measurement::ComputationSpace::Fock)
      .value("Unbunched", bf::measurement::ComputationSpace::Unbunched);

  py::enum_<bf::measurement::StrategyKind>(m, "StrategyKind")
      .value("Probabilities", bf::measurement::StrategyKind::Probabilities)
      .value("PerModeExpectation", bf::measurement::StrategyKind::PerModeExpectation)
      .value("Amplitudes", bf::measurement::StrategyKind::Amplitudes)
      .value("Partial", bf::measurement::StrategyKind::Partial);

  py::class_<bf::measurement::MeasurementStrategy>(m, "MeasurementStrategy")
      .def_static("probabilities", &bf::measurement::MeasurementStrategy::probabilities)
      .def_static("per_mode_expectation",
                  &bf::measurement::MeasurementStrategy::per_mode_expectation)
      .def_static("amplitudes", &bf::measurement::MeasurementStrategy::amplitudes)
      .def_static("partial", &bf::measurement::MeasurementStrategy::partial,
                  py::arg("measured_modes"))
      .def_property_readonly("kind", &bf::measurement::MeasurementStrategy::kind)
      .def_property_readonly("measured_modes",
                             &bf::measurement::MeasurementStrategy::measured_modes);

  py::class_<bf::measurement::KeyedDistribution>(m, "KeyedDistribution")
      .def_readonly("keys", &bf::measurement::KeyedDistribution::keys)
      .def_readonly("values", &bf::measurement::KeyedDistribution::values)
      .def("to_json", [](const bf::measurement::KeyedDistribution& d) {
        return bf::measurement::to_json(d);
      });

  py::class_<bf::measurement::UnbunchedProjection>(m, "UnbunchedProjection")
      .def_readonly("kept_ranks", &bf::measurement::UnbunchedProjection::kept_ranks)
      .def_readonly("values", &bf::measurement::UnbunchedProjection::values)
      .def_readonly("success_probability",
                    &bf::measurement::UnbunchedProjection::success_probability);

  m.def("probabilities", &bf::measurement::probabilities, py::arg("amplitudes"));
  m.def("apply_detector", &bf::measurement::apply_detector, py::arg("basis"),
        py::arg("p"), py::arg("detector"));
  m.def("per_mode_expectation", &bf::measurement::per_mode_expectation,
        py::arg("basis"), py::arg("p"));
  m.def("marginal", &bf::measurement::marginal, py::arg("basis"), py::arg("p"),
        py::arg("measured_modes"));
  m.def("project_unbunched", &bf::measurement::project_unbunched, py::arg("amplitudes"));
  m.def("outcome_key", &bf::measurement::outcome_key, py::arg("state"),
        py::arg("strategy"), py::arg("detector"));

  m.def("amplitude_encode",
        py::overload_cast<const bf::CVector&, const bf::FockBasis&>(
            &bf::encoding::amplitude_encode),
        py::arg("x"), py::arg("basis"));
  m.def("qubit_to_fock", &bf::encoding::qubit_to_fock, py::arg("q"));

  py::class_<bf::encoding::QubitReadout>(m, "QubitReadout")
      .def_readonly("qubit", &bf::encoding::QubitReadout::qubit)
      .def_readonly("leakage", &bf::encoding::QubitReadout::leakage);

  m.def("fock_to_qubit", &bf::encoding::fock_to_qubit, py::arg("amplitudes"));

  py::class_<bf::layer::AmplitudeInput>(m, "AmplitudeInput")
      .def(py::init([](int photons) { return bf::layer::AmplitudeInput{photons}; }),
           py::arg("photons"))
      .def_readwrite("photons", &bf::layer::AmplitudeInput::photons);

  py::class_<bf::layer::LayerSpec>(m, "LayerSpec")
      .def(py::init([](bf::circuit::ParamCircuit circuit, bf::layer::LayerInput input,
                       bf::measurement::MeasurementStrategy strategy,
                       bf::measurement::Detector detector,
                       bf::measurement::ComputationSpace space) {
             return bf::layer::LayerSpec{std::move(circuit), std::move(input),
                                         std::move(strategy), detector, space};
           }),
           py::arg("circuit"), py::arg("input"),
           py::arg("strategy") = bf::measurement::MeasurementStrategy::probabilities(),
           py::arg("detector") = bf::measurement::Detector::PNR,
           py::arg("space") = bf::measurement::ComputationSpace::Fock)
      .def_readonly("circuit", &bf::layer::LayerSpec::circuit)
      .def_readonly("input", &bf::layer::LayerSpec::input)
      .def_readonly("strategy", &bf::layer::LayerSpec::strategy)
      .def_readonly("detector", &bf::layer::LayerSpec::detector)
      .def_readonly("space", &bf::layer::LayerSpec::space);

  py::class_<bf::layer::PhotonicLayer>(m, "PhotonicLayer")
      .def(py::init<bf::layer::LayerSpec>(), py::arg("spec"))
      .def_property_readonly("spec", &bf::layer::PhotonicLayer::spec)
      .def_property_readonly("modes", &bf::layer::PhotonicLayer::modes)
      .def_property_readonly("photons", &bf::layer::PhotonicLayer::photons)
      .def_property_readonly("output_dim", &bf::layer::PhotonicLayer::output_dim)
      .def_property_readonly("output_labels", &bf::layer::PhotonicLayer::output_labels)
      .def_property(
          "theta",
          [](const bf::layer::PhotonicLayer& l) { return l.theta(); },
          [](bf::layer::PhotonicLayer& l, const bf::RVector& v) {
            if (v.size() != l.theta().size()) {
              throw bf::LengthMismatch("theta must keep its length");
            }
            l.theta() = v;
          })
      .def(
          "forward",
          [](bf::layer::PhotonicLayer& l, const bf::RMatrix& x, bool training,
             int threads) { return l.forward(x, training, threads); },
          py::arg("x"), py::arg("training") = false, py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>())
      .def(
          "backward",
          [](bf::layer::PhotonicLayer& l, const bf::RMatrix& x,
             const bf::RMatrix& upstream, int threads) {
            return l.backward(x, upstream, threads);
          },
          py::arg("x"), py::arg("upstream"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());

  py::class_<bf::kernel::KernelSpec>(m, "KernelSpec")
      .def(py::init([](bf::circuit::ParamCircuit circuit, bf::FockState input_state,
                       bool cache_states) {
             return bf::kernel::KernelSpec{std::move(circuit), std::move(input_state),
                                           cache_states};
           }),
           py::arg("circuit"), py::arg("input_state"), py::arg("cache_states") = true)
      .def_readonly("circuit", &bf::kernel::KernelSpec::circuit)
      .def_readonly("input_state", &bf::kernel::KernelSpec::input_state)
      .def_readonly("cache_states", &bf::kernel::KernelSpec::cache_states);

  py::class_<bf::kernel::FidelityKernel>(m, "FidelityKernel")
      .def(py::init<bf::kernel::KernelSpec>(), py::arg("spec"))
      .def_property_readonly("spec", &bf::kernel::FidelityKernel::spec)
      .def("feature_state", &bf::kernel::FidelityKernel::feature_state, py::arg("x"))
      .def("fidelity", &bf::kernel::FidelityKernel::fidelity, py::arg("x1"),
           py::arg("x2"))
      .def(
          "gram",
          [](const bf::kernel::FidelityKernel& k, const bf::RMatrix& x, int threads) {
            return k.gram(x, threads);
          },
          py::arg("x"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>())
      .def(
          "gram",
          [](const bf::kernel::FidelityKernel& k, const bf::RMatrix& x1,
             const bf::RMatrix& x2, int threads) { return k.gram(x1, x2, threads); },
          py::arg("x1"), py::arg("x2"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());

  py::class_<bf::train::AdamConfig>(m, "AdamConfig")
      .def(py::init([](double lr, double beta1, double beta2, double epsilon) {
             return bf::train::AdamConfig{lr, beta1, beta2, epsilon};
           }),
           py::arg("lr") = 0.01, py::arg("beta1") = 0.9, py::arg("beta2") = 0.999,
           py::arg("epsilon") = 1e-8)
      .def_readwrite("lr", &bf::train::AdamConfig::lr)
      .def_readwrite("beta1", &bf::train::AdamConfig::beta1)
      .def_readwrite("beta2", &bf::train::AdamConfig::beta2)
      .def_readwrite("epsilon", &bf::train::AdamConfig::epsilon);

  py::class_<bf::train::AdamState>(m, "AdamState")
      .def_static("init", &bf::train::AdamState::init, py::arg("size"))
      .def_readwrite("m", &bf::train::AdamState::m)
      .def_readwrite("v", &bf::train::AdamState::v)
      .def_readwrite("step", &bf::train::AdamState::step);

  m.def(
      "adam_step",
      [](bf::RVector params, const bf::RVector& grads, bf::train::AdamState& state,
         const bf::train::AdamConfig& config) {
        bf::train::adam_step(params, grads, state, config);
        return params;
      },
      py::arg("params"), py::arg("grads"), py::arg("state"),
      py::arg("config") = bf::train::AdamConfig{});
  m.def("mse_loss", &bf::train::mse_loss, py::arg("pred"), py::arg("target"));

  py::class_<bf::train::ClassGrouping>(m, "ClassGrouping")
      .def(py::init([](std::vector<std::vector<int>> class_indices) {
             return bf::train::ClassGrouping{std::move(class_indices)};
           }),
           py::arg("class_indices"))
      .def_readwrite("class_indices", &bf::train::ClassGrouping::class_indices);

  m.def("leading_mode_parity_grouping", &bf::train::leading_mode_parity_grouping,
        py::arg("keys"));
  m.def("cross_entropy_from_probs", &bf::train::cross_entropy_from_probs,
        py::arg("probs"), py::arg("grouping"), py::arg("label"));
  m.def("adam_state_to_json",
        [](const bf::train::AdamState& s) { return bf::train::to_json(s); },
        py::arg("state"));
  m.def("adam_state_from_json", &bf::train::adam_state_from_json, py::arg("text"));

  m.def("circuit_to_json",
        [](const bf::circuit::ParamCircuit& c) { return bf::serialize::to_json(c); },
        py::arg("circuit"));
  m.def("circuit_from_json", &bf::serialize::circuit_from_json, py::arg("text"));
  m.def("layer_spec_to_json",
        [](const bf::layer::LayerSpec& s) { return bf::serialize::to_json(s); },
        py::arg("spec"));
  m.def("layer_spec_from_json", &bf::serialize::layer_spec_from_json, py::arg("text"));

  py::class_<bf::experiments::VerifyReport>(m, "VerifyReport")
      .def_readonly("max_deviation", &bf::experiments::VerifyReport::max_deviation)
      .def_readonly("tolerance", &bf::experiments::VerifyReport::tolerance)
      .def_readonly("cases", &bf::experiments::VerifyReport::cases)
      .def_readonly("trials", &bf::experiments::VerifyReport::trials)
      .def_readonly("passed", &bf::experiments::VerifyReport::passed);

  m.def("verify_slos_vs_oracle", &bf::experiments::verify_slos_vs_oracle,
        py::arg("max_m"), py::arg("max_n"), py::arg("trials_per_case"), py::arg("seed"),
        py::arg("perturb") = 0.0, py::call_guard<py::gil_scoped_release>());

  py::class_<bf::experiments::BenchReport>(m, "BenchReport")
      .def_readonly("modes", &bf::experiments::BenchReport::modes)
      .def_readonly("photons", &bf::experiments::BenchReport::photons)
      .def_readonly("basis_size", &bf::experiments::BenchReport::basis_size)
      .def_readonly("edges", &bf::experiments::BenchReport::edges)
      .def_readonly("build_seconds", &bf::experiments::BenchReport::build_seconds)
      .def_readonly("build_count", &bf::experiments::BenchReport::build_count)
      .def_readonly("forwards", &bf::experiments::BenchReport::forwards)
      .def_readonly("first_forward_seconds",
                    &bf::experiments::BenchReport::first_forward_seconds)
      .def_readonly("mean_forward_seconds",
                    &bf::experiments::BenchReport::mean_forward_seconds)
      .def_readonly("min_forward_seconds",
                    &bf::experiments::BenchReport::min_forward_seconds)
      .def_readonly("forward_seconds_variance",
                    &bf::experiments::BenchReport::forward_seconds_variance);

  m.def("bench", &bf::experiments::bench, py::arg("modes"), py::arg("photons"),
        py::arg("batch"), py::arg("repeats"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
}

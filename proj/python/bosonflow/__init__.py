# Copyright 2026 The Bosonflow Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exact differentiable simulation of n-photon linear-optical circuits."""

from ._core import (
    AdamConfig,
    AdamState,
    AmplitudeInput,
    AmplitudeVector,
    BenchReport,
    BosonflowError,
    ClassGrouping,
    ComputationSpace,
    Detector,
    EvolveResult,
    FidelityKernel,
    Fixed,
    FockBasis,
    FockState,
    InputFeature,
    KernelSpec,
    KeyedDistribution,
    LayerSpec,
    MeasurementStrategy,
    ParamCircuit,
    ParseError,
    PhotonicLayer,
    QubitReadout,
    StrategyKind,
    Trainable,
    TransitionGraph,
    UnbunchedProjection,
    UnitaryWithDerivatives,
    VerifyReport,
    adam_state_from_json,
    adam_state_to_json,
    adam_step,
    amplitude_encode,
    apply_detector,
    basis_size,
    bench,
    build_graph,
    circuit_from_json,
    circuit_to_json,
    compile_all_derivatives,
    compile_unitary,
    cross_entropy_from_probs,
    fock_to_qubit,
    graph_build_count,
    haar_unitary,
    layer_spec_from_json,
    layer_spec_to_json,
    leading_mode_parity_grouping,
    marginal,
    mse_loss,
    oracle_state,
    outcome_key,
    per_mode_expectation,
    permanent,
    probabilities,
    project_unbunched,
    qubit_to_fock,
    slos_backward,
    slos_forward,
    universal_mesh,
    verify_slos_vs_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "AdamConfig",
    "AdamState",
    "AmplitudeInput",
    "AmplitudeVector",
    "BenchReport",
    "BosonflowError",
    "ClassGrouping",
    "ComputationSpace",
    "Detector",
    "EvolveResult",
    "FidelityKernel",
    "Fixed",
    "FockBasis",
    "FockState",
    "InputFeature",
    "KernelSpec",
    "KeyedDistribution",
    "LayerSpec",
    "MeasurementStrategy",
    "ParamCircuit",
    "ParseError",
    "PhotonicLayer",
    "QubitReadout",
    "StrategyKind",
    "Trainable",
    "TransitionGraph",
    "UnbunchedProjection",
    "UnitaryWithDerivatives",
    "VerifyReport",
    "adam_state_from_json",
    "adam_state_to_json",
    "adam_step",
    "amplitude_encode",
    "apply_detector",
    "basis_size",
    "bench",
    "build_graph",
    "circuit_from_json",
    "circuit_to_json",
    "compile_all_derivatives",
    "compile_unitary",
    "cross_entropy_from_probs",
    "fock_to_qubit",
    "graph_build_count",
    "haar_unitary",
    "layer_spec_from_json",
    "layer_spec_to_json",
    "leading_mode_parity_grouping",
    "marginal",
    "mse_loss",
    "oracle_state",
    "outcome_key",
    "per_mode_expectation",
    "permanent",
    "probabilities",
    "project_unbunched",
    "qubit_to_fock",
    "slos_backward",
    "slos_forward",
    "universal_mesh",
    "verify_slos_vs_oracle",
]

// Copyright 2026 The qvpsim Authors
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

#pragma once

#include <vector>

#include "qvp/gates.hpp"

namespace qvp {

/// One verification circuit at a fixed instance: m witness qubits followed
/// by k ancilla qubits (initialized |0^k>), measured to d outcomes. The
/// outcome is the integer read from the first ceil(log2 d) qubits, values
/// >= d clamped to d-1.
struct CircuitDescription {
    int witness_qubits = 1;
    int ancilla_qubits = 0;
    int outcomes = 2;
    std::vector<Gate> gates;

    int total_qubits() const { return witness_qubits + ancilla_qubits; }
    Eigen::Index dim() const { return Eigen::Index(1) << total_qubits(); }
    Eigen::Index witness_dim() const { return Eigen::Index(1) << witness_qubits; }
};

int outcome_bits(int outcomes);

/// Throws MalformedGate / NonUnitaryGate / BadIndex on an invalid description.
void validate_circuit(const CircuitDescription& desc);

/// Outcome word for a basis index of the full register (clamped per the
/// d-outcome read rule).
int outcome_of_index(Eigen::Index index, int total_qubits, int outcomes);

} // namespace qvp

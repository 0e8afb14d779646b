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

#include "qvp/circuit.hpp"

namespace qvp {

int outcome_bits(int outcomes) {
    int bits = 0;
    while ((1 << bits) < outcomes) {
        ++bits;
    }
    return bits;
}

void validate_circuit(const CircuitDescription& desc) {
    require(desc.witness_qubits >= 1, ErrorCode::MalformedGate, "need at least one witness qubit");
    require(desc.ancilla_qubits >= 0, ErrorCode::MalformedGate, "negative ancilla count");
    require(desc.outcomes >= 2, ErrorCode::MalformedGate, "need at least two outcomes");
    require(outcome_bits(desc.outcomes) <= desc.total_qubits(), ErrorCode::MalformedGate,
            "outcome readout wider than the register");
    for (const Gate& g : desc.gates) {
        validate_gate(g, desc.total_qubits());
    }
}

int outcome_of_index(Eigen::Index index, int total_qubits, int outcomes) {
    const int bits = outcome_bits(outcomes);
    int value = 0;
    for (int b = 0; b < bits; ++b) {
        const int qubit_bit = (index >> (total_qubits - 1 - b)) & 1;
        value = (value << 1) | qubit_bit;
    }
    return value >= outcomes ? outcomes - 1 : value;
}

} // namespace qvp

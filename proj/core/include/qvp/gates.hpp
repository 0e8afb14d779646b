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

#include <string>
#include <vector>

#include "qvp/linalg.hpp"

namespace qvp {

/// One circuit operation: a dense unitary on up to three target qubits,
/// optionally conditioned on control qubits being |1>. Named gates carry
/// their name for serialization; raw unitaries use name "u".
struct Gate {
    std::string name;
    std::vector<int> targets;
    std::vector<int> controls;
    double theta = 0.0;     // rotation angle, radians (rx/ry/rz only)
    ComplexMatrix matrix;   // 2^targets square

    bool is_rotation() const { return name == "rx" || name == "ry" || name == "rz"; }
};

/// Build a named gate. Accepts h,x,y,z,s,t,rx,ry,rz,swap plus the aliases
/// cx,cz,ccx whose leading qubits become controls.
Gate make_gate(const std::string& name, std::vector<int> qubits,
               std::vector<int> controls = {}, double theta = 0.0);

/// Raw unitary on 1..3 targets.
Gate raw_gate(ComplexMatrix matrix, std::vector<int> targets, std::vector<int> controls = {});

Gate dagger(const Gate& g);

/// Apply one gate to a statevector over n qubits. Qubit q is bit (n-1-q)
/// of the amplitude index.
void apply_gate(ComplexVector& state, const Gate& g, int n);

void apply_gates(ComplexVector& state, const std::vector<Gate>& gates, int n);
void apply_gates_inverse(ComplexVector& state, const std::vector<Gate>& gates, int n);

/// Validate targets/controls against an n-qubit register and the gate
/// matrix against the unitarity tolerance.
void validate_gate(const Gate& g, int n);

/// Copy of `g` with every qubit index remapped through `map` and the given
/// extra positive controls appended.
Gate remap_gate(const Gate& g, const std::vector<int>& map, const std::vector<int>& extra_controls = {});

/// Run a gate list over a pure state, validating every gate first.
/// Norm is preserved to working precision.
PureState apply_gate_sequence(const PureState& state, const std::vector<Gate>& gates);

} // namespace qvp

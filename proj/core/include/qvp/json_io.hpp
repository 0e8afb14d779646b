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

#include "qvp/classical.hpp"
#include "qvp/constructions.hpp"

namespace qvp {

// Wire formats. Parse errors throw Error(BadInput, ...).

// {"witness_qubits":int,"ancilla_qubits":int,"outcomes":int,
//  "gates":[{"g":name,"q":[...],"c":[...]?,"theta":float?,"re":[[...]]?,"im":[[...]]?}]}
std::string circuit_to_json(const CircuitDescription& desc, int indent = -1);
CircuitDescription circuit_from_json(const std::string& text);

// {"re":[...],"im":[...]}
std::string state_to_json(const PureState& psi, int indent = -1);
PureState state_from_json(const std::string& text);

// {"N":int,"alphabet":[...],"g":[[...] per s]}
std::string plan_to_json(const IterativePlan& plan, int indent = -1);
IterativePlan plan_from_json(const std::string& text);

// {"s":[...],"t":[...],"eps":float,"delta":float}
std::string targets_to_json(const TargetPointSet& targets, int indent = -1);
TargetPointSet targets_from_json(const std::string& text);

// {"groups":[{"p":float,"mult":int}],"tol":float} with optional bases
std::string spectrum_to_json(const SpectralDecomposition& s, bool include_basis = false,
                             int indent = -1);

// Synthesis certificate: N, g, lambda, residuals, condition estimate, ...
std::string emap_to_json(const SynthesizedEMap& em, int indent = -1);

// {"in_qubits":int,"fresh_ancillas":int,"out_qubits":int,"gates":[...]}
std::string channel_to_json(const CircuitChannel& channel, int indent = -1);
CircuitChannel channel_from_json(const std::string& text);

// {"f":{label:label,...},"phi":channel,"epsilon":float}
std::string reduction_to_json(const Reduction& red, int indent = -1);
Reduction reduction_from_json(const std::string& text);

// {"x_bits":int,"y_bits":int,"z_bits":int,"gates":[{"op":..,"in":[..],"out":..}],"output":int}
std::string boolcirc_to_json(const ProbabilisticProcedure& c, int indent = -1);
ProbabilisticProcedure boolcirc_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace qvp

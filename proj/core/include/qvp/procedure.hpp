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

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qvp/circuit.hpp"

namespace qvp {

/// A d-outcome verification procedure at a fixed instance. Holds the circuit
/// and the outcome POVM on the witness space
///
///   E_w = (I_m (x) <0^k|) V^dag (P_w (x) I) V (I_m (x) |0^k>),
///
/// computed once at build time. The 2^{m+k} unitary is materialized only on
/// demand.
class VerificationProcedure {
  public:
    static VerificationProcedure build(CircuitDescription desc);

    const CircuitDescription& description() const { return desc_; }
    int witness_qubits() const { return desc_.witness_qubits; }
    int ancilla_qubits() const { return desc_.ancilla_qubits; }
    int outcomes() const { return desc_.outcomes; }
    Eigen::Index witness_dim() const { return desc_.witness_dim(); }

    const std::vector<ComplexMatrix>& povm() const { return povm_; }
    const ComplexMatrix& accept_operator() const; // E_1; two-outcome only

    /// Full register unitary, cached after first use.
    const ComplexMatrix& unitary() const;

    /// Outcome distribution Tr(E_w rho), clipped to [0,1].
    RealVector acceptance_probabilities(const DensityMatrix& rho) const;
    RealVector acceptance_probabilities(const PureState& psi) const;

    /// Probability of outcome 1 (the accept outcome of a two-outcome
    /// procedure).
    double accept_probability(const DensityMatrix& rho) const;
    double accept_probability(const PureState& psi) const;

  private:
    CircuitDescription desc_;
    std::vector<ComplexMatrix> povm_;
    mutable std::shared_ptr<ComplexMatrix> unitary_;
};

/// Two-outcome procedure whose accept operator is diag(probs) in the
/// computational witness basis, realized by witness-controlled rotations of
/// one ancilla readout qubit. probs.size() must be a power of two >= 2.
VerificationProcedure from_spectrum(const std::vector<double>& probs);

/// Named acceptance/soundness bounds attached to a procedure.
struct VerificationTask {
    enum class Kind { plain, total, two_sided, three_outcome };

    VerificationProcedure procedure;
    std::map<std::string, double> thresholds; // "a","b" and optionally "a2","b2",...
    Kind kind = Kind::plain;

    double threshold(const std::string& name) const;

    /// Bounds live in (0,1); when both a and b are declared, a - b must be
    /// at least `gap`. Total procedures only need a.
    void validate(double gap = 0.0) const;
};

} // namespace qvp

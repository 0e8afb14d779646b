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

#include "qvp/procedure.hpp"

#include <cmath>

namespace qvp {

VerificationProcedure VerificationProcedure::build(CircuitDescription desc) {
    require(desc.total_qubits() <= config().qubit_cap, ErrorCode::TooManyQubits,
            std::to_string(desc.total_qubits()) + " qubits exceeds cap " +
                std::to_string(config().qubit_cap));
    validate_circuit(desc);

    const int n = desc.total_qubits();
    const Eigen::Index dim = desc.dim();
    const Eigen::Index wdim = desc.witness_dim();
    const int d = desc.outcomes;

    // Columns of B = V (I_m (x) |0^k>), one circuit run per witness basis
    // state. E_w = B^dag P_w B with P_w the clamped-readout projector.
    ComplexMatrix b(dim, wdim);
    for (Eigen::Index j = 0; j < wdim; ++j) {
        ComplexVector col = ComplexVector::Zero(dim);
        col(j << desc.ancilla_qubits) = 1.0;
        apply_gates(col, desc.gates, n);
        b.col(j) = col;
    }

    VerificationProcedure out;
    out.povm_.reserve(d);
    for (int w = 0; w < d; ++w) {
        ComplexMatrix masked = b;
        for (Eigen::Index r = 0; r < dim; ++r) {
            if (outcome_of_index(r, n, d) != w) {
                masked.row(r).setZero();
            }
        }
        ComplexMatrix e = b.adjoint() * masked;
        e = ((e + e.adjoint()) / 2.0).eval();
        out.povm_.push_back(std::move(e));
    }

    // POVM completeness check on the fresh build.
    ComplexMatrix sum = ComplexMatrix::Zero(wdim, wdim);
    for (const auto& e : out.povm_) {
        sum += e;
    }
    require(max_abs_diff(sum, ComplexMatrix::Identity(wdim, wdim)) <= config().povm_tol,
            ErrorCode::MalformedGate, "outcome POVM does not sum to identity");

    out.desc_ = std::move(desc);
    return out;
}

const ComplexMatrix& VerificationProcedure::accept_operator() const {
    require(outcomes() == 2, ErrorCode::NotTwoOutcome,
            "accept operator is defined for two-outcome procedures");
    return povm_[1];
}

const ComplexMatrix& VerificationProcedure::unitary() const {
    if (!unitary_) {
        const int n = desc_.total_qubits();
        const Eigen::Index dim = desc_.dim();
        auto u = std::make_shared<ComplexMatrix>(dim, dim);
        for (Eigen::Index j = 0; j < dim; ++j) {
            ComplexVector col = ComplexVector::Zero(dim);
            col(j) = 1.0;
            apply_gates(col, desc_.gates, n);
            u->col(j) = col;
        }
        unitary_ = std::move(u);
    }
    return *unitary_;
}

RealVector VerificationProcedure::acceptance_probabilities(const DensityMatrix& rho) const {
    require(rho.dim() == witness_dim(), ErrorCode::DimensionMismatch,
            "witness state dimension mismatch");
    const int d = outcomes();
    RealVector probs(d);
    double sum = 0.0;
    for (int w = 0; w < d; ++w) {
        double p = (povm_[w] * rho.matrix()).trace().real();
        require(p >= -1e-10 && p <= 1.0 + 1e-10, ErrorCode::DimensionMismatch,
                "outcome probability escaped [0,1]");
        p = std::min(1.0, std::max(0.0, p));
        probs(w) = p;
        sum += p;
    }
    require(std::abs(sum - 1.0) <= config().povm_tol, ErrorCode::DimensionMismatch,
            "outcome probabilities do not sum to 1");
    return probs;
}

RealVector VerificationProcedure::acceptance_probabilities(const PureState& psi) const {
    return acceptance_probabilities(DensityMatrix::pure(psi));
}

double VerificationProcedure::accept_probability(const DensityMatrix& rho) const {
    require(outcomes() == 2, ErrorCode::NotTwoOutcome, "accept probability needs two outcomes");
    return acceptance_probabilities(rho)(1);
}

double VerificationProcedure::accept_probability(const PureState& psi) const {
    return accept_probability(DensityMatrix::pure(psi));
}

VerificationProcedure from_spectrum(const std::vector<double>& probs) {
    require(probs.size() >= 2 && (probs.size() & (probs.size() - 1)) == 0, ErrorCode::BadLength,
            "need a power-of-two count of probabilities, at least two");
    for (double p : probs) {
        require(p >= 0.0 && p <= 1.0, ErrorCode::BadLength, "probabilities must lie in [0,1]");
    }
    const int m = qubits_for_dim(static_cast<Eigen::Index>(probs.size()));

    CircuitDescription desc;
    desc.witness_qubits = m;
    desc.ancilla_qubits = 1;
    desc.outcomes = 2;
    const int anc = m;

    // For witness pattern j, rotate the ancilla to sqrt(1-p)|0> + sqrt(p)|1>,
    // controlled on every witness qubit; zero bits are X-sandwiched.
    std::vector<int> controls(m);
    for (int q = 0; q < m; ++q) {
        controls[q] = q;
    }
    for (std::size_t j = 0; j < probs.size(); ++j) {
        const double theta = 2.0 * std::asin(std::sqrt(probs[j]));
        std::vector<int> zero_bits;
        for (int q = 0; q < m; ++q) {
            if (!((j >> (m - 1 - q)) & 1)) {
                zero_bits.push_back(q);
            }
        }
        for (int q : zero_bits) desc.gates.push_back(make_gate("x", {q}));
        desc.gates.push_back(make_gate("ry", {anc}, controls, theta));
        for (int q : zero_bits) desc.gates.push_back(make_gate("x", {q}));
    }
    desc.gates.push_back(make_gate("swap", {0, anc}));
    return VerificationProcedure::build(std::move(desc));
}

double VerificationTask::threshold(const std::string& name) const {
    auto it = thresholds.find(name);
    require(it != thresholds.end(), ErrorCode::BadInput, "missing threshold '" + name + "'");
    return it->second;
}

void VerificationTask::validate(double gap) const {
    for (const auto& [name, value] : thresholds) {
        require(value > 0.0 && value < 1.0, ErrorCode::BadInput,
                "threshold '" + name + "' must lie in (0,1)");
    }
    if (kind != Kind::total && thresholds.count("a") && thresholds.count("b")) {
        require(threshold("a") - threshold("b") >= gap, ErrorCode::GapTooSmall,
                "completeness/soundness gap below the declared bound");
    }
}

} // namespace qvp

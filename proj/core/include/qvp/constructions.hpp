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
#include <string>

#include "qvp/nondestructive.hpp"

namespace qvp {

// ---------------------------------------------------------------------------
// Channels and reductions

/// Efficiently implementable channel in Stinespring form: a circuit on the
/// input qubits plus fresh |0> ancillas, keep the first out_qubits, trace
/// the rest. Trace preserving by construction.
struct CircuitChannel {
    int in_qubits = 1;
    int fresh_ancillas = 0;
    int out_qubits = 1;
    std::vector<Gate> gates;

    int total_qubits() const { return in_qubits + fresh_ancillas; }
    void validate() const;

    DensityMatrix apply(const DensityMatrix& rho) const;
    /// Kraus operators K_j : 2^in -> 2^out, one per traced basis state.
    std::vector<ComplexMatrix> kraus() const;
    /// Heisenberg-picture pullback sum_j K_j^dag X K_j of an operator on
    /// the output space.
    ComplexMatrix heisenberg(const ComplexMatrix& x) const;
};

/// Reduction (f, Phi) between procedures; epsilon > 0 makes it robust.
struct Reduction {
    std::map<std::string, std::string> instance_map;
    CircuitChannel phi;
    double epsilon = 0.0;

    std::string map_instance(const std::string& label) const;
};

/// Q^R(x, psi) = Q(x, Phi(psi)) as a single composed circuit.
VerificationProcedure compose_reduction(const VerificationProcedure& q, const Reduction& red);

// ---------------------------------------------------------------------------
// Three-outcome / two-outcome conversions

/// Router construction: witness = control qubit + shared witness block.
/// Control 1 runs Q (accept -> L), control 0 runs Q' (accept -> Lbar),
/// everything else -> 0. Outcome codes: 0="0", 1="L", 2="Lbar".
VerificationProcedure q3_from_pair(const VerificationProcedure& q,
                                   const VerificationProcedure& q_prime);

/// Inverse direction: Q accepts exactly on outcome L, Q' exactly on Lbar.
std::pair<VerificationProcedure, VerificationProcedure>
pair_from_q3(const VerificationProcedure& q3);

/// L -> 1, 0 -> uniform random bit, Lbar -> 0.
VerificationProcedure q2_from_q3(const VerificationProcedure& q3);

/// N=2 iterative run of Q2 with letters g(2)=L, g(1)=0, g(0)=Lbar;
/// eigenvalues map to (p^2, 2p(1-p), (1-p)^2).
VerificationProcedure q3_from_q2(const VerificationProcedure& q2);

/// N=2 iterative run with g(0)=g(2)=1, g(1)=0; eigenvalue map
/// beta(p) = p^2 + (1-p)^2, spectrum min 1/2.
VerificationProcedure qt_from_q2(const VerificationProcedure& q2);

/// Coin flip: c=0 accept outright, c=1 run Q; eigenvalue map (1+p)/2.
VerificationProcedure q2_from_total(const VerificationProcedure& q_total);

double beta_map(double p);

/// The amplified procedure of the BQP-inclusion proof: e-map with targets
/// S=(0,2/3,3/4,1), T=(0,1/7,6/7,1).
IterativeProcedure qp_from_q2(const VerificationProcedure& q2);

// ---------------------------------------------------------------------------
// Certificates

/// Overlap bound of the BQP-inclusion argument: under the x-in-L promise
/// (all eigenvalues >= 1/3, one >= 5/6), any rho whose beta-acceptance
/// reaches beta(5/6) = 13/18 overlaps H^{[3/4,1]} by at least 7/27.
struct OverlapCertificate {
    double qt_acceptance = 0.0;
    bool constraint_met = false; // qt_acceptance >= 13/18
    double overlap = 0.0;        // mass on eigenvalues >= 3/4
    double bound = 7.0 / 27.0;
    bool pass = false;
};

OverlapCertificate bqp_overlap_bound(const VerificationProcedure& q2, const DensityMatrix& rho);

/// Falsification search over near-witness states of q_source: random
/// restarts plus boundary mixtures, minimizing Q-acceptance of Phi(psi').
/// pass means "no counterexample found within budget", never a proof.
struct RobustnessReport {
    double empirical_min = 1.0;
    ComplexVector worst_input;
    double required = 0.0; // acceptance bound a
    bool counterexample = false;
    bool pass = false;
    long evaluations = 0;
    std::uint64_t seed = 0;
};

RobustnessReport probe_robustness(const VerificationTask& q_task,
                                  const VerificationTask& q_source_task, const Reduction& red,
                                  long budget, std::uint64_t seed);

// ---------------------------------------------------------------------------
// The complement verifier

/// Q^CO: run the nondestructive amplified total procedure, feed its quantum
/// output through Phi, run the amplified Q, and accept exactly when the
/// first accepts and the second rejects. Accept POVM
/// M_1 = sqrt(Qx) Phi^dag(I - E~_1) sqrt(Qx).
struct QcoProcedure {
    ComplexMatrix m1;
    double eta = 0.0;
    int witness_qubits = 0; // of the total procedure's witness space
    NondestructiveProcedure nondestructive;
    IterativeProcedure amplified;

    double accept_probability(const DensityMatrix& rho) const;
    double accept_probability(const PureState& psi) const;
};

/// eta = max(2^-m-2, 2^-8) with m the witness size of q_task's procedure.
double qco_eta(int witness_qubits);

QcoProcedure qco(const VerificationTask& q_task, const VerificationTask& q_total_task,
                 const Reduction& red);

/// Diagnostics of M_1 in the total procedure's eigenbasis (x-in-L side):
/// every matrix element bounded by eta, Tr M_1^2 <= eta^2 4^m, and the top
/// eigenvalue (sup over rho of acceptance) <= 1/4.
struct M1Diagnostics {
    double max_entry = 0.0;
    double max_diagonal = 0.0;
    double trace_m1_sq = 0.0;
    double top_eigenvalue = 0.0;
    double eta = 0.0;
    bool pass = false;
};

M1Diagnostics m1_diagnostics(const QcoProcedure& qco_proc, const SpectralDecomposition& total_basis);

// ---------------------------------------------------------------------------
// Witness families and canonical witness sets

struct WitnessFamilyCase {
    std::string instance;
    VerificationProcedure procedure;
    DensityMatrix rho;
    bool in_language = false;

    WitnessFamilyCase(std::string label, VerificationProcedure proc, DensityMatrix state,
                      bool in_l)
        : instance(std::move(label)), procedure(std::move(proc)), rho(std::move(state)),
          in_language(in_l) {}
};

struct WitnessCheckItem {
    std::string instance;
    bool pass = false;
    double value = 0.0;     // acceptance (x in L) or top eigenvalue (x not in L)
    double threshold = 0.0;
    double margin = 0.0;
    bool decision_matches = false; // acceptance >= a agrees with the promise flag
};

std::vector<WitnessCheckItem> check_bqp_witness(const std::vector<WitnessFamilyCase>& family,
                                                double a, double b);

/// Canonical witness sets: a routing qubit prefixed to each eigenvector,
/// |0> for Q-witnesses and |1> for Q'-witnesses.
struct LabeledVector {
    int prefix = 0;
    double p = 0.0;
    ComplexVector vec; // dim 2^{1+max(m,m')}
};

struct CanonicalWitnessSets {
    std::vector<LabeledVector> h_plus;
    std::vector<LabeledVector> h_minus;
};

CanonicalWitnessSets canonical_witness_sets(const VerificationProcedure& q,
                                            const VerificationProcedure& q_prime, double a,
                                            double b, double a_prime, double b_prime);

} // namespace qvp

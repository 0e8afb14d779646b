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

#include "qvp/constructions.hpp"

#include <algorithm>
#include <cmath>

namespace qvp {

// ---------------------------------------------------------------------------
// Channels and reductions

void CircuitChannel::validate() const {
    require(in_qubits >= 1, ErrorCode::BadInput, "channel needs at least one input qubit");
    require(fresh_ancillas >= 0, ErrorCode::BadInput, "negative ancilla count");
    require(out_qubits >= 1 && out_qubits <= total_qubits(), ErrorCode::BadInput,
            "channel output must keep 1..in+fresh qubits");
    require(total_qubits() <= config().qubit_cap, ErrorCode::TooManyQubits,
            "channel register exceeds the qubit cap");
    for (const Gate& g : gates) {
        validate_gate(g, total_qubits());
    }
}

DensityMatrix CircuitChannel::apply(const DensityMatrix& rho) const {
    validate();
    require(rho.qubits() == in_qubits, ErrorCode::DimensionMismatch,
            "channel input dimension mismatch");

    const int n = total_qubits();
    const int rest = n - out_qubits;
    const Eigen::Index out_dim = Eigen::Index(1) << out_qubits;
    const Eigen::Index rest_dim = Eigen::Index(1) << rest;
    const Eigen::Index fresh_dim = Eigen::Index(1) << fresh_ancillas;

    Eigensystem input = hermitian_eigendecomposition(rho.matrix());
    ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
    for (Eigen::Index c = 0; c < input.values.size(); ++c) {
        const double weight = input.values(c);
        if (weight <= 1e-14) {
            continue;
        }
        ComplexVector reg = ComplexVector::Zero(Eigen::Index(1) << n);
        for (Eigen::Index j = 0; j < rho.dim(); ++j) {
            reg(j * fresh_dim) = input.vectors(j, c);
        }
        apply_gates(reg, gates, n);
        for (Eigen::Index k1 = 0; k1 < out_dim; ++k1) {
            for (Eigen::Index k2 = 0; k2 < out_dim; ++k2) {
                Complex acc = 0.0;
                for (Eigen::Index r = 0; r < rest_dim; ++r) {
                    acc += reg(k1 * rest_dim + r) * std::conj(reg(k2 * rest_dim + r));
                }
                out(k1, k2) += weight * acc;
            }
        }
    }
    out = ((out + out.adjoint()) / 2.0).eval();
    return DensityMatrix(std::move(out));
}

std::vector<ComplexMatrix> CircuitChannel::kraus() const {
    validate();
    const int n = total_qubits();
    const int rest = n - out_qubits;
    const Eigen::Index in_dim = Eigen::Index(1) << in_qubits;
    const Eigen::Index out_dim = Eigen::Index(1) << out_qubits;
    const Eigen::Index rest_dim = Eigen::Index(1) << rest;
    const Eigen::Index fresh_dim = Eigen::Index(1) << fresh_ancillas;

    std::vector<ComplexMatrix> ops(rest_dim, ComplexMatrix::Zero(out_dim, in_dim));
    for (Eigen::Index i = 0; i < in_dim; ++i) {
        ComplexVector reg = ComplexVector::Zero(Eigen::Index(1) << n);
        reg(i * fresh_dim) = 1.0;
        apply_gates(reg, gates, n);
        for (Eigen::Index k = 0; k < out_dim; ++k) {
            for (Eigen::Index r = 0; r < rest_dim; ++r) {
                ops[r](k, i) = reg(k * rest_dim + r);
            }
        }
    }
    return ops;
}

ComplexMatrix CircuitChannel::heisenberg(const ComplexMatrix& x) const {
    const Eigen::Index out_dim = Eigen::Index(1) << out_qubits;
    require(x.rows() == out_dim && x.cols() == out_dim, ErrorCode::DimensionMismatch,
            "operator does not live on the channel output space");
    const Eigen::Index in_dim = Eigen::Index(1) << in_qubits;
    ComplexMatrix pulled = ComplexMatrix::Zero(in_dim, in_dim);
    for (const ComplexMatrix& k : kraus()) {
        pulled += k.adjoint() * x * k;
    }
    return ((pulled + pulled.adjoint()) / 2.0).eval();
}

std::string Reduction::map_instance(const std::string& label) const {
    auto it = instance_map.find(label);
    require(it != instance_map.end(), ErrorCode::BadInput,
            "instance '" + label + "' not in the reduction map");
    return it->second;
}

VerificationProcedure compose_reduction(const VerificationProcedure& q, const Reduction& red) {
    red.phi.validate();
    require(red.phi.out_qubits == q.witness_qubits(), ErrorCode::DimensionMismatch,
            "channel output must match the witness space of Q");
    require(red.epsilon >= 0.0, ErrorCode::BadInput,
            "probabilistic channels are not supported; epsilon must be >= 0");

    const int phi_total = red.phi.total_qubits();
    const int kq = q.ancilla_qubits();

    CircuitDescription desc;
    desc.witness_qubits = red.phi.in_qubits;
    desc.ancilla_qubits = red.phi.fresh_ancillas + kq;
    desc.outcomes = q.outcomes();
    desc.gates = red.phi.gates;

    // Q's witness is the channel's kept block (the first out_qubits); its
    // ancillas land after the channel register.
    std::vector<int> map(q.witness_qubits() + kq);
    for (int i = 0; i < q.witness_qubits(); ++i) {
        map[i] = i;
    }
    for (int j = 0; j < kq; ++j) {
        map[q.witness_qubits() + j] = phi_total + j;
    }
    for (const Gate& g : q.description().gates) {
        desc.gates.push_back(remap_gate(g, map));
    }
    return VerificationProcedure::build(std::move(desc));
}

// ---------------------------------------------------------------------------
// Conversion circuits

namespace {

// Record "all of Q's ancillas are |0>" (the Pi_0 outcome) into `target`.
void append_pi0_record(std::vector<Gate>& gates, int m, int k, int target) {
    std::vector<int> controls;
    for (int j = 0; j < k; ++j) {
        gates.push_back(make_gate("x", {m + j}));
        controls.push_back(m + j);
    }
    gates.push_back(make_gate("x", {target}, controls));
    for (int j = 0; j < k; ++j) {
        gates.push_back(make_gate("x", {m + j}));
    }
}

// Coherent N=2 iterative pass over Q: forward circuit, copy the output
// qubit into rec1, backward circuit, then record the Pi_0 outcome in rec2.
void append_two_round_records(std::vector<Gate>& gates, const CircuitDescription& q, int rec1,
                              int rec2) {
    const int m = q.witness_qubits;
    const int k = q.ancilla_qubits;
    gates.insert(gates.end(), q.gates.begin(), q.gates.end());
    gates.push_back(make_gate("cx", {0, rec1}));
    for (auto it = q.gates.rbegin(); it != q.gates.rend(); ++it) {
        gates.push_back(dagger(*it));
    }
    append_pi0_record(gates, m, k, rec2);
}

} // namespace

VerificationProcedure qt_from_q2(const VerificationProcedure& q2) {
    require(q2.outcomes() == 2, ErrorCode::NotTwoOutcome, "qt_from_q2 needs two outcomes");
    const CircuitDescription& base = q2.description();
    const int rec1 = base.total_qubits();
    const int rec2 = rec1 + 1;

    CircuitDescription desc;
    desc.witness_qubits = base.witness_qubits;
    desc.ancilla_qubits = base.ancilla_qubits + 2;
    desc.outcomes = 2;
    append_two_round_records(desc.gates, base, rec1, rec2);
    // Accept iff z_1 = z_2, which reduces to the final Pi_0 outcome.
    desc.gates.push_back(make_gate("swap", {0, rec2}));
    return VerificationProcedure::build(std::move(desc));
}

VerificationProcedure q3_from_q2(const VerificationProcedure& q2) {
    require(q2.outcomes() == 2, ErrorCode::NotTwoOutcome, "q3_from_q2 needs two outcomes");
    const CircuitDescription& base = q2.description();
    const int rec1 = base.total_qubits();
    const int rec2 = rec1 + 1;
    const int flag_l = rec1 + 2;
    const int flag_lbar = rec1 + 3;

    CircuitDescription desc;
    desc.witness_qubits = base.witness_qubits;
    desc.ancilla_qubits = base.ancilla_qubits + 4;
    desc.outcomes = 3;
    append_two_round_records(desc.gates, base, rec1, rec2);
    // s=2 (both rounds agree with the forced 1) <=> rec1 & rec2 -> L;
    // s=0 <=> !rec1 & rec2 -> Lbar; s=1 -> letter 0.
    desc.gates.push_back(make_gate("ccx", {rec1, rec2, flag_l}));
    desc.gates.push_back(make_gate("x", {rec1}));
    desc.gates.push_back(make_gate("ccx", {rec1, rec2, flag_lbar}));
    desc.gates.push_back(make_gate("x", {rec1}));
    // Outcome code (qubit0, qubit1): L -> 01, Lbar -> 10.
    desc.gates.push_back(make_gate("swap", {0, flag_lbar}));
    desc.gates.push_back(make_gate("swap", {1, flag_l}));
    return VerificationProcedure::build(std::move(desc));
}

VerificationProcedure q2_from_total(const VerificationProcedure& q_total) {
    require(q_total.outcomes() == 2, ErrorCode::NotTwoOutcome, "q2_from_total needs two outcomes");
    const CircuitDescription& base = q_total.description();
    const int coin = base.total_qubits();
    const int out = coin + 1;

    CircuitDescription desc;
    desc.witness_qubits = base.witness_qubits;
    desc.ancilla_qubits = base.ancilla_qubits + 2;
    desc.outcomes = 2;
    // out = (1 xor coin) xor (coin and Q-output): accept outright on coin=0.
    desc.gates.push_back(make_gate("h", {coin}));
    desc.gates.push_back(make_gate("x", {out}));
    desc.gates.push_back(make_gate("cx", {coin, out}));
    desc.gates.insert(desc.gates.end(), base.gates.begin(), base.gates.end());
    desc.gates.push_back(make_gate("ccx", {coin, 0, out}));
    desc.gates.push_back(make_gate("swap", {0, out}));
    return VerificationProcedure::build(std::move(desc));
}

VerificationProcedure q3_from_pair(const VerificationProcedure& q,
                                   const VerificationProcedure& q_prime) {
    require(q.outcomes() == 2 && q_prime.outcomes() == 2, ErrorCode::NotTwoOutcome,
            "router construction needs two-outcome procedures");

    const int m_max = std::max(q.witness_qubits(), q_prime.witness_qubits());
    const int k_max = std::max(q.ancilla_qubits(), q_prime.ancilla_qubits());
    const int router = 0;
    const int flag_l = 1 + m_max + k_max;
    const int flag_lbar = flag_l + 1;
    const int total = flag_lbar + 1;
    require(total <= config().qubit_cap, ErrorCode::DimensionCap,
            "router construction exceeds the qubit cap");

    auto block_map = [&](const VerificationProcedure& proc) {
        std::vector<int> map(proc.witness_qubits() + proc.ancilla_qubits());
        for (int i = 0; i < proc.witness_qubits(); ++i) {
            map[i] = 1 + i;
        }
        for (int j = 0; j < proc.ancilla_qubits(); ++j) {
            map[proc.witness_qubits() + j] = 1 + m_max + j;
        }
        return map;
    };

    CircuitDescription desc;
    desc.witness_qubits = 1 + m_max;
    desc.ancilla_qubits = k_max + 2;
    desc.outcomes = 3;

    // Router 1 runs Q; router 0 runs Q' under an X sandwich.
    const std::vector<int> q_map = block_map(q);
    for (const Gate& g : q.description().gates) {
        desc.gates.push_back(remap_gate(g, q_map, {router}));
    }
    desc.gates.push_back(make_gate("x", {router}));
    const std::vector<int> qp_map = block_map(q_prime);
    for (const Gate& g : q_prime.description().gates) {
        desc.gates.push_back(remap_gate(g, qp_map, {router}));
    }
    desc.gates.push_back(make_gate("x", {router}));

    // L <=> router & sub-output, Lbar <=> !router & sub-output.
    desc.gates.push_back(make_gate("ccx", {router, 1, flag_l}));
    desc.gates.push_back(make_gate("x", {router}));
    desc.gates.push_back(make_gate("ccx", {router, 1, flag_lbar}));
    desc.gates.push_back(make_gate("x", {router}));
    desc.gates.push_back(make_gate("swap", {0, flag_lbar}));
    desc.gates.push_back(make_gate("swap", {1, flag_l}));
    return VerificationProcedure::build(std::move(desc));
}

std::pair<VerificationProcedure, VerificationProcedure>
pair_from_q3(const VerificationProcedure& q3) {
    require(q3.outcomes() == 3, ErrorCode::WrongAlphabet, "pair_from_q3 needs three outcomes");
    const CircuitDescription& base = q3.description();

    // Q accepts exactly on L (code 01 of the two readout qubits).
    CircuitDescription q_desc;
    q_desc.witness_qubits = base.witness_qubits;
    q_desc.ancilla_qubits = base.ancilla_qubits + 1;
    q_desc.outcomes = 2;
    const int flag = base.total_qubits();
    q_desc.gates = base.gates;
    q_desc.gates.push_back(make_gate("x", {0}));
    q_desc.gates.push_back(make_gate("ccx", {0, 1, flag}));
    q_desc.gates.push_back(make_gate("x", {0}));
    q_desc.gates.push_back(make_gate("swap", {0, flag}));

    // Q' accepts exactly on Lbar: codes 10 and the clamped 11 both have
    // readout qubit 0 set, so the bare register already reads it.
    CircuitDescription qp_desc;
    qp_desc.witness_qubits = base.witness_qubits;
    qp_desc.ancilla_qubits = base.ancilla_qubits;
    qp_desc.outcomes = 2;
    qp_desc.gates = base.gates;

    return {VerificationProcedure::build(std::move(q_desc)),
            VerificationProcedure::build(std::move(qp_desc))};
}

VerificationProcedure q2_from_q3(const VerificationProcedure& q3) {
    require(q3.outcomes() == 3, ErrorCode::WrongAlphabet, "q2_from_q3 needs three outcomes");
    const CircuitDescription& base = q3.description();
    const int coin = base.total_qubits();
    const int out = coin + 1;

    CircuitDescription desc;
    desc.witness_qubits = base.witness_qubits;
    desc.ancilla_qubits = base.ancilla_qubits + 2;
    desc.outcomes = 2;
    desc.gates = base.gates;
    desc.gates.push_back(make_gate("h", {coin}));
    // out ^= [code == L]
    desc.gates.push_back(make_gate("x", {0}));
    desc.gates.push_back(make_gate("ccx", {0, 1, out}));
    desc.gates.push_back(make_gate("x", {0}));
    // out ^= [code == 0] & coin
    desc.gates.push_back(make_gate("x", {0}));
    desc.gates.push_back(make_gate("x", {1}));
    desc.gates.push_back(make_gate("x", {out}, {0, 1, coin}));
    desc.gates.push_back(make_gate("x", {1}));
    desc.gates.push_back(make_gate("x", {0}));
    desc.gates.push_back(make_gate("swap", {0, out}));
    return VerificationProcedure::build(std::move(desc));
}

double beta_map(double p) {
    return p * p + (1.0 - p) * (1.0 - p);
}

namespace {

const SynthesizedEMap& qp_emap() {
    static const SynthesizedEMap em = synthesize(TargetPointSet::from(
        {0.0, 2.0 / 3.0, 3.0 / 4.0, 1.0}, {0.0, 1.0 / 7.0, 6.0 / 7.0, 1.0}));
    return em;
}

} // namespace

IterativeProcedure qp_from_q2(const VerificationProcedure& q2) {
    return apply_emap(q2, qp_emap());
}

// ---------------------------------------------------------------------------
// Certificates

OverlapCertificate bqp_overlap_bound(const VerificationProcedure& q2, const DensityMatrix& rho) {
    const SpectralDecomposition s = spectrum(q2);
    require(rho.dim() == s.dim(), ErrorCode::DimensionMismatch, "state dimension mismatch");

    double p_max = 0.0;
    for (const auto& g : s.groups) {
        p_max = std::max(p_max, g.p);
        require(g.p >= 1.0 / 3.0 - 1e-9, ErrorCode::PreconditionViolated,
                "spectrum leaves the x-in-L promise (eigenvalue below 1/3)");
    }
    require(p_max > 5.0 / 6.0 - 1e-9, ErrorCode::PreconditionViolated,
            "spectrum leaves the x-in-L promise (no eigenvalue above 5/6)");

    OverlapCertificate cert;
    for (std::size_t gi = 0; gi < s.groups.size(); ++gi) {
        const auto& g = s.groups[gi];
        double weight = 0.0;
        for (Eigen::Index c = 0; c < g.basis.cols(); ++c) {
            const ComplexVector v = g.basis.col(c);
            weight += (v.adjoint() * rho.matrix() * v)(0, 0).real();
        }
        cert.qt_acceptance += beta_map(g.p) * weight;
        if (g.p >= 3.0 / 4.0 - s.grouping_tol) {
            cert.overlap += weight;
        }
    }
    cert.constraint_met = cert.qt_acceptance >= 13.0 / 18.0 - 1e-12;
    cert.pass = !cert.constraint_met || cert.overlap >= cert.bound - 1e-9;
    return cert;
}

namespace {

double quad_form(const ComplexMatrix& op, const ComplexVector& v) {
    return (v.adjoint() * op * v)(0, 0).real();
}

// Smallest blend toward `anchor` that reaches feasibility, or nothing.
std::optional<ComplexVector> make_feasible(const ComplexVector& psi, const ComplexVector& anchor,
                                           const ComplexMatrix& e1s, double threshold) {
    if (quad_form(e1s, psi) >= threshold) {
        return psi;
    }
    double lo = 0.0, hi = 1.0;
    ComplexVector top = anchor;
    if (quad_form(e1s, top) < threshold) {
        return std::nullopt;
    }
    for (int iter = 0; iter < 50; ++iter) {
        const double mid = (lo + hi) / 2.0;
        ComplexVector blend = ((1.0 - mid) * psi + mid * top).normalized();
        if (quad_form(e1s, blend) >= threshold) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    ComplexVector blend = ((1.0 - hi) * psi + hi * top).normalized();
    if (quad_form(e1s, blend) < threshold) {
        return std::nullopt;
    }
    return blend;
}

} // namespace

RobustnessReport probe_robustness(const VerificationTask& q_task,
                                  const VerificationTask& q_source_task, const Reduction& red,
                                  long budget, std::uint64_t seed) {
    q_task.validate();
    q_source_task.validate();
    const double a = q_task.threshold("a");
    const double a_prime = q_source_task.threshold("a");
    const double threshold = a_prime - red.epsilon;

    const ComplexMatrix e1s = q_source_task.procedure.accept_operator();
    // Objective <psi|Phi^dag(E_1^Q)|psi> evaluated directly on the source space.
    const ComplexMatrix pulled = red.phi.heisenberg(q_task.procedure.accept_operator());

    RobustnessReport report;
    report.required = a;
    report.seed = seed;
    report.empirical_min = std::numeric_limits<double>::infinity();

    Eigensystem src = hermitian_eigendecomposition(e1s);
    const Eigen::Index dim = src.values.size();
    const ComplexVector anchor = src.vectors.col(0); // top eigenvector

    if (src.values(0) < threshold) {
        // No state reaches the near-witness threshold; condition 2' is vacuous.
        report.pass = true;
        report.worst_input = anchor;
        return report;
    }

    auto consider = [&](const ComplexVector& psi) {
        ++report.evaluations;
        const double value = quad_form(pulled, psi);
        if (value < report.empirical_min) {
            report.empirical_min = value;
            report.worst_input = psi;
        }
    };

    // Feasible eigenvectors, then phase-optimized boundary mixtures of
    // eigenvector pairs straddling the threshold.
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (src.values(i) >= threshold) {
            consider(src.vectors.col(i));
        }
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (src.values(i) < threshold) {
            continue;
        }
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (src.values(j) >= threshold || src.values(i) == src.values(j)) {
                continue;
            }
            const double w = (threshold - src.values(j)) / (src.values(i) - src.values(j));
            const Complex cross = (src.vectors.col(i).adjoint() * pulled * src.vectors.col(j))(0, 0);
            const double phase = M_PI - std::arg(cross + Complex(1e-300, 0.0));
            ComplexVector mix = std::sqrt(w) * src.vectors.col(i) +
                                std::exp(Complex(0.0, phase)) * std::sqrt(1.0 - w) *
                                    src.vectors.col(j);
            consider(mix.normalized());
        }
    }

    // Random restarts with local refinement.
    SplitMix64 rng = SplitMix64(seed).split(0x70726f6265ULL);
    const int qubits = q_source_task.procedure.witness_qubits();
    while (report.evaluations < budget) {
        ComplexVector psi = random_pure_state(qubits, rng).amplitudes();
        auto feasible = make_feasible(psi, anchor, e1s, threshold);
        if (!feasible) {
            ++report.evaluations;
            continue;
        }
        ComplexVector current = *feasible;
        consider(current);
        double current_value = quad_form(pulled, current);
        double scale = 0.5;
        for (int step = 0; step < 60 && report.evaluations < budget; ++step) {
            ComplexVector jitter(dim);
            for (Eigen::Index i = 0; i < dim; ++i) {
                jitter(i) = Complex(rng.normal(), rng.normal());
            }
            ComplexVector trial = (current + scale * jitter).normalized();
            auto ok = make_feasible(trial, anchor, e1s, threshold);
            if (!ok) {
                ++report.evaluations;
                continue;
            }
            consider(*ok);
            const double value = quad_form(pulled, *ok);
            if (value < current_value) {
                current = *ok;
                current_value = value;
            } else {
                scale *= 0.8;
            }
        }
    }

    report.counterexample = report.empirical_min < a - 1e-9;
    report.pass = !report.counterexample;
    return report;
}

// ---------------------------------------------------------------------------
// The complement verifier

double qco_eta(int witness_qubits) {
    return std::max(std::ldexp(1.0, -witness_qubits - 2), std::ldexp(1.0, -8));
}

double QcoProcedure::accept_probability(const DensityMatrix& rho) const {
    require(rho.dim() == m1.rows(), ErrorCode::DimensionMismatch, "input dimension mismatch");
    const double p = (m1 * rho.matrix()).trace().real();
    return std::min(1.0, std::max(0.0, p));
}

double QcoProcedure::accept_probability(const PureState& psi) const {
    return accept_probability(DensityMatrix::pure(psi));
}

QcoProcedure qco(const VerificationTask& q_task, const VerificationTask& q_total_task,
                 const Reduction& red) {
    require(red.epsilon > 0.0, ErrorCode::PreconditionViolated,
            "the complement verifier needs a robust reduction (epsilon > 0)");
    q_task.validate();
    q_total_task.validate();
    red.phi.validate();
    const VerificationProcedure& q = q_task.procedure;
    const VerificationProcedure& q_total = q_total_task.procedure;
    require(red.phi.in_qubits == q_total.witness_qubits(), ErrorCode::DimensionMismatch,
            "channel input must be the total procedure's witness space");
    require(red.phi.out_qubits == q.witness_qubits(), ErrorCode::DimensionMismatch,
            "channel output must be Q's witness space");

    const double a = q_task.threshold("a");
    const double b = q_task.threshold("b");
    const double a_prime = q_total_task.threshold("a");
    const double eta = qco_eta(q.witness_qubits());

    // Nondestructive amplified total procedure: a' -> 1-eta, a'-eps -> eta.
    NondestructiveProcedure nd = make_nondestructive(
        q_total, {0.0, a_prime - red.epsilon, a_prime, 1.0}, {0.0, eta, 1.0 - eta, 1.0});

    // Amplified Q: a -> 1-eta, b -> eta.
    SynthesizedEMap amp = synthesize(
        TargetPointSet::from({0.0, b, a, 1.0}, {0.0, eta, 1.0 - eta, 1.0}));
    IterativeProcedure q_tilde = apply_emap(q, amp);

    const ComplexMatrix root = nd.sqrt_accept_operator();
    const Eigen::Index dim_q = q.witness_dim();
    const ComplexMatrix reject = ComplexMatrix::Identity(dim_q, dim_q) - q_tilde.accept_operator();
    ComplexMatrix m1 = root * red.phi.heisenberg(reject) * root;
    m1 = ((m1 + m1.adjoint()) / 2.0).eval();

    return QcoProcedure{std::move(m1), eta, q_total.witness_qubits(), std::move(nd),
                        std::move(q_tilde)};
}

M1Diagnostics m1_diagnostics(const QcoProcedure& qco_proc,
                             const SpectralDecomposition& total_basis) {
    require(total_basis.dim() == qco_proc.m1.rows(), ErrorCode::DimensionMismatch,
            "eigenbasis dimension mismatch");
    const ComplexMatrix basis = total_basis.eigenbasis();
    const ComplexMatrix in_basis = basis.adjoint() * qco_proc.m1 * basis;

    M1Diagnostics diag;
    diag.eta = qco_proc.eta;
    diag.max_entry = in_basis.cwiseAbs().maxCoeff();
    diag.max_diagonal = in_basis.diagonal().real().maxCoeff();
    diag.trace_m1_sq = (qco_proc.m1 * qco_proc.m1).trace().real();
    Eigensystem eig = hermitian_eigendecomposition(qco_proc.m1);
    diag.top_eigenvalue = eig.values(0);

    const double dim = static_cast<double>(total_basis.dim());
    diag.pass = diag.max_entry <= diag.eta + 1e-9 &&
                diag.trace_m1_sq <= diag.eta * diag.eta * dim * dim + 1e-9 &&
                diag.top_eigenvalue <= 0.25 + 1e-12;
    return diag;
}

// ---------------------------------------------------------------------------
// Witness families

std::vector<WitnessCheckItem> check_bqp_witness(const std::vector<WitnessFamilyCase>& family,
                                                double a, double b) {
    std::vector<WitnessCheckItem> items;
    items.reserve(family.size());
    for (const auto& fc : family) {
        WitnessCheckItem item;
        item.instance = fc.instance;
        const double acc = fc.procedure.accept_probability(fc.rho);
        if (fc.in_language) {
            item.value = acc;
            item.threshold = a;
            item.margin = acc - a;
            item.pass = item.margin >= -config().membership_slack;
        } else {
            Eigensystem eig = hermitian_eigendecomposition(fc.procedure.accept_operator());
            item.value = eig.values(0);
            item.threshold = b;
            item.margin = b - item.value;
            item.pass = item.margin >= -config().membership_slack;
        }
        item.decision_matches = ((acc >= (a + b) / 2.0) == fc.in_language);
        items.push_back(std::move(item));
    }
    return items;
}

CanonicalWitnessSets canonical_witness_sets(const VerificationProcedure& q,
                                            const VerificationProcedure& q_prime, double a,
                                            double b, double a_prime, double b_prime) {
    require(q.outcomes() == 2 && q_prime.outcomes() == 2, ErrorCode::NotTwoOutcome,
            "canonical witness sets need two-outcome procedures");
    const int m_max = std::max(q.witness_qubits(), q_prime.witness_qubits());
    const Eigen::Index half = Eigen::Index(1) << m_max;

    CanonicalWitnessSets out;
    auto emit = [&](const VerificationProcedure& proc, int prefix, double hi, double lo) {
        const SpectralDecomposition s = spectrum(proc);
        const int pad = m_max - proc.witness_qubits();
        for (const auto& g : s.groups) {
            for (Eigen::Index c = 0; c < g.basis.cols(); ++c) {
                ComplexVector vec = ComplexVector::Zero(2 * half);
                for (Eigen::Index j = 0; j < g.basis.rows(); ++j) {
                    vec(prefix * half + (j << pad)) = g.basis(j, c);
                }
                if (g.p > hi) {
                    out.h_plus.push_back({prefix, g.p, vec});
                } else if (g.p < lo) {
                    out.h_minus.push_back({prefix, g.p, vec});
                }
            }
        }
    };
    emit(q, 0, a, b);
    emit(q_prime, 1, a_prime, b_prime);
    return out;
}

} // namespace qvp

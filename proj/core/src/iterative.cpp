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

#include "qvp/iterative.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace qvp {

IterativePlan IterativePlan::binary(int n, std::vector<double> accept_probs) {
    IterativePlan plan;
    plan.N = n;
    plan.alphabet = {"0", "1"};
    plan.g.reserve(accept_probs.size());
    for (double a : accept_probs) {
        plan.g.push_back({1.0 - a, a});
    }
    plan.validate();
    return plan;
}

IterativePlan IterativePlan::threshold(int n, int s0) {
    std::vector<double> accept(n + 1, 0.0);
    for (int s = s0; s <= n; ++s) {
        accept[s] = 1.0;
    }
    return binary(n, std::move(accept));
}

std::vector<double> IterativePlan::accept_weights() const {
    require(is_binary(), ErrorCode::WrongAlphabet, "plan is not binary");
    std::vector<double> out(g.size());
    for (std::size_t s = 0; s < g.size(); ++s) {
        out[s] = g[s][1];
    }
    return out;
}

void IterativePlan::validate() const {
    require(N >= 1, ErrorCode::PlanInvalid, "N must be at least 1");
    require(N <= config().n_cap, ErrorCode::PlanInvalid,
            "N exceeds the configured cap " + std::to_string(config().n_cap));
    require(alphabet.size() >= 2, ErrorCode::PlanInvalid, "need at least two letters");
    require(g.size() == static_cast<std::size_t>(N + 1), ErrorCode::PlanInvalid,
            "g must have N+1 rows");
    for (const auto& row : g) {
        require(row.size() == alphabet.size(), ErrorCode::PlanInvalid,
                "letter distribution width mismatch");
        double sum = 0.0;
        for (double v : row) {
            require(v >= -1e-15 && v <= 1.0 + 1e-15, ErrorCode::PlanInvalid,
                    "letter probability outside [0,1]");
            sum += v;
        }
        require(std::abs(sum - 1.0) <= 1e-12, ErrorCode::PlanInvalid,
                "letter distribution does not sum to 1");
    }
}

// ---------------------------------------------------------------------------
// Binomial machinery

namespace {

// log k! with compensated long double accumulation; grows on demand.
const long double* log_factorial_table(int upto) {
    static std::vector<long double> table{0.0L, 0.0L};
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    while (static_cast<int>(table.size()) <= upto) {
        const long double k = static_cast<long double>(table.size());
        table.push_back(table.back() + std::log(k));
    }
    return table.data();
}

} // namespace

double binom_pmf(int k, int n, double p) {
    require(n >= 0 && k >= 0 && k <= n, ErrorCode::BadInput, "pmf index outside 0..N");
    require(p >= 0.0 && p <= 1.0, ErrorCode::BadInput, "pmf bias outside [0,1]");
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    const long double* lf = log_factorial_table(n);
    const long double lp = std::log(static_cast<long double>(p));
    const long double lq = std::log1p(static_cast<long double>(-p));
    const long double log_pmf = lf[n] - lf[k] - lf[n - k] + k * lp + (n - k) * lq;
    return static_cast<double>(std::exp(log_pmf));
}

double binom_tail_outside(int lo, int hi, int n, double p) {
    long double inside = 0.0L;
    for (int k = std::max(0, lo); k <= std::min(n, hi); ++k) {
        inside += static_cast<long double>(binom_pmf(k, n, p));
    }
    const long double out = 1.0L - inside;
    return static_cast<double>(std::max(0.0L, out));
}

double pg(int n, const std::vector<double>& g, double p) {
    require(g.size() == static_cast<std::size_t>(n + 1), ErrorCode::PlanInvalid,
            "g must have N+1 entries");
    require(p >= 0.0 && p <= 1.0, ErrorCode::BadInput, "p outside [0,1]");
    long double acc = 0.0L;
    for (int k = 0; k <= n; ++k) {
        acc += static_cast<long double>(binom_pmf(k, n, p)) * static_cast<long double>(g[k]);
    }
    return static_cast<double>(acc);
}

double pg(const IterativePlan& plan, double p) {
    return pg(plan.N, plan.accept_weights(), p);
}

double pg_derivative(int n, const std::vector<double>& g, double p) {
    require(g.size() == static_cast<std::size_t>(n + 1), ErrorCode::PlanInvalid,
            "g must have N+1 entries");
    if (n == 0) return 0.0;
    long double acc = 0.0L;
    for (int k = 0; k < n; ++k) {
        acc += static_cast<long double>(binom_pmf(k, n - 1, p)) *
               static_cast<long double>(g[k + 1] - g[k]);
    }
    return static_cast<double>(n * acc);
}

double pg_derivative(const IterativePlan& plan, double p) {
    return pg_derivative(plan.N, plan.accept_weights(), p);
}

// ---------------------------------------------------------------------------
// Projectors and Jordan blocks

std::pair<ComplexMatrix, ComplexMatrix> projectors(const VerificationProcedure& q) {
    require(q.outcomes() == 2, ErrorCode::NotTwoOutcome, "projectors need two outcomes");
    const int k = q.ancilla_qubits();
    const Eigen::Index dim = q.description().dim();
    const Eigen::Index anc_dim = Eigen::Index(1) << k;

    ComplexMatrix pi0 = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        if ((i % anc_dim) == 0) {
            pi0(i, i) = 1.0;
        }
    }

    const ComplexMatrix& v = q.unitary();
    ComplexMatrix pv = v;
    pv.topRows(dim / 2).setZero(); // keep rows whose qubit-0 bit is 1
    ComplexMatrix pi1 = v.adjoint() * pv;
    pi1 = ((pi1 + pi1.adjoint()) / 2.0).eval();
    return {std::move(pi0), std::move(pi1)};
}

namespace {

void check_projector(const ComplexMatrix& p) {
    require(p.rows() == p.cols(), ErrorCode::NotProjector, "projector must be square");
    require(is_hermitian(p, config().projector_tol * 10), ErrorCode::NotProjector,
            "projector is not Hermitian");
    require(max_abs_diff(p * p, p) <= config().projector_tol * 10, ErrorCode::NotProjector,
            "projector is not idempotent");
}

// Orthonormal basis of range(P) for a projector P.
ComplexMatrix projector_range(const ComplexMatrix& p) {
    Eigensystem eig = hermitian_eigendecomposition(p);
    Eigen::Index r = 0;
    while (r < eig.values.size() && eig.values(r) > 0.5) {
        ++r;
    }
    return eig.vectors.leftCols(r);
}

} // namespace

JordanBlocks jordan_blocks(const ComplexMatrix& pi0, const ComplexMatrix& pi1) {
    require(pi0.rows() == pi1.rows() && pi0.cols() == pi1.cols(), ErrorCode::DimensionMismatch,
            "projector dimensions differ");
    check_projector(pi0);
    check_projector(pi1);

    const Eigen::Index dim = pi0.rows();
    const double edge_tol = 1e-10;

    JordanBlocks out;
    ComplexMatrix used(dim, 0); // accumulated block legs, orthonormal

    auto add_column = [&](const ComplexVector& v) {
        used.conservativeResize(dim, used.cols() + 1);
        used.col(used.cols() - 1) = v;
    };

    // Restriction of Pi_0 Pi_1 Pi_0 to range(Pi_0).
    const ComplexMatrix b0 = projector_range(pi0);
    if (b0.cols() > 0) {
        const ComplexMatrix d = b0.adjoint() * pi1 * b0;
        Eigensystem eig = hermitian_eigendecomposition((d + d.adjoint()) / 2.0);
        for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
            const double lambda = std::min(1.0, std::max(0.0, eig.values(i)));
            const ComplexVector a = b0 * eig.vectors.col(i);
            if (lambda >= 1.0 - edge_tol) {
                out.one_d.push_back({1, 1, a});
                add_column(a);
            } else if (lambda <= edge_tol) {
                out.one_d.push_back({1, 0, a});
                add_column(a);
            } else {
                ComplexVector w = pi1 * a - lambda * a;
                w /= w.norm();
                JordanBlocks::TwoD block;
                block.p = lambda;
                block.theta = std::acos(std::sqrt(lambda));
                block.basis = ComplexMatrix(dim, 2);
                block.basis.col(0) = a;
                block.basis.col(1) = w;
                out.two_d.push_back(std::move(block));
                add_column(a);
                add_column(w);
            }
        }
    }

    // What is left is invariant under both projectors and killed by Pi_0;
    // Pi_1 restricted there is again a projector.
    ComplexMatrix rest = ComplexMatrix::Identity(dim, dim) - used * used.adjoint();
    const ComplexMatrix br = projector_range((rest + rest.adjoint()) / 2.0);
    if (br.cols() > 0) {
        const ComplexMatrix c = br.adjoint() * pi1 * br;
        Eigensystem eig = hermitian_eigendecomposition((c + c.adjoint()) / 2.0);
        for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
            const double lambda = eig.values(i);
            require(lambda <= edge_tol * 100 || lambda >= 1.0 - edge_tol * 100,
                    ErrorCode::NotProjector,
                    "complement of the Jordan blocks is not projector-invariant");
            out.one_d.push_back({0, lambda > 0.5 ? 1 : 0, br * eig.vectors.col(i)});
        }
    }
    return out;
}

std::vector<double> JordanBlocks::spectrum_from_blocks() const {
    std::vector<double> values;
    for (const auto& b : one_d) {
        if (b.in_pi0 == 1) {
            values.push_back(static_cast<double>(b.p));
        }
    }
    for (const auto& b : two_d) {
        values.push_back(b.p);
    }
    std::sort(values.begin(), values.end(), std::greater<>());
    return values;
}

// ---------------------------------------------------------------------------
// Engines

double OutcomeDistribution::prob_of(const std::string& letter) const {
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (letters[i] == letter) {
            return probs(static_cast<Eigen::Index>(i));
        }
    }
    fail(ErrorCode::WrongAlphabet, "letter '" + letter + "' not in alphabet");
}

OutcomeDistribution run_iterative_exact(const SpectralDecomposition& s, const IterativePlan& plan,
                                        const DensityMatrix& input) {
    plan.validate();
    require(input.dim() == s.dim(), ErrorCode::DimensionMismatch, "input dimension mismatch");

    const int letters = plan.letters();
    RealVector probs = RealVector::Zero(letters);
    for (const auto& group : s.groups) {
        double weight = 0.0;
        for (Eigen::Index c = 0; c < group.basis.cols(); ++c) {
            const ComplexVector v = group.basis.col(c);
            weight += (v.adjoint() * input.matrix() * v)(0, 0).real();
        }
        if (weight <= 0.0) {
            continue;
        }
        for (int k = 0; k <= plan.N; ++k) {
            const double f = binom_pmf(k, plan.N, group.p);
            for (int l = 0; l < letters; ++l) {
                probs(l) += weight * f * plan.g[k][l];
            }
        }
    }
    // The group weights sum to Tr(rho)=1, so probs is a distribution.
    OutcomeDistribution out;
    out.letters = plan.alphabet;
    out.probs = probs;
    return out;
}

OutcomeDistribution run_iterative_exact(const VerificationProcedure& q, const IterativePlan& plan,
                                        const DensityMatrix& input) {
    return run_iterative_exact(spectrum(q), plan, input);
}

namespace {

struct RegisterSim {
    const VerificationProcedure& q;
    int n;
    Eigen::Index anc_dim;
    ComplexVector state;

    explicit RegisterSim(const VerificationProcedure& proc)
        : q(proc), n(proc.description().total_qubits()),
          anc_dim(Eigen::Index(1) << proc.ancilla_qubits()),
          state(ComplexVector::Zero(proc.description().dim())) {}

    void load_witness(const ComplexVector& psi) {
        state.setZero();
        for (Eigen::Index j = 0; j < psi.size(); ++j) {
            state(j * anc_dim) = psi(j);
        }
    }

    // Measure Pi_0 = I (x) |0^k><0^k|; projects and renormalizes.
    int measure_pi0(SplitMix64& rng) {
        double p_in = 0.0;
        for (Eigen::Index i = 0; i < state.size(); i += anc_dim) {
            p_in += std::norm(state(i));
        }
        const int outcome = rng.bernoulli(std::min(1.0, p_in)) ? 1 : 0;
        for (Eigen::Index i = 0; i < state.size(); ++i) {
            const bool in_range = (i % anc_dim) == 0;
            if (in_range != (outcome == 1)) {
                state(i) = 0.0;
            }
        }
        state.normalize();
        return outcome;
    }

    // Measure Pi_1 = V^dag (|1><1|_out (x) I) V by running the circuit
    // forwards, reading the output qubit, and running it backwards.
    int measure_pi1(SplitMix64& rng) {
        apply_gates(state, q.description().gates, n);
        const Eigen::Index half = state.size() / 2;
        double p_one = 0.0;
        for (Eigen::Index i = half; i < state.size(); ++i) {
            p_one += std::norm(state(i));
        }
        const int outcome = rng.bernoulli(std::min(1.0, p_one)) ? 1 : 0;
        if (outcome == 1) {
            state.head(half).setZero();
        } else {
            state.tail(half).setZero();
        }
        state.normalize();
        apply_gates_inverse(state, q.description().gates, n);
        return outcome;
    }

    // Witness-register state; valid right after Pi_0 outcome 1.
    ComplexVector witness_state() const {
        ComplexVector psi(state.size() / anc_dim);
        for (Eigen::Index j = 0; j < psi.size(); ++j) {
            psi(j) = state(j * anc_dim);
        }
        psi.normalize();
        return psi;
    }
};

int sample_letter(const std::vector<double>& row, SplitMix64& rng) {
    double u = rng.uniform();
    for (std::size_t l = 0; l < row.size(); ++l) {
        u -= row[l];
        if (u < 0.0) {
            return static_cast<int>(l);
        }
    }
    return static_cast<int>(row.size()) - 1;
}

} // namespace

SampledRun run_iterative_sampled(const VerificationProcedure& q, const IterativePlan& plan,
                                 const DensityMatrix& input, long shots, std::uint64_t seed,
                                 std::size_t trace_limit) {
    plan.validate();
    require(q.outcomes() == 2, ErrorCode::NotTwoOutcome, "sampling engine needs two outcomes");
    require(shots > 0, ErrorCode::ShotsZero, "need at least one shot");
    require(input.dim() == q.witness_dim(), ErrorCode::DimensionMismatch,
            "input dimension mismatch");

    // Pure components of the input, sampled per shot.
    Eigensystem rho_eig = hermitian_eigendecomposition(input.matrix());
    std::vector<double> comp_weights;
    std::vector<ComplexVector> comp_states;
    for (Eigen::Index i = 0; i < rho_eig.values.size(); ++i) {
        if (rho_eig.values(i) > 1e-14) {
            comp_weights.push_back(rho_eig.values(i));
            comp_states.push_back(rho_eig.vectors.col(i).normalized());
        }
    }

    SplitMix64 root(seed);
    RegisterSim sim(q);
    std::vector<long> tallies(plan.letters(), 0);

    SampledRun run;
    run.seed = seed;
    run.shots = shots;

    for (long shot = 0; shot < shots; ++shot) {
        SplitMix64 rng = root.split(static_cast<std::uint64_t>(shot));

        std::size_t comp = 0;
        if (comp_weights.size() > 1) {
            double u = rng.uniform();
            for (std::size_t c = 0; c < comp_weights.size(); ++c) {
                u -= comp_weights[c];
                if (u < 0.0) {
                    comp = c;
                    break;
                }
                comp = c;
            }
        }
        sim.load_witness(comp_states[comp]);

        std::vector<int> outcomes;
        outcomes.reserve(plan.N + 1);
        outcomes.push_back(sim.measure_pi0(rng)); // forced 1 on a valid input
        bool last_was_pi0 = true;
        while (static_cast<int>(outcomes.size()) < plan.N + 1) {
            if (last_was_pi0) {
                outcomes.push_back(sim.measure_pi1(rng));
            } else {
                outcomes.push_back(sim.measure_pi0(rng));
            }
            last_was_pi0 = !last_was_pi0;
        }

        std::vector<int> z(plan.N);
        int s = 0;
        for (int i = 0; i < plan.N; ++i) {
            z[i] = outcomes[i] == outcomes[i + 1] ? 1 : 0;
            s += z[i];
        }
        const int letter = sample_letter(plan.g[s], rng);
        ++tallies[letter];

        if (run.traces.size() < trace_limit) {
            SampleTrace trace;
            trace.outcomes = outcomes;
            trace.z = z;
            trace.s = s;
            trace.letter = plan.alphabet[letter];
            trace.ended_on_pi0_one = last_was_pi0 && outcomes.back() == 1;
            if (trace.ended_on_pi0_one) {
                trace.witness_fidelity = fidelity(sim.witness_state(), comp_states[comp]);
            }
            run.traces.push_back(std::move(trace));
        }
    }

    run.distribution.letters = plan.alphabet;
    run.distribution.probs = RealVector(plan.letters());
    for (int l = 0; l < plan.letters(); ++l) {
        run.distribution.probs(l) = static_cast<double>(tallies[l]) / static_cast<double>(shots);
    }
    return run;
}

// ---------------------------------------------------------------------------
// Iterative procedures as spectral objects

IterativeProcedure::IterativeProcedure(SpectralDecomposition base, IterativePlan plan)
    : base_(std::move(base)), plan_(std::move(plan)) {
    plan_.validate();
}

IterativeProcedure make_iterative(const VerificationProcedure& q, IterativePlan plan) {
    return IterativeProcedure(spectrum(q), std::move(plan));
}

double IterativeProcedure::mapped_value(std::size_t group) const {
    return pg(plan_.N, plan_.accept_weights(), base_.groups.at(group).p);
}

SpectralDecomposition IterativeProcedure::accept_spectrum() const {
    SpectralDecomposition out = base_;
    for (auto& g : out.groups) {
        g.p = pg(plan_.N, plan_.accept_weights(), g.p);
    }
    std::sort(out.groups.begin(), out.groups.end(),
              [](const SpectralGroup& a, const SpectralGroup& b) { return a.p > b.p; });
    return out;
}

ComplexMatrix IterativeProcedure::accept_operator() const {
    return accept_spectrum().accept_operator();
}

std::vector<ComplexMatrix> IterativeProcedure::povm() const {
    const int letters = plan_.letters();
    std::vector<ComplexMatrix> povm(letters,
                                    ComplexMatrix::Zero(base_.dim(), base_.dim()));
    for (std::size_t gi = 0; gi < base_.groups.size(); ++gi) {
        const ComplexMatrix proj = base_.projector(gi);
        for (int l = 0; l < letters; ++l) {
            double weight = 0.0;
            for (int k = 0; k <= plan_.N; ++k) {
                weight += binom_pmf(k, plan_.N, base_.groups[gi].p) * plan_.g[k][l];
            }
            povm[l] += weight * proj;
        }
    }
    return povm;
}

OutcomeDistribution IterativeProcedure::outcome_distribution(const DensityMatrix& input) const {
    return run_iterative_exact(base_, plan_, input);
}

double IterativeProcedure::accept_probability(const DensityMatrix& input) const {
    return outcome_distribution(input).prob_of("1");
}

double IterativeProcedure::accept_probability(const PureState& psi) const {
    return accept_probability(DensityMatrix::pure(psi));
}

AmplifiedProcedure amplify_threshold(const VerificationTask& task, int r) {
    require(r >= 1, ErrorCode::BadInput, "amplification exponent must be positive");
    task.validate();
    const double a = task.threshold("a");
    const double b = task.threshold("b");
    require(a > b, ErrorCode::GapTooSmall, "need a > b");
    const double target = std::ldexp(1.0, -r);

    const double gap = a - b;
    int n = static_cast<int>(std::ceil(2.0 * r * std::log(2.0) / (gap * gap)));
    n = std::max(n, 1);

    while (n <= config().n_cap) {
        const int s0 = static_cast<int>(std::ceil(n * (a + b) / 2.0));
        IterativePlan plan = IterativePlan::threshold(n, std::min(s0, n));
        const double high = pg(plan, a);
        const double low = pg(plan, b);
        if (high >= 1.0 - target && low <= target) {
            AmplifiedProcedure out{make_iterative(task.procedure, plan), n, std::min(s0, n),
                                   high, low, target};
            return out;
        }
        n = n + std::max(1, n / 5);
    }
    fail(ErrorCode::GapTooSmall,
         "threshold amplification needs N beyond the cap " + std::to_string(config().n_cap));
}

std::vector<double> jordan_chain_z_law(double p, int n) {
    require(p >= 0.0 && p <= 1.0, ErrorCode::BadInput, "p outside [0,1]");
    require(n >= 1 && n <= 20, ErrorCode::BadInput, "chain law supports N in 1..20");

    // Chain states: 0 = Pi_0 leg, 1 = its block complement after a Pi_0
    // outcome 0, 2 = Pi_1 leg, 3 = its complement. Outcome 1 probabilities:
    // from 0 -> Pi_1: p; from 1 -> Pi_1: 1-p; from 2 -> Pi_0: p;
    // from 3 -> Pi_0: 1-p.
    std::vector<double> law(std::size_t(1) << n, 0.0);

    struct Node {
        int state;
        int last_outcome;
        int step;       // outcomes registered so far
        std::size_t z;  // z bits accumulated (bit i-1 = z_i)
        double prob;
    };
    std::vector<Node> stack{{0, 1, 1, 0, 1.0}};
    while (!stack.empty()) {
        Node node = stack.back();
        stack.pop_back();
        if (node.step == n + 1) {
            law[node.z] += node.prob;
            continue;
        }
        const bool measuring_pi1 = node.state == 0 || node.state == 1;
        double p_one;
        if (node.state == 0) p_one = p;
        else if (node.state == 1) p_one = 1.0 - p;
        else if (node.state == 2) p_one = p;
        else p_one = 1.0 - p;

        for (int outcome = 0; outcome <= 1; ++outcome) {
            const double prob = node.prob * (outcome == 1 ? p_one : 1.0 - p_one);
            if (prob <= 0.0) {
                continue;
            }
            Node next = node;
            next.prob = prob;
            next.step = node.step + 1;
            next.last_outcome = outcome;
            if (measuring_pi1) {
                next.state = outcome == 1 ? 2 : 3;
            } else {
                next.state = outcome == 1 ? 0 : 1;
            }
            const int zi = outcome == node.last_outcome ? 1 : 0;
            if (zi) {
                next.z = node.z | (std::size_t(1) << (node.step - 1));
            }
            stack.push_back(next);
        }
    }
    return law;
}

} // namespace qvp

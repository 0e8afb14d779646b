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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qvp/spectral.hpp"

namespace qvp {

/// An (N, G) iterative-procedure plan: after registering N+1 alternating
/// projective outcomes, s counts the equal consecutive pairs and the output
/// letter is drawn from g[s]. Default alphabet {"0","1"}; {"L","0","Lbar"}
/// builds three-outcome procedures.
struct IterativePlan {
    int N = 1;
    std::vector<std::string> alphabet = {"0", "1"};
    std::vector<std::vector<double>> g; // (N+1) rows, one probability per letter

    static IterativePlan binary(int n, std::vector<double> accept_probs);
    static IterativePlan threshold(int n, int s0);

    int letters() const { return static_cast<int>(alphabet.size()); }
    bool is_binary() const { return alphabet.size() == 2 && alphabet[1] == "1"; }
    /// Accept-letter weights g(s) of a binary plan.
    std::vector<double> accept_weights() const;

    void validate() const;
};

/// Binomial pmf computed in log space (long double log-factorial table).
double binom_pmf(int k, int n, double p);
/// Total binomial mass outside the integer window [lo, hi].
double binom_tail_outside(int lo, int hi, int n, double p);

/// P_g(p) = E[g(X)], X ~ B(N, p).
double pg(int n, const std::vector<double>& g, double p);
double pg(const IterativePlan& plan, double p);

/// dP_g/dp via the Bernstein identity N * E[g(X'+1) - g(X')], X' ~ B(N-1,p),
/// which matches the termwise derivative with its endpoint limits.
double pg_derivative(int n, const std::vector<double>& g, double p);
double pg_derivative(const IterativePlan& plan, double p);

/// Pi_0 = I_m (x) |0^k><0^k| and Pi_1 = V^dag (|1><1|_out (x) I) V on the
/// full register of a two-outcome procedure.
std::pair<ComplexMatrix, ComplexMatrix> projectors(const VerificationProcedure& q);

/// Canonical two-projector (Jordan) decomposition. Every block is invariant
/// under both projectors; on a 2-d block each projector is rank one and
/// their overlap is cos^2(theta).
struct JordanBlocks {
    struct OneD {
        int in_pi0 = 0; // Pi_0 eigenvalue
        int p = 0;      // Pi_1 eigenvalue; the acceptance tag
        ComplexVector vec;
    };
    struct TwoD {
        double theta = 0.0; // cos^2(theta) in (0,1)
        double p = 0.0;     // cos^2(theta)
        ComplexMatrix basis; // dim x 2: Pi_0 leg first
    };
    std::vector<OneD> one_d;
    std::vector<TwoD> two_d;

    /// Acceptance probabilities of the blocks meeting range(Pi_0); these
    /// reproduce the procedure's spectrum.
    std::vector<double> spectrum_from_blocks() const;
};

JordanBlocks jordan_blocks(const ComplexMatrix& pi0, const ComplexMatrix& pi1);

struct OutcomeDistribution {
    std::vector<std::string> letters;
    RealVector probs;

    double prob_of(const std::string& letter) const;
};

struct SampleTrace {
    std::vector<int> outcomes;  // N+1 registered results, forced 1 first
    std::vector<int> z;         // z_i = [outcome_i == outcome_{i+1}]
    int s = 0;
    std::string letter;
    bool ended_on_pi0_one = false;
    double witness_fidelity = -1.0; // vs the input, when ended_on_pi0_one
};

struct SampledRun {
    OutcomeDistribution distribution; // empirical letter frequencies
    std::uint64_t seed = 0;
    long shots = 0;
    std::vector<SampleTrace> traces;  // first trace_limit shots
};

/// Exact engine: reduces to the spectrum plus P_g per eigenspace; never
/// touches the 2^{m+k} dynamics.
OutcomeDistribution run_iterative_exact(const VerificationProcedure& q, const IterativePlan& plan,
                                        const DensityMatrix& input);
OutcomeDistribution run_iterative_exact(const SpectralDecomposition& s, const IterativePlan& plan,
                                        const DensityMatrix& input);

/// Monte-Carlo engine: full statevector with alternating projective
/// measurements of Pi_0 and Pi_1 (the circuit run forwards and backwards).
SampledRun run_iterative_sampled(const VerificationProcedure& q, const IterativePlan& plan,
                                 const DensityMatrix& input, long shots, std::uint64_t seed,
                                 std::size_t trace_limit = 0);

/// A procedure defined as the (N, G)-iterative procedure over a base
/// two-outcome procedure; it shares the base eigenbasis and maps each base
/// eigenvalue p through the per-letter weight E[g_letter(B(N,p))].
class IterativeProcedure {
  public:
    IterativeProcedure(SpectralDecomposition base, IterativePlan plan);

    const SpectralDecomposition& base_spectrum() const { return base_; }
    const IterativePlan& plan() const { return plan_; }
    int witness_qubits() const { return base_.witness_qubits; }
    int outcomes() const { return plan_.letters(); }

    /// Mapped acceptance probability of the group: P_g(p) for binary plans.
    double mapped_value(std::size_t group) const;
    /// Spectral decomposition of the induced accept operator (binary plans).
    SpectralDecomposition accept_spectrum() const;
    ComplexMatrix accept_operator() const;
    std::vector<ComplexMatrix> povm() const;

    OutcomeDistribution outcome_distribution(const DensityMatrix& input) const;
    double accept_probability(const DensityMatrix& input) const;
    double accept_probability(const PureState& psi) const;

  private:
    SpectralDecomposition base_;
    IterativePlan plan_;
};

IterativeProcedure make_iterative(const VerificationProcedure& q, IterativePlan plan);

/// Marriott-Watrous threshold amplification: s_0 = ceil(N (a+b)/2) with N
/// chosen by the Chernoff/Hoeffding bound and verified through pg.
struct AmplifiedProcedure {
    IterativeProcedure procedure;
    int N = 0;
    int s0 = 0;
    double achieved_high = 0.0; // pg(a)
    double achieved_low = 0.0;  // pg(b)
    double target = 0.0;        // 2^-r
};

AmplifiedProcedure amplify_threshold(const VerificationTask& task, int r);

/// Exact joint law of (z_1..z_N) over the two-projector Markov chain for a
/// block with acceptance p; index bit i-1 of the result holds z_i. Used by
/// the i.i.d. certificate (Bernoulli product comparison).
std::vector<double> jordan_chain_z_law(double p, int n);

} // namespace qvp

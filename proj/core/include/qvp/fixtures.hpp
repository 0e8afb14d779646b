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

#include "qvp/constructions.hpp"

namespace qvp {

/// The exponentially-close-spectrum example: delta = 2^-n-2 and spectrum
/// {1/3, 2/3 - delta^2, 2/3 + delta, 0}. n is capped so delta^2 stays
/// resolvable at the default grouping tolerance.
struct Example1Fixture {
    VerificationProcedure procedure;
    std::vector<double> probs;
    double delta = 0.0;

    /// The borderline witness sqrt(d/(1+d))|psi_{2/3+d}> + sqrt(1/(1+d))|psi_{2/3-d^2}>.
    PureState borderline_witness() const;
};

Example1Fixture make_example1(int n);

/// Random circuit over the named gate set plus occasional raw unitaries.
VerificationProcedure make_random_procedure(std::uint64_t seed, int m, int k, int gate_count = 0);

/// Diagonal procedure conjugated by a Haar unitary on the witness register
/// (m <= 3), giving a controlled spectrum in a non-computational basis.
VerificationProcedure rotated_from_spectrum(const std::vector<double>& probs,
                                            std::uint64_t seed);

/// Same procedure with extra untouched |0> ancillas appended.
VerificationProcedure with_extra_ancillas(const VerificationProcedure& q, int extra);

/// Probabilities avoiding the listed critical points by at least `margin`.
std::vector<double> random_probs_avoiding(SplitMix64& rng, int count,
                                          const std::vector<double>& avoid, double margin,
                                          double lo = 0.0, double hi = 1.0);

/// A planted robust-reduction instance pair: Q at one in-language and one
/// out-of-language instance, a total procedure, and a channel whose
/// eigenvalue transfer is affine above the near-witness threshold, making
/// robustness hold for every state by construction. planted_fault breaks
/// one near-witness on purpose.
struct RobustPairFixture {
    VerificationTask q_in;      // instance "xL"
    VerificationTask q_out;     // instance "xnotL"
    VerificationTask q_total;   // instance "t0"
    Reduction reduction;
    double eta = 0.0;
    std::vector<double> total_probs;
    std::vector<double> q_in_probs;
    std::vector<double> q_out_probs;
    std::vector<int> permutation;
    bool planted_fault = false;
};

RobustPairFixture make_robust_pair(std::uint64_t seed, int m, int k, bool planted_fault = false);

/// Fixture bundles on disk (directory of JSON files).
void write_example1_bundle(const std::string& dir, int n);
void write_random_bundle(const std::string& dir, std::uint64_t seed, int m, int k);
void write_robust_pair_bundle(const std::string& dir, std::uint64_t seed, int m, int k,
                              bool planted_fault);
RobustPairFixture load_robust_pair_bundle(const std::string& dir);

} // namespace qvp

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

#include "qvp/iterative.hpp"

namespace qvp {

/// Interpolation anchors for eigenvalue-map synthesis: strictly increasing
/// s and t with fixed endpoints 0 and 1 and declared minimum gaps eps and
/// delta. f(s_i) = t_i is the contract.
struct TargetPointSet {
    std::vector<double> s; // 0 = s_0 < ... < s_{M+1} = 1
    std::vector<double> t; // 0 = t_0 < ... < t_{M+1} = 1
    double eps = 0.0;      // min gap of s
    double delta = 0.0;    // min gap of t

    static TargetPointSet from(std::vector<double> s, std::vector<double> t);

    int interior_points() const { return static_cast<int>(s.size()) - 2; }
    void validate() const;
};

/// Output of the synthesis: a weight table g over {0..N} whose induced map
/// P_g interpolates the targets, together with the full certificate.
struct SynthesizedEMap {
    int N = 0;
    std::vector<double> g;          // length N+1, values in [0,1]
    std::vector<double> lambda;     // length M+2, endpoints pinned to 0
    std::vector<double> residuals;  // |P_g(s_i) - t_i| per anchor
    std::vector<double> mu;         // binomial mass outside Delta_i per anchor
    double sigma = 0.0;             // delta / (2 eps), the plateau slope
    double lambda_max = 0.0;        // max |lambda_i|
    double monotone_certificate = 0.0; // min grid increment of P_g
    double min_derivative = 0.0;    // min pg_derivative on the grid
    double condition_estimate = 0.0;
    double clip_magnitude = 0.0;    // how far g left [0,1] before clamping
    TargetPointSet targets;

    double map(double p) const { return pg(N, g, p); }
};

/// Constructive synthesis following the piecewise-linear-plus-correction
/// scheme: N doubles from 64 until the exact binomial tails admit the
/// linear system for lambda and the solved table passes every certificate
/// (residuals <= tol, lambda_max < delta/3 and <= 2M(2+sigma N)mu, strict
/// monotonicity on a 2049-point grid, clipping <= lambda_max).
SynthesizedEMap synthesize(const TargetPointSet& targets, double tol = 1e-9, int n_cap = 0);

/// The iterative procedure realizing the synthesized map over Q; shares
/// Q's eigenbasis and maps each eigenvalue p to P_g(p).
IterativeProcedure apply_emap(const VerificationProcedure& q, const SynthesizedEMap& em);

/// Eigenspace-preservation certificate between two accept operators.
struct EMapCertificate {
    bool pass = false;
    double max_commutator = 0.0;
    double max_projector_mismatch = 0.0;
    bool increasing = false;
    std::vector<std::pair<double, double>> observed_map; // (p, f(p)) pairs
};

EMapCertificate verify_emap(const ComplexMatrix& e1_from, const ComplexMatrix& e1_to,
                            const std::vector<double>& sample_points = {},
                            double tol = 1e-8);
EMapCertificate verify_emap(const VerificationProcedure& q_from, const IterativeProcedure& q_to,
                            const std::vector<double>& sample_points = {});

} // namespace qvp

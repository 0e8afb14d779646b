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

#include <utility>
#include <vector>

#include "qvp/procedure.hpp"

namespace qvp {

/// One eigenspace of the accept operator: acceptance probability p with an
/// orthonormal basis of its eigenvectors.
struct SpectralGroup {
    double p = 0.0;
    int multiplicity = 0;
    ComplexMatrix basis; // witness_dim x multiplicity
};

/// Spectrum and eigenspaces of a two-outcome procedure, groups sorted by p
/// descending. Eigenvalues within grouping_tol of each other share a group.
struct SpectralDecomposition {
    std::vector<SpectralGroup> groups;
    double grouping_tol = 0.0;
    int witness_qubits = 0;

    Eigen::Index dim() const { return Eigen::Index(1) << witness_qubits; }
    int total_multiplicity() const;

    /// Eigenbasis flattened in group order (columns).
    ComplexMatrix eigenbasis() const;
    /// Acceptance probability per flattened eigenvector.
    std::vector<double> eigenvalues() const;
    /// Projector onto the group's eigenspace.
    ComplexMatrix projector(std::size_t group) const;
    /// Accept operator reconstructed as sum_p p * Pi_p.
    ComplexMatrix accept_operator() const;
    /// Diagonal weights <psi_i| rho |psi_i> in the flattened eigenbasis.
    std::vector<double> diagonal_weights(const DensityMatrix& rho) const;
};

SpectralDecomposition spectrum(const VerificationProcedure& q);
SpectralDecomposition spectrum(const VerificationProcedure& q, double grouping_tol);

/// Spectrum of an explicit accept operator (any positive contraction).
SpectralDecomposition spectrum_of_accept_operator(const ComplexMatrix& e1, double grouping_tol);

/// Union of closed subintervals of [0,1].
using IntervalUnion = std::vector<std::pair<double, double>>;

/// Empty basis allowed; basis columns orthonormal.
struct Subspace {
    Eigen::Index ambient_dim = 0;
    ComplexMatrix basis; // ambient_dim x r, r >= 0

    Eigen::Index dimension() const { return basis.cols(); }
    ComplexMatrix projector() const;
};

/// Span of all eigenspaces whose p lies in the interval union. Interval
/// membership carries the grouping tolerance as boundary slack.
Subspace subspace_select(const SpectralDecomposition& s, const IntervalUnion& intervals);

/// Tr(Pi_W rho), clipped to [0,1].
double overlap(const DensityMatrix& rho, const Subspace& w);

enum class MembershipMode { R_geq, R_leq, H_geq, H_leq };

/// R modes compare Tr(E_1 rho) with the threshold (margin = signed gap);
/// H modes test the projector residual ||(I - Pi_W)|psi>|| against the
/// residual tolerance (margin = tol - residual). Positive margin = member,
/// up to the configured comparison slack.
struct Membership {
    bool member = false;
    double margin = 0.0;
};

Membership membership(const VerificationProcedure& q, double threshold,
                      const DensityMatrix& rho, MembershipMode mode);
Membership membership(const VerificationProcedure& q, double threshold,
                      const PureState& psi, MembershipMode mode);

/// Certificate for the no-interference identity
/// Pr[accept on sum_i alpha_i |psi_i>] = sum_i |alpha_i|^2 p_i.
struct InterferenceCertificate {
    double lhs = 0.0;       // direct POVM evaluation
    double rhs = 0.0;       // convex combination over the spectrum
    double deviation = 0.0;
    bool pass = false;
};

InterferenceCertificate verify_no_interference(const VerificationProcedure& q,
                                               const ComplexVector& alpha,
                                               double tol = 1e-10);

} // namespace qvp

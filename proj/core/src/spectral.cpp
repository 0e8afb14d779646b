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

#include "qvp/spectral.hpp"

#include <cmath>

namespace qvp {

int SpectralDecomposition::total_multiplicity() const {
    int total = 0;
    for (const auto& g : groups) {
        total += g.multiplicity;
    }
    return total;
}

ComplexMatrix SpectralDecomposition::eigenbasis() const {
    ComplexMatrix basis(dim(), total_multiplicity());
    Eigen::Index col = 0;
    for (const auto& g : groups) {
        basis.block(0, col, dim(), g.multiplicity) = g.basis;
        col += g.multiplicity;
    }
    return basis;
}

std::vector<double> SpectralDecomposition::eigenvalues() const {
    std::vector<double> out;
    for (const auto& g : groups) {
        out.insert(out.end(), g.multiplicity, g.p);
    }
    return out;
}

ComplexMatrix SpectralDecomposition::projector(std::size_t group) const {
    const auto& b = groups.at(group).basis;
    return b * b.adjoint();
}

ComplexMatrix SpectralDecomposition::accept_operator() const {
    ComplexMatrix e1 = ComplexMatrix::Zero(dim(), dim());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        e1 += groups[i].p * projector(i);
    }
    return e1;
}

std::vector<double> SpectralDecomposition::diagonal_weights(const DensityMatrix& rho) const {
    require(rho.dim() == dim(), ErrorCode::DimensionMismatch, "state dimension mismatch");
    std::vector<double> out;
    out.reserve(total_multiplicity());
    for (const auto& g : groups) {
        for (Eigen::Index c = 0; c < g.basis.cols(); ++c) {
            const ComplexVector v = g.basis.col(c);
            out.push_back(std::max(0.0, (v.adjoint() * rho.matrix() * v)(0, 0).real()));
        }
    }
    return out;
}

SpectralDecomposition spectrum_of_accept_operator(const ComplexMatrix& e1, double grouping_tol) {
    Eigensystem eig = hermitian_eigendecomposition(e1);
    const Eigen::Index n = eig.values.size();

    SpectralDecomposition out;
    out.grouping_tol = grouping_tol;
    out.witness_qubits = qubits_for_dim(n);

    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        // Chain neighbors: consecutive eigenvalues within tolerance stay in
        // one group (values descend).
        while (end < n && eig.values(end - 1) - eig.values(end) <= grouping_tol) {
            ++end;
        }
        SpectralGroup g;
        g.multiplicity = static_cast<int>(end - start);
        g.basis = eig.vectors.block(0, start, n, end - start);
        double mean = 0.0;
        for (Eigen::Index i = start; i < end; ++i) {
            mean += eig.values(i);
        }
        g.p = std::min(1.0, std::max(0.0, mean / double(g.multiplicity)));
        out.groups.push_back(std::move(g));
        start = end;
    }
    return out;
}

SpectralDecomposition spectrum(const VerificationProcedure& q, double grouping_tol) {
    require(q.outcomes() == 2, ErrorCode::NotTwoOutcome, "spectrum needs a two-outcome procedure");
    return spectrum_of_accept_operator(q.accept_operator(), grouping_tol);
}

SpectralDecomposition spectrum(const VerificationProcedure& q) {
    return spectrum(q, config().grouping_tol);
}

ComplexMatrix Subspace::projector() const {
    if (basis.cols() == 0) {
        return ComplexMatrix::Zero(ambient_dim, ambient_dim);
    }
    return basis * basis.adjoint();
}

Subspace subspace_select(const SpectralDecomposition& s, const IntervalUnion& intervals) {
    const double slack = s.grouping_tol;
    for (const auto& [lo, hi] : intervals) {
        require(lo <= hi, ErrorCode::BadInput, "interval with lo > hi");
    }
    auto selected = [&](double p) {
        for (const auto& [lo, hi] : intervals) {
            if (p >= lo - slack && p <= hi + slack) {
                return true;
            }
        }
        return false;
    };

    Eigen::Index cols = 0;
    for (const auto& g : s.groups) {
        if (selected(g.p)) {
            cols += g.multiplicity;
        }
    }
    Subspace out;
    out.ambient_dim = s.dim();
    out.basis = ComplexMatrix(s.dim(), cols);
    Eigen::Index at = 0;
    for (const auto& g : s.groups) {
        if (selected(g.p)) {
            out.basis.block(0, at, s.dim(), g.multiplicity) = g.basis;
            at += g.multiplicity;
        }
    }
    return out;
}

double overlap(const DensityMatrix& rho, const Subspace& w) {
    require(rho.dim() == w.ambient_dim, ErrorCode::DimensionMismatch,
            "state and subspace dimensions differ");
    double value = 0.0;
    for (Eigen::Index c = 0; c < w.basis.cols(); ++c) {
        const ComplexVector v = w.basis.col(c);
        value += (v.adjoint() * rho.matrix() * v)(0, 0).real();
    }
    return std::min(1.0, std::max(0.0, value));
}

namespace {

Membership r_mode_membership(const VerificationProcedure& q, double threshold,
                             const DensityMatrix& rho, MembershipMode mode) {
    const double p = q.accept_probability(rho);
    const double margin = (mode == MembershipMode::R_geq) ? p - threshold : threshold - p;
    return {margin >= -config().membership_slack, margin};
}

Membership h_mode_membership(const VerificationProcedure& q, double threshold,
                             const PureState& psi, MembershipMode mode) {
    SpectralDecomposition s = spectrum(q);
    IntervalUnion window;
    if (mode == MembershipMode::H_geq) {
        window.emplace_back(threshold, 1.0);
    } else {
        window.emplace_back(0.0, threshold);
    }
    const Subspace w = subspace_select(s, window);
    const ComplexVector residual_vec = psi.amplitudes() - w.projector() * psi.amplitudes();
    const double residual = residual_vec.norm();
    const double margin = config().residual_tol - residual;
    return {margin >= 0.0, margin};
}

} // namespace

Membership membership(const VerificationProcedure& q, double threshold,
                      const DensityMatrix& rho, MembershipMode mode) {
    require(threshold >= 0.0 && threshold <= 1.0, ErrorCode::BadInput, "threshold outside [0,1]");
    require(mode == MembershipMode::R_geq || mode == MembershipMode::R_leq,
            ErrorCode::BadInput, "H modes need a pure state");
    return r_mode_membership(q, threshold, rho, mode);
}

Membership membership(const VerificationProcedure& q, double threshold,
                      const PureState& psi, MembershipMode mode) {
    require(threshold >= 0.0 && threshold <= 1.0, ErrorCode::BadInput, "threshold outside [0,1]");
    if (mode == MembershipMode::R_geq || mode == MembershipMode::R_leq) {
        return r_mode_membership(q, threshold, DensityMatrix::pure(psi), mode);
    }
    return h_mode_membership(q, threshold, psi, mode);
}

InterferenceCertificate verify_no_interference(const VerificationProcedure& q,
                                               const ComplexVector& alpha, double tol) {
    const double norm_sq = alpha.squaredNorm();
    require(std::abs(norm_sq - 1.0) <= 1e-9, ErrorCode::NotNormalized,
            "coefficients are not normalized");

    SpectralDecomposition s = spectrum(q);
    require(alpha.size() == s.dim(), ErrorCode::DimensionMismatch,
            "coefficient count must match the witness dimension");

    const ComplexMatrix basis = s.eigenbasis();
    const std::vector<double> values = s.eigenvalues();

    ComplexVector psi = ComplexVector::Zero(s.dim());
    double rhs = 0.0;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        psi += alpha(i) * basis.col(i);
        rhs += std::norm(alpha(i)) * values[i];
    }
    psi.normalize();

    InterferenceCertificate cert;
    cert.lhs = q.accept_probability(PureState(psi));
    cert.rhs = rhs;
    cert.deviation = std::abs(cert.lhs - cert.rhs);
    cert.pass = cert.deviation <= tol;
    return cert;
}

} // namespace qvp

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

#include "qvp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qvp {

Config& config() {
    static Config instance;
    return instance;
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::BadIndex: return "BadIndex";
        case ErrorCode::NonUnitaryGate: return "NonUnitaryGate";
        case ErrorCode::TooManyQubits: return "TooManyQubits";
        case ErrorCode::MalformedGate: return "MalformedGate";
        case ErrorCode::BadLength: return "BadLength";
        case ErrorCode::NotTwoOutcome: return "NotTwoOutcome";
        case ErrorCode::NotProjector: return "NotProjector";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::PlanInvalid: return "PlanInvalid";
        case ErrorCode::ShotsZero: return "ShotsZero";
        case ErrorCode::GapTooSmall: return "GapTooSmall";
        case ErrorCode::SynthesisFailed: return "SynthesisFailed";
        case ErrorCode::DegenerateSystem: return "DegenerateSystem";
        case ErrorCode::NotMonotone: return "NotMonotone";
        case ErrorCode::NotJointlyDiagonalizable: return "NotJointlyDiagonalizable";
        case ErrorCode::WrongAlphabet: return "WrongAlphabet";
        case ErrorCode::DimensionCap: return "DimensionCap";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::TapeTooLong: return "TapeTooLong";
        case ErrorCode::WitnessTooLong: return "WitnessTooLong";
        case ErrorCode::SizeCap: return "SizeCap";
        case ErrorCode::BadInput: return "BadInput";
    }
    return "UnknownError";
}

double SplitMix64::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

int qubits_for_dim(Eigen::Index dim) {
    require(dim >= 1, ErrorCode::DimensionMismatch, "dimension must be positive");
    int n = 0;
    Eigen::Index d = dim;
    while (d > 1) {
        require(d % 2 == 0, ErrorCode::DimensionMismatch,
                "dimension " + std::to_string(dim) + " is not a power of two");
        d /= 2;
        ++n;
    }
    return n;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    ComplexMatrix gram = m.adjoint() * m;
    gram -= ComplexMatrix::Identity(m.rows(), m.cols());
    return gram.cwiseAbs().maxCoeff() <= tol;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::DimensionMismatch,
            "matrix shapes differ");
    return (a - b).cwiseAbs().maxCoeff();
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    qubits_ = qubits_for_dim(amplitudes_.size());
    require(amplitudes_.allFinite(), ErrorCode::BadInput, "state has non-finite amplitudes");
    const double norm_sq = amplitudes_.squaredNorm();
    require(std::abs(norm_sq - 1.0) <= config().state_norm_tol * 10 + 1e-12,
            ErrorCode::NotNormalized,
            "squared norm " + std::to_string(norm_sq) + " is not 1");
}

PureState PureState::basis(int qubits, std::uint64_t index) {
    ComplexVector v = ComplexVector::Zero(Eigen::Index(1) << qubits);
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    require(matrix_.rows() == matrix_.cols(), ErrorCode::DimensionMismatch,
            "density matrix must be square");
    qubits_ = qubits_for_dim(matrix_.rows());
    require(is_hermitian(matrix_, config().density_tol * 10), ErrorCode::NotHermitian,
            "density matrix is not Hermitian");
    const double tr = matrix_.trace().real();
    require(std::abs(tr - 1.0) <= config().density_tol * 10, ErrorCode::BadInput,
            "density matrix trace " + std::to_string(tr) + " is not 1");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
    require(solver.eigenvalues().minCoeff() >= -config().density_eig_tol, ErrorCode::BadInput,
            "density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
    return DensityMatrix(psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(int qubits) {
    const Eigen::Index dim = Eigen::Index(1) << qubits;
    return DensityMatrix(ComplexMatrix::Identity(dim, dim) / double(dim));
}

namespace {

// Deterministic phase convention: rotate each column so its largest-magnitude
// entry (first among near-ties) is real positive.
void canonicalize_columns(ComplexMatrix& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index pivot = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            const double mag = std::abs(vectors(r, c));
            if (mag > best * (1.0 + 1e-12)) {
                best = mag;
                pivot = r;
            }
        }
        const Complex z = vectors(pivot, c);
        if (std::abs(z) > 0) {
            vectors.col(c) *= std::conj(z) / std::abs(z);
        }
    }
}

} // namespace

Eigensystem hermitian_eigendecomposition(const ComplexMatrix& h) {
    require(h.rows() == h.cols(), ErrorCode::DimensionMismatch, "matrix must be square");
    require(is_hermitian(h, config().hermitian_tol), ErrorCode::NotHermitian,
            "asymmetry exceeds tolerance");

    // Work on the symmetrized matrix so the tolerance-level asymmetry cannot
    // leak into the spectrum.
    ComplexMatrix sym = (h + h.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    require(solver.info() == Eigen::Success, ErrorCode::DegenerateSystem,
            "eigendecomposition did not converge");

    const Eigen::Index n = h.rows();
    Eigensystem out;
    out.values = RealVector(n);
    out.vectors = ComplexMatrix(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = solver.eigenvalues()(n - 1 - i);
        out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    canonicalize_columns(out.vectors);
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep_qubits) {
    const int n = rho.qubits();
    std::vector<bool> keep(n, false);
    for (int q : keep_qubits) {
        require(q >= 0 && q < n, ErrorCode::BadIndex,
                "qubit " + std::to_string(q) + " outside register of " + std::to_string(n));
        require(!keep[q], ErrorCode::BadIndex, "duplicate qubit " + std::to_string(q));
        keep[q] = true;
    }

    std::vector<int> kept, traced;
    for (int q = 0; q < n; ++q) {
        (keep[q] ? kept : traced).push_back(q);
    }
    const int nk = static_cast<int>(kept.size());
    const int nt = static_cast<int>(traced.size());
    const Eigen::Index dim_k = Eigen::Index(1) << nk;
    const Eigen::Index dim_t = Eigen::Index(1) << nt;

    // Qubit q occupies bit (n-1-q) of the row index.
    auto compose = [&](Eigen::Index ik, Eigen::Index it) {
        Eigen::Index idx = 0;
        for (int b = 0; b < nk; ++b) {
            if ((ik >> (nk - 1 - b)) & 1) {
                idx |= Eigen::Index(1) << (n - 1 - kept[b]);
            }
        }
        for (int b = 0; b < nt; ++b) {
            if ((it >> (nt - 1 - b)) & 1) {
                idx |= Eigen::Index(1) << (n - 1 - traced[b]);
            }
        }
        return idx;
    };

    ComplexMatrix out = ComplexMatrix::Zero(dim_k, dim_k);
    for (Eigen::Index i = 0; i < dim_k; ++i) {
        for (Eigen::Index j = 0; j < dim_k; ++j) {
            Complex sum = 0.0;
            for (Eigen::Index t = 0; t < dim_t; ++t) {
                sum += rho.matrix()(compose(i, t), compose(j, t));
            }
            out(i, j) = sum;
        }
    }
    // Clean the roundoff asymmetry so the result passes its own invariants.
    out = (out + out.adjoint().eval()) / 2.0;
    return DensityMatrix(std::move(out));
}

PureState random_pure_state(int qubits, SplitMix64& rng) {
    const Eigen::Index dim = Eigen::Index(1) << qubits;
    ComplexVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        v(i) = Complex(rng.normal(), rng.normal());
    }
    v.normalize();
    return PureState(std::move(v));
}

ComplexMatrix haar_unitary(Eigen::Index dim, SplitMix64& rng) {
    ComplexMatrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            g(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : Complex(1.0, 0.0);
    }
    return q;
}

double fidelity(const ComplexVector& a, const ComplexVector& b) {
    require(a.size() == b.size(), ErrorCode::DimensionMismatch, "vector sizes differ");
    return std::norm(a.dot(b));
}

} // namespace qvp

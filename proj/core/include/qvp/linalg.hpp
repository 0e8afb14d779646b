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

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qvp/config.hpp"
#include "qvp/errors.hpp"
#include "qvp/rng.hpp"

namespace qvp {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Number of qubits for a 2^n dimensional space; throws if dim is not a
/// power of two.
int qubits_for_dim(Eigen::Index dim);

bool is_hermitian(const ComplexMatrix& m, double tol);
bool is_unitary(const ComplexMatrix& m, double tol);

/// Largest absolute entry of (a - b); the max-norm distance used by the
/// certificate checks.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);

/// Normalized state of one or more qubits. Qubit 0 is the leftmost tensor
/// factor, i.e. the most significant bit of the amplitude index.
class PureState {
  public:
    explicit PureState(ComplexVector amplitudes);

    /// Computational basis state |index> of `qubits` qubits.
    static PureState basis(int qubits, std::uint64_t index);

    Eigen::Index dim() const { return amplitudes_.size(); }
    int qubits() const { return qubits_; }
    const ComplexVector& amplitudes() const { return amplitudes_; }

    Eigen::MatrixXcd projector() const { return amplitudes_ * amplitudes_.adjoint(); }

  private:
    ComplexVector amplitudes_;
    int qubits_;
};

/// Unit-trace positive Hermitian operator on a qubit register.
class DensityMatrix {
  public:
    explicit DensityMatrix(ComplexMatrix matrix);

    static DensityMatrix pure(const PureState& psi);
    static DensityMatrix maximally_mixed(int qubits);

    Eigen::Index dim() const { return matrix_.rows(); }
    int qubits() const { return qubits_; }
    const ComplexMatrix& matrix() const { return matrix_; }

  private:
    ComplexMatrix matrix_;
    int qubits_;
};

struct Eigensystem {
    RealVector values;      // descending
    ComplexMatrix vectors;  // orthonormal columns, values[i] <-> col i
};

/// Diagonalize a Hermitian matrix. Eigenvalues descend; degenerate clusters
/// get a deterministic basis (stable order, largest component made real
/// positive) so repeated runs on identical bytes agree bit for bit.
Eigensystem hermitian_eigendecomposition(const ComplexMatrix& h);

/// Trace out every qubit not listed in keep_qubits (indices into the full
/// register, qubit 0 leftmost). Kept qubits retain their relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep_qubits);

/// Random states and unitaries (Haar measure) for fixtures and probes.
PureState random_pure_state(int qubits, SplitMix64& rng);
ComplexMatrix haar_unitary(Eigen::Index dim, SplitMix64& rng);

/// |<a|b>|^2 between unit vectors.
double fidelity(const ComplexVector& a, const ComplexVector& b);

} // namespace qvp

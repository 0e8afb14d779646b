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

namespace qvp {

/// Numerical tolerances and size caps. All defaults match the documented
/// contracts; override through config() before building objects.
struct Config {
    double hermitian_tol = 1e-10;  // asymmetry allowed before NotHermitian
    double state_norm_tol = 1e-12; // |norm - 1| allowed on pure states
    double density_tol = 1e-12;    // Hermiticity/trace slack on density matrices
    double density_eig_tol = 1e-10;// how negative a density eigenvalue may be
    double unitary_tol = 1e-10;    // gate unitarity slack
    double povm_tol = 1e-9;        // completeness slack on outcome POVMs
    double grouping_tol = 1e-9;    // spectral grouping width
    double projector_tol = 1e-10;  // idempotence slack
    double membership_slack = 1e-12; // comparison slack in threshold tests
    double residual_tol = 1e-9;    // subspace membership residual

    int qubit_cap = 14;            // total qubits per simulated register
    int n_cap = 4096;              // iterative plan length cap
};

Config& config();

} // namespace qvp

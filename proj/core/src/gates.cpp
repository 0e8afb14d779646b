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

#include "qvp/gates.hpp"

#include <cmath>

namespace qvp {

namespace {

const Complex kI(0.0, 1.0);

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

ComplexMatrix named_matrix_1q(const std::string& name, double theta) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    if (name == "h") return mat2(inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2);
    if (name == "x") return mat2(0, 1, 1, 0);
    if (name == "y") return mat2(0, -kI, kI, 0);
    if (name == "z") return mat2(1, 0, 0, -1);
    if (name == "s") return mat2(1, 0, 0, kI);
    if (name == "t") return mat2(1, 0, 0, std::exp(kI * (M_PI / 4.0)));
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    if (name == "rx") return mat2(c, -kI * s, -kI * s, c);
    if (name == "ry") return mat2(c, -s, s, c);
    if (name == "rz") return mat2(std::exp(-kI * (theta / 2.0)), 0, 0, std::exp(kI * (theta / 2.0)));
    fail(ErrorCode::MalformedGate, "unknown gate name '" + name + "'");
}

ComplexMatrix swap_matrix() {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 2) = 1;
    m(2, 1) = 1;
    m(3, 3) = 1;
    return m;
}

} // namespace

Gate make_gate(const std::string& name, std::vector<int> qubits,
               std::vector<int> controls, double theta) {
    Gate g;
    g.theta = theta;
    g.controls = std::move(controls);

    if (name == "cx" || name == "cz") {
        require(qubits.size() == 2, ErrorCode::MalformedGate, name + " takes 2 qubits");
        g.name = name.substr(1);
        g.controls.push_back(qubits[0]);
        g.targets = {qubits[1]};
        g.matrix = named_matrix_1q(g.name, 0.0);
        return g;
    }
    if (name == "ccx") {
        require(qubits.size() == 3, ErrorCode::MalformedGate, "ccx takes 3 qubits");
        g.name = "x";
        g.controls.push_back(qubits[0]);
        g.controls.push_back(qubits[1]);
        g.targets = {qubits[2]};
        g.matrix = named_matrix_1q("x", 0.0);
        return g;
    }
    if (name == "swap") {
        require(qubits.size() == 2, ErrorCode::MalformedGate, "swap takes 2 qubits");
        g.name = "swap";
        g.targets = std::move(qubits);
        g.matrix = swap_matrix();
        return g;
    }
    require(qubits.size() == 1, ErrorCode::MalformedGate, name + " takes 1 qubit");
    g.name = name;
    g.targets = std::move(qubits);
    g.matrix = named_matrix_1q(name, theta);
    return g;
}

Gate raw_gate(ComplexMatrix matrix, std::vector<int> targets, std::vector<int> controls) {
    const std::size_t t = targets.size();
    require(t >= 1 && t <= 3, ErrorCode::MalformedGate, "raw gates take 1..3 targets");
    const Eigen::Index dim = Eigen::Index(1) << t;
    require(matrix.rows() == dim && matrix.cols() == dim, ErrorCode::MalformedGate,
            "raw gate matrix size does not match target count");
    Gate g;
    g.name = "u";
    g.targets = std::move(targets);
    g.controls = std::move(controls);
    g.matrix = std::move(matrix);
    return g;
}

Gate dagger(const Gate& g) {
    if (g.is_rotation()) {
        Gate out = g;
        out.theta = -g.theta;
        out.matrix = g.matrix.adjoint();
        return out;
    }
    if (max_abs_diff(g.matrix, g.matrix.adjoint()) <= 1e-15) {
        return g; // Hermitian and unitary, its own inverse
    }
    Gate out = g;
    out.name = "u";
    out.theta = 0.0;
    out.matrix = g.matrix.adjoint();
    return out;
}

void validate_gate(const Gate& g, int n) {
    std::vector<bool> used(n, false);
    auto claim = [&](int q) {
        require(q >= 0 && q < n, ErrorCode::BadIndex,
                "gate qubit " + std::to_string(q) + " outside register of " + std::to_string(n));
        require(!used[q], ErrorCode::MalformedGate, "gate repeats qubit " + std::to_string(q));
        used[q] = true;
    };
    require(!g.targets.empty() && g.targets.size() <= 3, ErrorCode::MalformedGate,
            "gate must act on 1..3 targets");
    for (int q : g.targets) claim(q);
    for (int q : g.controls) claim(q);
    const Eigen::Index dim = Eigen::Index(1) << g.targets.size();
    require(g.matrix.rows() == dim && g.matrix.cols() == dim, ErrorCode::MalformedGate,
            "gate matrix size mismatch");
    require(is_unitary(g.matrix, config().unitary_tol), ErrorCode::NonUnitaryGate,
            "gate '" + g.name + "' is not unitary within tolerance");
}

void apply_gate(ComplexVector& state, const Gate& g, int n) {
    const int t = static_cast<int>(g.targets.size());
    const Eigen::Index sub = Eigen::Index(1) << t;

    // targets[j] contributes bit (t-1-j) of the gate-matrix index
    std::vector<Eigen::Index> target_bit(t);
    for (int j = 0; j < t; ++j) {
        target_bit[j] = Eigen::Index(1) << (n - 1 - g.targets[j]);
    }
    Eigen::Index control_mask = 0;
    for (int q : g.controls) {
        control_mask |= Eigen::Index(1) << (n - 1 - q);
    }
    Eigen::Index target_mask = 0;
    for (Eigen::Index b : target_bit) target_mask |= b;

    std::vector<Eigen::Index> offset(sub);
    for (Eigen::Index p = 0; p < sub; ++p) {
        Eigen::Index off = 0;
        for (int j = 0; j < t; ++j) {
            if ((p >> (t - 1 - j)) & 1) off |= target_bit[j];
        }
        offset[p] = off;
    }

    std::vector<Complex> scratch(sub);
    const Eigen::Index dim = state.size();
    for (Eigen::Index base = 0; base < dim; ++base) {
        if (base & target_mask) continue;
        if ((base & control_mask) != control_mask) continue;
        for (Eigen::Index p = 0; p < sub; ++p) {
            scratch[p] = state(base | offset[p]);
        }
        for (Eigen::Index r = 0; r < sub; ++r) {
            Complex acc = 0.0;
            for (Eigen::Index c = 0; c < sub; ++c) {
                acc += g.matrix(r, c) * scratch[c];
            }
            state(base | offset[r]) = acc;
        }
    }
}

void apply_gates(ComplexVector& state, const std::vector<Gate>& gates, int n) {
    for (const Gate& g : gates) {
        apply_gate(state, g, n);
    }
}

void apply_gates_inverse(ComplexVector& state, const std::vector<Gate>& gates, int n) {
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        Gate inv = dagger(*it);
        apply_gate(state, inv, n);
    }
}

PureState apply_gate_sequence(const PureState& state, const std::vector<Gate>& gates) {
    const int n = state.qubits();
    for (const Gate& g : gates) {
        validate_gate(g, n);
    }
    ComplexVector amps = state.amplitudes();
    apply_gates(amps, gates, n);
    return PureState(std::move(amps));
}

Gate remap_gate(const Gate& g, const std::vector<int>& map, const std::vector<int>& extra_controls) {
    Gate out = g;
    for (int& q : out.targets) {
        require(q >= 0 && q < static_cast<int>(map.size()), ErrorCode::BadIndex, "remap out of range");
        q = map[q];
    }
    for (int& q : out.controls) {
        require(q >= 0 && q < static_cast<int>(map.size()), ErrorCode::BadIndex, "remap out of range");
        q = map[q];
    }
    out.controls.insert(out.controls.end(), extra_controls.begin(), extra_controls.end());
    return out;
}

} // namespace qvp

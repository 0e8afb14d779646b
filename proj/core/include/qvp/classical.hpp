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
#include <string>
#include <vector>

#include "qvp/iterative.hpp"

namespace qvp {

/// Classical probabilistic verification circuit over x-bits, witness bits y,
/// and i.i.d. fair random tape bits z. Wires number the inputs first
/// (x, then y, then z); each gate appends one fresh wire.
struct BoolGate {
    std::string op; // and | or | xor | not
    std::vector<int> in;
    int out = 0;
};

struct ProbabilisticProcedure {
    int x_bits = 0;
    int y_bits = 1;
    int z_bits = 0;
    std::vector<BoolGate> gates;
    int output = 0;

    int input_wires() const { return x_bits + y_bits + z_bits; }
    int wires() const { return input_wires() + static_cast<int>(gates.size()); }
    void validate() const;

    bool eval(std::uint64_t x, std::uint64_t y, std::uint64_t z) const;
};

/// p_y = Pr_z[C(x,y,z) = 1] by exact tape enumeration (z_bits <= 24).
double p_y(const ProbabilisticProcedure& c, std::uint64_t x, std::uint64_t y);

struct PYEstimate {
    double estimate = 0.0;
    double ci_halfwidth = 0.0; // ~2 sigma
    long samples = 0;
};

PYEstimate p_y_sampled(const ProbabilisticProcedure& c, std::uint64_t x, std::uint64_t y,
                       long samples, std::uint64_t seed);

/// Exact partition of the witness strings by p_y thresholds.
struct AcceptanceSets {
    std::vector<std::uint64_t> geq_a;
    std::vector<std::uint64_t> leq_b;
};

AcceptanceSets acceptance_sets(const ProbabilisticProcedure& c, std::uint64_t x, double a,
                               double b);

/// Classical iterative procedure: sample N times from p_y, emit a letter
/// from g(count). Reuses the quantum exact engine's pg formula verbatim.
OutcomeDistribution classical_iterative(const ProbabilisticProcedure& c, std::uint64_t x,
                                        std::uint64_t y, const IterativePlan& plan);

/// Classical counterpart of a diagonal quantum procedure: witness y accepts
/// with probability thresholds[y] / 2^z_bits, via a tape comparator.
ProbabilisticProcedure comparator_procedure(const std::vector<int>& thresholds, int z_bits);

} // namespace qvp

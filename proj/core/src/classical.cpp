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

#include "qvp/classical.hpp"

#include <cmath>

namespace qvp {

void ProbabilisticProcedure::validate() const {
    require(x_bits >= 0 && y_bits >= 1 && z_bits >= 0, ErrorCode::BadInput,
            "bad input bit counts");
    require(y_bits <= 24 && z_bits <= 24 && x_bits <= 24, ErrorCode::BadInput,
            "input registers capped at 24 bits");
    int next = input_wires();
    for (const BoolGate& g : gates) {
        const std::size_t arity = g.op == "not" ? 1 : 2;
        require(g.op == "and" || g.op == "or" || g.op == "xor" || g.op == "not",
                ErrorCode::BadInput, "unknown boolean op '" + g.op + "'");
        require(g.in.size() == arity, ErrorCode::BadInput, "wrong arity for '" + g.op + "'");
        for (int w : g.in) {
            require(w >= 0 && w < next, ErrorCode::BadIndex, "gate reads an undefined wire");
        }
        require(g.out == next, ErrorCode::BadIndex,
                "gate outputs must append wires in order (expected " + std::to_string(next) + ")");
        ++next;
    }
    require(output >= 0 && output < next, ErrorCode::BadIndex, "output wire undefined");
}

bool ProbabilisticProcedure::eval(std::uint64_t x, std::uint64_t y, std::uint64_t z) const {
    std::vector<bool> wire(wires(), false);
    // Bit 0 of each register is its first (most significant) wire.
    for (int i = 0; i < x_bits; ++i) {
        wire[i] = (x >> (x_bits - 1 - i)) & 1;
    }
    for (int i = 0; i < y_bits; ++i) {
        wire[x_bits + i] = (y >> (y_bits - 1 - i)) & 1;
    }
    for (int i = 0; i < z_bits; ++i) {
        wire[x_bits + y_bits + i] = (z >> (z_bits - 1 - i)) & 1;
    }
    for (const BoolGate& g : gates) {
        bool v;
        if (g.op == "not") {
            v = !wire[g.in[0]];
        } else if (g.op == "and") {
            v = wire[g.in[0]] && wire[g.in[1]];
        } else if (g.op == "or") {
            v = wire[g.in[0]] || wire[g.in[1]];
        } else {
            v = wire[g.in[0]] != wire[g.in[1]];
        }
        wire[g.out] = v;
    }
    return wire[output];
}

double p_y(const ProbabilisticProcedure& c, std::uint64_t x, std::uint64_t y) {
    c.validate();
    require(c.z_bits <= 24, ErrorCode::TapeTooLong, "exact enumeration capped at 24 tape bits");
    const std::uint64_t tapes = std::uint64_t(1) << c.z_bits;
    std::uint64_t accepted = 0;
    for (std::uint64_t z = 0; z < tapes; ++z) {
        accepted += c.eval(x, y, z) ? 1 : 0;
    }
    return static_cast<double>(accepted) / static_cast<double>(tapes);
}

PYEstimate p_y_sampled(const ProbabilisticProcedure& c, std::uint64_t x, std::uint64_t y,
                       long samples, std::uint64_t seed) {
    c.validate();
    require(samples > 0, ErrorCode::ShotsZero, "need at least one sample");
    SplitMix64 rng(seed);
    const std::uint64_t mask = c.z_bits >= 64 ? ~0ULL : ((std::uint64_t(1) << c.z_bits) - 1);
    long accepted = 0;
    for (long i = 0; i < samples; ++i) {
        if (c.eval(x, y, rng.next() & mask)) {
            ++accepted;
        }
    }
    PYEstimate est;
    est.samples = samples;
    est.estimate = static_cast<double>(accepted) / static_cast<double>(samples);
    est.ci_halfwidth = 2.0 * std::sqrt(std::max(est.estimate * (1.0 - est.estimate), 1e-12) /
                                       static_cast<double>(samples));
    return est;
}

AcceptanceSets acceptance_sets(const ProbabilisticProcedure& c, std::uint64_t x, double a,
                               double b) {
    require(c.y_bits <= 16, ErrorCode::WitnessTooLong, "witness enumeration capped at 16 bits");
    AcceptanceSets sets;
    const std::uint64_t count = std::uint64_t(1) << c.y_bits;
    for (std::uint64_t y = 0; y < count; ++y) {
        const double p = p_y(c, x, y);
        if (p >= a) {
            sets.geq_a.push_back(y);
        }
        if (p <= b) {
            sets.leq_b.push_back(y);
        }
    }
    return sets;
}

OutcomeDistribution classical_iterative(const ProbabilisticProcedure& c, std::uint64_t x,
                                        std::uint64_t y, const IterativePlan& plan) {
    plan.validate();
    const double p = p_y(c, x, y);

    OutcomeDistribution out;
    out.letters = plan.alphabet;
    out.probs = RealVector(plan.letters());
    for (int l = 0; l < plan.letters(); ++l) {
        std::vector<double> column(plan.N + 1);
        for (int k = 0; k <= plan.N; ++k) {
            column[k] = plan.g[k][l];
        }
        out.probs(l) = pg(plan.N, column, p);
    }
    return out;
}

ProbabilisticProcedure comparator_procedure(const std::vector<int>& thresholds, int z_bits) {
    require(thresholds.size() >= 2, ErrorCode::BadInput, "need at least two thresholds");
    require(z_bits >= 1 && z_bits <= 24, ErrorCode::TapeTooLong, "tape must be 1..24 bits");
    int y_bits = 0;
    while ((std::size_t(1) << y_bits) < thresholds.size()) {
        ++y_bits;
    }
    require((std::size_t(1) << y_bits) == thresholds.size(), ErrorCode::BadLength,
            "threshold count must be a power of two");
    for (int t : thresholds) {
        require(t >= 0 && t <= (1 << z_bits), ErrorCode::BadInput,
                "threshold outside 0..2^z_bits");
    }

    ProbabilisticProcedure c;
    c.x_bits = 0;
    c.y_bits = std::max(1, y_bits);
    c.z_bits = z_bits;

    int next = c.input_wires();
    auto gate = [&](const std::string& op, std::vector<int> in) {
        c.gates.push_back({op, std::move(in), next});
        return next++;
    };
    const auto y_wire = [&](int i) { return i; };          // y occupies the first wires
    const auto z_wire = [&](int i) { return c.y_bits + i; };

    // Accept iff z < thresholds[y], built as a mux over witness patterns of
    // per-pattern big-endian comparators.
    int result = -1;
    for (std::size_t pattern = 0; pattern < thresholds.size(); ++pattern) {
        // Witness literal: AND over y bits matching `pattern`.
        int literal = -1;
        for (int i = 0; i < c.y_bits; ++i) {
            int bit = y_wire(i);
            if (!((pattern >> (c.y_bits - 1 - i)) & 1)) {
                bit = gate("not", {bit});
            }
            literal = literal < 0 ? bit : gate("and", {literal, bit});
        }

        // z < t: scan bits from the most significant; where t has a 1, the
        // tape can win by being 0 there with all earlier bits equal.
        const int t = thresholds[pattern];
        int cmp = -1;
        int prefix_eq = -1;
        for (int i = 0; i < z_bits; ++i) {
            const int t_bit = (t >> (z_bits - 1 - i)) & 1;
            if (t_bit == 1) {
                int z_is_zero = gate("not", {z_wire(i)});
                int term = prefix_eq < 0 ? z_is_zero : gate("and", {prefix_eq, z_is_zero});
                cmp = cmp < 0 ? term : gate("or", {cmp, term});
            }
            int eq = t_bit == 1 ? z_wire(i) : gate("not", {z_wire(i)});
            prefix_eq = prefix_eq < 0 ? eq : gate("and", {prefix_eq, eq});
        }
        if (t == (1 << z_bits)) { // always accept
            const int one = gate("or", {y_wire(0), gate("not", {y_wire(0)})});
            cmp = one;
        } else if (cmp < 0) {     // t == 0: never accept
            const int zero = gate("and", {y_wire(0), gate("not", {y_wire(0)})});
            cmp = zero;
        }

        const int term = gate("and", {literal, cmp});
        result = result < 0 ? term : gate("or", {result, term});
    }
    c.output = result;
    c.validate();
    return c;
}

} // namespace qvp

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

#include <optional>

#include "qvp/emap.hpp"

namespace qvp {

/// A nondestructive procedure: the square-root e-map composed with the
/// N=2 "accept iff z_1 = z_2 = 1" wrapper, which ends on a Pi_0 outcome 1
/// and therefore returns eigenstate inputs unchanged. Acceptance of the
/// base eigenvalue p is q(p)^2 where q interpolates sqrt(t_i) at s_i.
class NondestructiveProcedure {
  public:
    NondestructiveProcedure(SpectralDecomposition base, SynthesizedEMap sqrt_map);

    int witness_qubits() const { return base_.witness_qubits; }
    const SpectralDecomposition& base_spectrum() const { return base_; }
    const SynthesizedEMap& sqrt_map() const { return sqrt_map_; }

    /// q(p_i) per base group: the conditional output amplitude scaling.
    const std::vector<double>& amplitude_map() const { return q_; }
    /// Induced acceptance f(p_i) = q(p_i)^2 per base group.
    double mapped_value(std::size_t group) const { return q_.at(group) * q_.at(group); }

    double accept_probability(const PureState& psi) const;
    double accept_probability(const DensityMatrix& rho) const;
    ComplexMatrix accept_operator() const;      // sum q^2 Pi
    ComplexMatrix sqrt_accept_operator() const; // sum q Pi

    struct RunResult {
        bool accept = false;
        std::optional<PureState> post_state; // witness space, set on accept
    };

    /// Single sampled run. Conditional on accept the post state is
    /// sum_i q_i alpha_i |psi_i> renormalized.
    RunResult run(const PureState& input, SplitMix64& rng) const;

    /// Worst interpolation error of the induced map against the targets:
    /// max_i |f(s_i) - t_i|.
    double target_residual() const;

  private:
    SpectralDecomposition base_;
    SynthesizedEMap sqrt_map_;
    std::vector<double> q_;
};

/// Build the nondestructive procedure whose induced map sends s_i to t_i
/// (synthesize the square-root targets, then wrap).
/// Throws SynthesisFailed if the sqrt-map synthesis cannot certify.
NondestructiveProcedure make_nondestructive(const VerificationProcedure& q,
                                            const std::vector<double>& s_targets,
                                            const std::vector<double>& t_targets);
NondestructiveProcedure make_nondestructive(SpectralDecomposition base,
                                            const std::vector<double>& s_targets,
                                            const std::vector<double>& t_targets);

} // namespace qvp

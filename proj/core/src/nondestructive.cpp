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

#include "qvp/nondestructive.hpp"

#include <cmath>

namespace qvp {

NondestructiveProcedure::NondestructiveProcedure(SpectralDecomposition base,
                                                 SynthesizedEMap sqrt_map)
    : base_(std::move(base)), sqrt_map_(std::move(sqrt_map)) {
    q_.reserve(base_.groups.size());
    for (const auto& g : base_.groups) {
        q_.push_back(sqrt_map_.map(g.p));
    }
}

double NondestructiveProcedure::accept_probability(const DensityMatrix& rho) const {
    require(rho.dim() == base_.dim(), ErrorCode::DimensionMismatch, "input dimension mismatch");
    double acc = 0.0;
    for (std::size_t gi = 0; gi < base_.groups.size(); ++gi) {
        const auto& g = base_.groups[gi];
        for (Eigen::Index c = 0; c < g.basis.cols(); ++c) {
            const ComplexVector v = g.basis.col(c);
            acc += q_[gi] * q_[gi] * (v.adjoint() * rho.matrix() * v)(0, 0).real();
        }
    }
    return std::min(1.0, std::max(0.0, acc));
}

double NondestructiveProcedure::accept_probability(const PureState& psi) const {
    return accept_probability(DensityMatrix::pure(psi));
}

ComplexMatrix NondestructiveProcedure::accept_operator() const {
    ComplexMatrix e1 = ComplexMatrix::Zero(base_.dim(), base_.dim());
    for (std::size_t gi = 0; gi < base_.groups.size(); ++gi) {
        e1 += q_[gi] * q_[gi] * base_.projector(gi);
    }
    return e1;
}

ComplexMatrix NondestructiveProcedure::sqrt_accept_operator() const {
    ComplexMatrix root = ComplexMatrix::Zero(base_.dim(), base_.dim());
    for (std::size_t gi = 0; gi < base_.groups.size(); ++gi) {
        root += q_[gi] * base_.projector(gi);
    }
    return root;
}

NondestructiveProcedure::RunResult NondestructiveProcedure::run(const PureState& input,
                                                                SplitMix64& rng) const {
    require(input.dim() == base_.dim(), ErrorCode::DimensionMismatch, "input dimension mismatch");

    // Coefficients in the flattened eigenbasis.
    const ComplexMatrix basis = base_.eigenbasis();
    const ComplexVector alpha = basis.adjoint() * input.amplitudes();

    std::vector<double> scale;
    scale.reserve(alpha.size());
    for (std::size_t gi = 0; gi < base_.groups.size(); ++gi) {
        scale.insert(scale.end(), base_.groups[gi].multiplicity, q_[gi]);
    }

    double p_accept = 0.0;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        p_accept += scale[i] * scale[i] * std::norm(alpha(i));
    }
    p_accept = std::min(1.0, p_accept);

    RunResult result;
    result.accept = rng.bernoulli(p_accept);
    if (result.accept && p_accept > 0.0) {
        ComplexVector post = ComplexVector::Zero(input.dim());
        for (Eigen::Index i = 0; i < alpha.size(); ++i) {
            post += scale[i] * alpha(i) * basis.col(i);
        }
        post.normalize();
        result.post_state = PureState(std::move(post));
    }
    return result;
}

double NondestructiveProcedure::target_residual() const {
    double worst = 0.0;
    const auto& tp = sqrt_map_.targets;
    for (std::size_t i = 0; i < tp.s.size(); ++i) {
        const double f = sqrt_map_.map(tp.s[i]);
        const double want = tp.t[i] * tp.t[i]; // targets hold sqrt(t)
        worst = std::max(worst, std::abs(f * f - want));
    }
    return worst;
}

NondestructiveProcedure make_nondestructive(SpectralDecomposition base,
                                            const std::vector<double>& s_targets,
                                            const std::vector<double>& t_targets) {
    require(s_targets.size() == t_targets.size(), ErrorCode::BadInput,
            "target sets need matching sizes");
    // Gap conditions checked on the requested targets first.
    TargetPointSet::from(s_targets, t_targets);

    std::vector<double> sqrt_t(t_targets.size());
    for (std::size_t i = 0; i < t_targets.size(); ++i) {
        sqrt_t[i] = std::sqrt(t_targets[i]);
    }
    SynthesizedEMap em = synthesize(TargetPointSet::from(s_targets, std::move(sqrt_t)));
    return NondestructiveProcedure(std::move(base), std::move(em));
}

NondestructiveProcedure make_nondestructive(const VerificationProcedure& q,
                                            const std::vector<double>& s_targets,
                                            const std::vector<double>& t_targets) {
    return make_nondestructive(spectrum(q), s_targets, t_targets);
}

} // namespace qvp

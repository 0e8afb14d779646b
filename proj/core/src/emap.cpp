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

#include "qvp/emap.hpp"

#include <algorithm>
#include <cmath>

namespace qvp {

TargetPointSet TargetPointSet::from(std::vector<double> s, std::vector<double> t) {
    TargetPointSet out;
    out.s = std::move(s);
    out.t = std::move(t);
    out.eps = 1.0;
    out.delta = 1.0;
    for (std::size_t i = 1; i < out.s.size(); ++i) {
        out.eps = std::min(out.eps, out.s[i] - out.s[i - 1]);
    }
    for (std::size_t i = 1; i < out.t.size(); ++i) {
        out.delta = std::min(out.delta, out.t[i] - out.t[i - 1]);
    }
    out.validate();
    return out;
}

void TargetPointSet::validate() const {
    require(s.size() >= 2 && t.size() == s.size(), ErrorCode::BadInput,
            "target sets need matching sizes >= 2");
    require(std::abs(s.front()) <= 1e-15 && std::abs(s.back() - 1.0) <= 1e-15,
            ErrorCode::BadInput, "s must start at 0 and end at 1");
    require(std::abs(t.front()) <= 1e-15 && std::abs(t.back() - 1.0) <= 1e-15,
            ErrorCode::BadInput, "t must start at 0 and end at 1");
    require(eps > 0.0 && delta > 0.0, ErrorCode::BadInput, "gaps must be positive");
    for (std::size_t i = 1; i < s.size(); ++i) {
        require(s[i] - s[i - 1] >= eps - 1e-15, ErrorCode::BadInput,
                "s gap below the declared minimum");
        require(t[i] - t[i - 1] >= delta - 1e-15, ErrorCode::BadInput,
                "t gap below the declared minimum");
    }
}

namespace {

// Binomial pmf row by outward recurrence from the mode; long double, exact
// enough that far tails underflow harmlessly to zero.
std::vector<long double> pmf_row(int n, double p) {
    std::vector<long double> row(n + 1, 0.0L);
    if (p <= 0.0) {
        row[0] = 1.0L;
        return row;
    }
    if (p >= 1.0) {
        row[n] = 1.0L;
        return row;
    }
    const int mode = std::min(n, static_cast<int>((n + 1) * p));
    row[mode] = static_cast<long double>(binom_pmf(mode, n, p));
    const long double ratio_p = static_cast<long double>(p) / (1.0L - static_cast<long double>(p));
    for (int k = mode; k < n; ++k) {
        row[k + 1] = row[k] * ratio_p * static_cast<long double>(n - k) /
                     static_cast<long double>(k + 1);
    }
    for (int k = mode; k > 0; --k) {
        row[k - 1] = row[k] / ratio_p * static_cast<long double>(k) /
                     static_cast<long double>(n - k + 1);
    }
    return row;
}

// The continuous interpolant on the normalized domain u = z/N: value
// (t_i + lambda_i) + sigma (u - s_i) on [s_i - eps/3, s_i + eps/3], linear
// in between. Returns the lambda-free base value plus the hat weight each
// interior lambda_j carries at u.
struct PlateauShape {
    const TargetPointSet& tp;
    double sigma;
    double third; // eps / 3

    explicit PlateauShape(const TargetPointSet& targets)
        : tp(targets), sigma(targets.delta / (2.0 * targets.eps)), third(targets.eps / 3.0) {}

    double lo(std::size_t i) const { return std::max(0.0, tp.s[i] - third); }
    double hi(std::size_t i) const { return std::min(1.0, tp.s[i] + third); }

    void eval(double u, double& base, std::vector<double>& hat) const {
        const std::size_t count = tp.s.size();
        std::fill(hat.begin(), hat.end(), 0.0);
        for (std::size_t i = 0; i < count; ++i) {
            if (u <= hi(i) + 1e-15) {
                if (u >= lo(i) - 1e-15) {
                    base = tp.t[i] + sigma * (u - tp.s[i]);
                    hat[i] = 1.0;
                    return;
                }
                // u lies strictly between plateau i-1 and plateau i
                const double left = hi(i - 1);
                const double right = lo(i);
                const double alpha = (u - left) / (right - left);
                const double v_left = tp.t[i - 1] + sigma * (left - tp.s[i - 1]);
                const double v_right = tp.t[i] + sigma * (right - tp.s[i]);
                base = (1.0 - alpha) * v_left + alpha * v_right;
                hat[i - 1] = 1.0 - alpha;
                hat[i] = alpha;
                return;
            }
        }
        base = 1.0; // u == 1 boundary
        hat[count - 1] = 1.0;
    }
};

struct Candidate {
    bool ok = false;
    std::string reason;
    SynthesizedEMap em;
};

Candidate attempt(const TargetPointSet& tp, int n, double tol) {
    Candidate cand;
    const int m = tp.interior_points();
    const std::size_t anchors = tp.s.size();
    const PlateauShape shape(tp);

    SynthesizedEMap& em = cand.em;
    em.N = n;
    em.sigma = shape.sigma;
    em.targets = tp;
    em.lambda.assign(anchors, 0.0);
    em.mu.assign(anchors, 0.0);

    // Exact binomial mass escaping each plateau window.
    for (int i = 1; i <= m; ++i) {
        const int lo = static_cast<int>(std::ceil(n * shape.lo(i) - 1e-12));
        const int hi = static_cast<int>(std::floor(n * shape.hi(i) + 1e-12));
        em.mu[i] = binom_tail_outside(lo, hi, n, tp.s[i]);
    }
    const double mu_max = m > 0 ? *std::max_element(em.mu.begin(), em.mu.end()) : 0.0;

    // Solvability gate: the lambda system is trusted only once the exact
    // tails give ||A||_max <= mu (2 + 6/eps) < 1/(2M).
    if (m > 0) {
        const double a_bound = mu_max * (2.0 + 6.0 / tp.eps);
        if (a_bound >= 1.0 / (2.0 * m)) {
            cand.reason = "binomial tails too heavy for the lambda system";
            return cand;
        }
    }

    // Base values and hat weights at the integer sample points.
    std::vector<double> base(n + 1);
    std::vector<std::vector<double>> hats(n + 1, std::vector<double>(anchors, 0.0));
    for (int k = 0; k <= n; ++k) {
        shape.eval(static_cast<double>(k) / n, base[k], hats[k]);
    }

    if (m > 0) {
        // Interpolation equations t_i = sum_k f(k;N,s_i) g(k), linear in the
        // interior lambdas.
        Eigen::MatrixXd c(m, m);
        Eigen::VectorXd r(m);
        for (int i = 1; i <= m; ++i) {
            const std::vector<long double> row = pmf_row(n, tp.s[i]);
            long double rhs = static_cast<long double>(tp.t[i]);
            for (int k = 0; k <= n; ++k) {
                rhs -= row[k] * static_cast<long double>(base[k]);
            }
            r(i - 1) = static_cast<double>(rhs);
            for (int j = 1; j <= m; ++j) {
                long double acc = 0.0L;
                for (int k = 0; k <= n; ++k) {
                    acc += row[k] * static_cast<long double>(hats[k][j]);
                }
                c(i - 1, j - 1) = static_cast<double>(acc);
            }
        }

        Eigen::PartialPivLU<Eigen::MatrixXd> lu(c);
        const double rcond = lu.rcond();
        em.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
        require(rcond > 1e-12, ErrorCode::DegenerateSystem,
                "lambda system is ill-conditioned (condition estimate " +
                    std::to_string(em.condition_estimate) + ")");
        Eigen::VectorXd lambda = lu.solve(r);
        lambda += lu.solve(r - c * lambda); // one refinement step

        for (int j = 1; j <= m; ++j) {
            em.lambda[j] = lambda(j - 1);
        }
    } else {
        em.condition_estimate = 1.0;
    }

    em.lambda_max = 0.0;
    for (double l : em.lambda) {
        em.lambda_max = std::max(em.lambda_max, std::abs(l));
    }

    if (m > 0 && em.lambda_max >= tp.delta / 3.0) {
        cand.reason = "lambda exceeds delta/3";
        return cand;
    }
    const double lambda_bound = 2.0 * m * (2.0 + shape.sigma * n) * mu_max;
    if (m > 0 && em.lambda_max > lambda_bound + 1e-15) {
        cand.reason = "lambda exceeds the 2M(2+sigma N)mu bound";
        return cand;
    }

    // Final integer-sampled table, clamped to [0,1].
    em.g.resize(n + 1);
    em.clip_magnitude = 0.0;
    for (int k = 0; k <= n; ++k) {
        double value = base[k];
        for (std::size_t j = 1; j + 1 < anchors; ++j) {
            value += hats[k][j] * em.lambda[j];
        }
        const double clipped = std::min(1.0, std::max(0.0, value));
        em.clip_magnitude = std::max(em.clip_magnitude, std::abs(value - clipped));
        em.g[k] = clipped;
    }
    if (em.clip_magnitude > em.lambda_max + 1e-15) {
        cand.reason = "clipping exceeded the lambda magnitude";
        return cand;
    }

    // Residuals recomputed from the definitive table.
    em.residuals.resize(anchors);
    for (std::size_t i = 0; i < anchors; ++i) {
        const std::vector<long double> row = pmf_row(n, tp.s[i]);
        long double acc = 0.0L;
        for (int k = 0; k <= n; ++k) {
            acc += row[k] * static_cast<long double>(em.g[k]);
        }
        em.residuals[i] = std::abs(static_cast<double>(acc) - tp.t[i]);
        if (em.residuals[i] > tol) {
            cand.reason = "interpolation residual above tolerance";
            return cand;
        }
    }

    // Strict-increase certificate on the 2049-point grid.
    const int grid = 2048;
    em.monotone_certificate = std::numeric_limits<double>::infinity();
    em.min_derivative = std::numeric_limits<double>::infinity();
    double prev = 0.0;
    for (int j = 0; j <= grid; ++j) {
        const double p = static_cast<double>(j) / grid;
        const std::vector<long double> row = pmf_row(n, p);
        long double acc = 0.0L;
        for (int k = 0; k <= n; ++k) {
            acc += row[k] * static_cast<long double>(em.g[k]);
        }
        const double value = static_cast<double>(acc);
        if (j > 0) {
            em.monotone_certificate = std::min(em.monotone_certificate, value - prev);
        }
        prev = value;

        long double dacc = 0.0L;
        if (n >= 1) {
            const std::vector<long double> drow = pmf_row(n - 1, p);
            for (int k = 0; k < n; ++k) {
                dacc += drow[k] * static_cast<long double>(em.g[k + 1] - em.g[k]);
            }
        }
        em.min_derivative = std::min(em.min_derivative, static_cast<double>(n * dacc));
    }
    if (em.monotone_certificate <= 0.0 || em.min_derivative <= 0.0) {
        cand.reason = "monotonicity certificate failed";
        return cand;
    }

    cand.ok = true;
    return cand;
}

} // namespace

SynthesizedEMap synthesize(const TargetPointSet& targets, double tol, int n_cap) {
    targets.validate();
    if (n_cap <= 0) {
        n_cap = config().n_cap;
    }

    if (targets.interior_points() == 0) {
        // Only the pinned endpoints: g(k) = k/N realizes the identity map.
        SynthesizedEMap em;
        em.N = 2;
        em.g = {0.0, 0.5, 1.0};
        em.lambda = {0.0, 0.0};
        em.residuals = {0.0, 0.0};
        em.mu = {0.0, 0.0};
        em.sigma = targets.delta / (2.0 * targets.eps);
        em.condition_estimate = 1.0;
        em.monotone_certificate = pg(2, em.g, 0.5) - pg(2, em.g, 0.5 - 1.0 / 2048.0);
        em.min_derivative = 1.0;
        em.targets = targets;
        return em;
    }

    std::string last_reason = "N cap too small to try any candidate";
    for (int n = 64; n <= n_cap; n *= 2) {
        Candidate cand = attempt(targets, n, tol);
        if (cand.ok) {
            return cand.em;
        }
        last_reason = cand.reason;
        if (n == n_cap) {
            break;
        }
        if (n * 2 > n_cap) {
            n = n_cap / 2; // make the cap itself the final candidate
        }
    }
    fail(ErrorCode::SynthesisFailed,
         "no N <= " + std::to_string(n_cap) + " satisfied the certificates (" + last_reason + ")");
}

IterativeProcedure apply_emap(const VerificationProcedure& q, const SynthesizedEMap& em) {
    require(em.monotone_certificate > 0.0 && em.min_derivative > 0.0, ErrorCode::NotMonotone,
            "e-map table lacks a monotonicity certificate");
    return make_iterative(q, IterativePlan::binary(em.N, em.g));
}

EMapCertificate verify_emap(const ComplexMatrix& e1_from, const ComplexMatrix& e1_to,
                            const std::vector<double>& sample_points, double tol) {
    require(e1_from.rows() == e1_to.rows() && e1_from.cols() == e1_to.cols(),
            ErrorCode::DimensionMismatch, "witness dimensions differ");

    EMapCertificate cert;
    cert.max_commutator = max_abs_diff(e1_from * e1_to, e1_to * e1_from);
    require(cert.max_commutator <= tol, ErrorCode::NotJointlyDiagonalizable,
            "accept operators do not commute within tolerance");

    const SpectralDecomposition from = spectrum_of_accept_operator(e1_from, config().grouping_tol);
    const SpectralDecomposition to = spectrum_of_accept_operator(e1_to, config().grouping_tol);

    cert.max_projector_mismatch = 0.0;
    cert.increasing = true;
    double prev_mapped = -1.0;
    // Groups descend in p; walk them in increasing order.
    for (auto it = from.groups.rbegin(); it != from.groups.rend(); ++it) {
        const ComplexMatrix proj = it->basis * it->basis.adjoint();
        // Image value on this eigenspace.
        const double mapped =
            ((it->basis.adjoint() * e1_to * it->basis).trace().real()) / it->multiplicity;
        cert.observed_map.emplace_back(it->p, mapped);
        if (mapped <= prev_mapped) {
            cert.increasing = false;
        }
        prev_mapped = mapped;

        // Matching eigenspace of the image operator.
        double best = std::numeric_limits<double>::infinity();
        const SpectralGroup* match = nullptr;
        for (const auto& g : to.groups) {
            const double d = std::abs(g.p - mapped);
            if (d < best) {
                best = d;
                match = &g;
            }
        }
        if (match != nullptr) {
            const ComplexMatrix proj_to = match->basis * match->basis.adjoint();
            cert.max_projector_mismatch =
                std::max(cert.max_projector_mismatch, max_abs_diff(proj, proj_to));
        }
    }

    for (double p : sample_points) {
        require(p >= 0.0 && p <= 1.0, ErrorCode::BadInput, "sample point outside [0,1]");
    }
    cert.pass = cert.increasing && cert.max_projector_mismatch <= tol;
    return cert;
}

EMapCertificate verify_emap(const VerificationProcedure& q_from, const IterativeProcedure& q_to,
                            const std::vector<double>& sample_points) {
    return verify_emap(q_from.accept_operator(), q_to.accept_operator(), sample_points);
}

} // namespace qvp

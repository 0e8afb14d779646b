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

#include "qvp/verify.hpp"

#include <chrono>
#include <cmath>

#include "qvp/classical.hpp"

namespace qvp {

namespace {

using Clock = std::chrono::steady_clock;

long ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

void stamp(ReportList& reports, Clock::time_point start) {
    const long ms = ms_since(start);
    for (auto& r : reports) {
        r.runtime_ms = ms;
    }
    sort_reports(reports);
}

VerificationReport item(std::string check, std::string instance, bool pass, double lhs,
                        double rhs, double tol,
                        std::optional<std::uint64_t> seed = std::nullopt) {
    VerificationReport r;
    r.check_id = std::move(check);
    r.instance = std::move(instance);
    r.pass = pass;
    r.lhs = lhs;
    r.rhs = rhs;
    r.tolerance = tol;
    r.seed = seed;
    return r;
}

// Independent P_g oracle: direct summation through lgammal, a different
// special-function route than the library pmf.
double direct_pg(int n, const std::vector<double>& g, double p) {
    if (p <= 0.0) return g.front();
    if (p >= 1.0) return g.back();
    long double acc = 0.0L;
    const long double lp = std::log(static_cast<long double>(p));
    const long double lq = std::log1p(static_cast<long double>(-p));
    for (int k = 0; k <= n; ++k) {
        const long double lc = std::lgammal(n + 1.0L) - std::lgammal(k + 1.0L) -
                               std::lgammal(n - k + 1.0L);
        acc += std::exp(lc + k * lp + (n - k) * lq) * static_cast<long double>(g[k]);
    }
    return static_cast<double>(acc);
}

ComplexVector random_coefficients(Eigen::Index dim, SplitMix64& rng) {
    ComplexVector alpha(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        alpha(i) = Complex(rng.normal(), rng.normal());
    }
    alpha.normalize();
    return alpha;
}

// Strictly increasing tables: every step carries at least a 2% share of
// the total rise, so P_g increments stay far above evaluation noise and
// the strict-positivity certificates are numerically meaningful.
std::vector<double> random_increasing_g(int n, SplitMix64& rng) {
    std::vector<double> g(n + 1);
    const double g0 = rng.uniform(0.0, 0.3);
    const double gn = rng.uniform(0.7, 1.0);
    std::vector<double> inc(n);
    double total = 0.0;
    for (double& v : inc) {
        v = 0.02 + rng.uniform();
        total += v;
    }
    g[0] = g0;
    for (int k = 0; k < n; ++k) {
        g[k + 1] = g[k] + (gn - g0) * inc[k] / total;
    }
    g[n] = gn;
    return g;
}

IterativePlan q3_letters_plan() {
    IterativePlan plan;
    plan.N = 2;
    plan.alphabet = {"L", "0", "Lbar"};
    plan.g = {{0.0, 0.0, 1.0}, {0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}};
    plan.validate();
    return plan;
}

// Adversarial diagonal state: minimize the mass on eigenvalues >= 3/4
// subject to sum beta(p_i) w_i >= 13/18. The LP optimum lives on at most
// two eigenspaces, so vertex enumeration is exact.
DensityMatrix adversarial_rho(const SpectralDecomposition& s) {
    const double target = 13.0 / 18.0;
    const std::size_t count = s.groups.size();

    double best = 2.0;
    std::pair<int, int> best_pair{-1, -1};
    double best_w = 1.0;
    auto hi = [&](std::size_t i) { return s.groups[i].p >= 0.75 - s.grouping_tol ? 1.0 : 0.0; };

    for (std::size_t i = 0; i < count; ++i) {
        if (beta_map(s.groups[i].p) >= target - 1e-15 && hi(i) < best) {
            best = hi(i);
            best_pair = {static_cast<int>(i), -1};
            best_w = 1.0;
        }
        for (std::size_t j = 0; j < count; ++j) {
            const double bi = beta_map(s.groups[i].p), bj = beta_map(s.groups[j].p);
            if (bi <= bj) {
                continue;
            }
            const double w = (target - bj) / (bi - bj);
            if (w < 0.0 || w > 1.0) {
                continue;
            }
            const double overlap = w * hi(i) + (1.0 - w) * hi(j);
            if (overlap < best) {
                best = overlap;
                best_pair = {static_cast<int>(i), static_cast<int>(j)};
                best_w = w;
            }
        }
    }
    require(best_pair.first >= 0, ErrorCode::PreconditionViolated,
            "no diagonal state meets the beta-acceptance constraint");

    ComplexMatrix rho = ComplexMatrix::Zero(s.dim(), s.dim());
    const ComplexVector vi = s.groups[best_pair.first].basis.col(0);
    rho += best_w * (vi * vi.adjoint());
    if (best_pair.second >= 0) {
        const ComplexVector vj = s.groups[best_pair.second].basis.col(0);
        rho += (1.0 - best_w) * (vj * vj.adjoint());
    }
    return DensityMatrix(std::move(rho));
}

} // namespace

// ---------------------------------------------------------------------------
// Criterion 1: no interference

ReportList check_no_interference_on(const VerificationProcedure& q, const std::string& instance,
                                    std::uint64_t seed, int trials) {
    SplitMix64 rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const ComplexVector alpha = random_coefficients(q.witness_dim(), rng);
        const InterferenceCertificate cert = verify_no_interference(q, alpha);
        worst = std::max(worst, cert.deviation);
    }
    ReportList out;
    out.push_back(item("no-interference", instance, worst <= 1e-10, worst, 0.0, 1e-10, seed));
    return out;
}

ReportList check_no_interference(const CheckOptions& opt) {
    const auto start = Clock::now();
    const int procedures = opt.quick ? 8 : 50;
    SplitMix64 root(opt.seed);

    ReportList out;
    for (int i = 0; i < procedures; ++i) {
        SplitMix64 rng = root.split(i);
        const int m = 1 + static_cast<int>(rng.below(3));
        const int k = static_cast<int>(rng.below(4));
        const std::uint64_t circuit_seed = rng.next();
        VerificationProcedure q = make_random_procedure(circuit_seed, m, k);
        ReportList one = check_no_interference_on(
            q, "random-" + std::to_string(i) + "-m" + std::to_string(m) + "k" + std::to_string(k),
            rng.next(), 3);
        out.insert(out.end(), one.begin(), one.end());
    }
    stamp(out, start);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 2: i.i.d. law and engine agreement

ReportList check_iid_on(const VerificationProcedure& q, const std::string& instance) {
    ReportList out;
    auto [pi0, pi1] = projectors(q);
    out.push_back(item("iid-projector", instance + "/pi0",
                       max_abs_diff(pi0 * pi0, pi0) <= 1e-10, max_abs_diff(pi0 * pi0, pi0), 0.0,
                       1e-10));
    out.push_back(item("iid-projector", instance + "/pi1",
                       max_abs_diff(pi1 * pi1, pi1) <= 1e-10, max_abs_diff(pi1 * pi1, pi1), 0.0,
                       1e-10));

    const JordanBlocks blocks = jordan_blocks(pi0, pi1);
    const std::vector<double> block_spectrum = blocks.spectrum_from_blocks();
    const SpectralDecomposition s = spectrum(q);
    const std::vector<double> eig = s.eigenvalues(); // descending
    double spectrum_diff = std::abs(double(block_spectrum.size()) - double(eig.size()));
    if (block_spectrum.size() == eig.size()) {
        spectrum_diff = 0.0;
        for (std::size_t i = 0; i < eig.size(); ++i) {
            spectrum_diff = std::max(spectrum_diff, std::abs(block_spectrum[i] - eig[i]));
        }
    }
    out.push_back(item("iid-block-spectrum", instance, spectrum_diff <= 1e-9, spectrum_diff, 0.0,
                       1e-9));

    // Exact joint law of (z_1..z_N) per block against the Bernoulli product.
    std::uint64_t tag = 0xcbf29ce484222325ULL; // FNV-1a, stable across toolchains
    for (unsigned char c : instance) {
        tag = (tag ^ c) * 0x100000001b3ULL;
    }
    SplitMix64 rng(0x6a6f7264616eULL ^ tag);
    const int n = 1 + static_cast<int>(rng.below(6));
    double worst_tv = 0.0;
    auto tv_for = [&](double p) {
        const std::vector<double> law = jordan_chain_z_law(p, n);
        double tv = 0.0;
        for (std::size_t z = 0; z < law.size(); ++z) {
            double bern = 1.0;
            for (int b = 0; b < n; ++b) {
                bern *= ((z >> b) & 1) ? p : (1.0 - p);
            }
            tv += std::abs(law[z] - bern);
        }
        return tv / 2.0;
    };
    for (const auto& blk : blocks.two_d) {
        worst_tv = std::max(worst_tv, tv_for(blk.p));
    }
    for (const auto& blk : blocks.one_d) {
        if (blk.in_pi0 == 1) {
            worst_tv = std::max(worst_tv, tv_for(static_cast<double>(blk.p)));
        }
    }
    out.push_back(item("iid-law", instance + "/N" + std::to_string(n), worst_tv <= 1e-10,
                       worst_tv, 0.0, 1e-10));
    return out;
}

ReportList check_iid_law(const CheckOptions& opt) {
    const auto start = Clock::now();
    const int procedures = opt.quick ? 5 : 20;
    const long shots = opt.quick ? 20000 : 100000;
    SplitMix64 root(opt.seed ^ 0x696964ULL);

    ReportList out;
    std::vector<VerificationProcedure> pool;
    for (int i = 0; i < procedures; ++i) {
        SplitMix64 rng = root.split(i);
        const int m = 1 + static_cast<int>(rng.below(2));
        const int k = 1 + static_cast<int>(rng.below(2));
        pool.push_back(make_random_procedure(rng.next(), m, k, 12));
        ReportList one = check_iid_on(pool.back(), "random-" + std::to_string(i));
        out.insert(out.end(), one.begin(), one.end());
    }

    // Engine agreement at 4 sigma, plus witness restoration on traces.
    const int agreement_runs = opt.quick ? 1 : 3;
    for (int i = 0; i < agreement_runs; ++i) {
        SplitMix64 rng = root.split(1000 + i);
        const VerificationProcedure& q = pool[i % pool.size()];
        const SpectralDecomposition s = spectrum(q);
        // Prefer an interior eigenvalue so the binomial sigma is healthy.
        std::size_t pick = 0;
        for (std::size_t g = 0; g < s.groups.size(); ++g) {
            if (s.groups[g].p > 0.15 && s.groups[g].p < 0.85) {
                pick = g;
                break;
            }
        }
        const PureState eigenstate{ComplexVector(s.groups[pick].basis.col(0))};
        const int n = 2 + static_cast<int>(rng.below(4));
        IterativePlan plan = IterativePlan::binary(n, random_increasing_g(n, rng));

        const double exact =
            run_iterative_exact(s, plan, DensityMatrix::pure(eigenstate)).prob_of("1");
        const std::uint64_t run_seed = rng.next();
        SampledRun run = run_iterative_sampled(q, plan, DensityMatrix::pure(eigenstate), shots,
                                               run_seed, 200);
        const double sampled = run.distribution.prob_of("1");
        const double sigma = std::sqrt(std::max(exact * (1.0 - exact), 1e-9) /
                                       static_cast<double>(shots));
        out.push_back(item("iid-engine-agreement", "triple-" + std::to_string(i),
                           std::abs(sampled - exact) <= 4.0 * sigma, std::abs(sampled - exact),
                           4.0 * sigma, 4.0 * sigma, run_seed));

        double worst_fidelity = 1.0;
        long restored = 0;
        for (const SampleTrace& tr : run.traces) {
            if (tr.ended_on_pi0_one) {
                worst_fidelity = std::min(worst_fidelity, tr.witness_fidelity);
                ++restored;
            }
        }
        out.push_back(item("iid-witness-restoration",
                           "triple-" + std::to_string(i) + "/restored" + std::to_string(restored),
                           worst_fidelity >= 1.0 - 1e-9, worst_fidelity, 1.0 - 1e-9, 1e-9,
                           run_seed));
    }
    stamp(out, start);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 3: P_g identity and the beta spot value

ReportList check_pg_identity(const CheckOptions& opt) {
    const auto start = Clock::now();
    ReportList out;

    for (int n : {1, 7, 64, 333}) {
        std::vector<double> g(n + 1);
        for (int k = 0; k <= n; ++k) {
            g[k] = static_cast<double>(k) / n;
        }
        double worst = 0.0;
        const int grid = opt.quick ? 200 : 1000;
        for (int j = 0; j <= grid; ++j) {
            const double p = static_cast<double>(j) / grid;
            worst = std::max(worst, std::abs(pg(n, g, p) - p));
        }
        out.push_back(item("pg-identity", "N" + std::to_string(n), worst <= 1e-12, worst, 0.0,
                           1e-12));
    }

    const double beta56 = pg(2, {1.0, 0.0, 1.0}, 5.0 / 6.0);
    const double dev = std::abs(beta56 - 13.0 / 18.0);
    out.push_back(item("pg-beta-spot", "p=5/6", dev <= 1e-15, beta56, 13.0 / 18.0, 1e-15));
    out.push_back(item("pg-half-spot", "p=1/2",
                       std::abs(pg(2, {1.0, 0.0, 1.0}, 0.5) - 0.5) <= 1e-15,
                       pg(2, {1.0, 0.0, 1.0}, 0.5), 0.5, 1e-15));
    stamp(out, start);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 4: strict monotonicity

ReportList check_pg_monotone(const CheckOptions& opt) {
    const auto start = Clock::now();
    const int tables = opt.quick ? 20 : 100;
    const int grid = 1000;
    SplitMix64 root(opt.seed ^ 0x6d6f6eULL);

    ReportList out;
    for (int i = 0; i < tables; ++i) {
        SplitMix64 rng = root.split(i);
        const int n = 1 + static_cast<int>(rng.below(64));
        const std::vector<double> g = random_increasing_g(n, rng);

        double min_inc = std::numeric_limits<double>::infinity();
        double min_deriv = std::numeric_limits<double>::infinity();
        double prev = pg(n, g, 0.0);
        for (int j = 0; j <= grid; ++j) {
            const double p = static_cast<double>(j) / grid;
            const double value = pg(n, g, p);
            if (j > 0) {
                min_inc = std::min(min_inc, value - prev);
            }
            prev = value;
            min_deriv = std::min(min_deriv, pg_derivative(n, g, p));
        }
        out.push_back(item("pg-monotone", "g" + std::to_string(i) + "-N" + std::to_string(n),
                           min_inc > 0.0 && min_deriv > 0.0, std::min(min_inc, min_deriv), 0.0,
                           0.0));
    }

    // Derivative agrees with a central finite difference away from the ends.
    SplitMix64 rng = root.split(9999);
    const int n = 24;
    const std::vector<double> g = random_increasing_g(n, rng);
    double worst = 0.0;
    for (int j = 1; j < 100; ++j) {
        const double p = j / 100.0;
        const double h = 1e-6;
        const double fd = (pg(n, g, p + h) - pg(n, g, p - h)) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - pg_derivative(n, g, p)));
    }
    out.push_back(item("pg-derivative-fd", "N24", worst <= 1e-6, worst, 0.0, 1e-6));
    stamp(out, start);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 5: e-map synthesis

namespace {

TargetPointSet random_targets(SplitMix64& rng) {
    const int m = static_cast<int>(rng.below(5)); // M in 0..4
    auto draw = [&](int count, double min_gap) {
        std::vector<double> gaps(count + 1);
        double sum = 0.0;
        for (double& v : gaps) {
            v = rng.uniform();
            sum += v;
        }
        const double extra = 1.0 - min_gap * (count + 1);
        std::vector<double> points{0.0};
        double acc = 0.0;
        for (int i = 0; i <= count; ++i) {
            acc += min_gap + extra * gaps[i] / sum;
            points.push_back(std::min(acc, 1.0));
        }
        points.back() = 1.0;
        return points;
    };
    return TargetPointSet::from(draw(m, 0.1), draw(m, 0.05));
}

} // namespace

ReportList check_emap_synthesis(const CheckOptions& opt) {
    const auto start = Clock::now();
    ReportList out;
    SplitMix64 root(opt.seed ^ 0x656d6170ULL);

    std::vector<std::pair<std::string, TargetPointSet>> sets;
    sets.emplace_back("anchors-17-67", TargetPointSet::from({0.0, 2.0 / 3.0, 3.0 / 4.0, 1.0},
                                                          {0.0, 1.0 / 7.0, 6.0 / 7.0, 1.0}));
    const int random_sets = opt.quick ? 4 : 20;
    for (int i = 0; i < random_sets; ++i) {
        SplitMix64 rng = root.split(i);
        sets.emplace_back("random-" + std::to_string(i), random_targets(rng));
    }

    for (const auto& [name, targets] : sets) {
        try {
            const SynthesizedEMap em = synthesize(targets, 1e-9, 4096);
            double direct_worst = 0.0;
            for (std::size_t i = 0; i < targets.s.size(); ++i) {
                direct_worst = std::max(
                    direct_worst, std::abs(direct_pg(em.N, em.g, targets.s[i]) - targets.t[i]));
            }
            const bool pass = em.N <= 4096 && direct_worst <= 1e-9 &&
                              em.lambda_max < targets.delta / 3.0 &&
                              em.monotone_certificate > 0.0;
            out.push_back(item("emap-synthesis", name + "/N" + std::to_string(em.N), pass,
                               direct_worst, 0.0, 1e-9));
        } catch (const Error& e) {
            out.push_back(item("emap-synthesis", name + "/" + e.what(), false, 1.0, 0.0, 1e-9));
        }
    }
    stamp(out, start);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 6: nondestructive procedures

ReportList check_nondestructive(const CheckOptions& opt) {
    const auto start = Clock::now();
    ReportList out;
    SplitMix64 root(opt.seed ^ 0x6e64ULL);

    const int fixtures = opt.quick ? 1 : 3;
    const int inputs_per_fixture = opt.quick ? 6 : 17; // ~50 total at 3 fixtures
    for (int f = 0; f < fixtures; ++f) {
        SplitMix64 rng = root.split(f);
        const std::vector<double> probs =
            random_probs_avoiding(rng, 4, {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}, 0.04, 0.05, 0.95);
        VerificationProcedure q = rotated_from_spectrum(probs, rng.next());
        NondestructiveProcedure nd = make_nondestructive(q, {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0},
                                                         {0.0, 1.0 / 16.0, 15.0 / 16.0, 1.0});
        const std::string tag = "fixture-" + std::to_string(f);

        out.push_back(item("nondestructive-targets", tag, nd.target_residual() <= 1e-8,
                           nd.target_residual(), 0.0, 1e-8));

        // Eigenstate inputs: conditional output is the eigenstate itself.
        const SpectralDecomposition& s = nd.base_spectrum();
        double worst_fid = 1.0;
        for (std::size_t g = 0; g < s.groups.size(); ++g) {
            const PureState in{ComplexVector(s.groups[g].basis.col(0))};
            for (int tries = 0; tries < 4000; ++tries) {
                const auto run = nd.run(in, rng);
                if (run.accept) {
                    worst_fid = std::min(
                        worst_fid, fidelity(in.amplitudes(), run.post_state->amplitudes()));
                    break;
                }
            }
        }
        out.push_back(item("nondestructive-fidelity", tag, worst_fid >= 1.0 - 1e-9, worst_fid,
                           1.0 - 1e-9, 1e-9));

        // Random pure inputs: re-acceptance never drops.
        double worst_boost = 0.0;
        for (int i = 0; i < inputs_per_fixture; ++i) {
            const PureState in = random_pure_state(q.witness_qubits(), rng);
            NondestructiveProcedure::RunResult run;
            for (int tries = 0; tries < 20000 && !run.accept; ++tries) {
                run = nd.run(in, rng);
            }
            if (!run.accept) {
                continue;
            }
            const double before = nd.accept_probability(in);
            const double after = nd.accept_probability(*run.post_state);
            worst_boost = std::min(worst_boost, after - before);
        }
        out.push_back(item("nondestructive-boost", tag, worst_boost >= -1e-10, worst_boost,
                           0.0, 1e-10));
    }
    stamp(out, start);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 7: conversion formulas

ReportList check_conversions(const CheckOptions& opt) {
    const auto start = Clock::now();
    ReportList out;
    SplitMix64 root(opt.seed ^ 0x636f6e76ULL);

    const int fixtures = opt.quick ? 2 : 6;
    for (int f = 0; f < fixtures; ++f) {
        SplitMix64 rng = root.split(f);
        std::vector<double> probs =
            random_probs_avoiding(rng, 4, {0.0, 1.0}, 0.02, 0.02, 0.98);
        probs[0] = 5.0 / 6.0; // the beta spot value rides along
        VerificationProcedure q2 = (f % 2 == 0) ? from_spectrum(probs)
                                                : rotated_from_spectrum(probs, rng.next());
        const SpectralDecomposition s = spectrum(q2);
        const std::string tag = "fixture-" + std::to_string(f);

        VerificationProcedure qt = qt_from_q2(q2);
        VerificationProcedure q3 = q3_from_q2(q2);
        VerificationProcedure q2t = q2_from_total(q2);

        double worst_beta = 0.0, worst_q3 = 0.0, worst_half = 0.0, beta_spot = 1.0;
        for (const auto& g : s.groups) {
            const PureState eigenstate{ComplexVector(g.basis.col(0))};
            const double p = g.p;

            const double qt_acc = qt.accept_probability(eigenstate);
            worst_beta = std::max(worst_beta, std::abs(qt_acc - beta_map(p)));
            if (std::abs(p - 5.0 / 6.0) < 1e-9) {
                beta_spot = std::abs(qt_acc - 13.0 / 18.0);
            }

            const RealVector q3_probs = q3.acceptance_probabilities(eigenstate);
            worst_q3 = std::max(worst_q3, std::abs(q3_probs(1) - p * p));
            worst_q3 = std::max(worst_q3, std::abs(q3_probs(0) - 2.0 * p * (1.0 - p)));
            worst_q3 = std::max(worst_q3, std::abs(q3_probs(2) - (1.0 - p) * (1.0 - p)));

            worst_half =
                std::max(worst_half, std::abs(q2t.accept_probability(eigenstate) - (1.0 + p) / 2.0));
        }
        out.push_back(item("conversion-beta", tag, worst_beta <= 1e-12, worst_beta, 0.0, 1e-12));
        out.push_back(item("conversion-beta-spot", tag, beta_spot <= 1e-12, beta_spot, 0.0,
                           1e-12));
        out.push_back(item("conversion-q3-squares", tag, worst_q3 <= 1e-12, worst_q3, 0.0,
                           1e-12));
        out.push_back(item("conversion-half", tag, worst_half <= 1e-12, worst_half, 0.0, 1e-12));

        // Classical counterpart of the q3 letters through the exact engine.
        IterativePlan plan = q3_letters_plan();
        double worst_plan = 0.0;
        for (const auto& g : s.groups) {
            const PureState eigenstate{ComplexVector(g.basis.col(0))};
            const OutcomeDistribution dist =
                run_iterative_exact(s, plan, DensityMatrix::pure(eigenstate));
            const RealVector circ = q3.acceptance_probabilities(eigenstate);
            worst_plan = std::max(worst_plan, std::abs(dist.prob_of("L") - circ(1)));
            worst_plan = std::max(worst_plan, std::abs(dist.prob_of("0") - circ(0)));
            worst_plan = std::max(worst_plan, std::abs(dist.prob_of("Lbar") - circ(2)));
        }
        out.push_back(item("conversion-q3-engine", tag, worst_plan <= 1e-12, worst_plan, 0.0,
                           1e-12));
    }

    // Router spot values: Pr[L]=3/4, Pr[Lbar]=1/4 gives Pr[Q2=1]=3/4.
    {
        VerificationProcedure qa = from_spectrum({1.0, 0.3});
        VerificationProcedure qb = from_spectrum({1.0, 0.2});
        VerificationProcedure q3 = q3_from_pair(qa, qb);
        VerificationProcedure q2 = q2_from_q3(q3);

        ComplexVector router = ComplexVector::Zero(q3.witness_dim());
        router(2) = std::sqrt(3.0 / 4.0); // |1>|0>: run Q on its p=1 eigenstate
        router(0) = std::sqrt(1.0 / 4.0); // |0>|0>: run Q' on its p=1 eigenstate
        const PureState psi{std::move(router)};

        const RealVector p3 = q3.acceptance_probabilities(psi);
        out.push_back(item("conversion-router-arms", "spot",
                           std::abs(p3(1) - 0.75) <= 1e-12 && std::abs(p3(2) - 0.25) <= 1e-12,
                           p3(1), 0.75, 1e-12));
        const double q2_acc = q2.accept_probability(psi);
        out.push_back(item("conversion-q2-spot", "3/4->3/4", std::abs(q2_acc - 0.75) <= 1e-12,
                           q2_acc, 0.75, 1e-12));

        // Pr[Q2=1] = 1/2 + (Pr[L] - Pr[Lbar])/2 on random inputs.
        SplitMix64 rng = root.split(777);
        double worst_rel = 0.0;
        for (int i = 0; i < 8; ++i) {
            const PureState input = random_pure_state(q3.witness_qubits(), rng);
            const RealVector probs3 = q3.acceptance_probabilities(input);
            const double lhs = q2.accept_probability(input);
            const double rhs = 0.5 + (probs3(1) - probs3(2)) / 2.0;
            worst_rel = std::max(worst_rel, std::abs(lhs - rhs));
        }
        out.push_back(item("conversion-q2-relation", "random", worst_rel <= 1e-12, worst_rel,
                           0.0, 1e-12));

        // pair_from_q3 inverts the router on both arms.
        auto [qhat, qhat_prime] = pair_from_q3(q3);
        double worst_pair = 0.0;
        SplitMix64 rng2 = root.split(778);
        for (int i = 0; i < 6; ++i) {
            const PureState input = random_pure_state(q3.witness_qubits(), rng2);
            const RealVector probs3 = q3.acceptance_probabilities(input);
            worst_pair = std::max(worst_pair,
                                  std::abs(qhat.accept_probability(input) - probs3(1)));
            worst_pair = std::max(
                worst_pair, std::abs(qhat_prime.accept_probability(input) - probs3(2)));
        }
        out.push_back(item("conversion-pair-roundtrip", "random", worst_pair <= 1e-12,
                           worst_pair, 0.0, 1e-12));
    }
    stamp(out, start);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 8: subspace equalities

ReportList check_subspace_equalities(const CheckOptions& opt) {
    const auto start = Clock::now();
    ReportList out;
    SplitMix64 root(opt.seed ^ 0x737562ULL);
    const int per_side = opt.quick ? 3 : 20;

    // H_{Q^T}^{>=13/18} equals H_{Q^2}^{[0,1/6] u [5/6,1]}.
    for (int f = 0; f < per_side; ++f) {
        SplitMix64 rng = root.split(f);
        const std::vector<double> probs = random_probs_avoiding(
            rng, 4, {1.0 / 6.0, 5.0 / 6.0}, 0.02, 0.02, 0.98);
        VerificationProcedure q2 = (f % 2 == 0) ? from_spectrum(probs)
                                                : rotated_from_spectrum(probs, rng.next());
        VerificationProcedure qt = qt_from_q2(q2);

        const Subspace left = subspace_select(spectrum(qt), {{13.0 / 18.0, 1.0}});
        const Subspace right =
            subspace_select(spectrum(q2), {{0.0, 1.0 / 6.0}, {5.0 / 6.0, 1.0}});
        const bool dims = left.dimension() == right.dimension();
        const double diff = dims ? max_abs_diff(left.projector(), right.projector()) : 1.0;
        out.push_back(item("subspace-qt", "fixture-" + std::to_string(f), dims && diff <= 1e-8,
                           diff, 0.0, 1e-8));
    }

    // H_{Q^2}^{[0,(1-a)/2] u [(1+a)/2,1]} equals H_Q^{>=a} for the coin
    // construction, and H^{<1/2} of the result is empty.
    const double a = 2.0 / 3.0;
    for (int f = 0; f < per_side; ++f) {
        SplitMix64 rng = root.split(100 + f);
        std::vector<double> probs = random_probs_avoiding(rng, 4, {a}, 0.02, 0.02, 0.98);
        probs[0] = rng.uniform(a + 0.03, 0.97); // keep the procedure total-ish
        VerificationProcedure q = (f % 2 == 0) ? from_spectrum(probs)
                                               : rotated_from_spectrum(probs, rng.next());
        VerificationProcedure q2 = q2_from_total(q);

        const SpectralDecomposition s2 = spectrum(q2);
        const Subspace left =
            subspace_select(s2, {{0.0, (1.0 - a) / 2.0}, {(1.0 + a) / 2.0, 1.0}});
        const Subspace right = subspace_select(spectrum(q), {{a, 1.0}});
        const bool dims = left.dimension() == right.dimension();
        const double diff = dims ? max_abs_diff(left.projector(), right.projector()) : 1.0;
        out.push_back(item("subspace-total", "fixture-" + std::to_string(f),
                           dims && diff <= 1e-8, diff, 0.0, 1e-8));

        double min_p = 1.0;
        for (const auto& g : s2.groups) {
            min_p = std::min(min_p, g.p);
        }
        out.push_back(item("subspace-total-floor", "fixture-" + std::to_string(f),
                           min_p >= 0.5 - 1e-12, min_p, 0.5, 1e-12));
    }
    stamp(out, start);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 9: overlap bound and Q^P separation

ReportList check_overlap_bound(const CheckOptions& opt) {
    const auto start = Clock::now();
    ReportList out;
    SplitMix64 root(opt.seed ^ 0x6f766cULL);

    // Map spot values, once; the synthesized table is shared by qp_from_q2.
    {
        VerificationProcedure probe = from_spectrum({0.5, 0.5});
        IterativeProcedure qp = qp_from_q2(probe);
        const double at34 = pg(qp.plan(), 3.0 / 4.0);
        const double at23 = pg(qp.plan(), 2.0 / 3.0);
        out.push_back(item("qp-threshold", "3/4->6/7", std::abs(at34 - 6.0 / 7.0) <= 1e-9, at34,
                           6.0 / 7.0, 1e-9));
        out.push_back(item("qp-threshold", "2/3->1/7", std::abs(at23 - 1.0 / 7.0) <= 1e-9, at23,
                           1.0 / 7.0, 1e-9));
        out.push_back(item("qp-threshold", "1->1", std::abs(pg(qp.plan(), 1.0) - 1.0) <= 1e-12,
                           pg(qp.plan(), 1.0), 1.0, 1e-12));
    }

    const int fixtures = opt.quick ? 4 : 20;
    for (int f = 0; f < fixtures; ++f) {
        SplitMix64 rng = root.split(f);
        // x-in-L promise spectrum carrying the 3/4 and 2/3 marker points.
        std::vector<double> probs = {rng.uniform(0.90, 0.98), 3.0 / 4.0,
                                     rng.uniform(0.70, 0.74), rng.uniform(0.40, 0.60)};
        VerificationProcedure q2 = (f % 2 == 0) ? from_spectrum(probs)
                                                : rotated_from_spectrum(probs, rng.next());
        const SpectralDecomposition s = spectrum(q2);
        const DensityMatrix rho = adversarial_rho(s);
        const OverlapCertificate cert = bqp_overlap_bound(q2, rho);
        const std::string tag = "inL-" + std::to_string(f);
        out.push_back(item("overlap-bound", tag,
                           cert.constraint_met && cert.overlap >= cert.bound - 1e-9,
                           cert.overlap, cert.bound, 1e-9));

        // Q^P completeness on the adversarial state.
        IterativeProcedure qp = qp_from_q2(q2);
        const double qp_acc = qp.outcome_distribution(rho).prob_of("1");
        out.push_back(item("qp-completeness", tag, qp_acc >= 2.0 / 9.0 - 1e-9, qp_acc,
                           2.0 / 9.0, 1e-9));

        // Out-of-language companion: soundness tops out at f(2/3) = 1/7.
        std::vector<double> low = {2.0 / 3.0, rng.uniform(0.30, 0.60), rng.uniform(0.17, 0.30),
                                   rng.uniform(0.02, 0.15)};
        VerificationProcedure q2_out = from_spectrum(low);
        IterativeProcedure qp_out = qp_from_q2(q2_out);
        double top = 0.0;
        for (std::size_t g = 0; g < spectrum(q2_out).groups.size(); ++g) {
            top = std::max(top, qp_out.mapped_value(g));
        }
        out.push_back(item("qp-soundness", "outL-" + std::to_string(f), top <= 1.0 / 7.0 + 1e-9,
                           top, 1.0 / 7.0, 1e-9));
    }
    stamp(out, start);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 10: the complement verifier

ReportList check_qco_on(const RobustPairFixture& fx, const std::string& instance) {
    ReportList out;
    const double a_prime = fx.q_total.threshold("a");
    const double eta = fx.eta;
    const SpectralDecomposition total_basis = spectrum(fx.q_total.procedure);

    // x not in L: some total-procedure witness is accepted with >= (1-eta)^2.
    {
        const QcoProcedure co = qco(fx.q_out, fx.q_total, fx.reduction);
        double best = 0.0;
        for (const auto& g : total_basis.groups) {
            if (g.p >= a_prime - 1e-12) {
                const PureState witness{ComplexVector(g.basis.col(0))};
                best = std::max(best, co.accept_probability(witness));
            }
        }
        const double bound = (1.0 - eta) * (1.0 - eta);
        out.push_back(item("qco-completeness", instance, best >= bound - 1e-9, best, bound,
                           1e-9));
    }

    // x in L: every total-procedure eigenstate is accepted with <= eta, and
    // the M_1 diagnostics hold.
    {
        const QcoProcedure co = qco(fx.q_in, fx.q_total, fx.reduction);
        double worst = 0.0;
        for (const auto& g : total_basis.groups) {
            for (Eigen::Index c = 0; c < g.basis.cols(); ++c) {
                const PureState eigenstate{ComplexVector(g.basis.col(c))};
                worst = std::max(worst, co.accept_probability(eigenstate));
            }
        }
        out.push_back(item("qco-eigenstate-soundness", instance, worst <= eta + 1e-9, worst,
                           eta, 1e-9));

        const M1Diagnostics diag = m1_diagnostics(co, total_basis);
        out.push_back(item("qco-m1-entries", instance, diag.max_entry <= eta + 1e-9,
                           diag.max_entry, eta, 1e-9));
        out.push_back(item("qco-m1-trace", instance,
                           diag.trace_m1_sq <= std::ldexp(1.0, -4) + 1e-9, diag.trace_m1_sq,
                           std::ldexp(1.0, -4), 1e-9));
        out.push_back(item("qco-m1-top", instance, diag.top_eigenvalue <= 0.25 + 1e-12,
                           diag.top_eigenvalue, 0.25, 1e-12));
    }
    return out;
}

ReportList check_robustness_on(const RobustPairFixture& fx, const std::string& instance,
                               long budget, std::uint64_t seed) {
    ReportList out;
    const RobustnessReport probe = probe_robustness(fx.q_in, fx.q_total, fx.reduction, budget,
                                                    seed);
    if (fx.planted_fault) {
        out.push_back(item("robustness-fault-found", instance, probe.counterexample,
                           probe.empirical_min, probe.required, 0.0, seed));
    } else {
        out.push_back(item("robustness-probe", instance, probe.pass, probe.empirical_min,
                           probe.required, 0.0, seed));
    }
    return out;
}

ReportList check_qco(const CheckOptions& opt) {
    const auto start = Clock::now();
    ReportList out;
    const int fixtures = opt.quick ? 2 : 10;
    for (int f = 0; f < fixtures; ++f) {
        const RobustPairFixture fx = make_robust_pair(opt.seed + f, 2, 1, false);
        ReportList one = check_qco_on(fx, "pair-" + std::to_string(f));
        out.insert(out.end(), one.begin(), one.end());
    }

    // Robustness probes: a clean pair passes, a planted fault is found.
    const long budget = opt.quick ? 400 : 2000;
    {
        const RobustPairFixture fx = make_robust_pair(opt.seed + 1000, 2, 1, false);
        ReportList one = check_robustness_on(fx, "clean", budget, opt.seed ^ 0x70ULL);
        out.insert(out.end(), one.begin(), one.end());
    }
    {
        const RobustPairFixture fx = make_robust_pair(opt.seed + 1001, 2, 1, true);
        ReportList one = check_robustness_on(fx, "fault", budget, opt.seed ^ 0x71ULL);
        out.insert(out.end(), one.begin(), one.end());
    }
    stamp(out, start);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 11: classical oracle agreement

ReportList check_classical_agreement(const CheckOptions& opt) {
    const auto start = Clock::now();
    ReportList out;
    SplitMix64 root(opt.seed ^ 0x636c61ULL);

    const int fixtures = opt.quick ? 1 : 3;
    const int z_bits = 6;
    for (int f = 0; f < fixtures; ++f) {
        SplitMix64 rng = root.split(f);
        // Dyadic spectrum so the classical tape comparator is exact.
        std::vector<int> thresholds(4);
        std::vector<double> probs(4);
        for (int i = 0; i < 4; ++i) {
            thresholds[i] = 1 + static_cast<int>(rng.below((1 << z_bits) - 1));
            probs[i] = static_cast<double>(thresholds[i]) / (1 << z_bits);
        }
        const VerificationProcedure q = from_spectrum(probs);
        const ProbabilisticProcedure c = comparator_procedure(thresholds, z_bits);
        const std::string tag = "dyadic-" + std::to_string(f);

        // Spectrum equality as multisets.
        std::vector<double> quantum = spectrum(q).eigenvalues();
        std::vector<double> classical;
        for (std::uint64_t y = 0; y < 4; ++y) {
            classical.push_back(p_y(c, 0, y));
        }
        std::sort(quantum.begin(), quantum.end());
        std::sort(classical.begin(), classical.end());
        double spec_diff = 0.0;
        for (std::size_t i = 0; i < quantum.size(); ++i) {
            spec_diff = std::max(spec_diff, std::abs(quantum[i] - classical[i]));
        }
        out.push_back(item("classical-spectrum", tag, spec_diff <= 1e-12, spec_diff, 0.0,
                           1e-12));

        // Construction maps through the shared pg formula.
        VerificationProcedure qt = qt_from_q2(q);
        VerificationProcedure q2t = q2_from_total(q);
        VerificationProcedure q3 = q3_from_q2(q);
        const IterativePlan beta_plan = IterativePlan::binary(2, {1.0, 0.0, 1.0});
        const IterativePlan half_plan = IterativePlan::binary(1, {0.5, 1.0});
        const IterativePlan letters = q3_letters_plan();

        double worst = 0.0;
        for (std::uint64_t y = 0; y < 4; ++y) {
            const PureState witness = PureState::basis(q.witness_qubits(), y);
            const double cl_beta = classical_iterative(c, 0, y, beta_plan).prob_of("1");
            worst = std::max(worst, std::abs(qt.accept_probability(witness) - cl_beta));
            const double cl_half = classical_iterative(c, 0, y, half_plan).prob_of("1");
            worst = std::max(worst, std::abs(q2t.accept_probability(witness) - cl_half));
            const OutcomeDistribution cl3 = classical_iterative(c, 0, y, letters);
            const RealVector qu3 = q3.acceptance_probabilities(witness);
            worst = std::max(worst, std::abs(cl3.prob_of("L") - qu3(1)));
            worst = std::max(worst, std::abs(cl3.prob_of("0") - qu3(0)));
            worst = std::max(worst, std::abs(cl3.prob_of("Lbar") - qu3(2)));
        }
        out.push_back(item("classical-constructions", tag, worst <= 1e-12, worst, 0.0, 1e-12));

        // Router-based conversions against the classical letter formulas:
        // routing bit r picks which classical procedure runs, L on the first
        // accepting and Lbar on the second.
        std::vector<int> thresholds_b(4);
        std::vector<double> probs_b(4);
        for (int i = 0; i < 4; ++i) {
            thresholds_b[i] = 1 + static_cast<int>(rng.below((1 << z_bits) - 1));
            probs_b[i] = static_cast<double>(thresholds_b[i]) / (1 << z_bits);
        }
        const VerificationProcedure qb = from_spectrum(probs_b);
        const ProbabilisticProcedure cb = comparator_procedure(thresholds_b, z_bits);
        const VerificationProcedure router = q3_from_pair(q, qb);
        const VerificationProcedure router_q2 = q2_from_q3(router);
        auto [router_l, router_lbar] = pair_from_q3(router);

        double worst_router = 0.0;
        for (int r = 0; r <= 1; ++r) {
            for (std::uint64_t y = 0; y < 4; ++y) {
                const double p_arm = r == 1 ? p_y(c, 0, y) : p_y(cb, 0, y);
                const double want_l = r == 1 ? p_arm : 0.0;
                const double want_lbar = r == 0 ? p_arm : 0.0;
                const PureState input =
                    PureState::basis(router.witness_qubits(), (std::uint64_t(r) << 2) | y);
                const RealVector got = router.acceptance_probabilities(input);
                worst_router = std::max(worst_router, std::abs(got(1) - want_l));
                worst_router = std::max(worst_router, std::abs(got(2) - want_lbar));
                worst_router = std::max(
                    worst_router, std::abs(router_q2.accept_probability(input) -
                                           (0.5 + (want_l - want_lbar) / 2.0)));
                worst_router = std::max(
                    worst_router, std::abs(router_l.accept_probability(input) - want_l));
                worst_router = std::max(
                    worst_router, std::abs(router_lbar.accept_probability(input) - want_lbar));
            }
        }
        out.push_back(item("classical-router", tag, worst_router <= 1e-12, worst_router, 0.0,
                           1e-12));
    }
    stamp(out, start);
    return out;
}

// ---------------------------------------------------------------------------

const std::vector<CheckEntry>& all_checks() {
    static const std::vector<CheckEntry> checks = {
        {"no-interference", "eigenbasis linearity of acceptance", check_no_interference},
        {"iid-law", "iterative outcome law and engine agreement", check_iid_law},
        {"pg-identity", "P_g identity table and beta spot value", check_pg_identity},
        {"pg-monotone", "strict monotonicity of P_g", check_pg_monotone},
        {"emap-synthesis", "interpolating e-map synthesis", check_emap_synthesis},
        {"nondestructive", "nondestructive fidelity and boost", check_nondestructive},
        {"conversions", "closed-form conversion maps", check_conversions},
        {"subspace-equalities", "accept/reject subspace identities", check_subspace_equalities},
        {"overlap-bound", "7/27 overlap bound and Q^P separation", check_overlap_bound},
        {"qco", "complement verifier end to end", check_qco},
        {"classical-agreement", "classical oracle agreement", check_classical_agreement},
    };
    return checks;
}

} // namespace qvp

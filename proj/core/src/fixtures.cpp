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

#include "qvp/fixtures.hpp"

#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "qvp/json_io.hpp"
#include "qvp/spectral.hpp"

namespace qvp {

PureState Example1Fixture::borderline_witness() const {
    const SpectralDecomposition s =
        spectrum_of_accept_operator(procedure.accept_operator(), config().grouping_tol);
    // Locate the 2/3+delta and 2/3-delta^2 eigenvectors.
    ComplexVector high, low;
    for (const auto& g : s.groups) {
        if (std::abs(g.p - (2.0 / 3.0 + delta)) < delta / 2.0) {
            high = g.basis.col(0);
        } else if (std::abs(g.p - (2.0 / 3.0 - delta * delta)) < delta / 2.0) {
            low = g.basis.col(0);
        }
    }
    require(high.size() > 0 && low.size() > 0, ErrorCode::BadInput,
            "fixture spectrum lost its marker eigenvalues");
    ComplexVector psi = std::sqrt(delta / (1.0 + delta)) * high +
                        std::sqrt(1.0 / (1.0 + delta)) * low;
    return PureState(std::move(psi));
}

Example1Fixture make_example1(int n) {
    require(n >= 2 && n <= 11, ErrorCode::SizeCap,
            "example1 sizes are capped at n in 2..11 so delta^2 stays resolvable");
    const double delta = std::ldexp(1.0, -n - 2);
    Example1Fixture fx;
    fx.delta = delta;
    fx.probs = {1.0 / 3.0, 2.0 / 3.0 - delta * delta, 2.0 / 3.0 + delta, 0.0};
    fx.procedure = from_spectrum(fx.probs);
    return fx;
}

VerificationProcedure make_random_procedure(std::uint64_t seed, int m, int k, int gate_count) {
    require(m >= 1 && k >= 0, ErrorCode::BadInput, "need m >= 1, k >= 0");
    const int n = m + k;
    require(n <= config().qubit_cap, ErrorCode::TooManyQubits, "register exceeds the qubit cap");
    if (gate_count <= 0) {
        gate_count = 3 * n + 4;
    }

    SplitMix64 rng(seed);
    CircuitDescription desc;
    desc.witness_qubits = m;
    desc.ancilla_qubits = k;
    desc.outcomes = 2;

    const std::vector<std::string> single = {"h", "x", "y", "z", "s", "t"};
    for (int i = 0; i < gate_count; ++i) {
        const double pick = rng.uniform();
        if (pick < 0.1) {
            const int targets = (n >= 2 && rng.bernoulli(0.5)) ? 2 : 1;
            std::vector<int> qs;
            while (static_cast<int>(qs.size()) < targets) {
                const int q = static_cast<int>(rng.below(n));
                if (std::find(qs.begin(), qs.end(), q) == qs.end()) {
                    qs.push_back(q);
                }
            }
            desc.gates.push_back(
                raw_gate(haar_unitary(Eigen::Index(1) << targets, rng), std::move(qs)));
        } else if (pick < 0.35 && n >= 2) {
            int a = static_cast<int>(rng.below(n));
            int b = static_cast<int>(rng.below(n));
            while (b == a) {
                b = static_cast<int>(rng.below(n));
            }
            const double which = rng.uniform();
            if (which < 0.5) {
                desc.gates.push_back(make_gate("cx", {a, b}));
            } else if (which < 0.75) {
                desc.gates.push_back(make_gate("cz", {a, b}));
            } else {
                desc.gates.push_back(make_gate("swap", {a, b}));
            }
        } else if (pick < 0.42 && n >= 3) {
            int a = static_cast<int>(rng.below(n)), b = a, c = a;
            while (b == a) b = static_cast<int>(rng.below(n));
            while (c == a || c == b) c = static_cast<int>(rng.below(n));
            desc.gates.push_back(make_gate("ccx", {a, b, c}));
        } else if (pick < 0.7) {
            const std::vector<std::string> rot = {"rx", "ry", "rz"};
            desc.gates.push_back(make_gate(rot[rng.below(3)],
                                           {static_cast<int>(rng.below(n))}, {},
                                           rng.uniform(0.0, 2.0 * M_PI)));
        } else {
            desc.gates.push_back(
                make_gate(single[rng.below(single.size())], {static_cast<int>(rng.below(n))}));
        }
    }
    return VerificationProcedure::build(std::move(desc));
}

VerificationProcedure rotated_from_spectrum(const std::vector<double>& probs,
                                            std::uint64_t seed) {
    const int m = qubits_for_dim(static_cast<Eigen::Index>(probs.size()));
    require(m <= 3, ErrorCode::BadLength, "rotated fixtures support up to 3 witness qubits");

    VerificationProcedure diag = from_spectrum(probs);
    SplitMix64 rng(seed);
    std::vector<int> witness(m);
    for (int i = 0; i < m; ++i) {
        witness[i] = i;
    }

    CircuitDescription desc = diag.description();
    desc.gates.insert(desc.gates.begin(),
                      raw_gate(haar_unitary(Eigen::Index(1) << m, rng), witness));
    return VerificationProcedure::build(std::move(desc));
}

VerificationProcedure with_extra_ancillas(const VerificationProcedure& q, int extra) {
    require(extra >= 0, ErrorCode::BadInput, "negative ancilla pad");
    if (extra == 0) {
        return q;
    }
    CircuitDescription desc = q.description();
    desc.ancilla_qubits += extra;
    return VerificationProcedure::build(std::move(desc));
}

std::vector<double> random_probs_avoiding(SplitMix64& rng, int count,
                                          const std::vector<double>& avoid, double margin,
                                          double lo, double hi) {
    std::vector<double> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
        const double p = rng.uniform(lo, hi);
        bool ok = true;
        for (double c : avoid) {
            if (std::abs(p - c) < margin) {
                ok = false;
                break;
            }
        }
        if (ok) {
            out.push_back(p);
        }
    }
    return out;
}

RobustPairFixture make_robust_pair(std::uint64_t seed, int m, int k, bool planted_fault) {
    require(m >= 1 && m <= 3, ErrorCode::SizeCap, "robust pairs support m in 1..3");
    require(k >= 1, ErrorCode::SizeCap, "robust pairs need k >= 1");
    const Eigen::Index dim = Eigen::Index(1) << m;
    require(dim >= 2, ErrorCode::SizeCap, "witness space too small");

    const double a = 2.0 / 3.0, b = 1.0 / 3.0;
    const double a_prime = 0.6, epsilon = 0.2, margin = 0.05;

    SplitMix64 rng(seed);
    RobustPairFixture fx;
    fx.planted_fault = planted_fault;
    fx.eta = qco_eta(m);

    // Total-procedure spectrum: one real witness, one near-witness in
    // [a'-eps, a'), the rest separated below a'-eps.
    fx.total_probs.assign(dim, 0.0);
    fx.total_probs[0] = rng.uniform(0.80, 0.95);
    if (dim >= 2) {
        fx.total_probs[1] = rng.uniform(a_prime - epsilon + 0.05, a_prime - 0.05);
    }
    for (Eigen::Index i = 2; i < dim; ++i) {
        fx.total_probs[i] = rng.uniform(0.05, a_prime - epsilon - 0.05);
    }

    // Q at the in-language instance: eigenvalues are an affine increasing
    // image of the total spectrum, pinned to a+margin at the near-witness
    // threshold. Affinity makes condition 2' hold for arbitrary mixtures.
    const double pivot = a_prime - epsilon;
    const double slope = (1.0 - (a + margin)) / (1.0 - pivot);
    auto transfer = [&](double p) { return a + margin + slope * (p - pivot); };

    fx.permutation.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        fx.permutation[i] = static_cast<int>(i);
    }
    for (Eigen::Index i = dim - 1; i > 0; --i) {
        std::swap(fx.permutation[i], fx.permutation[rng.below(i + 1)]);
    }

    fx.q_in_probs.assign(dim, 0.0);
    for (Eigen::Index i = 0; i < dim; ++i) {
        fx.q_in_probs[fx.permutation[i]] = transfer(fx.total_probs[i]);
    }
    if (planted_fault && dim >= 2) {
        // One near-witness maps to a rejected state.
        fx.q_in_probs[fx.permutation[1]] = rng.uniform(0.05, b - 0.05);
    }

    fx.q_out_probs = random_probs_avoiding(rng, static_cast<int>(dim), {}, 0.0, 0.02, b - 0.05);

    const int pad = k - 1;
    fx.q_in = VerificationTask{with_extra_ancillas(from_spectrum(fx.q_in_probs), pad),
                               {{"a", a}, {"b", b}},
                               VerificationTask::Kind::plain};
    fx.q_out = VerificationTask{with_extra_ancillas(from_spectrum(fx.q_out_probs), pad),
                                {{"a", a}, {"b", b}},
                                VerificationTask::Kind::plain};
    fx.q_total = VerificationTask{with_extra_ancillas(from_spectrum(fx.total_probs), pad),
                                  {{"a", a_prime}},
                                  VerificationTask::Kind::total};

    // Phi: permute the computational basis, then dephase through a traced
    // fresh qubit. Diagonal transfer is untouched, so robustness survives.
    ComplexMatrix perm = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        perm(fx.permutation[i], i) = 1.0;
    }
    std::vector<int> witness(m);
    for (int i = 0; i < m; ++i) {
        witness[i] = i;
    }
    fx.reduction.phi.in_qubits = m;
    fx.reduction.phi.fresh_ancillas = 1;
    fx.reduction.phi.out_qubits = m;
    fx.reduction.phi.gates.push_back(raw_gate(std::move(perm), witness));
    fx.reduction.phi.gates.push_back(make_gate("cx", {0, m}));
    fx.reduction.epsilon = epsilon;
    fx.reduction.instance_map = {{"xL", "t0"}, {"xnotL", "t0"}};
    return fx;
}

// ---------------------------------------------------------------------------
// Bundles on disk

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    require(!ec, ErrorCode::BadInput, "cannot create directory '" + dir + "'");
}

std::string path_join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

} // namespace

void write_example1_bundle(const std::string& dir, int n) {
    Example1Fixture fx = make_example1(n);
    ensure_dir(dir);
    write_text_file(path_join(dir, "circuit.json"),
                    circuit_to_json(fx.procedure.description(), 2));
    write_text_file(path_join(dir, "spectrum.json"),
                    spectrum_to_json(spectrum(fx.procedure), false, 2));
    nlohmann::json thresholds;
    thresholds["a"] = 2.0 / 3.0;
    thresholds["b"] = 1.0 / 3.0;
    thresholds["delta"] = fx.delta;
    thresholds["n"] = n;
    write_text_file(path_join(dir, "thresholds.json"), thresholds.dump(2));
}

void write_random_bundle(const std::string& dir, std::uint64_t seed, int m, int k) {
    VerificationProcedure q = make_random_procedure(seed, m, k);
    ensure_dir(dir);
    write_text_file(path_join(dir, "circuit.json"), circuit_to_json(q.description(), 2));
    nlohmann::json meta;
    meta["seed"] = seed;
    meta["m"] = m;
    meta["k"] = k;
    write_text_file(path_join(dir, "meta.json"), meta.dump(2));
}

void write_robust_pair_bundle(const std::string& dir, std::uint64_t seed, int m, int k,
                              bool planted_fault) {
    RobustPairFixture fx = make_robust_pair(seed, m, k, planted_fault);
    ensure_dir(dir);
    write_text_file(path_join(dir, "q_in.json"),
                    circuit_to_json(fx.q_in.procedure.description(), 2));
    write_text_file(path_join(dir, "q_out.json"),
                    circuit_to_json(fx.q_out.procedure.description(), 2));
    write_text_file(path_join(dir, "q_total.json"),
                    circuit_to_json(fx.q_total.procedure.description(), 2));
    write_text_file(path_join(dir, "reduction.json"), reduction_to_json(fx.reduction, 2));

    nlohmann::json thresholds;
    thresholds["a"] = fx.q_in.threshold("a");
    thresholds["b"] = fx.q_in.threshold("b");
    thresholds["a_prime"] = fx.q_total.threshold("a");
    thresholds["epsilon"] = fx.reduction.epsilon;
    thresholds["eta"] = fx.eta;
    write_text_file(path_join(dir, "thresholds.json"), thresholds.dump(2));

    nlohmann::json witnesses;
    witnesses["seed"] = seed;
    witnesses["total_probs"] = fx.total_probs;
    witnesses["q_in_probs"] = fx.q_in_probs;
    witnesses["q_out_probs"] = fx.q_out_probs;
    witnesses["permutation"] = fx.permutation;
    witnesses["planted_fault"] = fx.planted_fault;
    write_text_file(path_join(dir, "witnesses.json"), witnesses.dump(2));
}

RobustPairFixture load_robust_pair_bundle(const std::string& dir) {
    RobustPairFixture fx;
    const nlohmann::json thresholds =
        nlohmann::json::parse(read_text_file(path_join(dir, "thresholds.json")));
    const nlohmann::json witnesses =
        nlohmann::json::parse(read_text_file(path_join(dir, "witnesses.json")));

    const double a = thresholds.at("a").get<double>();
    const double b = thresholds.at("b").get<double>();
    const double a_prime = thresholds.at("a_prime").get<double>();

    fx.q_in = VerificationTask{
        VerificationProcedure::build(circuit_from_json(read_text_file(path_join(dir, "q_in.json")))),
        {{"a", a}, {"b", b}},
        VerificationTask::Kind::plain};
    fx.q_out = VerificationTask{
        VerificationProcedure::build(circuit_from_json(read_text_file(path_join(dir, "q_out.json")))),
        {{"a", a}, {"b", b}},
        VerificationTask::Kind::plain};
    fx.q_total = VerificationTask{
        VerificationProcedure::build(
            circuit_from_json(read_text_file(path_join(dir, "q_total.json")))),
        {{"a", a_prime}},
        VerificationTask::Kind::total};
    fx.reduction = reduction_from_json(read_text_file(path_join(dir, "reduction.json")));
    fx.eta = thresholds.at("eta").get<double>();
    fx.total_probs = witnesses.at("total_probs").get<std::vector<double>>();
    fx.q_in_probs = witnesses.at("q_in_probs").get<std::vector<double>>();
    fx.q_out_probs = witnesses.at("q_out_probs").get<std::vector<double>>();
    fx.permutation = witnesses.at("permutation").get<std::vector<int>>();
    fx.planted_fault = witnesses.at("planted_fault").get<bool>();
    return fx;
}

} // namespace qvp

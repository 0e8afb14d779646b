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
//
// qvp: fixtures, spectra, iterative runs, e-map synthesis, derived
// procedure constructions, and machine-readable verification reports.
// Exit codes: 0 pass, 1 verification failed, 2 input error.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include <qvp/json_io.hpp>
#include <qvp/verify.hpp>

namespace {

using nlohmann::json;
using namespace qvp;

VerificationProcedure load_procedure(const std::string& path) {
    return VerificationProcedure::build(circuit_from_json(read_text_file(path)));
}

DensityMatrix load_input_state(const VerificationProcedure& q, const std::string& state_path,
                               int basis_index) {
    if (!state_path.empty()) {
        return DensityMatrix::pure(state_from_json(read_text_file(state_path)));
    }
    require(basis_index >= 0 && basis_index < q.witness_dim(), ErrorCode::BadInput,
            "basis index outside the witness space");
    return DensityMatrix::pure(PureState::basis(q.witness_qubits(), basis_index));
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content << "\n";
    } else {
        write_text_file(out_path, content);
    }
}

std::vector<double> parse_csv(const std::string& csv) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t comma = csv.find(',', start);
        const std::string token = csv.substr(start, comma - start);
        require(!token.empty(), ErrorCode::BadInput, "empty entry in list '" + csv + "'");
        values.push_back(std::stod(token));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return values;
}

json distribution_to_json(const OutcomeDistribution& dist) {
    json j;
    j["letters"] = dist.letters;
    std::vector<double> probs(dist.probs.data(), dist.probs.data() + dist.probs.size());
    j["probs"] = probs;
    return j;
}

// --------------------------------------------------------------------------

struct CliState {
    // spectrum
    std::string spectrum_circuit, spectrum_out;
    bool spectrum_basis = false;
    double spectrum_tol = 0.0;
    // accept
    std::string accept_circuit, accept_state, accept_out;
    int accept_basis_index = -1;
    // iterate
    std::string it_circuit, it_plan, it_state, it_g, it_engine = "exact", it_out;
    int it_basis_index = -1, it_n = 0;
    long it_shots = 100000;
    std::uint64_t it_seed = 1;
    long it_traces = 0;
    // synthesize
    std::string syn_targets, syn_s, syn_t, syn_out;
    double syn_tol = 1e-9;
    int syn_cap = 0;
    // construct
    std::string con_circuit, con_q, con_qprime, con_reduction, con_bundle;
    std::string con_out, con_out_q, con_out_qprime, con_s, con_t;
    // verify
    std::string ver_id, ver_circuit, ver_bundle, ver_out;
    std::uint64_t ver_seed = 20260808;
    bool ver_quick = false, ver_timings = false;
    long ver_budget = 2000;
    int ver_trials = 10;
    // fixture
    std::string fix_kind, fix_out;
    int fix_n = 4, fix_m = 2, fix_k = 1;
    std::uint64_t fix_seed = 1;
};

int cmd_spectrum(const CliState& st) {
    VerificationProcedure q = load_procedure(st.spectrum_circuit);
    const double tol = st.spectrum_tol > 0.0 ? st.spectrum_tol : config().grouping_tol;
    emit(st.spectrum_out, spectrum_to_json(spectrum(q, tol), st.spectrum_basis, 2));
    return 0;
}

int cmd_accept(const CliState& st) {
    VerificationProcedure q = load_procedure(st.accept_circuit);
    DensityMatrix rho = load_input_state(q, st.accept_state, st.accept_basis_index);
    const RealVector probs = q.acceptance_probabilities(rho);
    json j;
    j["outcomes"] = q.outcomes();
    std::vector<double> values(probs.data(), probs.data() + probs.size());
    j["probs"] = values;
    emit(st.accept_out, j.dump(2));
    return 0;
}

int cmd_iterate(const CliState& st) {
    VerificationProcedure q = load_procedure(st.it_circuit);
    IterativePlan plan;
    if (!st.it_plan.empty()) {
        plan = plan_from_json(read_text_file(st.it_plan));
    } else {
        require(st.it_n >= 1, ErrorCode::BadInput, "need --plan or --n");
        std::vector<double> weights;
        if (!st.it_g.empty()) {
            weights = parse_csv(st.it_g);
        } else {
            for (int s = 0; s <= st.it_n; ++s) {
                weights.push_back(static_cast<double>(s) / st.it_n);
            }
        }
        plan = IterativePlan::binary(st.it_n, std::move(weights));
    }
    DensityMatrix rho = load_input_state(q, st.it_state, st.it_basis_index);

    json j;
    if (st.it_engine == "exact") {
        j = distribution_to_json(run_iterative_exact(q, plan, rho));
        j["engine"] = "exact";
    } else {
        require(st.it_engine == "sample", ErrorCode::BadInput,
                "--engine must be exact or sample");
        SampledRun run = run_iterative_sampled(q, plan, rho, st.it_shots, st.it_seed,
                                               static_cast<std::size_t>(st.it_traces));
        j = distribution_to_json(run.distribution);
        j["engine"] = "sample";
        j["shots"] = run.shots;
        j["seed"] = run.seed;
        if (!run.traces.empty()) {
            json traces = json::array();
            for (const SampleTrace& tr : run.traces) {
                json t;
                t["outcomes"] = tr.outcomes;
                t["s"] = tr.s;
                t["letter"] = tr.letter;
                if (tr.ended_on_pi0_one) {
                    t["witness_fidelity"] = tr.witness_fidelity;
                }
                traces.push_back(std::move(t));
            }
            j["traces"] = std::move(traces);
        }
    }
    emit(st.it_out, j.dump(2));
    return 0;
}

int cmd_synthesize(const CliState& st) {
    TargetPointSet targets = !st.syn_targets.empty()
                                 ? targets_from_json(read_text_file(st.syn_targets))
                                 : TargetPointSet::from(parse_csv(st.syn_s), parse_csv(st.syn_t));
    SynthesizedEMap em = synthesize(targets, st.syn_tol, st.syn_cap);
    emit(st.syn_out, emap_to_json(em, 2));
    return 0;
}

int cmd_construct(const std::string& kind, const CliState& st) {
    if (kind == "qt" || kind == "q2-from-total" || kind == "q3-from-q2" ||
        kind == "q2-from-q3") {
        VerificationProcedure q = load_procedure(st.con_circuit);
        VerificationProcedure built =
            kind == "qt"            ? qt_from_q2(q)
            : kind == "q2-from-total" ? q2_from_total(q)
            : kind == "q3-from-q2"    ? q3_from_q2(q)
                                      : q2_from_q3(q);
        emit(st.con_out, circuit_to_json(built.description(), 2));
        return 0;
    }
    if (kind == "pair-from-q3") {
        auto [q, q_prime] = pair_from_q3(load_procedure(st.con_circuit));
        require(!st.con_out_q.empty() && !st.con_out_qprime.empty(), ErrorCode::BadInput,
                "pair-from-q3 needs --out-q and --out-qprime");
        write_text_file(st.con_out_q, circuit_to_json(q.description(), 2));
        write_text_file(st.con_out_qprime, circuit_to_json(q_prime.description(), 2));
        return 0;
    }
    if (kind == "q3-from-pair") {
        VerificationProcedure q3 =
            q3_from_pair(load_procedure(st.con_q), load_procedure(st.con_qprime));
        emit(st.con_out, circuit_to_json(q3.description(), 2));
        return 0;
    }
    if (kind == "qr") {
        Reduction red = reduction_from_json(read_text_file(st.con_reduction));
        VerificationProcedure qr = compose_reduction(load_procedure(st.con_circuit), red);
        emit(st.con_out, circuit_to_json(qr.description(), 2));
        return 0;
    }
    if (kind == "qp") {
        VerificationProcedure q = load_procedure(st.con_circuit);
        IterativeProcedure qp = qp_from_q2(q);
        json j;
        j["plan"] = json::parse(plan_to_json(qp.plan()));
        json mapped = json::array();
        const SpectralDecomposition& s = qp.base_spectrum();
        for (std::size_t g = 0; g < s.groups.size(); ++g) {
            mapped.push_back({{"p", s.groups[g].p}, {"image", qp.mapped_value(g)}});
        }
        j["spectrum_map"] = std::move(mapped);
        emit(st.con_out, j.dump(2));
        return 0;
    }
    if (kind == "qnd") {
        VerificationProcedure q = load_procedure(st.con_circuit);
        NondestructiveProcedure nd =
            make_nondestructive(q, parse_csv(st.con_s), parse_csv(st.con_t));
        json j;
        j["sqrt_map"] = json::parse(emap_to_json(nd.sqrt_map()));
        j["target_residual"] = nd.target_residual();
        json mapped = json::array();
        for (std::size_t g = 0; g < nd.base_spectrum().groups.size(); ++g) {
            mapped.push_back(
                {{"p", nd.base_spectrum().groups[g].p}, {"image", nd.mapped_value(g)}});
        }
        j["spectrum_map"] = std::move(mapped);
        emit(st.con_out, j.dump(2));
        return 0;
    }
    if (kind == "qco") {
        RobustPairFixture fx = load_robust_pair_bundle(st.con_bundle);
        const SpectralDecomposition total_basis = spectrum(fx.q_total.procedure);

        json j;
        j["eta"] = fx.eta;
        QcoProcedure co_out = qco(fx.q_out, fx.q_total, fx.reduction);
        double completeness = 0.0;
        for (const auto& g : total_basis.groups) {
            if (g.p >= fx.q_total.threshold("a") - 1e-12) {
                completeness = std::max(
                    completeness,
                    co_out.accept_probability(PureState{ComplexVector(g.basis.col(0))}));
            }
        }
        j["completeness_out_of_language"] = completeness;
        j["completeness_bound"] = (1.0 - fx.eta) * (1.0 - fx.eta);

        QcoProcedure co_in = qco(fx.q_in, fx.q_total, fx.reduction);
        const M1Diagnostics diag = m1_diagnostics(co_in, total_basis);
        j["soundness_max_entry"] = diag.max_entry;
        j["soundness_trace_m1_sq"] = diag.trace_m1_sq;
        j["soundness_top_eigenvalue"] = diag.top_eigenvalue;
        j["pass"] = diag.pass &&
                    completeness >= (1.0 - fx.eta) * (1.0 - fx.eta) - 1e-9;
        emit(st.con_out, j.dump(2));
        return j["pass"].get<bool>() ? 0 : 1;
    }
    fail(ErrorCode::BadInput, "unknown construct kind '" + kind + "'");
}

int cmd_verify(const CliState& st) {
    CheckOptions options;
    options.seed = st.ver_seed;
    options.quick = st.ver_quick;

    ReportList reports;
    if (st.ver_id == "block-structure" || (st.ver_id == "no-interference" && !st.ver_circuit.empty())) {
        require(!st.ver_circuit.empty(), ErrorCode::BadInput,
                "block-structure needs --circuit");
        reports = check_no_interference_on(load_procedure(st.ver_circuit), st.ver_circuit,
                                           st.ver_seed, st.ver_trials);
    } else if (st.ver_id == "iid-law" && !st.ver_circuit.empty()) {
        reports = check_iid_on(load_procedure(st.ver_circuit), st.ver_circuit);
    } else if (st.ver_id == "qco" && !st.ver_bundle.empty()) {
        reports = check_qco_on(load_robust_pair_bundle(st.ver_bundle), st.ver_bundle);
    } else if (st.ver_id == "robustness") {
        require(!st.ver_bundle.empty(), ErrorCode::BadInput, "robustness needs --bundle");
        RobustPairFixture fx = load_robust_pair_bundle(st.ver_bundle);
        const RobustnessReport probe =
            probe_robustness(fx.q_in, fx.q_total, fx.reduction, st.ver_budget, st.ver_seed);
        VerificationReport r;
        r.check_id = "robustness-probe";
        r.instance = st.ver_bundle;
        r.pass = probe.pass;
        r.lhs = probe.empirical_min;
        r.rhs = probe.required;
        r.tolerance = 0.0;
        r.seed = probe.seed;
        reports.push_back(std::move(r));
    } else if (st.ver_id == "tfqma-eq") {
        reports = check_conversions(options);
        ReportList more = check_subspace_equalities(options);
        reports.insert(reports.end(), more.begin(), more.end());
        sort_reports(reports);
    } else {
        bool found = false;
        std::string known = "block-structure, tfqma-eq, robustness";
        for (const CheckEntry& entry : all_checks()) {
            if (entry.id == st.ver_id) {
                reports = entry.run(options);
                found = true;
                break;
            }
            known += ", " + entry.id;
        }
        require(found, ErrorCode::BadInput,
                "unknown theorem id '" + st.ver_id + "' (known: " + known + ")");
    }

    const std::string lines = reports_to_jsonl(reports, st.ver_timings);
    if (st.ver_out.empty()) {
        std::cout << lines;
    } else {
        write_text_file(st.ver_out, lines);
    }
    return all_pass(reports) ? 0 : 1;
}

int cmd_fixture(const CliState& st) {
    require(!st.fix_out.empty(), ErrorCode::BadInput, "fixture needs --out DIR");
    if (st.fix_kind == "example1") {
        write_example1_bundle(st.fix_out, st.fix_n);
    } else if (st.fix_kind == "robust-pair") {
        write_robust_pair_bundle(st.fix_out, st.fix_seed, st.fix_m, st.fix_k, false);
    } else if (st.fix_kind == "planted-fault") {
        write_robust_pair_bundle(st.fix_out, st.fix_seed, st.fix_m, st.fix_k, true);
    } else if (st.fix_kind == "random") {
        write_random_bundle(st.fix_out, st.fix_seed, st.fix_m, st.fix_k);
    } else {
        fail(ErrorCode::BadInput, "unknown fixture kind '" + st.fix_kind + "'");
    }
    return 0;
}

void read_env_caps() {
    if (const char* cap = std::getenv("QVP_QUBIT_CAP")) {
        config().qubit_cap = std::atoi(cap);
    }
    if (const char* cap = std::getenv("QVP_N_CAP")) {
        config().n_cap = std::atoi(cap);
    }
}

} // namespace

int main(int argc, char** argv) {
    read_env_caps();

    CLI::App app{"qvp: quantum verification procedure simulator and verifier"};
    app.require_subcommand(1);
    CliState st;

    auto* spectrum_cmd = app.add_subcommand("spectrum", "spectral decomposition of a procedure");
    spectrum_cmd->add_option("--circuit", st.spectrum_circuit)->required();
    spectrum_cmd->add_flag("--basis", st.spectrum_basis, "include eigenbases");
    spectrum_cmd->add_option("--tol", st.spectrum_tol, "grouping tolerance");
    spectrum_cmd->add_option("--out", st.spectrum_out);

    auto* accept_cmd = app.add_subcommand("accept", "outcome probabilities on an input state");
    accept_cmd->add_option("--circuit", st.accept_circuit)->required();
    accept_cmd->add_option("--state", st.accept_state, "state JSON");
    accept_cmd->add_option("--basis-index", st.accept_basis_index, "computational basis input");
    accept_cmd->add_option("--out", st.accept_out);

    auto* iterate_cmd = app.add_subcommand("iterate", "run an (N,G) iterative procedure");
    iterate_cmd->add_option("--circuit", st.it_circuit)->required();
    iterate_cmd->add_option("--plan", st.it_plan, "plan JSON");
    iterate_cmd->add_option("--n", st.it_n, "plan length (identity weights unless --g)");
    iterate_cmd->add_option("--g", st.it_g, "comma list of accept weights per s");
    iterate_cmd->add_option("--state", st.it_state);
    iterate_cmd->add_option("--basis-index", st.it_basis_index);
    iterate_cmd->add_option("--engine", st.it_engine, "exact | sample");
    iterate_cmd->add_option("--shots", st.it_shots);
    iterate_cmd->add_option("--seed", st.it_seed);
    iterate_cmd->add_option("--traces", st.it_traces, "record the first T shot traces");
    iterate_cmd->add_option("--out", st.it_out);

    auto* synth_cmd = app.add_subcommand("synthesize", "interpolating e-map synthesis");
    synth_cmd->add_option("--targets", st.syn_targets, "targets JSON");
    synth_cmd->add_option("--s", st.syn_s, "comma list of s anchors");
    synth_cmd->add_option("--t", st.syn_t, "comma list of t anchors");
    synth_cmd->add_option("--tol", st.syn_tol);
    synth_cmd->add_option("--n-cap", st.syn_cap);
    synth_cmd->add_option("--out", st.syn_out);

    auto* construct_cmd = app.add_subcommand("construct", "derived procedures");
    construct_cmd->require_subcommand(1);
    std::vector<std::string> kinds = {"qt",           "q2-from-total", "q3-from-pair",
                                      "pair-from-q3", "q2-from-q3",    "q3-from-q2",
                                      "qnd",          "qp",            "qr",
                                      "qco"};
    for (const std::string& kind : kinds) {
        auto* sub = construct_cmd->add_subcommand(kind);
        sub->add_option("--circuit", st.con_circuit);
        sub->add_option("--q", st.con_q);
        sub->add_option("--qprime", st.con_qprime);
        sub->add_option("--reduction", st.con_reduction);
        sub->add_option("--bundle", st.con_bundle);
        sub->add_option("--s", st.con_s);
        sub->add_option("--t", st.con_t);
        sub->add_option("--out", st.con_out);
        sub->add_option("--out-q", st.con_out_q);
        sub->add_option("--out-qprime", st.con_out_qprime);
    }

    auto* verify_cmd = app.add_subcommand("verify", "theorem verification runs");
    verify_cmd->add_option("id", st.ver_id, "theorem id")->required();
    verify_cmd->add_option("--circuit", st.ver_circuit);
    verify_cmd->add_option("--bundle", st.ver_bundle);
    verify_cmd->add_option("--seed", st.ver_seed);
    verify_cmd->add_option("--budget", st.ver_budget);
    verify_cmd->add_option("--trials", st.ver_trials);
    verify_cmd->add_flag("--quick", st.ver_quick);
    verify_cmd->add_flag("--timings", st.ver_timings, "include runtime_ms in reports");
    verify_cmd->add_option("--out", st.ver_out);

    auto* fixture_cmd = app.add_subcommand("fixture", "write instance bundles");
    fixture_cmd->add_option("kind", st.fix_kind, "example1|robust-pair|planted-fault|random")
        ->required();
    fixture_cmd->add_option("--n", st.fix_n);
    fixture_cmd->add_option("--seed", st.fix_seed);
    fixture_cmd->add_option("--m", st.fix_m);
    fixture_cmd->add_option("--k", st.fix_k);
    fixture_cmd->add_option("--out", st.fix_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum_cmd->parsed()) return cmd_spectrum(st);
        if (accept_cmd->parsed()) return cmd_accept(st);
        if (iterate_cmd->parsed()) return cmd_iterate(st);
        if (synth_cmd->parsed()) return cmd_synthesize(st);
        if (construct_cmd->parsed()) {
            return cmd_construct(construct_cmd->get_subcommands().front()->get_name(), st);
        }
        if (verify_cmd->parsed()) return cmd_verify(st);
        if (fixture_cmd->parsed()) return cmd_fixture(st);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

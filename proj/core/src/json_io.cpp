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

#include "qvp/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qvp {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    require(!j.is_discarded(), ErrorCode::BadInput, "malformed JSON");
    return j;
}

std::string dump(const json& j, int indent) {
    return indent >= 0 ? j.dump(indent) : j.dump();
}

json gate_to_json(const Gate& g) {
    json out;
    out["g"] = g.name;
    out["q"] = g.targets;
    if (!g.controls.empty()) {
        out["c"] = g.controls;
    }
    if (g.is_rotation()) {
        out["theta"] = g.theta;
    }
    if (g.name == "u") {
        const Eigen::Index dim = g.matrix.rows();
        json re = json::array(), im = json::array();
        for (Eigen::Index r = 0; r < dim; ++r) {
            json re_row = json::array(), im_row = json::array();
            for (Eigen::Index c = 0; c < dim; ++c) {
                re_row.push_back(g.matrix(r, c).real());
                im_row.push_back(g.matrix(r, c).imag());
            }
            re.push_back(std::move(re_row));
            im.push_back(std::move(im_row));
        }
        out["re"] = std::move(re);
        out["im"] = std::move(im);
    }
    return out;
}

Gate gate_from_json(const json& j) {
    require(j.is_object() && j.contains("g") && j.contains("q"), ErrorCode::BadInput,
            "gate entries need 'g' and 'q'");
    const std::string name = j.at("g").get<std::string>();
    std::vector<int> q = j.at("q").get<std::vector<int>>();
    std::vector<int> c =
        j.contains("c") ? j.at("c").get<std::vector<int>>() : std::vector<int>{};

    if (name == "u" || j.contains("re") || j.contains("im")) {
        require(j.contains("re") && j.contains("im"), ErrorCode::BadInput,
                "raw gates need 're' and 'im' matrices");
        const auto re = j.at("re").get<std::vector<std::vector<double>>>();
        const auto im = j.at("im").get<std::vector<std::vector<double>>>();
        const Eigen::Index dim = static_cast<Eigen::Index>(re.size());
        require(im.size() == re.size(), ErrorCode::BadInput, "re/im shape mismatch");
        ComplexMatrix u(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
            require(static_cast<Eigen::Index>(re[r].size()) == dim &&
                        static_cast<Eigen::Index>(im[r].size()) == dim,
                    ErrorCode::BadInput, "re/im rows must be square");
            for (Eigen::Index cix = 0; cix < dim; ++cix) {
                u(r, cix) = Complex(re[r][cix], im[r][cix]);
            }
        }
        return raw_gate(std::move(u), std::move(q), std::move(c));
    }
    const double theta = j.value("theta", 0.0);
    return make_gate(name, std::move(q), std::move(c), theta);
}

} // namespace

std::string circuit_to_json(const CircuitDescription& desc, int indent) {
    json j;
    j["witness_qubits"] = desc.witness_qubits;
    j["ancilla_qubits"] = desc.ancilla_qubits;
    j["outcomes"] = desc.outcomes;
    json gates = json::array();
    for (const Gate& g : desc.gates) {
        gates.push_back(gate_to_json(g));
    }
    j["gates"] = std::move(gates);
    return dump(j, indent);
}

CircuitDescription circuit_from_json(const std::string& text) {
    const json j = parse(text);
    require(j.contains("witness_qubits") && j.contains("ancilla_qubits") &&
                j.contains("outcomes") && j.contains("gates"),
            ErrorCode::BadInput, "circuit JSON is missing required fields");
    CircuitDescription desc;
    desc.witness_qubits = j.at("witness_qubits").get<int>();
    desc.ancilla_qubits = j.at("ancilla_qubits").get<int>();
    desc.outcomes = j.at("outcomes").get<int>();
    for (const json& g : j.at("gates")) {
        desc.gates.push_back(gate_from_json(g));
    }
    return desc;
}

std::string state_to_json(const PureState& psi, int indent) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < psi.dim(); ++i) {
        re.push_back(psi.amplitudes()(i).real());
        im.push_back(psi.amplitudes()(i).imag());
    }
    json j;
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return dump(j, indent);
}

PureState state_from_json(const std::string& text) {
    const json j = parse(text);
    require(j.contains("re") && j.contains("im"), ErrorCode::BadInput,
            "state JSON needs 're' and 'im'");
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    require(re.size() == im.size() && !re.empty(), ErrorCode::BadInput, "re/im size mismatch");
    ComplexVector v(static_cast<Eigen::Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
    }
    return PureState(std::move(v));
}

std::string plan_to_json(const IterativePlan& plan, int indent) {
    json j;
    j["N"] = plan.N;
    j["alphabet"] = plan.alphabet;
    j["g"] = plan.g;
    return dump(j, indent);
}

IterativePlan plan_from_json(const std::string& text) {
    const json j = parse(text);
    require(j.contains("N") && j.contains("g"), ErrorCode::BadInput,
            "plan JSON needs 'N' and 'g'");
    IterativePlan plan;
    plan.N = j.at("N").get<int>();
    if (j.contains("alphabet")) {
        plan.alphabet = j.at("alphabet").get<std::vector<std::string>>();
    }
    plan.g = j.at("g").get<std::vector<std::vector<double>>>();
    plan.validate();
    return plan;
}

std::string targets_to_json(const TargetPointSet& targets, int indent) {
    json j;
    j["s"] = targets.s;
    j["t"] = targets.t;
    j["eps"] = targets.eps;
    j["delta"] = targets.delta;
    return dump(j, indent);
}

TargetPointSet targets_from_json(const std::string& text) {
    const json j = parse(text);
    require(j.contains("s") && j.contains("t"), ErrorCode::BadInput,
            "targets JSON needs 's' and 't'");
    TargetPointSet tp;
    tp.s = j.at("s").get<std::vector<double>>();
    tp.t = j.at("t").get<std::vector<double>>();
    if (j.contains("eps") && j.contains("delta")) {
        tp.eps = j.at("eps").get<double>();
        tp.delta = j.at("delta").get<double>();
        tp.validate();
        return tp;
    }
    return TargetPointSet::from(tp.s, tp.t);
}

std::string spectrum_to_json(const SpectralDecomposition& s, bool include_basis, int indent) {
    json groups = json::array();
    for (const auto& g : s.groups) {
        json entry;
        entry["p"] = g.p;
        entry["mult"] = g.multiplicity;
        if (include_basis) {
            json re = json::array(), im = json::array();
            for (Eigen::Index c = 0; c < g.basis.cols(); ++c) {
                json re_col = json::array(), im_col = json::array();
                for (Eigen::Index r = 0; r < g.basis.rows(); ++r) {
                    re_col.push_back(g.basis(r, c).real());
                    im_col.push_back(g.basis(r, c).imag());
                }
                re.push_back(std::move(re_col));
                im.push_back(std::move(im_col));
            }
            entry["basis_re"] = std::move(re);
            entry["basis_im"] = std::move(im);
        }
        groups.push_back(std::move(entry));
    }
    json j;
    j["groups"] = std::move(groups);
    j["tol"] = s.grouping_tol;
    return dump(j, indent);
}

std::string emap_to_json(const SynthesizedEMap& em, int indent) {
    json j;
    j["N"] = em.N;
    j["g"] = em.g;
    j["lambda"] = em.lambda;
    j["residuals"] = em.residuals;
    j["mu"] = em.mu;
    j["sigma"] = em.sigma;
    j["lambda_max"] = em.lambda_max;
    j["monotone_certificate"] = em.monotone_certificate;
    j["min_derivative"] = em.min_derivative;
    j["condition_estimate"] = em.condition_estimate;
    j["clip_magnitude"] = em.clip_magnitude;
    j["targets"] = json::parse(targets_to_json(em.targets));
    return dump(j, indent);
}

std::string channel_to_json(const CircuitChannel& channel, int indent) {
    json j;
    j["in_qubits"] = channel.in_qubits;
    j["fresh_ancillas"] = channel.fresh_ancillas;
    j["out_qubits"] = channel.out_qubits;
    json gates = json::array();
    for (const Gate& g : channel.gates) {
        gates.push_back(gate_to_json(g));
    }
    j["gates"] = std::move(gates);
    return dump(j, indent);
}

CircuitChannel channel_from_json(const std::string& text) {
    const json j = parse(text);
    require(j.contains("in_qubits") && j.contains("out_qubits") && j.contains("gates"),
            ErrorCode::BadInput, "channel JSON is missing required fields");
    CircuitChannel channel;
    channel.in_qubits = j.at("in_qubits").get<int>();
    channel.fresh_ancillas = j.value("fresh_ancillas", 0);
    channel.out_qubits = j.at("out_qubits").get<int>();
    for (const json& g : j.at("gates")) {
        channel.gates.push_back(gate_from_json(g));
    }
    channel.validate();
    return channel;
}

std::string reduction_to_json(const Reduction& red, int indent) {
    json j;
    j["f"] = red.instance_map;
    j["phi"] = json::parse(channel_to_json(red.phi));
    j["epsilon"] = red.epsilon;
    return dump(j, indent);
}

Reduction reduction_from_json(const std::string& text) {
    const json j = parse(text);
    require(j.contains("f") && j.contains("phi") && j.contains("epsilon"), ErrorCode::BadInput,
            "reduction JSON needs 'f', 'phi', 'epsilon'");
    require(!j.contains("success_probability") && !j.contains("probabilistic"),
            ErrorCode::BadInput,
            "probabilistic channels are not supported: the channel of a reduction "
            "must always succeed");
    Reduction red;
    red.instance_map = j.at("f").get<std::map<std::string, std::string>>();
    red.phi = channel_from_json(j.at("phi").dump());
    red.epsilon = j.at("epsilon").get<double>();
    require(red.epsilon >= 0.0, ErrorCode::BadInput, "epsilon must be nonnegative");
    return red;
}

std::string boolcirc_to_json(const ProbabilisticProcedure& c, int indent) {
    json gates = json::array();
    for (const BoolGate& g : c.gates) {
        json entry;
        entry["op"] = g.op;
        entry["in"] = g.in;
        entry["out"] = g.out;
        gates.push_back(std::move(entry));
    }
    json j;
    j["x_bits"] = c.x_bits;
    j["y_bits"] = c.y_bits;
    j["z_bits"] = c.z_bits;
    j["gates"] = std::move(gates);
    j["output"] = c.output;
    return dump(j, indent);
}

ProbabilisticProcedure boolcirc_from_json(const std::string& text) {
    const json j = parse(text);
    require(j.contains("y_bits") && j.contains("gates") && j.contains("output"),
            ErrorCode::BadInput, "boolean circuit JSON is missing required fields");
    ProbabilisticProcedure c;
    c.x_bits = j.value("x_bits", 0);
    c.y_bits = j.at("y_bits").get<int>();
    c.z_bits = j.value("z_bits", 0);
    for (const json& g : j.at("gates")) {
        BoolGate bg;
        bg.op = g.at("op").get<std::string>();
        bg.in = g.at("in").get<std::vector<int>>();
        bg.out = g.at("out").get<int>();
        c.gates.push_back(std::move(bg));
    }
    c.output = j.at("output").get<int>();
    c.validate();
    return c;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::BadInput, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::BadInput, "cannot write '" + path + "'");
    out << content;
}

} // namespace qvp

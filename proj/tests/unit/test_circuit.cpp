#include <doctest.h>

#include <json.hpp>

#include <qvp/fixtures.hpp>
#include <qvp/json_io.hpp>

using namespace qvp;

TEST_CASE("outcome codes clamp to d-1") {
    // Two measured qubits, three outcomes: codes {0,1} pass through and
    // codes {2,3} both collapse to outcome 2.
    CHECK(outcome_of_index(0b0000, 4, 3) == 0);
    CHECK(outcome_of_index(0b0100, 4, 3) == 1);
    CHECK(outcome_of_index(0b1000, 4, 3) == 2);
    CHECK(outcome_of_index(0b1100, 4, 3) == 2);
}

TEST_CASE("circuit JSON round trip preserves the unitary") {
    SplitMix64 seeds(3);
    for (int i = 0; i < 5; ++i) {
        VerificationProcedure q = make_random_procedure(seeds.next(), 2, 1);
        const std::string text = circuit_to_json(q.description());
        VerificationProcedure back = VerificationProcedure::build(circuit_from_json(text));
        CHECK(max_abs_diff(q.unitary(), back.unitary()) <= 1e-12);
        CHECK(circuit_to_json(back.description()) == text);
    }
}

TEST_CASE("gate aliases parse to controlled forms") {
    CircuitDescription desc = circuit_from_json(R"({
        "witness_qubits": 2, "ancilla_qubits": 1, "outcomes": 2,
        "gates": [
            {"g":"cx","q":[0,1]},
            {"g":"ccx","q":[0,1,2]},
            {"g":"ry","q":[2],"c":[0],"theta":0.5},
            {"g":"u","q":[1],"re":[[0,1],[1,0]],"im":[[0,0],[0,0]]}
        ]})");
    CHECK(desc.gates.size() == 4);
    CHECK(desc.gates[0].name == "x");
    CHECK(desc.gates[0].controls == std::vector<int>{0});
    CHECK(desc.gates[1].controls.size() == 2);
    CHECK(desc.gates[2].theta == 0.5);
    CHECK(desc.gates[3].name == "u");
    validate_circuit(desc);
}

TEST_CASE("malformed circuit JSON fails cleanly") {
    CHECK_THROWS_WITH_AS(circuit_from_json("{"), doctest::Contains("BadInput"), Error);
    CHECK_THROWS_WITH_AS(circuit_from_json("{\"witness_qubits\":1}"),
                         doctest::Contains("BadInput"), Error);
    CHECK_THROWS_AS(circuit_from_json(R"({"witness_qubits":1,"ancilla_qubits":0,
        "outcomes":2,"gates":[{"g":"xyzzy","q":[0]}]})"),
                    Error);
}

TEST_CASE("plan, targets, state and reduction JSON round trips") {
    IterativePlan plan = IterativePlan::binary(3, {0.0, 0.25, 0.75, 1.0});
    CHECK(plan_to_json(plan_from_json(plan_to_json(plan))) == plan_to_json(plan));

    TargetPointSet targets =
        TargetPointSet::from({0.0, 0.5, 1.0}, {0.0, 0.75, 1.0});
    TargetPointSet back = targets_from_json(targets_to_json(targets));
    CHECK(back.eps == doctest::Approx(targets.eps));
    CHECK(back.t[1] == doctest::Approx(0.75));

    SplitMix64 rng(5);
    PureState psi = random_pure_state(2, rng);
    PureState psi_back = state_from_json(state_to_json(psi));
    CHECK((psi.amplitudes() - psi_back.amplitudes()).norm() <= 1e-15);

    RobustPairFixture fx = make_robust_pair(99, 2, 1);
    Reduction red_back = reduction_from_json(reduction_to_json(fx.reduction));
    CHECK(red_back.epsilon == doctest::Approx(fx.reduction.epsilon));
    CHECK(red_back.map_instance("xL") == "t0");
    DensityMatrix rho = DensityMatrix::maximally_mixed(2);
    CHECK(max_abs_diff(red_back.phi.apply(rho).matrix(), fx.reduction.phi.apply(rho).matrix()) <=
          1e-12);
}

TEST_CASE("boolean circuit JSON round trip") {
    ProbabilisticProcedure c = comparator_procedure({3, 9, 60, 33}, 6);
    ProbabilisticProcedure back = boolcirc_from_json(boolcirc_to_json(c));
    for (std::uint64_t y = 0; y < 4; ++y) {
        CHECK(p_y(back, 0, y) == p_y(c, 0, y));
    }
}

TEST_CASE("probabilistic reductions are rejected at parse time") {
    RobustPairFixture fx = make_robust_pair(12, 2, 1);
    nlohmann::json j = nlohmann::json::parse(reduction_to_json(fx.reduction));
    j["success_probability"] = 0.5;
    CHECK_THROWS_WITH_AS(reduction_from_json(j.dump()),
                         doctest::Contains("probabilistic"), Error);
}

TEST_CASE("plan validation rejects bad tables") {
    IterativePlan plan;
    plan.N = 2;
    plan.g = {{0.5, 0.5}, {0.5, 0.5}};
    CHECK_THROWS_WITH_AS(plan.validate(), doctest::Contains("PlanInvalid"), Error);

    plan.g = {{0.5, 0.6}, {0.5, 0.5}, {0.5, 0.5}};
    CHECK_THROWS_WITH_AS(plan.validate(), doctest::Contains("PlanInvalid"), Error);
}

#include <doctest.h>

#include <qvp/fixtures.hpp>
#include <qvp/spectral.hpp>

using namespace qvp;

TEST_CASE("identity circuit reads its witness qubit") {
    CircuitDescription desc;
    desc.witness_qubits = 1;
    desc.ancilla_qubits = 0;
    desc.outcomes = 2;
    VerificationProcedure q = VerificationProcedure::build(desc);

    ComplexMatrix e1(2, 2), e0(2, 2);
    e1 << 0, 0, 0, 1;
    e0 << 1, 0, 0, 0;
    CHECK(max_abs_diff(q.povm()[1], e1) <= 1e-14);
    CHECK(max_abs_diff(q.povm()[0], e0) <= 1e-14);

    CHECK(q.accept_probability(PureState::basis(1, 1)) == doctest::Approx(1.0));
    PureState plus = apply_gate_sequence(PureState::basis(1, 0), {make_gate("h", {0})});
    CHECK(q.accept_probability(plus) == doctest::Approx(0.5));
}

TEST_CASE("Hadamard circuit accepts on the minus state") {
    CircuitDescription desc;
    desc.witness_qubits = 1;
    desc.ancilla_qubits = 0;
    desc.outcomes = 2;
    desc.gates.push_back(make_gate("h", {0}));
    VerificationProcedure q = VerificationProcedure::build(desc);

    // E_1 = H |1><1| H = |-><-|; both computational basis states split 50/50.
    ComplexMatrix minus(2, 2);
    minus << 0.5, -0.5, -0.5, 0.5;
    CHECK(max_abs_diff(q.povm()[1], minus) <= 1e-12);
    CHECK(q.accept_probability(PureState::basis(1, 0)) == doctest::Approx(0.5));
    CHECK(q.accept_probability(PureState::basis(1, 1)) == doctest::Approx(0.5));
}

TEST_CASE("three-outcome readout clamps the top code") {
    CircuitDescription desc;
    desc.witness_qubits = 2;
    desc.ancilla_qubits = 0;
    desc.outcomes = 3;
    VerificationProcedure q = VerificationProcedure::build(desc);
    // E_0 = |00>, E_1 = |01>, E_2 = |10> + |11|.
    CHECK(q.povm()[0](0, 0).real() == doctest::Approx(1.0));
    CHECK(q.povm()[1](1, 1).real() == doctest::Approx(1.0));
    CHECK(q.povm()[2](2, 2).real() == doctest::Approx(1.0));
    CHECK(q.povm()[2](3, 3).real() == doctest::Approx(1.0));
}

TEST_CASE("POVM completeness holds on random circuits") {
    SplitMix64 seeds(29);
    for (int i = 0; i < 10; ++i) {
        VerificationProcedure q =
            make_random_procedure(seeds.next(), 1 + i % 3, i % 4);
        ComplexMatrix sum = ComplexMatrix::Zero(q.witness_dim(), q.witness_dim());
        for (const auto& e : q.povm()) {
            sum += e;
        }
        CHECK(max_abs_diff(sum, ComplexMatrix::Identity(q.witness_dim(), q.witness_dim())) <=
              1e-9);
    }
}

TEST_CASE("mixed states accept as convex combinations") {
    VerificationProcedure q = make_random_procedure(331, 2, 1);
    SplitMix64 rng(77);
    PureState a = random_pure_state(2, rng);
    PureState b = random_pure_state(2, rng);
    const double w = 0.3;
    DensityMatrix mix{w * a.projector() + (1.0 - w) * b.projector()};
    const double mixed = q.accept_probability(mix);
    const double convex = w * q.accept_probability(a) + (1.0 - w) * q.accept_probability(b);
    CHECK(std::abs(mixed - convex) <= 1e-12);
}

TEST_CASE("from_spectrum pins the requested spectrum") {
    VerificationProcedure q01 = from_spectrum({0.0, 1.0});
    CHECK(q01.accept_probability(PureState::basis(1, 0)) == doctest::Approx(0.0));
    CHECK(q01.accept_probability(PureState::basis(1, 1)) == doctest::Approx(1.0));

    // Round trip through the spectral module at the fixture scale.
    const double delta = std::ldexp(1.0, -6);
    const std::vector<double> probs = {1.0 / 3.0, 2.0 / 3.0 - delta * delta,
                                       2.0 / 3.0 + delta, 0.0};
    SpectralDecomposition s = spectrum(from_spectrum(probs));
    REQUIRE(s.groups.size() == 4);
    CHECK(s.groups[0].p == doctest::Approx(2.0 / 3.0 + delta).epsilon(1e-12));
    CHECK(s.groups[1].p == doctest::Approx(2.0 / 3.0 - delta * delta).epsilon(1e-12));
    CHECK(s.groups[2].p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(s.groups[3].p == doctest::Approx(0.0).epsilon(1e-12));

    SpectralDecomposition degenerate = spectrum(from_spectrum({0.5, 0.5}));
    REQUIRE(degenerate.groups.size() == 1);
    CHECK(degenerate.groups[0].multiplicity == 2);
}

TEST_CASE("from_spectrum input validation") {
    CHECK_THROWS_WITH_AS(from_spectrum({0.5}), doctest::Contains("BadLength"), Error);
    CHECK_THROWS_WITH_AS(from_spectrum({0.5, 1.5}), doctest::Contains("BadLength"), Error);
    CHECK_THROWS_WITH_AS(from_spectrum({0.1, 0.2, 0.3}), doctest::Contains("BadLength"), Error);
}

TEST_CASE("qubit cap is enforced") {
    Config saved = config();
    config().qubit_cap = 3;
    CircuitDescription desc;
    desc.witness_qubits = 2;
    desc.ancilla_qubits = 2;
    desc.outcomes = 2;
    CHECK_THROWS_WITH_AS(VerificationProcedure::build(desc),
                         doctest::Contains("TooManyQubits"), Error);
    config() = saved;
}

TEST_CASE("acceptance is affine in the state") {
    VerificationProcedure q = from_spectrum({0.9, 0.4, 0.1, 0.7});
    SpectralDecomposition s = spectrum(q);
    SplitMix64 rng(3131);

    // A random mixture over the eigenbasis must accept at the weighted rate.
    std::vector<double> w = {0.4, 0.3, 0.2, 0.1};
    ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
    double expected = 0.0;
    std::size_t i = 0;
    for (const auto& g : s.groups) {
        for (Eigen::Index c = 0; c < g.basis.cols(); ++c, ++i) {
            rho += w[i] * g.basis.col(c) * g.basis.col(c).adjoint();
            expected += w[i] * g.p;
        }
    }
    CHECK(std::abs(q.accept_probability(DensityMatrix{rho}) - expected) <= 1e-12);
}

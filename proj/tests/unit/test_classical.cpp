#include <doctest.h>

#include <qvp/classical.hpp>
#include <qvp/constructions.hpp>
#include <qvp/procedure.hpp>
#include <qvp/spectral.hpp>

using namespace qvp;

namespace {

// output = z0 OR (y0 AND NOT y0) style fixtures built by hand.
ProbabilisticProcedure tape_bit_circuit() {
    ProbabilisticProcedure c;
    c.x_bits = 0;
    c.y_bits = 1;
    c.z_bits = 1;
    c.output = 1; // wire 1 is z0
    c.validate();
    return c;
}

ProbabilisticProcedure majority3_circuit() {
    ProbabilisticProcedure c;
    c.x_bits = 0;
    c.y_bits = 1;
    c.z_bits = 3;
    // wires: y0=0, z=1,2,3; majority = (z0&z1) | (z0&z2) | (z1&z2)
    c.gates.push_back({"and", {1, 2}, 4});
    c.gates.push_back({"and", {1, 3}, 5});
    c.gates.push_back({"and", {2, 3}, 6});
    c.gates.push_back({"or", {4, 5}, 7});
    c.gates.push_back({"or", {7, 6}, 8});
    c.output = 8;
    c.validate();
    return c;
}

} // namespace

TEST_CASE("p_y by exact enumeration") {
    // Constant-1 circuit: output = y0 OR NOT y0.
    ProbabilisticProcedure constant;
    constant.y_bits = 1;
    constant.z_bits = 1;
    constant.gates.push_back({"not", {0}, 2});
    constant.gates.push_back({"or", {0, 2}, 3});
    constant.output = 3;
    CHECK(p_y(constant, 0, 0) == 1.0);

    CHECK(p_y(tape_bit_circuit(), 0, 0) == 0.5);
    CHECK(p_y(majority3_circuit(), 0, 1) == 0.5);

    // Exhaustive oracle for the majority: count the tapes by hand.
    const ProbabilisticProcedure maj = majority3_circuit();
    int accepted = 0;
    for (std::uint64_t z = 0; z < 8; ++z) {
        accepted += maj.eval(0, 0, z) ? 1 : 0;
    }
    CHECK(p_y(maj, 0, 0) == doctest::Approx(accepted / 8.0));
}

TEST_CASE("sampled p_y covers the exact value") {
    PYEstimate est = p_y_sampled(majority3_circuit(), 0, 0, 20000, 7);
    CHECK(std::abs(est.estimate - 0.5) <= est.ci_halfwidth * 1.5);
}

TEST_CASE("acceptance sets partition the witnesses") {
    // Comparator fixture: p_y = thresholds[y] / 64.
    ProbabilisticProcedure c = comparator_procedure({60, 40, 20, 8}, 6);
    AcceptanceSets sets = acceptance_sets(c, 0, 0.6, 1.0 / 3.0);
    CHECK(sets.geq_a == std::vector<std::uint64_t>{0, 1});
    CHECK(sets.leq_b == std::vector<std::uint64_t>{2, 3});

    // Planted singleton witness.
    ProbabilisticProcedure planted = comparator_procedure({64, 1, 1, 1}, 6);
    AcceptanceSets single = acceptance_sets(planted, 0, 0.9, 0.1);
    CHECK(single.geq_a == std::vector<std::uint64_t>{0});
    CHECK(single.leq_b.size() == 3);
}

TEST_CASE("classical iterative equals pg") {
    ProbabilisticProcedure c = comparator_procedure({48, 16, 56, 4}, 6);
    SplitMix64 rng(12);
    for (std::uint64_t y = 0; y < 4; ++y) {
        const double p = p_y(c, 0, y);
        const int n = 1 + static_cast<int>(rng.below(8));
        std::vector<double> g(n + 1);
        g[0] = 0.0;
        for (int k = 1; k <= n; ++k) {
            g[k] = std::min(1.0, g[k - 1] + rng.uniform(0.0, 0.3));
        }
        IterativePlan plan = IterativePlan::binary(n, g);
        const double via_classical = classical_iterative(c, 0, y, plan).prob_of("1");
        CHECK(via_classical == pg(n, g, p));
    }

    // p_y = 1 pushes all mass to g(N).
    ProbabilisticProcedure sure = comparator_procedure({64, 64}, 6);
    IterativePlan plan = IterativePlan::binary(3, {0.1, 0.2, 0.3, 0.9});
    CHECK(classical_iterative(sure, 0, 0, plan).prob_of("1") == doctest::Approx(0.9));

    // The beta map at a dyadic point, both routes.
    IterativePlan beta_plan = IterativePlan::binary(2, {1.0, 0.0, 1.0});
    ProbabilisticProcedure threequarters = comparator_procedure({48, 32}, 6);
    CHECK(classical_iterative(threequarters, 0, 0, beta_plan).prob_of("1") ==
          doctest::Approx(beta_map(0.75)).epsilon(1e-15));
    CHECK(classical_iterative(threequarters, 0, 1, beta_plan).prob_of("1") ==
          doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("diagonal quantum procedures match their classical counterparts") {
    const std::vector<int> thresholds = {52, 37, 21, 6};
    const int z_bits = 6;
    std::vector<double> probs;
    for (int t : thresholds) {
        probs.push_back(static_cast<double>(t) / (1 << z_bits));
    }
    const VerificationProcedure q = from_spectrum(probs);
    const ProbabilisticProcedure c = comparator_procedure(thresholds, z_bits);

    // Spectra agree as multisets.
    std::vector<double> quantum = spectrum(q).eigenvalues();
    std::vector<double> classical;
    for (std::uint64_t y = 0; y < 4; ++y) {
        classical.push_back(p_y(c, 0, y));
    }
    std::sort(quantum.begin(), quantum.end());
    std::sort(classical.begin(), classical.end());
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(quantum[i] - classical[i]) <= 1e-12);
    }

    // The beta construction commutes with the correspondence.
    VerificationProcedure qt = qt_from_q2(q);
    IterativePlan beta_plan = IterativePlan::binary(2, {1.0, 0.0, 1.0});
    for (std::uint64_t y = 0; y < 4; ++y) {
        const double cl = classical_iterative(c, 0, y, beta_plan).prob_of("1");
        const double qu = qt.accept_probability(PureState::basis(2, y));
        CHECK(std::abs(cl - qu) <= 1e-12);
    }
}

TEST_CASE("classical validation errors") {
    ProbabilisticProcedure c = tape_bit_circuit();
    c.z_bits = 25;
    CHECK_THROWS_AS(c.validate(), Error);

    ProbabilisticProcedure wide = comparator_procedure({1, 2}, 4);
    wide.y_bits = 17;
    CHECK_THROWS_AS(acceptance_sets(wide, 0, 0.5, 0.5), Error);

    ProbabilisticProcedure bad;
    bad.y_bits = 1;
    bad.gates.push_back({"and", {0, 5}, 1});
    bad.output = 1;
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("BadIndex"), Error);
}

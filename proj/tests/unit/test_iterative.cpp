#include <doctest.h>

#include <cmath>

#include <qvp/fixtures.hpp>
#include <qvp/iterative.hpp>

using namespace qvp;

TEST_CASE("binomial pmf basics") {
    CHECK(binom_pmf(0, 10, 0.0) == 1.0);
    CHECK(binom_pmf(10, 10, 1.0) == 1.0);
    const double expected[] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
    for (int k = 0; k <= 4; ++k) {
        CHECK(std::abs(binom_pmf(k, 4, 0.5) - expected[k]) <= 1e-15);
    }
    // Row sums to 1.
    long double sum = 0.0L;
    for (int k = 0; k <= 333; ++k) {
        sum += binom_pmf(k, 333, 0.371);
    }
    CHECK(std::abs(static_cast<double>(sum) - 1.0) <= 1e-12);
}

TEST_CASE("binomial tails obey Hoeffding") {
    const int n = 256;
    const double p = 0.5;
    const double half_width = n / 6.0;
    const int lo = static_cast<int>(std::ceil(n * p - half_width));
    const int hi = static_cast<int>(std::floor(n * p + half_width));
    const double tail = binom_tail_outside(lo, hi, n, p);

    // Direct-summation oracle.
    long double direct = 0.0L;
    for (int k = 0; k < lo; ++k) direct += binom_pmf(k, n, p);
    for (int k = hi + 1; k <= n; ++k) direct += binom_pmf(k, n, p);
    CHECK(std::abs(tail - static_cast<double>(direct)) <= 1e-14);
    CHECK(tail <= 2.0 * std::exp(-2.0 * n * (1.0 / 6.0) * (1.0 / 6.0)));
}

TEST_CASE("pg identity and spot values") {
    for (int n : {1, 5, 64}) {
        std::vector<double> g(n + 1);
        for (int k = 0; k <= n; ++k) {
            g[k] = static_cast<double>(k) / n;
        }
        for (int j = 0; j <= 100; ++j) {
            const double p = j / 100.0;
            CHECK(std::abs(pg(n, g, p) - p) <= 1e-12);
        }
    }
    CHECK(pg(2, {1.0, 0.0, 1.0}, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pg(2, {1.0, 0.0, 1.0}, 5.0 / 6.0) == doctest::Approx(13.0 / 18.0).epsilon(1e-15));
}

TEST_CASE("pg derivative matches finite differences and stays positive") {
    SplitMix64 rng(8);
    const int n = 17;
    std::vector<double> g(n + 1);
    g[0] = 0.05;
    for (int k = 1; k <= n; ++k) {
        g[k] = std::min(1.0, g[k - 1] + (rng.bernoulli(0.4) ? 0.0 : rng.uniform(0.0, 0.1)));
    }
    g[n] = std::max(g[n], g[0] + 0.2);

    for (int j = 1; j < 50; ++j) {
        const double p = j / 50.0;
        const double h = 1e-6;
        const double fd = (pg(n, g, p + h) - pg(n, g, p - h)) / (2.0 * h);
        CHECK(std::abs(fd - pg_derivative(n, g, p)) <= 1e-6);
        CHECK(pg_derivative(n, g, p) > 0.0);
    }
    // Endpoint limits: N(g(1)-g(0)) and N(g(N)-g(N-1)).
    CHECK(pg_derivative(n, g, 0.0) == doctest::Approx(n * (g[1] - g[0])).epsilon(1e-12));
    CHECK(pg_derivative(n, g, 1.0) == doctest::Approx(n * (g[n] - g[n - 1])).epsilon(1e-12));
}

TEST_CASE("projectors of a verification procedure") {
    // k = 0 makes Pi_0 the identity.
    CircuitDescription ident;
    ident.witness_qubits = 1;
    ident.outcomes = 2;
    auto [pi0, pi1] = projectors(VerificationProcedure::build(ident));
    CHECK(max_abs_diff(pi0, ComplexMatrix::Identity(2, 2)) <= 1e-12);
    ComplexMatrix one(2, 2);
    one << 0, 0, 0, 1;
    CHECK(max_abs_diff(pi1, one) <= 1e-12);

    VerificationProcedure q = make_random_procedure(17, 2, 2);
    auto [p0, p1] = projectors(q);
    CHECK(max_abs_diff(p0 * p0, p0) <= 1e-10);
    CHECK(max_abs_diff(p1 * p1, p1) <= 1e-10);
}

TEST_CASE("jordan blocks of commuting projectors are one dimensional") {
    ComplexMatrix pi0 = ComplexMatrix::Zero(4, 4);
    pi0(0, 0) = pi0(1, 1) = 1.0;
    ComplexMatrix pi1 = ComplexMatrix::Zero(4, 4);
    pi1(1, 1) = pi1(2, 2) = 1.0;
    JordanBlocks blocks = jordan_blocks(pi0, pi1);
    CHECK(blocks.two_d.empty());
    CHECK(blocks.one_d.size() == 4);
}

TEST_CASE("jordan blocks reproduce the spectrum") {
    VerificationProcedure q = from_spectrum({0.5, 0.0});
    auto [pi0, pi1] = projectors(q);
    JordanBlocks blocks = jordan_blocks(pi0, pi1);
    REQUIRE(blocks.two_d.size() == 1);
    CHECK(blocks.two_d[0].p == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::cos(blocks.two_d[0].theta) * std::cos(blocks.two_d[0].theta) ==
          doctest::Approx(0.5).epsilon(1e-10));

    Example1Fixture fx = make_example1(4);
    auto [e0, e1] = projectors(fx.procedure);
    std::vector<double> block_spectrum = jordan_blocks(e0, e1).spectrum_from_blocks();
    std::vector<double> expected = fx.probs;
    std::sort(expected.begin(), expected.end(), std::greater<>());
    REQUIRE(block_spectrum.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(block_spectrum[i] == doctest::Approx(expected[i]).epsilon(1e-9));
    }

    CHECK_THROWS_WITH_AS(jordan_blocks(e1, ComplexMatrix::Identity(8, 8) * 0.5),
                         doctest::Contains("NotProjector"), Error);
}

TEST_CASE("exact engine on eigenstates and mixtures") {
    VerificationProcedure q = from_spectrum({5.0 / 6.0, 0.25});
    SpectralDecomposition s = spectrum(q);

    // Certain acceptance with an increasing plan ending at 1.
    IterativePlan certain = IterativePlan::binary(3, {0.0, 0.2, 0.7, 1.0});
    VerificationProcedure sure = from_spectrum({1.0, 0.0});
    const PureState top{ComplexVector(spectrum(sure).groups[0].basis.col(0))};
    CHECK(run_iterative_exact(sure, certain, DensityMatrix::pure(top)).prob_of("1") ==
          doctest::Approx(1.0).epsilon(1e-12));

    // The beta plan at p = 5/6 gives 13/18.
    IterativePlan beta = IterativePlan::binary(2, {1.0, 0.0, 1.0});
    const PureState high{ComplexVector(s.groups[0].basis.col(0))};
    CHECK(run_iterative_exact(q, beta, DensityMatrix::pure(high)).prob_of("1") ==
          doctest::Approx(13.0 / 18.0).epsilon(1e-14));

    // Mixtures combine convexly.
    const PureState low{ComplexVector(s.groups[1].basis.col(0))};
    DensityMatrix mix{0.5 * high.projector() + 0.5 * low.projector()};
    const double mixed = run_iterative_exact(q, beta, mix).prob_of("1");
    const double convex = 0.5 * 13.0 / 18.0 + 0.5 * pg(2, {1.0, 0.0, 1.0}, 0.25);
    CHECK(mixed == doctest::Approx(convex).epsilon(1e-13));
}

TEST_CASE("sampling engine agrees with the exact engine") {
    VerificationProcedure q = from_spectrum({5.0 / 6.0, 0.25});
    SpectralDecomposition s = spectrum(q);
    IterativePlan beta = IterativePlan::binary(2, {1.0, 0.0, 1.0});
    const PureState high{ComplexVector(s.groups[0].basis.col(0))};

    const long shots = 20000;
    SampledRun run =
        run_iterative_sampled(q, beta, DensityMatrix::pure(high), shots, 424242, 100);
    const double exact = 13.0 / 18.0;
    const double sigma = std::sqrt(exact * (1.0 - exact) / shots);
    CHECK(std::abs(run.distribution.prob_of("1") - exact) <= 4.0 * sigma);
    CHECK(run.seed == 424242);

    // Traces: s counts equal neighbors; the forced first outcome is 1; a
    // final Pi_0 outcome of 1 restores the witness.
    REQUIRE(!run.traces.empty());
    for (const SampleTrace& tr : run.traces) {
        CHECK(tr.outcomes.front() == 1);
        CHECK(tr.outcomes.size() == 3);
        int s_count = 0;
        for (std::size_t i = 0; i + 1 < tr.outcomes.size(); ++i) {
            s_count += tr.outcomes[i] == tr.outcomes[i + 1] ? 1 : 0;
        }
        CHECK(s_count == tr.s);
        if (tr.ended_on_pi0_one) {
            CHECK(tr.witness_fidelity >= 1.0 - 1e-9);
        }
    }

    CHECK_THROWS_WITH_AS(
        run_iterative_sampled(q, beta, DensityMatrix::pure(high), 0, 1, 0),
        doctest::Contains("ShotsZero"), Error);
}

TEST_CASE("sampled z bits are Bernoulli(p) per position") {
    VerificationProcedure q = from_spectrum({0.65, 0.2});
    SpectralDecomposition s = spectrum(q);
    const PureState eigenstate{ComplexVector(s.groups[0].basis.col(0))};
    IterativePlan plan = IterativePlan::binary(4, {0.0, 0.25, 0.5, 0.75, 1.0});

    const long shots = 4000;
    SampledRun run = run_iterative_sampled(q, plan, DensityMatrix::pure(eigenstate), shots,
                                           31337, shots);
    REQUIRE(run.traces.size() == static_cast<std::size_t>(shots));
    const double sigma = std::sqrt(0.65 * 0.35 / shots);
    for (int i = 0; i < plan.N; ++i) {
        double mean = 0.0;
        for (const SampleTrace& tr : run.traces) {
            mean += tr.z[i];
        }
        mean /= shots;
        CHECK(std::abs(mean - 0.65) <= 5.0 * sigma);
    }
}

TEST_CASE("multi-letter plans agree across engines") {
    VerificationProcedure q = from_spectrum({0.7, 0.3});
    IterativePlan plan;
    plan.N = 2;
    plan.alphabet = {"L", "0", "Lbar"};
    plan.g = {{0.0, 0.0, 1.0}, {0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}};
    plan.validate();

    SpectralDecomposition s = spectrum(q);
    const PureState eigenstate{ComplexVector(s.groups[0].basis.col(0))};
    const DensityMatrix input = DensityMatrix::pure(eigenstate);

    OutcomeDistribution exact = run_iterative_exact(q, plan, input);
    CHECK(exact.prob_of("L") == doctest::Approx(0.49).epsilon(1e-12));
    CHECK(exact.prob_of("0") == doctest::Approx(0.42).epsilon(1e-12));
    CHECK(exact.prob_of("Lbar") == doctest::Approx(0.09).epsilon(1e-12));

    const long shots = 20000;
    SampledRun run = run_iterative_sampled(q, plan, input, shots, 55, 0);
    for (const std::string& letter : plan.alphabet) {
        const double p = exact.prob_of(letter);
        const double sigma = std::sqrt(p * (1.0 - p) / shots);
        CHECK(std::abs(run.distribution.prob_of(letter) - p) <= 4.0 * sigma);
    }
}

TEST_CASE("sampled runs are reproducible by seed") {
    VerificationProcedure q = from_spectrum({0.6, 0.3});
    IterativePlan plan = IterativePlan::binary(3, {0.0, 0.1, 0.8, 1.0});
    DensityMatrix input = DensityMatrix::maximally_mixed(1);
    SampledRun a = run_iterative_sampled(q, plan, input, 2000, 99, 10);
    SampledRun b = run_iterative_sampled(q, plan, input, 2000, 99, 10);
    CHECK(a.distribution.probs == b.distribution.probs);
    for (std::size_t i = 0; i < a.traces.size(); ++i) {
        CHECK(a.traces[i].outcomes == b.traces[i].outcomes);
    }
}

TEST_CASE("jordan chain law equals the Bernoulli product") {
    for (double p : {0.0, 0.2, 0.5, 5.0 / 6.0, 1.0}) {
        for (int n : {1, 3, 6}) {
            const std::vector<double> law = jordan_chain_z_law(p, n);
            double tv = 0.0;
            for (std::size_t z = 0; z < law.size(); ++z) {
                double bern = 1.0;
                for (int b = 0; b < n; ++b) {
                    bern *= ((z >> b) & 1) ? p : (1.0 - p);
                }
                tv += std::abs(law[z] - bern);
            }
            CHECK(tv / 2.0 <= 1e-10);
        }
    }
}

TEST_CASE("threshold amplification meets its exponent") {
    VerificationTask task{from_spectrum({2.0 / 3.0, 1.0 / 3.0}),
                          {{"a", 2.0 / 3.0}, {"b", 1.0 / 3.0}},
                          VerificationTask::Kind::plain};
    AmplifiedProcedure amp = amplify_threshold(task, 4);
    CHECK(amp.achieved_high >= 15.0 / 16.0);
    CHECK(amp.achieved_low <= 1.0 / 16.0);
    CHECK(amp.s0 == static_cast<int>(std::ceil(amp.N * 0.5)));

    // pg oracle at the declared thresholds.
    IterativePlan plan = amp.procedure.plan();
    CHECK(pg(plan, 2.0 / 3.0) == doctest::Approx(amp.achieved_high));
    CHECK(pg(plan, 1.0 / 3.0) == doctest::Approx(amp.achieved_low));

    // Degenerate p = 1 maps to 1.
    CHECK(pg(plan, 1.0) == doctest::Approx(1.0));

    // A sub-cap gap cannot reach the exponent.
    Config saved = config();
    config().n_cap = 64;
    VerificationTask narrow{from_spectrum({0.51, 0.49}),
                            {{"a", 0.51}, {"b", 0.49}},
                            VerificationTask::Kind::plain};
    CHECK_THROWS_WITH_AS(amplify_threshold(narrow, 8), doctest::Contains("GapTooSmall"), Error);
    config() = saved;

    // Task invariants: thresholds must live in (0,1) with a above b.
    VerificationTask inverted{from_spectrum({0.5, 0.5}),
                              {{"a", 0.2}, {"b", 0.6}},
                              VerificationTask::Kind::plain};
    CHECK_THROWS_WITH_AS(inverted.validate(0.1), doctest::Contains("GapTooSmall"), Error);
    VerificationTask outside{from_spectrum({0.5, 0.5}),
                             {{"a", 1.0}, {"b", 0.3}},
                             VerificationTask::Kind::plain};
    CHECK_THROWS_WITH_AS(outside.validate(), doctest::Contains("BadInput"), Error);
}

TEST_CASE("iterative procedures expose mapped spectra and POVMs") {
    VerificationProcedure q = from_spectrum({0.8, 0.2});
    IterativePlan beta = IterativePlan::binary(2, {1.0, 0.0, 1.0});
    IterativeProcedure it = make_iterative(q, beta);

    CHECK(it.mapped_value(0) == doctest::Approx(beta_map(0.8)).epsilon(1e-14));
    std::vector<ComplexMatrix> povm = it.povm();
    ComplexMatrix sum = povm[0] + povm[1];
    CHECK(max_abs_diff(sum, ComplexMatrix::Identity(2, 2)) <= 1e-12);
    CHECK(max_abs_diff(povm[1], it.accept_operator()) <= 1e-12);
}

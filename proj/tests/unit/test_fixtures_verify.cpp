#include <doctest.h>

#include <filesystem>

#include <qvp/json_io.hpp>
#include <qvp/verify.hpp>

using namespace qvp;

TEST_CASE("example1 fixture pins the advertised spectrum") {
    Example1Fixture fx = make_example1(4);
    CHECK(fx.delta == std::ldexp(1.0, -6));
    SpectralDecomposition s = spectrum(fx.procedure);
    REQUIRE(s.groups.size() == 4);
    CHECK(s.groups[0].p == doctest::Approx(2.0 / 3.0 + std::ldexp(1.0, -6)).epsilon(1e-12));
    CHECK(s.groups[1].p == doctest::Approx(2.0 / 3.0 - std::ldexp(1.0, -12)).epsilon(1e-12));

    CHECK(fx.procedure.accept_probability(fx.borderline_witness()) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_WITH_AS(make_example1(12), doctest::Contains("SizeCap"), Error);
}

TEST_CASE("random fixtures are reproducible byte for byte") {
    VerificationProcedure a = make_random_procedure(7, 2, 2);
    VerificationProcedure b = make_random_procedure(7, 2, 2);
    CHECK(circuit_to_json(a.description()) == circuit_to_json(b.description()));

    VerificationProcedure c = make_random_procedure(8, 2, 2);
    CHECK(circuit_to_json(a.description()) != circuit_to_json(c.description()));
}

TEST_CASE("robust pair bundles round trip through disk") {
    const std::string dir =
        (std::filesystem::temp_directory_path() / "qvp_test_bundle").string();
    write_robust_pair_bundle(dir, 55, 2, 1, true);
    RobustPairFixture fx = load_robust_pair_bundle(dir);
    RobustPairFixture fresh = make_robust_pair(55, 2, 1, true);

    CHECK(fx.planted_fault);
    CHECK(fx.eta == doctest::Approx(fresh.eta));
    CHECK(max_abs_diff(fx.q_in.procedure.accept_operator(),
                       fresh.q_in.procedure.accept_operator()) <= 1e-12);
    CHECK(max_abs_diff(fx.q_total.procedure.accept_operator(),
                       fresh.q_total.procedure.accept_operator()) <= 1e-12);
    CHECK(fx.permutation == fresh.permutation);
    std::filesystem::remove_all(dir);
}

TEST_CASE("robust pair spectra satisfy the planted promises") {
    RobustPairFixture fx = make_robust_pair(91, 2, 1);
    const double a = fx.q_in.threshold("a");
    const double b = fx.q_in.threshold("b");
    const double a_prime = fx.q_total.threshold("a");

    CHECK(*std::max_element(fx.total_probs.begin(), fx.total_probs.end()) >= a_prime);
    CHECK(*std::max_element(fx.q_in_probs.begin(), fx.q_in_probs.end()) >= a);
    CHECK(*std::max_element(fx.q_out_probs.begin(), fx.q_out_probs.end()) <= b);

    // Affine transfer: any state above the near-witness threshold maps to a
    // Q-witness, mixtures included.
    SplitMix64 rng(19);
    const ComplexMatrix pulled =
        fx.reduction.phi.heisenberg(fx.q_in.procedure.accept_operator());
    const ComplexMatrix e1_total = fx.q_total.procedure.accept_operator();
    for (int i = 0; i < 20; ++i) {
        const PureState psi = random_pure_state(2, rng);
        const double source_acc =
            (psi.amplitudes().adjoint() * e1_total * psi.amplitudes())(0, 0).real();
        if (source_acc >= a_prime - fx.reduction.epsilon) {
            const double mapped =
                (psi.amplitudes().adjoint() * pulled * psi.amplitudes())(0, 0).real();
            CHECK(mapped >= a - 1e-12);
        }
    }
}

TEST_CASE("reports order canonically and serialize reproducibly") {
    CheckOptions opt;
    opt.quick = true;
    ReportList a = check_pg_identity(opt);
    ReportList b = check_pg_identity(opt);
    CHECK(reports_to_jsonl(a) == reports_to_jsonl(b));
    CHECK(!reports_to_jsonl(a).empty());

    for (std::size_t i = 1; i < a.size(); ++i) {
        const bool ordered = a[i - 1].check_id < a[i].check_id ||
                             (a[i - 1].check_id == a[i].check_id &&
                              a[i - 1].instance <= a[i].instance);
        CHECK(ordered);
    }

    // Timing is excluded from the default serialization.
    CHECK(reports_to_jsonl(a).find("runtime_ms") == std::string::npos);
    CHECK(report_to_json(a.front(), true).find("runtime_ms") != std::string::npos);
}

TEST_CASE("quick verify suites pass end to end") {
    CheckOptions opt;
    opt.quick = true;
    opt.seed = 777;
    for (const CheckEntry& entry : all_checks()) {
        ReportList reports = entry.run(opt);
        CHECK_MESSAGE(all_pass(reports), entry.id);
    }
}

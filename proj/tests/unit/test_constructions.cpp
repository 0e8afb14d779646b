#include <doctest.h>

#include <qvp/fixtures.hpp>
#include <qvp/json_io.hpp>

using namespace qvp;

TEST_CASE("circuit channels are trace preserving with complete Kraus sets") {
    RobustPairFixture fx = make_robust_pair(3, 2, 1);
    const CircuitChannel& phi = fx.reduction.phi;

    ComplexMatrix kraus_sum = ComplexMatrix::Zero(4, 4);
    for (const ComplexMatrix& k : phi.kraus()) {
        kraus_sum += k.adjoint() * k;
    }
    CHECK(max_abs_diff(kraus_sum, ComplexMatrix::Identity(4, 4)) <= 1e-9);

    SplitMix64 rng(5);
    DensityMatrix rho = DensityMatrix::pure(random_pure_state(2, rng));
    DensityMatrix out = phi.apply(rho);
    CHECK(std::abs(out.matrix().trace().real() - 1.0) <= 1e-12);

    // Heisenberg pullback agrees with the Schroedinger picture.
    ComplexMatrix x = ComplexMatrix::Zero(4, 4);
    x(1, 1) = 1.0;
    const double via_heis = (phi.heisenberg(x) * rho.matrix()).trace().real();
    const double via_schro = (x * out.matrix()).trace().real();
    CHECK(std::abs(via_heis - via_schro) <= 1e-12);
}

TEST_CASE("identity channel composes to the same procedure") {
    VerificationProcedure q = make_random_procedure(8, 2, 1);
    Reduction red;
    red.phi.in_qubits = 2;
    red.phi.fresh_ancillas = 0;
    red.phi.out_qubits = 2;
    red.epsilon = 0.0;
    VerificationProcedure qr = compose_reduction(q, red);

    SplitMix64 rng(6);
    for (int i = 0; i < 5; ++i) {
        const PureState psi = random_pure_state(2, rng);
        CHECK(std::abs(qr.accept_probability(psi) - q.accept_probability(psi)) <= 1e-12);
    }
}

TEST_CASE("constant channel composes to a constant acceptance") {
    // Phi discards its input and prepares |1> on the kept qubit.
    VerificationProcedure q = from_spectrum({0.1, 0.85});
    Reduction red;
    red.phi.in_qubits = 1;
    red.phi.fresh_ancillas = 1;
    red.phi.out_qubits = 1;
    // Fresh ancilla is qubit 1; prepare it and swap it into the kept slot.
    red.phi.gates.push_back(make_gate("x", {1}));
    red.phi.gates.push_back(make_gate("swap", {0, 1}));
    VerificationProcedure qr = compose_reduction(q, red);

    const double rate = q.accept_probability(PureState::basis(1, 1));
    SplitMix64 rng(7);
    for (int i = 0; i < 4; ++i) {
        const PureState psi = random_pure_state(1, rng);
        CHECK(std::abs(qr.accept_probability(psi) - rate) <= 1e-12);
    }
}

TEST_CASE("robust fixture witnesses survive the composed reduction") {
    RobustPairFixture fx = make_robust_pair(11, 2, 1);
    VerificationProcedure qr = compose_reduction(fx.q_in.procedure, fx.reduction);
    const double a = fx.q_in.threshold("a");
    const double a_prime = fx.q_total.threshold("a");

    const SpectralDecomposition s = spectrum(fx.q_total.procedure);
    for (const auto& g : s.groups) {
        if (g.p >= a_prime - fx.reduction.epsilon) {
            const PureState witness{ComplexVector(g.basis.col(0))};
            CHECK(qr.accept_probability(witness) >= a);
        }
    }
}

TEST_CASE("router construction populates the right arms") {
    VerificationProcedure qa = from_spectrum({2.0 / 3.0, 0.2});
    VerificationProcedure qb = from_spectrum({0.9, 0.1});
    VerificationProcedure q3 = q3_from_pair(qa, qb);
    CHECK(q3.outcomes() == 3);
    CHECK(q3.witness_qubits() == 2);

    // |1> router runs Q: Pr[L] equals Q's acceptance, Pr[Lbar] vanishes.
    ComplexVector v = ComplexVector::Zero(4);
    v(2) = 1.0; // |1>|0>
    RealVector probs = q3.acceptance_probabilities(PureState{v});
    CHECK(probs(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(probs(2) == doctest::Approx(0.0).epsilon(1e-12));

    // |0> router runs Q'.
    v.setZero();
    v(0) = 1.0;
    probs = q3.acceptance_probabilities(PureState{v});
    CHECK(probs(2) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(probs(1) == doctest::Approx(0.0).epsilon(1e-12));

    // |+> router over two always-accept arms.
    VerificationProcedure sure_a = from_spectrum({1.0, 1.0});
    VerificationProcedure sure_b = from_spectrum({1.0, 1.0});
    VerificationProcedure q3_sure = q3_from_pair(sure_a, sure_b);
    ComplexVector plus = ComplexVector::Zero(4);
    plus(0) = plus(2) = 1.0 / std::sqrt(2.0);
    probs = q3_sure.acceptance_probabilities(PureState{plus});
    CHECK(probs(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(probs(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(probs(2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("conversions hold on circuits with wide ancilla registers") {
    VerificationProcedure q2 = make_random_procedure(1234, 2, 2, 16);
    VerificationProcedure qt = qt_from_q2(q2);
    VerificationProcedure q3 = q3_from_q2(q2);
    const SpectralDecomposition s = spectrum(q2);
    for (const auto& g : s.groups) {
        const PureState eigenstate{ComplexVector(g.basis.col(0))};
        CHECK(std::abs(qt.accept_probability(eigenstate) - beta_map(g.p)) <= 1e-12);
        const RealVector p3 = q3.acceptance_probabilities(eigenstate);
        CHECK(std::abs(p3(1) - g.p * g.p) <= 1e-12);
        CHECK(std::abs(p3(0) - 2.0 * g.p * (1.0 - g.p)) <= 1e-12);
    }
}

TEST_CASE("router pads mismatched witness and ancilla sizes") {
    CircuitDescription ident;
    ident.witness_qubits = 1;
    ident.outcomes = 2;
    VerificationProcedure qa = VerificationProcedure::build(ident); // m=1, k=0
    VerificationProcedure qb = from_spectrum({0.8, 0.3, 0.6, 0.1}); // m=2, k=1
    VerificationProcedure router = q3_from_pair(qa, qb);
    CHECK(router.witness_qubits() == 3);

    ComplexVector v = ComplexVector::Zero(8);
    v(6) = 1.0; // router 1, sub-witness |10>: qa reads its first qubit
    RealVector p = router.acceptance_probabilities(PureState{v});
    CHECK(p(1) == doctest::Approx(1.0).epsilon(1e-12));

    v.setZero();
    v(1) = 1.0; // router 0, sub-witness |01>: qb's 0.3 eigenstate
    p = router.acceptance_probabilities(PureState{v});
    CHECK(p(2) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(p(1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pair_from_q3 splits the letters back") {
    VerificationProcedure qa = from_spectrum({0.75, 0.3});
    VerificationProcedure qb = from_spectrum({0.6, 0.25});
    VerificationProcedure q3 = q3_from_pair(qa, qb);
    auto [q, q_prime] = pair_from_q3(q3);

    SplitMix64 rng(9);
    for (int i = 0; i < 5; ++i) {
        const PureState psi = random_pure_state(q3.witness_qubits(), rng);
        const RealVector probs = q3.acceptance_probabilities(psi);
        CHECK(std::abs(q.accept_probability(psi) - probs(1)) <= 1e-12);
        CHECK(std::abs(q_prime.accept_probability(psi) - probs(2)) <= 1e-12);
        CHECK(q.accept_probability(psi) + q_prime.accept_probability(psi) <= 1.0 + 1e-12);
    }

    // The all-reject fixture accepts nowhere.
    VerificationProcedure zero = from_spectrum({0.0, 0.0});
    auto [qz, qz_prime] = pair_from_q3(q3_from_pair(zero, zero));
    const PureState any = random_pure_state(2, rng);
    CHECK(qz.accept_probability(any) <= 1e-12);
    CHECK(qz_prime.accept_probability(any) <= 1e-12);

    CHECK_THROWS_WITH_AS(pair_from_q3(qa), doctest::Contains("WrongAlphabet"), Error);
}

TEST_CASE("q2_from_q3 mixes the letters with a fair coin") {
    VerificationProcedure qa = from_spectrum({0.75, 0.3});
    VerificationProcedure qb = from_spectrum({0.6, 0.25});
    VerificationProcedure q3 = q3_from_pair(qa, qb);
    VerificationProcedure q2 = q2_from_q3(q3);

    SplitMix64 rng(10);
    for (int i = 0; i < 6; ++i) {
        const PureState psi = random_pure_state(q3.witness_qubits(), rng);
        const RealVector probs = q3.acceptance_probabilities(psi);
        const double expected = 0.5 + (probs(1) - probs(2)) / 2.0;
        CHECK(std::abs(q2.accept_probability(psi) - expected) <= 1e-12);
    }

    // Pr[L] = Pr[Lbar] = 0 gives a fair coin.
    VerificationProcedure zero3 = q3_from_pair(from_spectrum({0.0, 0.0}),
                                               from_spectrum({0.0, 0.0}));
    VerificationProcedure q2z = q2_from_q3(zero3);
    CHECK(q2z.accept_probability(random_pure_state(2, rng)) ==
          doctest::Approx(0.5).epsilon(1e-12));

    // Pr[Lbar] <= 1/4 floors the acceptance at 3/8.
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = 1.0; // router 0: runs Q' only
    VerificationProcedure quarter = q3_from_pair(from_spectrum({0.0, 0.0}),
                                                 from_spectrum({0.25, 0.0}));
    VerificationProcedure q2q = q2_from_q3(quarter);
    CHECK(q2q.accept_probability(PureState{v}) == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("the composite conversion preserves the membership window") {
    // (Q, Q') satisfying the three-outcome promise at (3/4, 1/4): a witness
    // with Pr[L] >= 3/4 and Pr[Lbar] <= 1/4 everywhere. The composite
    // two-outcome procedure must satisfy the (1/2, 1/4) promise.
    VerificationProcedure q = from_spectrum({0.9, 0.2});
    VerificationProcedure q_prime = from_spectrum({0.2, 0.1});
    VerificationProcedure q3 = q3_from_pair(q, q_prime);
    VerificationProcedure q2 = q2_from_q3(q3);

    // Promise side checks on the router procedure itself.
    Eigensystem lbar = hermitian_eigendecomposition(q3.povm()[2]);
    CHECK(lbar.values(0) <= 0.25 + 1e-12);
    ComplexVector witness = ComplexVector::Zero(4);
    witness(2) = 1.0; // |1> router, Q's p=0.9 eigenstate
    CHECK(q3.acceptance_probabilities(PureState{witness})(1) >= 0.75);

    // Composite window: some state reaches 1/2 + 1/4, all states stay
    // above 1/2 - 1/8.
    CHECK(q2.accept_probability(PureState{witness}) >= 0.75 - 1e-12);
    Eigensystem e2 = hermitian_eigendecomposition(q2.accept_operator());
    CHECK(e2.values(e2.values.size() - 1) >= 3.0 / 8.0 - 1e-12);
}

TEST_CASE("beta and half maps on eigenstates") {
    VerificationProcedure q2 = from_spectrum({5.0 / 6.0, 0.5});
    VerificationProcedure qt = qt_from_q2(q2);
    VerificationProcedure q2t = q2_from_total(q2);
    const SpectralDecomposition s = spectrum(q2);

    const PureState high{ComplexVector(s.groups[0].basis.col(0))};
    const PureState half{ComplexVector(s.groups[1].basis.col(0))};
    CHECK(qt.accept_probability(high) == doctest::Approx(13.0 / 18.0).epsilon(1e-13));
    CHECK(qt.accept_probability(half) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(q2t.accept_probability(high) == doctest::Approx((1.0 + 5.0 / 6.0) / 2.0).epsilon(1e-13));

    // p=1 maps to 1 under the coin construction.
    VerificationProcedure sure = from_spectrum({1.0, 1.0});
    VerificationProcedure q2s = q2_from_total(sure);
    CHECK(q2s.accept_probability(PureState::basis(1, 0)) == doctest::Approx(1.0).epsilon(1e-13));

    // The coin construction never dips below 1/2.
    SpectralDecomposition st = spectrum(q2t);
    for (const auto& g : st.groups) {
        CHECK(g.p >= 0.5 - 1e-12);
    }
    CHECK(subspace_select(st, {{0.0, 0.5 - 1e-6}}).dimension() == 0);
}

TEST_CASE("q3_from_q2 squares the eigenvalues") {
    // Spot values first: p=1 gives (1,0,0), p=1/2 gives (1/4,1/2,1/4).
    VerificationProcedure spots = from_spectrum({1.0, 0.5});
    VerificationProcedure q3s = q3_from_q2(spots);
    RealVector at_one = q3s.acceptance_probabilities(PureState::basis(1, 0));
    CHECK(at_one(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(at_one(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(at_one(2) == doctest::Approx(0.0).epsilon(1e-12));
    RealVector at_half = q3s.acceptance_probabilities(PureState::basis(1, 1));
    CHECK(at_half(1) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(at_half(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(at_half(2) == doctest::Approx(0.25).epsilon(1e-12));

    VerificationProcedure q2 = rotated_from_spectrum({0.9, 0.5, 0.35, 0.15}, 77);
    VerificationProcedure q3 = q3_from_q2(q2);
    const SpectralDecomposition s = spectrum(q2);
    for (const auto& g : s.groups) {
        const PureState eigenstate{ComplexVector(g.basis.col(0))};
        const RealVector probs = q3.acceptance_probabilities(eigenstate);
        CHECK(probs(1) == doctest::Approx(g.p * g.p).epsilon(1e-12));
        CHECK(probs(0) == doctest::Approx(2.0 * g.p * (1.0 - g.p)).epsilon(1e-12));
        CHECK(probs(2) == doctest::Approx((1.0 - g.p) * (1.0 - g.p)).epsilon(1e-12));
    }
}

TEST_CASE("overlap bound certificate") {
    VerificationProcedure q2 = from_spectrum({5.0 / 6.0, 0.74, 0.5, 0.4});
    const SpectralDecomposition s = spectrum(q2);

    // An eigenstate at 5/6 overlaps fully.
    const PureState high{ComplexVector(s.groups[0].basis.col(0))};
    OverlapCertificate cert = bqp_overlap_bound(q2, DensityMatrix::pure(high));
    CHECK(cert.constraint_met);
    CHECK(cert.overlap == doctest::Approx(1.0));
    CHECK(cert.pass);

    // Weight on 5/6 and 1/3: meeting the beta constraint forces w = 1.
    // (beta arithmetic: w beta(5/6) + (1-w) beta(1/3) >= 13/18 iff w >= 1.)
    const double w_needed =
        (13.0 / 18.0 - beta_map(1.0 / 3.0)) / (beta_map(5.0 / 6.0) - beta_map(1.0 / 3.0));
    CHECK(w_needed == doctest::Approx(1.0).epsilon(1e-12));

    // Promise violations are rejected.
    VerificationProcedure bad = from_spectrum({0.9, 0.1});
    CHECK_THROWS_WITH_AS(bqp_overlap_bound(bad, DensityMatrix::maximally_mixed(1)),
                         doctest::Contains("PreconditionViolated"), Error);
}

TEST_CASE("robustness probe passes clean fixtures and finds planted faults") {
    RobustPairFixture clean = make_robust_pair(31, 2, 1, false);
    RobustnessReport ok = probe_robustness(clean.q_in, clean.q_total, clean.reduction, 600, 5);
    CHECK(ok.pass);
    CHECK(ok.empirical_min >= clean.q_in.threshold("a"));

    RobustPairFixture fault = make_robust_pair(32, 2, 1, true);
    RobustnessReport found =
        probe_robustness(fault.q_in, fault.q_total, fault.reduction, 600, 5);
    CHECK(found.counterexample);
    CHECK(found.empirical_min < fault.q_in.threshold("a"));

    // epsilon = 0 restricts the feasible set to full witnesses; the clean
    // plant satisfies the plain reduction too.
    Reduction degenerate = clean.reduction;
    degenerate.epsilon = 0.0;
    RobustnessReport strict =
        probe_robustness(clean.q_in, clean.q_total, degenerate, 600, 5);
    CHECK(strict.pass);
    CHECK(strict.empirical_min >= clean.q_in.threshold("a"));
}

TEST_CASE("complement verifier on one fixture") {
    RobustPairFixture fx = make_robust_pair(41, 2, 1, false);
    const double eta = fx.eta;
    CHECK(eta == doctest::Approx(1.0 / 16.0));

    const SpectralDecomposition total_basis = spectrum(fx.q_total.procedure);

    // Out of the language: a witness reaches (1-eta)^2.
    QcoProcedure co_out = qco(fx.q_out, fx.q_total, fx.reduction);
    double best = 0.0;
    for (const auto& g : total_basis.groups) {
        if (g.p >= fx.q_total.threshold("a") - 1e-12) {
            best = std::max(best,
                            co_out.accept_probability(PureState{ComplexVector(g.basis.col(0))}));
        }
    }
    CHECK(best >= (1.0 - eta) * (1.0 - eta) - 1e-9);

    // In the language: eigenstates accepted at most eta; M_1 is small.
    QcoProcedure co_in = qco(fx.q_in, fx.q_total, fx.reduction);
    for (const auto& g : total_basis.groups) {
        CHECK(co_in.accept_probability(PureState{ComplexVector(g.basis.col(0))}) <= eta + 1e-9);
    }
    M1Diagnostics diag = m1_diagnostics(co_in, total_basis);
    CHECK(diag.pass);
    CHECK(diag.max_entry <= eta + 1e-9);
    CHECK(diag.trace_m1_sq <= std::ldexp(1.0, -4) + 1e-9);
    CHECK(diag.top_eigenvalue <= 0.25 + 1e-12);
}

TEST_CASE("bqp witness families") {
    CircuitDescription ident;
    ident.witness_qubits = 1;
    ident.outcomes = 2;
    VerificationProcedure q = VerificationProcedure::build(ident);

    std::vector<WitnessFamilyCase> family;
    family.emplace_back("x0", q, DensityMatrix::pure(PureState::basis(1, 1)), true);
    family.emplace_back("x1", from_spectrum({0.2, 0.1}), DensityMatrix::maximally_mixed(1),
                        false);
    auto items = check_bqp_witness(family, 1.0, 1.0 / 3.0);
    CHECK(items[0].pass);
    CHECK(items[0].decision_matches);
    CHECK(items[1].pass);

    // Planted failure reports its margin.
    std::vector<WitnessFamilyCase> broken;
    broken.emplace_back("x0", q, DensityMatrix::pure(PureState::basis(1, 0)), true);
    auto bad = check_bqp_witness(broken, 1.0, 1.0 / 3.0);
    CHECK_FALSE(bad[0].pass);
    CHECK(bad[0].margin == doctest::Approx(-1.0));
}

TEST_CASE("canonical witness sets route by prefix") {
    VerificationProcedure q = from_spectrum({0.9, 0.1});
    VerificationProcedure q_prime = from_spectrum({0.05, 0.1});
    CanonicalWitnessSets sets =
        canonical_witness_sets(q, q_prime, 2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0);
    REQUIRE(sets.h_plus.size() == 1);
    CHECK(sets.h_plus[0].prefix == 0);
    CHECK(sets.h_plus[0].p == doctest::Approx(0.9));
    CHECK(sets.h_minus.size() == 3);

    // Swapping the procedures flips the prefixes.
    CanonicalWitnessSets swapped =
        canonical_witness_sets(q_prime, q, 2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0);
    REQUIRE(swapped.h_plus.size() == 1);
    CHECK(swapped.h_plus[0].prefix == 1);

    // Each H+ element corresponds to a router arm accepting at its p.
    VerificationProcedure q3 = q3_from_pair(q, q_prime);
    const LabeledVector& top = sets.h_plus[0];
    ComplexVector router_state = ComplexVector::Zero(4);
    // Prefix 0 marks a Q-witness; the router runs Q on control 1.
    router_state(2) = top.vec(0);
    router_state(3) = top.vec(1);
    router_state.normalize();
    const RealVector probs = q3.acceptance_probabilities(PureState{router_state});
    CHECK(probs(1) == doctest::Approx(top.p).epsilon(1e-10));
}

TEST_CASE("two-sided amplification through the six-point sets") {
    // Source bounds (a2,b2;a2',b2') = (0.9,0.1;0.9,0.1); shift by 1/(3q)
    // with q = 1/(a2-b2), then map onto the target six-point ladder.
    const double a2 = 0.9, b2 = 0.1;
    const double shift = (a2 - b2) / 3.0;
    const double ab = a2 - shift, bb = b2 + shift;
    const std::vector<double> s = {0.0, 0.5 - ab / 2.0, 0.5 - bb / 2.0,
                                   0.5 + bb / 2.0, 0.5 + ab / 2.0, 1.0};
    const double ta = 0.9, tb = 0.3;
    const std::vector<double> t = {0.0, 0.5 - ta / 2.0, 0.5 - tb / 2.0,
                                   0.5 + tb / 2.0, 0.5 + ta / 2.0, 1.0};
    SynthesizedEMap em = synthesize(TargetPointSet::from(s, t));
    CHECK(em.N <= 4096);

    // An in-promise fixture: witness above 1/2 + a2/2, floor above
    // 1/2 - b2'/2. The image must satisfy the target promise.
    VerificationProcedure q2 = from_spectrum({0.96, 0.7, 0.52, 0.47});
    IterativeProcedure image = apply_emap(q2, em);
    const SpectralDecomposition src = spectrum(q2);
    double image_top = 0.0, image_floor = 1.0;
    for (std::size_t g = 0; g < src.groups.size(); ++g) {
        image_top = std::max(image_top, image.mapped_value(g));
        image_floor = std::min(image_floor, image.mapped_value(g));
    }
    CHECK(image_top >= 0.5 + ta / 2.0 - 1e-9);
    CHECK(image_floor >= 0.5 - tb / 2.0 - 1e-9);
}

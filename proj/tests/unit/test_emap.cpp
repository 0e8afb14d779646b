#include <doctest.h>

#include <cmath>

#include <qvp/emap.hpp>
#include <qvp/fixtures.hpp>

using namespace qvp;

namespace {

// Independent interpolation oracle through lgammal.
double oracle_pg(int n, const std::vector<double>& g, double p) {
    if (p <= 0.0) return g.front();
    if (p >= 1.0) return g.back();
    long double acc = 0.0L;
    for (int k = 0; k <= n; ++k) {
        const long double lc = std::lgammal(n + 1.0L) - std::lgammal(k + 1.0L) -
                               std::lgammal(n - k + 1.0L);
        acc += std::exp(lc + k * std::log((long double)p) +
                        (n - k) * std::log1p(-(long double)p)) *
               (long double)g[k];
    }
    return (double)acc;
}

} // namespace

TEST_CASE("endpoint-only targets give the identity map") {
    SynthesizedEMap em = synthesize(TargetPointSet::from({0.0, 1.0}, {0.0, 1.0}));
    for (double r : em.residuals) {
        CHECK(r == 0.0);
    }
    for (double l : em.lambda) {
        CHECK(l == 0.0);
    }
    for (int j = 0; j <= 20; ++j) {
        const double p = j / 20.0;
        CHECK(std::abs(em.map(p) - p) <= 1e-12);
    }
}

TEST_CASE("single interior anchor interpolates") {
    TargetPointSet targets = TargetPointSet::from({0.0, 0.5, 1.0}, {0.0, 0.75, 1.0});
    SynthesizedEMap em = synthesize(targets);
    CHECK(std::abs(oracle_pg(em.N, em.g, 0.5) - 0.75) <= 1e-9);
    CHECK(em.map(0.0) == 0.0);
    CHECK(em.map(1.0) == 1.0);
    CHECK(em.lambda_max < targets.delta / 3.0);
    CHECK(em.monotone_certificate > 0.0);
    CHECK(em.min_derivative > 0.0);
}

TEST_CASE("the 1/7-6/7 anchor pair interpolates within 1e-9") {
    TargetPointSet targets = TargetPointSet::from({0.0, 2.0 / 3.0, 3.0 / 4.0, 1.0},
                                                  {0.0, 1.0 / 7.0, 6.0 / 7.0, 1.0});
    SynthesizedEMap em = synthesize(targets);
    CHECK(em.N <= 4096);
    CHECK(std::abs(oracle_pg(em.N, em.g, 3.0 / 4.0) - 6.0 / 7.0) <= 1e-9);
    CHECK(std::abs(oracle_pg(em.N, em.g, 2.0 / 3.0) - 1.0 / 7.0) <= 1e-9);

    // The certificate bounds hold for the returned solution.
    const int m = targets.interior_points();
    const double mu = *std::max_element(em.mu.begin(), em.mu.end());
    CHECK(em.lambda_max < targets.delta / 3.0);
    CHECK(em.lambda_max <= 2.0 * m * (2.0 + em.sigma * em.N) * mu + 1e-15);
    CHECK(em.clip_magnitude <= em.lambda_max + 1e-15);
    for (std::size_t k = 1; k < em.g.size(); ++k) {
        CHECK(em.g[k] >= em.g[k - 1]);
    }
}

TEST_CASE("synthesis fails honestly when the cap is too small") {
    TargetPointSet targets = TargetPointSet::from({0.0, 0.48, 0.52, 1.0},
                                                  {0.0, 0.1, 0.9, 1.0});
    CHECK_THROWS_WITH_AS(synthesize(targets, 1e-9, 128),
                         doctest::Contains("SynthesisFailed"), Error);
}

TEST_CASE("apply_emap maps the spectrum and keeps eigenspaces") {
    // Spectrum {0,1} is pinned by the endpoints.
    VerificationProcedure q01 = from_spectrum({1.0, 0.0});
    SynthesizedEMap em = synthesize(TargetPointSet::from({0.0, 0.5, 1.0}, {0.0, 0.25, 1.0}));
    IterativeProcedure image01 = apply_emap(q01, em);
    CHECK(image01.mapped_value(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(image01.mapped_value(1) == doctest::Approx(0.0).epsilon(1e-12));

    // An e-map certificate against the source.
    VerificationProcedure q = rotated_from_spectrum({0.81, 0.55, 0.31, 0.12}, 5);
    IterativeProcedure image = apply_emap(q, em);
    EMapCertificate cert = verify_emap(q, image);
    CHECK(cert.pass);
    CHECK(cert.max_projector_mismatch <= 1e-8);
    CHECK(cert.increasing);

    // Unrelated procedures do not share an eigenbasis.
    VerificationProcedure other = make_random_procedure(321, 2, 1);
    CHECK_THROWS_WITH_AS((void)verify_emap(q.accept_operator(), other.accept_operator()),
                         doctest::Contains("NotJointlyDiagonalizable"), Error);
}

TEST_CASE("e-map composition is transitive") {
    VerificationProcedure q = rotated_from_spectrum({0.77, 0.52, 0.28, 0.09}, 6);
    SynthesizedEMap em1 = synthesize(TargetPointSet::from({0.0, 0.5, 1.0}, {0.0, 0.7, 1.0}));
    IterativeProcedure q1 = apply_emap(q, em1);

    // Second hop built on the image operator.
    SynthesizedEMap em2 = synthesize(TargetPointSet::from({0.0, 0.4, 1.0}, {0.0, 0.2, 1.0}));
    IterativeProcedure q2{spectrum_of_accept_operator(q1.accept_operator(), 1e-9),
                          IterativePlan::binary(em2.N, em2.g)};

    CHECK(verify_emap(q.accept_operator(), q1.accept_operator()).pass);
    CHECK(verify_emap(q1.accept_operator(), q2.accept_operator()).pass);
    CHECK(verify_emap(q.accept_operator(), q2.accept_operator()).pass);
}

TEST_CASE("example-1 spectrum under the paper map") {
    Example1Fixture fx = make_example1(6);
    IterativeProcedure qp = qp_from_q2(fx.procedure);

    // The anchor itself is pinned to 1e-9; the nearby eigenvalue
    // 2/3 - delta^2 lands within the local slope times delta^2.
    CHECK(std::abs(pg(qp.plan(), 2.0 / 3.0) - 1.0 / 7.0) <= 1e-9);
    const double d2 = fx.delta * fx.delta;
    const double mapped_low = pg(qp.plan(), 2.0 / 3.0 - d2);
    CHECK(mapped_low <= 1.0 / 7.0 + 1e-9);
    CHECK(1.0 / 7.0 - mapped_low <= 40.0 * d2);
}

TEST_CASE("identity targets leave spectra unchanged") {
    VerificationProcedure q = make_random_procedure(777, 2, 1);
    SynthesizedEMap em = synthesize(TargetPointSet::from({0.0, 1.0}, {0.0, 1.0}));
    IterativeProcedure image = apply_emap(q, em);
    const SpectralDecomposition s = spectrum(q);
    for (std::size_t g = 0; g < s.groups.size(); ++g) {
        CHECK(std::abs(image.mapped_value(g) - s.groups[g].p) <= 1e-9);
    }
}

TEST_CASE("apply_emap refuses tables without a certificate") {
    VerificationProcedure q = from_spectrum({0.7, 0.2});
    SynthesizedEMap em = synthesize(TargetPointSet::from({0.0, 0.5, 1.0}, {0.0, 0.6, 1.0}));
    em.monotone_certificate = 0.0;
    CHECK_THROWS_WITH_AS(apply_emap(q, em), doctest::Contains("NotMonotone"), Error);
}

TEST_CASE("degenerate target validation") {
    CHECK_THROWS_AS(TargetPointSet::from({0.0, 0.5, 0.5, 1.0}, {0.0, 0.2, 0.8, 1.0}), Error);
    CHECK_THROWS_AS(TargetPointSet::from({0.0, 0.5, 1.0}, {0.0, 0.8, 0.7}), Error);
    CHECK_THROWS_AS(TargetPointSet::from({0.1, 1.0}, {0.0, 1.0}), Error);
}

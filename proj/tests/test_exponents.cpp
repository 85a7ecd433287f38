#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "vianalab/exponents.hpp"
#include "vianalab/orbit.hpp"
#include "vianalab/rng.hpp"

using namespace viana;

TEST_CASE("uncoupled map: lambda_u is exactly log d") {
    for (int d : {2, 16}) {
        MapParams mp = MapParams::preset(0.0, d);
        ExponentEstimate est = lyapunov_qr(mp, {0.37, 0.41}, 100000);
        CHECK(est.lambda_u == doctest::Approx(std::log(double(d))).epsilon(1e-12));
    }
}

TEST_CASE("uncoupled map: lambda_c equals the quadratic-factor Birkhoff average") {
    MapParams mp = MapParams::preset(0.0);
    PhasePoint p0{0.37, 0.41};
    std::int64_t n = 200000;
    ExponentEstimate est = lyapunov_qr(mp, p0, n);
    double oracle = testing::quadratic_exponent_oracle(mp.a0, p0.x, n);
    CHECK(est.lambda_c == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(est.lambda_c > 0.0);
}

TEST_CASE("sum rule: lambda_u + lambda_c equals the determinant average") {
    Rng rng(2);
    for (double alpha : {0.0, 0.01, 0.05}) {
        MapParams mp = MapParams::preset(alpha);
        PhasePoint p0{rng.uniform01(), rng.uniform(-mp.beta, mp.beta)};
        ExponentEstimate qr = lyapunov_qr(mp, p0, 50000);
        CHECK(std::fabs(qr.lambda_u + qr.lambda_c - qr.log_det_avg) <= 1e-9);
        ExponentEstimate sp = lyapunov_split(mp, p0, 50000);
        CHECK(std::fabs(sp.lambda_u + sp.lambda_c - sp.log_det_avg) <= 1e-9);
    }
}

TEST_CASE("quadratic factor at a0 = 2: exponent log 2") {
    // outside the admissible box; tent-map conjugacy forces log 2
    MapParams mp = MapParams::unchecked(16, 2.0, 0.0, 2.0);
    ExponentEstimate est = lyapunov_split(mp, {0.3, 0.5411}, 10000000);
    CHECK(std::fabs(est.lambda_c - std::log(2.0)) < 1e-3);
}

TEST_CASE("split method: the horizontal vector never rotates when uncoupled") {
    MapParams mp = MapParams::preset(0.0);
    ExponentEstimate est = lyapunov_split(mp, {0.37, 0.41}, 50000);
    CHECK(est.lambda_u == doctest::Approx(std::log(16.0)).epsilon(1e-11));
    CHECK(!est.cone_escaped);
}

TEST_CASE("qr and split methods agree across seeds") {
    MapParams mp = MapParams::preset(0.01);
    int agree_u = 0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        Rng rng(seed_stream(11, s));
        PhasePoint p0{rng.uniform01(), rng.uniform(-mp.beta, mp.beta)};
        ExponentEstimate a = lyapunov_qr(mp, p0, 20000);
        ExponentEstimate b = lyapunov_split(mp, p0, 20000);
        double tol = 3.0 * std::sqrt(a.stderr_u * a.stderr_u + b.stderr_u * b.stderr_u);
        if (std::fabs(a.lambda_u - b.lambda_u) <= std::max(tol, 1e-12)) ++agree_u;
        CHECK(!b.cone_escaped);
    }
    CHECK(agree_u >= 95);
}

TEST_CASE("conformal bound check") {
    ExponentEstimate mid;
    mid.lambda_u = std::log(16.0);
    CHECK(conformal_bound_check(mid, 16, 0.1));
    ExponentEstimate out;
    out.lambda_u = std::log(17.0);
    CHECK(!conformal_bound_check(out, 16, 0.1));

    MapParams mp = MapParams::preset(0.01);
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        PhasePoint p0{rng.uniform01(), rng.uniform(-mp.beta, mp.beta)};
        ExponentEstimate est = lyapunov_qr(mp, p0, 20000);
        CHECK(conformal_bound_check(est, mp.d, 0.05));
    }
}

TEST_CASE("survey: uncoupled ensemble concentrates on the factor exponent") {
    MapParams mp = MapParams::preset(0.0);
    ExponentSurvey sv = exponent_survey(mp, 50, 100000, 17);
    double oracle = testing::quadratic_exponent_oracle(mp.a0, 0.3117, 2000000);
    CHECK(sv.frac_positive == 1.0);
    for (double lc : sv.lambda_c) CHECK(std::fabs(lc - oracle) < 5e-3);
    CHECK(std::fabs(sv.c0_empirical - oracle) < 5e-3);
    // lambda_u spread vanishes for the triangular cocycle
    CHECK(sv.lambda_u_spread < 1e-8);
    CHECK(sv.eps_default == 0.01);
}

TEST_CASE("survey: empirical c0 stabilizes under iterate refinement") {
    MapParams mp = MapParams::preset(0.01);
    ExponentSurvey coarse = exponent_survey(mp, 60, 10000, 23);
    ExponentSurvey fine = exponent_survey(mp, 60, 100000, 23);
    CHECK(std::fabs(coarse.c0_empirical - fine.c0_empirical) < 0.02);
    CHECK(fine.frac_positive == 1.0);
}

TEST_CASE("derived constants") {
    ThermoConstants tc = ThermoConstants::derive(1.2, 0.05, 16);
    CHECK(tc.zeta > 0.0);
    CHECK(tc.zeta ==
          doctest::Approx(1.2 - std::log(16.05) / std::log(15.95)).epsilon(1e-14));
    CHECK(tc.sigma.has_value());
    CHECK(3.0 * std::log(*tc.sigma) == doctest::Approx(-tc.zeta / 4.0).epsilon(1e-12));
    CHECK(tc.kappa0 == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(tc.kappa0 < 0.25 * std::log(16.05));

    // zeta > 0 iff c0 > log(d+eps)/log(d-eps)
    double crit = std::log(16.05) / std::log(15.95);
    CHECK(!ThermoConstants::derive(crit - 1e-6, 0.05, 16).sigma.has_value());
    CHECK(ThermoConstants::derive(crit + 1e-6, 0.05, 16).sigma.has_value());
    CHECK_THROWS_AS(ThermoConstants::derive(0.3, 0.05, 16).sigma_or_throw(),
                    std::runtime_error);
}

TEST_CASE("central direction series: exact vertical when uncoupled") {
    MapParams mp = MapParams::preset(0.0);
    PhasePoint p0{0.21, 0.63};
    auto series = central_log_norm_series(mp, p0, 500, 50);
    OrbitScalars rec = orbit(mp, p0, 500);
    REQUIRE(series.size() == 451);
    for (std::size_t j = 0; j < series.size(); ++j)
        CHECK(series[j] ==
              doctest::Approx(std::log(2.0 * rec.dist[j])).epsilon(1e-12));
}

TEST_CASE("integrability: comparability factor 2 when uncoupled") {
    MapParams mp = MapParams::preset(0.0);
    IntegrabilityReport rep = integrability_estimate(mp, {0.21, 0.63}, 20000, 50);
    CHECK(rep.finite);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_ratio == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("integrability: the |log dist| average is finite and stabilizes") {
    MapParams mp = MapParams::preset(0.01);
    IntegrabilityReport a = integrability_estimate(mp, {0.5117, 0.3}, 100000, 50);
    IntegrabilityReport b = integrability_estimate(mp, {0.5117, 0.3}, 1000000, 50);
    CHECK(a.finite);
    CHECK(b.finite);
    CHECK(std::fabs(a.avg_abs_log_dist - b.avg_abs_log_dist) < 0.05);
    CHECK(b.violations == 0);
}

TEST_CASE("integrability: an exact critical hit is flagged") {
    MapParams mp = MapParams::preset(0.0);
    IntegrabilityReport rep = integrability_estimate(mp, {0.3, 0.0}, 200, 50);
    CHECK(!rep.finite);
}

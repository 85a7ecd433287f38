import math

import pytest

import vianalab as vl


def test_misiurewicz_parameter():
    a = vl.MapParams.misiurewicz_a0()
    assert 1.0 < a < 2.0
    # root of a^3 - 2a^2 + 2a - 2
    assert abs(((a - 2.0) * a + 2.0) * a - 2.0) < 1e-10


def test_step_product_case():
    mp = vl.MapParams.unchecked(16, 1.9, 0.0, 1.92)
    q = vl.step(mp, vl.PhasePoint(0.25, 0.5))
    assert q.theta == pytest.approx(0.0, abs=1e-15)
    assert q.x == pytest.approx(1.65, abs=1e-15)
    J = vl.jacobian(mp, vl.PhasePoint(0.25, 0.5))
    assert J.det() == pytest.approx(-2 * 16 * 0.5)


def test_lyapunov_uncoupled():
    mp = vl.MapParams.preset(alpha=0.0)
    est = vl.lyapunov_qr(mp, 0.37, 0.41, 50000)
    assert est.lambda_u == pytest.approx(math.log(16), abs=1e-10)
    assert est.lambda_c > 0
    assert est.lambda_u + est.lambda_c == pytest.approx(est.log_det_avg, abs=1e-9)


def test_detect_matches_bruteforce():
    mp = vl.MapParams.preset(alpha=0.01)
    rec = vl.orbit(mp, 0.123, 0.456, 500)
    ht = vl.HTParams.create(0.98, 1.0 / 64.0, 0.25)
    fast = vl.detect(rec, ht)
    slow = vl.detect_bruteforce(rec, ht)
    assert fast.times == slow.times


def test_synthetic_series_every_time_hyperbolic():
    sigma = math.exp(-0.125)
    ls = math.log(sigma)
    rec = vl.orbit_scalars([ls] * 50, [1.0] * 50)
    rep = vl.detect(rec, vl.HTParams.create(sigma, 0.5, 0.25))
    assert rep.times == list(range(1, 51))


def test_golden_mean_pressure_and_parry():
    gm = vl.MarkovModel.golden_mean()
    golden = math.log((1 + math.sqrt(5)) / 2)
    assert vl.pressure(gm, 1e-13).log_rho == pytest.approx(golden, abs=1e-10)
    g = vl.gibbs_measure(gm, 1e-13)
    assert g.entropy == pytest.approx(golden, abs=1e-8)
    assert g.stationary[0] == pytest.approx((5 + math.sqrt(5)) / 10, abs=1e-8)
    assert g.identity_residual < 1e-10


def test_ulam_pipeline_small():
    mp = vl.MapParams.preset(alpha=0.01)
    grid = vl.Grid.regular(mp.beta, 32, 64)
    P = vl.build_ulam(mp, grid, 32, 7)
    st = vl.stationary(P)
    assert st.converged
    assert st.mu.total() == pytest.approx(1.0, abs=1e-12)
    me = vl.measure_exponents(mp, grid, st.mu, 32, 8)
    assert me.lambda_u == pytest.approx(math.log(16), abs=1e-4)
    assert vl.entropy_pesin(me) > math.log(16)


def test_thermo_constants_and_membership():
    tc = vl.ThermoConstants.derive(1.2, 0.05, 16)
    assert tc.zeta > 0
    assert 3 * math.log(tc.sigma) == pytest.approx(-tc.zeta / 4, abs=1e-12)
    assert tc.kappa0 == pytest.approx(math.log(2))
    low = vl.ThermoConstants.derive(0.3, 0.05, 16)
    assert low.sigma is None


def test_recurrence_profile():
    mp = vl.MapParams.preset(alpha=0.01)
    rec = vl.orbit(mp, 0.9321, -0.2, 200000)
    prof = vl.slow_recurrence_profile(rec.dist, 0.1)
    assert prof.delta is not None
    avgs = [a for _, a in prof.curve]
    assert avgs == sorted(avgs, reverse=True)


def test_periodic_orbits_window():
    mp = vl.MapParams.create(16, 1.76, 0.01, vl.MapParams.default_beta(1.76, 0.01))
    orbits = vl.find_fiber_periodic_orbits(mp, 6)
    assert orbits[0].lambda_c < 0  # attracting 3-cycle inside the window
    assert orbits[0].period == 3

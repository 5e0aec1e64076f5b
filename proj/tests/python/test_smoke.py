import json

import numpy as np
import pytest

import pslab


def test_p_theta_matches_projection_formula():
    t = np.array([3.0, 1.0, -0.5, -3.5])
    th = pslab.ThetaSet(4, [2])
    p = pslab.p_theta(t, th)
    np.testing.assert_allclose(p, [2.0, 2.0, -2.0, -2.0], atol=1e-12)


def test_cartan_projection_of_inverse_is_opposite():
    rng = np.random.default_rng(3)
    g = rng.normal(size=(3, 3))
    if np.linalg.det(g) < 0:
        g[:, 0] *= -1
    mu = pslab.cartan_projection(g)
    mu_inv = pslab.cartan_projection(np.linalg.inv(g))
    np.testing.assert_allclose(mu_inv, pslab.opposition_involution(mu), atol=1e-9)


def test_type_a_constants():
    assert pslab.quint_alpha_bound(3, 1) == 3
    assert pslab.quint_alpha_bound(3, 2) == 3
    assert pslab.hitchin_bound(5, 2) == pytest.approx(3 / 4)


def test_ball_and_exponent():
    fx = pslab.load_fixture("schottky2")
    ball = pslab.enumerate_ball(fx, 6)
    assert len(ball) == 1 + 4 * (3**6 - 1) // 2
    assert ball.word(0) == "e"
    est = pslab.critical_exponent(ball, fx.psi)
    assert est["ci_low"] <= est["value"] <= est["ci_high"]
    assert 0.5 < est["value"] < 1.0


def test_patterson_measure_round_trip():
    fx = pslab.load_fixture("schottky2-tau3")
    ball = pslab.enumerate_ball(fx, 5)
    est = pslab.critical_exponent(ball, fx.psi)
    nu = pslab.patterson_measure(ball, fx.psi, est["value"] + 0.1)
    assert nu.total_mass == pytest.approx(1.0)
    record = json.loads(nu.to_json())
    assert len(record["atoms"]) == len(nu)


def test_errors_carry_kind():
    with pytest.raises(pslab.PslabError) as info:
        pslab.load_fixture("no-such-fixture")
    assert info.value.kind == "io"

import math

import pytest

infoloss = pytest.importorskip("infoloss")


def test_magnitude_loses_one_bit():
    r = infoloss.info_loss(infoloss.magnitude(), infoloss.normal(sigma=1.0))
    assert r["converged"]
    assert abs(r["loss_bits"] - 1.0) < 1e-6
    assert r["L"] == 2


def test_routes_agree():
    g = infoloss.sqlin()
    d = infoloss.uniform_halfwidth(1.0)
    rx = infoloss.info_loss(g, d)
    rw = infoloss.info_loss_via_w(g, d)
    assert abs(rx["loss_bits"] - 0.92240905308905985) < 1e-6
    budget = rx["error_estimate_bits"] + rw["error_estimate_bits"] + 1e-9
    assert abs(rx["loss_bits"] - rw["loss_bits"]) <= budget


def test_bounds_chain():
    b = infoloss.bounds(infoloss.cubic(), infoloss.normal(sigma=10.0))
    assert b["L"] == 3
    assert b["bound1_bits"] <= b["bound2_bits"] + 1e-9
    assert b["bound2_bits"] <= b["bound3_bits"] + 1e-9
    assert abs(b["bound3_bits"] - math.log2(3.0)) < 1e-12


def test_function_queries():
    g = infoloss.cubic()
    assert g.branch_count == 3
    pre = g.preimage(0.0)
    assert len(pre) == 3
    assert abs(pre[0][0] + 10.0) < 1e-9
    assert g.validate()


def test_pushforward_density():
    pf = infoloss.pushforward(infoloss.sqlin(), infoloss.uniform(-1.0, 1.0))
    assert abs(pf.cdf(0.25) - 0.375) < 1e-10
    assert abs(pf.pdf(0.25) - 1.0) < 1e-10


def test_tight_build_hits_ceiling():
    d = infoloss.uniform(-1.0, 1.0)
    g = infoloss.build_tight(d, 4)
    r = infoloss.info_loss(g, d)
    assert abs(r["loss_bits"] - 2.0) < 1e-6
    t = infoloss.tightness_check(g, d)
    assert t["bound3_tight"]


def test_mc_is_deterministic():
    g = infoloss.magnitude()
    d = infoloss.normal(sigma=1.0)
    a = infoloss.mc_loss(g, d, n_samples=200000, seed=5, n_workers=1)
    b = infoloss.mc_loss(g, d, n_samples=200000, seed=5, n_workers=4)
    assert a["loss_bits"] == b["loss_bits"]
    assert a["stderr_bits"] == b["stderr_bits"]
    assert abs(a["loss_bits"] - 1.0) <= 5 * a["stderr_bits"]


def test_cascade_additivity():
    stages = [infoloss.cosine(2), infoloss.magnitude()]
    d = infoloss.uniform(0.0, 2.0 * math.pi)
    rep = infoloss.verify_additivity(stages, d)
    assert rep["within_error"]
    assert abs(rep["staged_bits"] - 2.0) < 1e-6


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        infoloss.normal(sigma=-1.0)

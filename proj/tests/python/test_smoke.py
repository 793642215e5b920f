import math

import pytest

import twrc

STRONG_RELAY = dict(g12=0.25, g21=0.25, g1r=0.5, gr1=1.0, g2r=0.7, gr2=1.0)


def strong_relay_gains():
    return twrc.LinkGains(**STRONG_RELAY)


def test_capacity_is_base_two():
    assert twrc.capacity(3.0) == pytest.approx(2.0)
    assert twrc.capacity(0.0) == 0.0


def test_classify_strong_relay_gains():
    out = twrc.classify(strong_relay_gains())
    assert out["r"] == "R3"
    assert out["t"] == "T5"
    assert out["side_condition"]


def test_solve_returns_both_techniques():
    res = twrc.solve(strong_relay_gains(), 0.75)
    assert res["assignment"] == {"user1": "Both", "user2": "Both"}
    assert res["weighted_sum"] == pytest.approx(0.63345115167, abs=1e-7)


def test_direct_region_corner():
    hull = twrc.grid_region(strong_relay_gains(), 0.05, "direct")
    corner = math.log2(1.0625)
    assert any(abs(r1 - corner) < 1e-9 and abs(r2 - corner) < 1e-9 for r1, r2 in hull)


def test_closed_form_relay_power():
    g = twrc.LinkGains(g12=0.2, g21=0.2, g1r=0.5, gr1=0.3, g2r=0.5, gr2=0.4)
    assert twrc.lemma2_relay_power(g) == pytest.approx(0.4271559633, abs=1e-10)


def test_invalid_input_is_value_error():
    with pytest.raises(ValueError):
        twrc.capacity(-1.0)
    with pytest.raises(ValueError):
        twrc.solve(strong_relay_gains(), 1.5)

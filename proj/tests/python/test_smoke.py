import math

import pytest

import walkergeo as wg


def det3(u, v, w):
    return (
        u[0] * (v[1] * w[2] - v[2] * w[1])
        - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0])
    )


def test_cross_determinant_identity():
    f = "sin(y)*z"
    p = (0.3, -0.4, 1.1)
    u, v, w = (1.0, 0.2, -0.5), (0.3, -1.0, 0.7), (0.9, 0.4, 0.1)
    c = wg.cross(f, p, u, v)
    assert wg.metric_value(f, p, c, w) == pytest.approx(det3(u, v, w), abs=1e-12)


def test_christoffel_flat_chart_vanishes():
    gamma = wg.christoffel("0", (0.0, 0.0, 0.0))
    assert max(abs(gamma[i][j][k]) for i in range(3) for j in range(3) for k in range(3)) == 0.0


def test_frenet_circle():
    r = 2.0
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    fa = wg.frenet(
        "0",
        f"2*sin(t)*{inv_sqrt2!r}",
        "2*cos(t)",
        f"2*sin(t)*{inv_sqrt2!r}",
        0.0,
        7.0,
        1.0,
    )
    assert fa["kappa"] == pytest.approx(1.0 / r, rel=1e-5)
    assert abs(fa["tau"]) < 1e-6
    assert fa["signs"][0] * fa["signs"][1] * fa["signs"][2] == -1


def test_coefficients_and_closed_form():
    co = wg.integrate_coefficients("Case2i", "geodesic", 1.0, 0.0, (0.0, 0.0, 1.0), 2.0, 1e-3)
    worst = max(abs(m - math.sin(s)) for s, m in zip(co["s"], co["m1"]))
    assert worst < 1e-9

    # oscillatory branch value at x = 0
    v = wg.closed_form_m1("Case1", "geodesic", 1.5, 0.4, -0.7, 0.2, 0.0)
    lam = 1.5**2 - 1.0
    assert v == pytest.approx(0.7 / math.sqrt(lam) + 0.2)


def test_translation_pair():
    rep = wg.translation_pair("0", 1.0, 0.7, 1.0, 1e-3, 2.0)
    assert rep["breadth_variation"] < 1e-8
    assert rep["tangent_opposition"] < 1e-5
    assert rep["sstar_linearity"] < 1e-6
    assert rep["translation_case"]


def test_theorem_sweep_small():
    results = wg.theorem_sweep(seed=3, samples=3)
    assert len(results) == 8
    assert all(r["ok"] and r["fails"] == 0 for r in results)


def test_parse_check_raises():
    assert wg.parse_check("y^2 + sin(z)", ["y", "z"])
    with pytest.raises(Exception):
        wg.parse_check("y + * z", ["y", "z"])

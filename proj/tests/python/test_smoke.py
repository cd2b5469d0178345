import math
import os

import numpy as np
import pytest

import orbitfol
from orbitfol import catalog

EXAMPLES = os.environ.get("ORBITFOL_EXAMPLES_DIR", os.path.join(os.path.dirname(__file__), "../../docs/examples"))


def test_expressions():
    e = orbitfol.parse_expr("x^2*y + sin(z)", 3)
    assert orbitfol.evaluate(e, [1.0, 2.0, 0.0]) == pytest.approx(2.0)
    dx = orbitfol.differentiate(e, 0)
    assert dx.evaluate(np.array([3.0, 2.0, 0.0])) == pytest.approx(12.0)
    with pytest.raises(orbitfol.OrbitfolError):
        orbitfol.parse_expr("x + * y", 3)


def test_killing_and_bracket():
    assert orbitfol.killing_check(catalog.rotation_r3(0))["pass"]
    bad = orbitfol.killing_check(orbitfol.AffineField(np.diag([1.0, 0.0, 0.0]), np.zeros(3)))
    assert not bad["pass"]
    assert (bad["witnesses"][0]["i"], bad["witnesses"][0]["j"]) == (0, 0)
    assert orbitfol.bracket(catalog.rotation_r3(0), catalog.rotation_r3(1)) == catalog.rotation_r3(2)
    assert len(orbitfol.closure([catalog.rotation_r3(0), catalog.rotation_r3(1)])) == 3


def test_flows_and_orbits():
    f = catalog.rotation_r3(2) + 2.0 * catalog.translation_r3(2)
    p = orbitfol.flow_affine(f, np.array([1.0, 0.0, 0.0]), math.pi / 2)
    assert np.allclose(p, [0.0, -1.0, math.pi], atol=1e-12)
    times, points = orbitfol.trajectory(catalog.hopf(), np.array([1.0, 0, 0, 0]), 0.0, 2 * math.pi, 9)
    assert len(times) == 9 and np.allclose(points[-1], points[0], atol=1e-12)

    torus = [catalog.torus_x(), catalog.torus_y()]
    assert orbitfol.orbit_dimension(torus, np.array([0.6, 0.0, 0.8, 0.0])) == 2
    cloud = orbitfol.sample_orbit(torus, np.array([0.6, 0.0, 0.8, 0.0]), 50, seed=3)
    assert len(cloud) == 51
    assert all(abs(np.dot(q, q) - 1.0) < 1e-9 for q in cloud)


def test_classify():
    spheres = orbitfol.classify([catalog.rotation_r3(k) for k in range(3)])
    assert spheres == {"type": "ConcentricSpheres", "center": [0, 0, 0]}
    helix = orbitfol.classify([catalog.rotation_r3(2) + 2.0 * catalog.translation_r3(2)])
    assert helix["type"] == "Helices" and helix["pitch"] == pytest.approx(2.0)


def test_scenarios_and_cli():
    reports = orbitfol.scenario_run()
    assert [r["scenario"] for r in reports] == orbitfol.scenario_names()
    assert all(c["pass"] for r in reports for c in r["checks"])
    code, out, _ = orbitfol.run_command(["classify", os.path.join(EXAMPLES, "lines.json")])
    assert code == 0 and '"ParallelLines"' in out

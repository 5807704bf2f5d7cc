import math

import numpy as np
import pytest

import tjdrag


def test_stationary_network_is_at_rest():
    net, theta = tjdrag.stationary_configuration(33)
    model = tjdrag.TensionModel.quadratic(1.0)
    v = tjdrag.junction_velocity(net, model, theta, 1.0)
    assert math.hypot(*v) < 1e-12
    assert net.junction == [0.0, 0.0]
    for a in tjdrag.junction_angles(net):
        assert a == pytest.approx(2 * math.pi / 3, abs=1e-12)
    assert tjdrag.detect_intersections(net) == []


def test_curve_from_numpy():
    pts = np.column_stack([np.linspace(0, 1, 11), np.zeros(11)])
    c = tjdrag.Curve(pts)
    assert len(c) == 11
    assert c.length() == pytest.approx(1.0)
    assert np.array_equal(c.points, pts)
    with pytest.raises(ValueError):
        tjdrag.Curve(np.zeros((4, 3)))


def test_quadratic_threshold():
    assert tjdrag.quadratic_threshold() == pytest.approx(4 * math.pi**2 / 9, rel=1e-7)
    lam = tjdrag.eigenvalues_formula(4 * math.pi**2 / 9)
    assert min(lam) == pytest.approx(0.0, abs=1e-8)
    report = tjdrag.classify_stability(tjdrag.TensionModel.quadratic(10.0))
    assert report["classification"] == "strict_local_min"


def test_simulate_stationary_keeps_energy():
    net, theta = tjdrag.stationary_configuration(33)
    rec = tjdrag.simulate(net, theta, tjdrag.TensionModel.constant(1.0), mu=1.0, dt=1e-3, t_end=0.05,
                          snapshot_every=10)
    energies = [row["energy"] for row in rec["trace"]]
    assert len(energies) >= 2
    assert max(energies) - min(energies) < 1e-10


def test_closed_circle_shrinks():
    samples, halted = tjdrag.closed_circle(2.0, 129, 1e-3, 0.5)
    assert not halted
    t, r = samples[-1]
    assert r == pytest.approx(math.sqrt(4.0 - 2 * t), rel=1e-3)


def test_bad_drag_raises():
    net, theta = tjdrag.stationary_configuration(17)
    with pytest.raises(tjdrag.Error):
        tjdrag.simulate(net, theta, tjdrag.TensionModel.constant(1.0), mu=-1.0)

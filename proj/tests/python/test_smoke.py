"""Smoke tests for the Python bindings."""

import math

import numpy as np
import pytest

import zubov


def test_benchmark_dynamics():
    vdp = zubov.make_van_der_pol()
    assert vdp.state_dim == 2
    f = vdp.rhs(np.array([1.0, 0.0]), np.array([0.3, 0.1]))
    assert f == pytest.approx([0.3, 1.0])
    assert np.allclose(vdp.rhs(np.zeros(2), np.array([0.2, -0.05])), 0.0)

    prod = zubov.make_product_system(10)
    f10 = prod.rhs(np.full(10, 0.5), np.array([1.0]))
    assert f10 == pytest.approx([-0.25] * 10)

    with pytest.raises(ValueError):
        zubov.make_system("nonsense")


def test_network_and_gradient():
    params = zubov.init_params(3, 2, 8, 3)
    x = np.array([0.4, -0.2])
    value, grad = zubov.forward_with_input_grad(params, x)
    assert value == pytest.approx(zubov.forward(params, x))
    h = 1e-5
    for i in range(2):
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        fd = (zubov.forward(params, xp) - zubov.forward(params, xm)) / (2 * h)
        assert grad[i] == pytest.approx(fd, rel=1e-5, abs=1e-9)


def test_checkpoint_roundtrip(tmp_path):
    params = zubov.init_params(9, 2, 6, 3)
    path = str(tmp_path / "ckpt.txt")
    params.save(path)
    back = zubov.load_checkpoint(path)
    assert back.width == params.width
    x = np.array([0.3, 0.7])
    assert zubov.forward(back, x) == zubov.forward(params, x)


def test_kruzkov_and_disturbance():
    assert zubov.kruzkov_transform(0.0, 0.5) == 0.0
    assert zubov.kruzkov_transform(2.0, 0.5) == pytest.approx(1 - math.exp(-1))
    vdp = zubov.make_van_der_pol()
    params = zubov.init_params(5, 2, 8, 3)
    delta = zubov.optimal_disturbance(params, vdp, np.array([1.0, -0.5]), 0.5)
    assert delta[0] in (-0.3, 0.3)
    assert delta[1] in (-0.1, 0.1)


def test_sampling_is_deterministic():
    omega = zubov.Domain(np.array([-1.0, -1.0]), np.array([1.0, 1.0]))
    a = zubov.sample_interior(omega, 128, 7)
    b = zubov.sample_interior(omega, 128, 7)
    assert np.array_equal(a, b)
    assert a.shape == (2, 128)
    assert np.all(np.abs(a) < 1.0)
    edge = zubov.sample_boundary(omega, 64, 7)
    on_face = np.max(np.abs(edge), axis=0) == 1.0
    assert on_face.all()


def test_tiny_training_run():
    cfg = zubov.default_train_config("product2")
    cfg.m_b = 64
    cfg.m_r = 64
    cfg.m_d = 16
    cfg.iterations = 1
    cfg.epochs = 5
    cfg.width = 6
    cfg.depth = 3
    cfg.rollout.k_steps = 40
    cfg.rollout.dt = 0.05
    cfg.seed = 3
    params, history = zubov.train(cfg)
    assert len(history["total"]) == 5
    assert all(math.isfinite(v) for v in history["total"])
    assert not history["aborted"]

    grid = zubov.evaluate_on_grid(params, zubov.make_product_system(2).default_domain, 11, 11)
    assert grid.values.shape == (11, 11)
    assert grid.values.min() >= 0.0
    assert grid.values.max() <= 1.0


def test_fdm_matches_closed_form_loosely():
    system = zubov.make_linear_2d()
    grid = zubov.solve_fdm(system, system.default_domain, resolution=41,
                           alpha=0.5, tol=1e-7, max_sweeps=20000)
    assert grid.converged
    values = grid.values
    xs = np.linspace(-2.0, 2.0, 41)
    inner = [(i, j) for i in range(41) for j in range(41)
             if abs(xs[i]) <= 1.0 and abs(xs[j]) <= 1.0]
    worst = max(
        abs(values[i, j] - (1 - math.exp(-0.25 * (xs[i] ** 2 + xs[j] ** 2))))
        for i, j in inner)
    assert worst <= 0.05


def test_contour_of_analytic_field(tmp_path):
    system = zubov.make_linear_2d()
    grid = zubov.solve_fdm(system, system.default_domain, resolution=81,
                           alpha=0.5, tol=1e-7, max_sweeps=20000)
    level = 1 - math.exp(-0.25)
    polylines = zubov.extract_contour(grid, level)
    assert len(polylines) >= 1
    points, closed = polylines[0]
    assert closed
    radii = np.hypot(points[:, 0], points[:, 1])
    assert np.max(np.abs(radii - 1.0)) <= 0.1

    path = str(tmp_path / "grid.csv")
    zubov.export_grid(grid, path)
    back = zubov.load_grid(path)
    assert zubov.sup_diff(grid, back) == 0.0

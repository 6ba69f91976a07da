import numpy as np
import pytest

from htype import build_generators, make_algebra, octonion_generators
from htype.algebra import CausalType
from htype.errors import DimensionMismatch, NonUniformGrid
from htype.geodesic import Trajectory, momentum, sample, solve_geodesic, speed_squared
from htype.oracle import IntegratorConfig, geodesic_residual, integrate_geodesic

from conftest import unit


def heis(p=1):
    return make_algebra(build_generators(2, 1), p)


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(steps=5)
    with pytest.raises(ValueError):
        IntegratorConfig(steps=100, samples=8)
    with pytest.raises(ValueError):
        IntegratorConfig(steps=100, t_end=0.0, samples=11)
    IntegratorConfig(steps=10, samples=11)


def test_straight_line():
    alg = make_algebra(octonion_generators(), 2)
    tr = integrate_geodesic(alg, np.eye(8)[0], np.zeros(7), IntegratorConfig(1000, 1.0, 11))
    assert np.abs(tr.U).max() <= 1e-12
    assert np.abs(tr.V - np.outer(tr.times, np.eye(8)[0])).max() <= 1e-12
    assert tr.causal is CausalType.TIMELIKE


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        integrate_geodesic(heis(), np.ones(3), np.ones(1))


def test_heisenberg_matches_closed_form():
    alg = heis(1)
    tr = integrate_geodesic(alg, [1.0, 0.0], [1.0])
    cf = sample(solve_geodesic(alg, [1.0, 0.0], [1.0]), 0, 1, 101)
    assert np.abs(tr.V - cf.V).max() <= 1e-6 and np.abs(tr.U - cf.U).max() <= 1e-6


def test_conservation_along_oracle(rng):
    alg = make_algebra(octonion_generators(), 3)
    v0, u0 = rng.normal(size=8), rng.normal(size=7)
    tr = integrate_geodesic(alg, v0, u0)
    mom = max(np.abs(momentum(alg, s, w) - u0).max() for s, w in zip(tr.states, tr.velocities))
    sp = [speed_squared(alg, w, s) for s, w in zip(tr.states, tr.velocities)]
    assert mom <= 1e-8 and np.ptp(sp) <= 1e-8


def test_order_four_convergence(rng):
    alg = make_algebra(build_generators(4, 3), 1)
    v0, u0 = unit(rng, 4), unit(rng, 3)
    ends = [integrate_geodesic(alg, v0, u0, IntegratorConfig(s, 1.0, 2)) for s in (40, 80, 160)]
    y = [np.concatenate([t.V[-1], t.U[-1]]) for t in ends]
    ratio = np.abs(y[0] - y[1]).max() / np.abs(y[1] - y[2]).max()
    assert 12 <= ratio <= 20


def test_residual_of_closed_form_geodesic(rng):
    alg = make_algebra(octonion_generators(), 2)
    tr = sample(solve_geodesic(alg, unit(rng, 8), unit(rng, 7)), 0, 1, 1001)
    assert geodesic_residual(alg, tr) <= 1e-5


def test_residual_of_straight_line():
    alg = make_algebra(octonion_generators(), 1)
    tr = sample(solve_geodesic(alg, np.arange(1.0, 9.0) / 8, np.zeros(7)), 0, 1, 11)
    assert geodesic_residual(alg, tr) <= 1e-12


def test_residual_of_non_geodesic():
    alg = heis(1)
    t = np.linspace(0, 1, 101)
    V = np.column_stack([t**2, 0 * t])
    z = np.zeros((101, 1))
    tr = Trajectory(t, V, z, np.column_stack([2 * t, 0 * t]), z, CausalType.TIMELIKE)
    assert geodesic_residual(alg, tr) >= 1.0


def test_non_uniform_grid():
    alg = heis(1)
    t = np.array([0.0, 0.1, 0.3, 0.4])
    z = np.zeros((4, 2))
    tr = Trajectory(t, z, z[:, :1], z, z[:, :1], CausalType.SPACELIKE)
    with pytest.raises(NonUniformGrid):
        geodesic_residual(alg, tr)
    with pytest.raises(NonUniformGrid):
        geodesic_residual(alg, Trajectory(t[:2], z[:2], z[:2, :1], z[:2], z[:2, :1],
                                          CausalType.SPACELIKE))

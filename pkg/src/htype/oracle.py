"""Brute-force checks for the closed-form geodesics.

``integrate_geodesic`` runs fixed-step RK4 on the full second-order system

    v'' = eta j(u' + [v', v] / 2) v'
    u'' = -[v'', v] / 2

without using the conserved momentum, so conservation tests built on it are
not circular.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .algebra import HTypeAlgebra, _vec, bracket_rows, causal_type
from .errors import NonUniformGrid
from .geodesic import Trajectory


@dataclass(frozen=True)
class IntegratorConfig:
    steps: int = 100_000
    t_end: float = 1.0
    samples: int = 101  # recorded grid points including both ends

    def __post_init__(self):
        if self.steps < 10:
            raise ValueError(f"need at least 10 steps, got {self.steps}")
        if self.samples < 2 or self.steps % (self.samples - 1):
            raise ValueError(f"samples - 1 = {self.samples - 1} must divide steps = {self.steps}")
        if not self.t_end > 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")


@numba.njit(cache=True)
def _rhs(y, J, eps, n, m, out):
    v = y[:n]
    vd = y[n + m:2 * n + m]
    ud = y[2 * n + m:]
    # w = u' + [v', v]/2 with [x, y]_a = y^T j_a x
    w = ud.copy()
    for a in range(m):
        s = 0.0
        for i in range(n):
            for j in range(n):
                s += v[i] * J[a, i, j] * vd[j]
        w[a] += 0.5 * s
    vdd = np.zeros(n)
    for i in range(n):
        s = 0.0
        for a in range(m):
            for j in range(n):
                s += w[a] * J[a, i, j] * vd[j]
        vdd[i] = eps[i] * s
    out[:n] = vd
    out[n:n + m] = ud
    out[n + m:2 * n + m] = vdd
    for a in range(m):
        s = 0.0
        for i in range(n):
            for j in range(n):
                s += v[i] * J[a, i, j] * vdd[j]
        out[2 * n + m + a] = -0.5 * s


@numba.njit(cache=True)
def _rk4(y0, J, eps, n, m, h, steps, stride):
    dim = y0.size
    rec = np.empty((steps // stride + 1, dim))
    y = y0.copy()
    rec[0] = y
    k1 = np.empty(dim)
    k2 = np.empty(dim)
    k3 = np.empty(dim)
    k4 = np.empty(dim)
    for k in range(1, steps + 1):
        _rhs(y, J, eps, n, m, k1)
        _rhs(y + 0.5 * h * k1, J, eps, n, m, k2)
        _rhs(y + 0.5 * h * k2, J, eps, n, m, k3)
        _rhs(y + h * k3, J, eps, n, m, k4)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if k % stride == 0:
            rec[k // stride] = y
    return rec


def integrate_geodesic(alg: HTypeAlgebra, v0dot, u0dot, cfg: IntegratorConfig | None = None) -> Trajectory:
    cfg = cfg or IntegratorConfig()
    v0dot = _vec(v0dot, alg.n, "v0dot")
    u0dot = _vec(u0dot, alg.m, "u0dot")
    n, m = alg.n, alg.m
    y0 = np.concatenate([np.zeros(n + m), v0dot, u0dot])
    J = np.ascontiguousarray(np.asarray(alg.J, dtype=float).reshape(m, n, n))
    stride = cfg.steps // (cfg.samples - 1)
    rec = _rk4(y0, J, np.asarray(alg.eps, dtype=float), n, m,
               cfg.t_end / cfg.steps, cfg.steps, stride)
    times = np.linspace(0.0, cfg.t_end, cfg.samples)
    return Trajectory(times, rec[:, :n], rec[:, n:n + m], rec[:, n + m:2 * n + m],
                      rec[:, 2 * n + m:], causal_type(alg.sig, v0dot))


def geodesic_residual(alg: HTypeAlgebra, traj: Trajectory) -> float:
    """Largest residual of the geodesic system at interior grid points.

    Only positions are used: velocities and accelerations come from central
    differences, so the residual is O(h^2) for a true geodesic.
    """
    t = np.asarray(traj.times, dtype=float)
    if len(t) < 3:
        raise NonUniformGrid("need at least 3 samples")
    dt = np.diff(t)
    h = dt.mean()
    if np.max(np.abs(dt - h)) > 1e-9 * h:
        raise NonUniformGrid(f"grid spacing varies by {np.max(np.abs(dt - h)):.3e}")
    V, U = traj.V, traj.U
    v = V[1:-1]
    vd = (V[2:] - V[:-2]) / (2 * h)
    ud = (U[2:] - U[:-2]) / (2 * h)
    vdd = (V[2:] - 2 * V[1:-1] + V[:-2]) / h**2
    udd = (U[2:] - 2 * U[1:-1] + U[:-2]) / h**2
    w = ud + 0.5 * bracket_rows(alg, vd, v)
    J = np.asarray(alg.J, dtype=float)
    rv = vdd - alg.eps[None, :] * np.einsum("ta,aij,tj->ti", w, J, vd)
    ru = udd + 0.5 * bracket_rows(alg, vdd, v)
    return float(max(np.abs(rv).max(initial=0.0), np.abs(ru).max(initial=0.0)))

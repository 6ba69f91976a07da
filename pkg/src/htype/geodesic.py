"""Closed-form geodesics through the identity.

With the conserved momentum ``u' + [v', v] / 2 = u0'`` the horizontal part
solves ``v'' = A v'`` for the constant matrix ``A = eta j(u0')``.  In the
block basis of :func:`htype.spectral.classify_spectrum` that system splits
into independent 2x2 systems, each solved in closed form.  The vertical part
is recovered by quadrature of the momentum identity.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .algebra import (CausalType, GroupElement, HTypeAlgebra, Velocity, _vec, bracket,
                      bracket_rows, causal_type, inner_v)
from .errors import InvalidRange, ZeroCenterVelocity
from .spectral import SpectralData, classify_spectrum

QUAD_TOL = 1e-10
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True, eq=False)
class GeodesicSolution:
    alg: HTypeAlgebra
    v0dot: np.ndarray
    u0dot: np.ndarray
    spec: SpectralData | None
    transformed_v0dot: np.ndarray
    quad_tol: float = QUAD_TOL

    @property
    def causal(self) -> CausalType:
        return causal_type(self.alg.sig, self.v0dot)

    def evaluate(self, t):
        return evaluate(self, t)

    def sample(self, t0, t1, steps):
        return sample(self, t0, t1, steps)


def solve_geodesic(alg: HTypeAlgebra, v0dot, u0dot) -> GeodesicSolution:
    v0dot = _vec(v0dot, alg.n, "v0dot").copy()
    u0dot = _vec(u0dot, alg.m, "u0dot").copy()
    if not np.any(u0dot):
        return GeodesicSolution(alg, v0dot, u0dot, None, v0dot.copy())
    spec = classify_spectrum(alg, u0dot)
    return GeodesicSolution(alg, v0dot, u0dot, spec, spec.transform @ v0dot)


def block_solution(kind: str, a: float, b: float, u_norm: float, c0, t):
    """Position and velocity of one 2x2 block system started at the origin.

    ``c0`` is the initial block velocity; ``t`` may be an array.  Returns two
    arrays of shape (len(t), 2).
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    c1, c2 = c0
    if kind == "real":
        ch, sh = np.cosh(u_norm * t), np.sinh(u_norm * t)
        pos = np.column_stack([c1 * sh + c2 * (ch - 1.0), c2 * sh + c1 * (ch - 1.0)]) / u_norm
        vel = np.column_stack([c1 * ch + c2 * sh, c2 * ch + c1 * sh])
        return pos, vel
    if kind == "imaginary":
        cs, sn = np.cos(b * t), np.sin(b * t)
        pos = np.column_stack([c1 * sn + c2 * (1.0 - cs), c2 * sn - c1 * (1.0 - cs)]) / b
        vel = np.column_stack([c1 * cs + c2 * sn, c2 * cs - c1 * sn])
        return pos, vel
    w2 = a * a + b * b
    if kind == "spiral+":
        alpha, beta = a, b
        A = (alpha * c2 + beta * c1) / w2
        B = (alpha * c1 - beta * c2) / w2
        ex, cs, sn = np.exp(alpha * t), np.cos(beta * t), np.sin(beta * t)
        pos = np.column_stack([ex * (A * sn + B * cs) - B, ex * (A * cs - B * sn) - A])
        vel = np.column_stack([ex * (c1 * cs + c2 * sn), ex * (c2 * cs - c1 * sn)])
        return pos, vel
    if kind == "spiral-":
        alpha, beta = -a, -b
        C = (alpha * c2 + beta * c1) / w2
        D = (alpha * c1 - beta * c2) / w2
        ex, cs, sn = np.exp(-alpha * t), np.cos(beta * t), np.sin(beta * t)
        pos = np.column_stack([ex * (C * sn - D * cs) + D, -ex * (D * sn + C * cs) + C])
        vel = np.column_stack([ex * (c1 * cs - c2 * sn), ex * (c2 * cs + c1 * sn)])
        return pos, vel
    raise ValueError(f"unknown block kind {kind!r}")


def _blocks_state(sol: GeodesicSolution, t):
    """Dtilde-basis position and velocity, shapes (T, n)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n = sol.alg.n
    C = np.empty((t.size, n))
    Cd = np.empty((t.size, n))
    spec = sol.spec
    for blk in spec.blocks:
        i = blk.start
        pos, vel = block_solution(blk.kind, blk.a, blk.b, spec.u_norm,
                                  sol.transformed_v0dot[i:i + 2], t)
        C[:, i:i + 2] = pos
        Cd[:, i:i + 2] = vel
    return C, Cd


def horizontal(sol: GeodesicSolution, t):
    """v(t) and v'(t) in original coordinates, shapes (T, n)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if sol.spec is None:
        return np.outer(t, sol.v0dot), np.tile(sol.v0dot, (t.size, 1))
    C, Cd = _blocks_state(sol, t)
    M = sol.spec.transform
    return C @ M, Cd @ M


def horizontal_matrix_form(sol: GeodesicSolution, t: float) -> np.ndarray:
    """v(t) = M^t (exp(Dtilde t) - I) Dtilde^{-1} M v0' via a dense matrix exponential."""
    if sol.spec is None:
        return t * sol.v0dot
    D = sol.spec.Dtilde
    M = sol.spec.transform
    c = (expm(D * t) - np.eye(len(D))) @ np.linalg.solve(D, sol.transformed_v0dot)
    return M.T @ c


def _momentum_integrand(sol: GeodesicSolution, t) -> np.ndarray:
    V, Vd = horizontal(sol, t)
    return bracket_rows(sol.alg, Vd, V)


# differences below this many ulps of the piece itself are roundoff
_ROUNDOFF = 64 * np.finfo(float).eps


def _gl(f, a, b):
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _GL_NODES
    return half * (_GL_WEIGHTS @ f(x))


def adaptive_gauss_legendre(f, a: float, b: float, tol: float = QUAD_TOL, max_depth: int = 40):
    """Integrate a vector-valued f over [a, b] by bisection until 16-point
    Gauss-Legendre on the whole and on the halves agree to ``tol``."""
    if a == b:
        return _gl(f, a, a + 1.0) * 0.0
    total = None
    stack = [(a, b, 0)]
    span = abs(b - a)
    while stack:
        lo, hi, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        whole = _gl(f, lo, hi)
        halves = _gl(f, lo, mid) + _gl(f, mid, hi)
        local_tol = max(tol * abs(hi - lo) / span, _ROUNDOFF * np.max(np.abs(halves), initial=0.0))
        if np.max(np.abs(whole - halves), initial=0.0) <= local_tol or depth >= max_depth:
            total = halves if total is None else total + halves
        else:
            stack.append((mid, hi, depth + 1))
            stack.append((lo, mid, depth + 1))
    return total


def _vertical(sol: GeodesicSolution, t: float) -> np.ndarray:
    if sol.spec is None:
        return np.zeros(sol.alg.m)
    integral = adaptive_gauss_legendre(lambda x: _momentum_integrand(sol, x), 0.0, t, sol.quad_tol)
    return sol.u0dot * t - 0.5 * integral


def evaluate(sol: GeodesicSolution, t: float):
    """State and analytic velocity at time t."""
    t = float(t)
    V, Vd = horizontal(sol, t)
    v, vd = V[0], Vd[0]
    u = _vertical(sol, t)
    if sol.spec is None:  # [v', v] vanishes on a line through the origin
        return GroupElement(v, u), Velocity(vd, sol.u0dot.copy())
    du = sol.u0dot - 0.5 * bracket(sol.alg, vd, v)
    return GroupElement(v, u), Velocity(vd, du)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled path; array rows are aligned with ``times``."""

    times: np.ndarray
    V: np.ndarray
    U: np.ndarray
    dV: np.ndarray
    dU: np.ndarray
    causal: CausalType

    def __post_init__(self):
        t = np.asarray(self.times)
        if not (len(t) == len(self.V) == len(self.U) == len(self.dV) == len(self.dU)):
            raise ValueError("trajectory arrays have different lengths")
        if np.any(np.diff(t) <= 0):
            raise ValueError("trajectory times must be strictly increasing")

    def __len__(self):
        return len(self.times)

    @property
    def states(self) -> list:
        return [GroupElement(v, u) for v, u in zip(self.V, self.U)]

    @property
    def velocities(self) -> list:
        return [Velocity(dv, du) for dv, du in zip(self.dV, self.dU)]

    def header(self) -> list:
        n, m = self.V.shape[1], self.U.shape[1]
        return (["t"] + [f"v{i}" for i in range(1, n + 1)] + [f"u{a}" for a in range(1, m + 1)]
                + [f"dv{i}" for i in range(1, n + 1)] + [f"du{a}" for a in range(1, m + 1)]
                + ["causal"])

    def to_csv(self, fh=None) -> str | None:
        """Write CSV (shortest round-trip float repr); returns text if fh is None."""
        out = io.StringIO() if fh is None else fh
        w = csv.writer(out, lineterminator="\n")
        w.writerow(self.header())
        for k, t in enumerate(self.times):
            row = [t, *self.V[k], *self.U[k], *self.dV[k], *self.dU[k]]
            w.writerow([repr(float(x)) for x in row] + [str(self.causal)])
        return out.getvalue() if fh is None else None

    @classmethod
    def from_csv(cls, text: str) -> "Trajectory":
        rows = list(csv.reader(io.StringIO(text)))
        head, body = rows[0], rows[1:]
        n = sum(1 for h in head if h.startswith("v"))
        m = sum(1 for h in head if h.startswith("u"))
        data = np.array([[float(x) for x in r[:-1]] for r in body])
        causal = CausalType(body[0][-1]) if body else CausalType.SPACELIKE
        return cls(data[:, 0], data[:, 1:1 + n], data[:, 1 + n:1 + n + m],
                   data[:, 1 + n + m:1 + 2 * n + m], data[:, 1 + 2 * n + m:], causal)


def sample(sol: GeodesicSolution, t0: float, t1: float, steps: int) -> Trajectory:
    """Evaluate on a uniform grid of ``steps`` points from t0 to t1.

    The vertical part is accumulated interval by interval so neighbouring
    samples share their quadrature error.
    """
    if not t0 < t1:
        raise InvalidRange(f"need t0 < t1, got [{t0}, {t1}]")
    if steps < 2:
        raise InvalidRange(f"need at least 2 samples, got {steps}")
    times = np.linspace(t0, t1, steps)
    V, Vd = horizontal(sol, times)
    alg = sol.alg
    if sol.spec is None:
        U = np.zeros((steps, alg.m))
    else:
        f = lambda x: _momentum_integrand(sol, x)
        start = adaptive_gauss_legendre(f, 0.0, t0, sol.quad_tol)
        # all intervals at once with 16 points, then with 2 x 16; refine the rest
        lo, hi = times[:-1], times[1:]
        half = 0.5 * (hi - lo)
        mid = 0.5 * (lo + hi)

        def batch(a, h):
            x = (a[:, None] + h[:, None] * _GL_NODES[None, :]).ravel()
            vals = f(x).reshape(len(a), len(_GL_NODES), -1)
            return h[:, None] * np.einsum("k,ika->ia", _GL_WEIGHTS, vals)

        whole = batch(mid, half)
        halves = batch(0.5 * (lo + mid), 0.5 * half) + batch(0.5 * (mid + hi), 0.5 * half)
        tol = sol.quad_tol / (steps - 1)
        floor = _ROUNDOFF * np.max(np.abs(halves), axis=1)
        bad = np.nonzero(np.max(np.abs(whole - halves), axis=1) > np.maximum(tol, floor))[0]
        for k in bad:
            halves[k] = adaptive_gauss_legendre(f, lo[k], hi[k], tol)
        integral = np.vstack([start, start + np.cumsum(halves, axis=0)])
        U = np.outer(times, sol.u0dot) - 0.5 * integral
    dU = np.tile(sol.u0dot, (steps, 1))
    if sol.spec is not None:
        dU -= 0.5 * bracket_rows(alg, Vd, V)
    return Trajectory(times, V, U, Vd, dU, sol.causal)


def translate(alg: HTypeAlgebra, traj: Trajectory, g: GroupElement) -> Trajectory:
    """Left translate every sample of ``traj`` by g."""
    a = _vec(g.v, alg.n, "v")
    b = _vec(g.u, alg.m, "u")
    V = traj.V + a
    U = traj.U + b + 0.5 * bracket_rows(alg, np.broadcast_to(a, traj.V.shape), traj.V)
    dU = traj.dU + 0.5 * bracket_rows(alg, np.broadcast_to(a, traj.dV.shape), traj.dV)
    return Trajectory(traj.times.copy(), V, U, traj.dV.copy(), dU, traj.causal)


def momentum(alg: HTypeAlgebra, state: GroupElement, vel: Velocity) -> np.ndarray:
    """Vertical momentum u' + [v', v] / 2."""
    _vec(state.v, alg.n, "v")
    _vec(vel.du, alg.m, "du")
    return vel.du + 0.5 * bracket(alg, vel.dv, state.v)


def speed_squared(alg: HTypeAlgebra, vel: Velocity, state: GroupElement | None = None) -> float:
    """Left-invariant squared speed <v', v'>_V + |w|^2.

    ``w`` is the vertical frame component of the velocity, u' + [v', v] / 2.
    Without ``state`` the velocity is taken at the identity, where w = u'.
    """
    w = vel.du if state is None else momentum(alg, state, vel)
    w = _vec(w, alg.m, "du")
    return inner_v(alg.sig, vel.dv, vel.dv) + float(w @ w)


def projection_residuals(sol: GeodesicSolution, t) -> list:
    """Relative residuals of the planar projection identities, per 2x2 block.

    The block coordinates come from v(t) mapped back through the transform,
    so this also exercises the change of basis.

    real         (x + c2/|u|)^2 - (y + c1/|u|)^2 = (c2^2 - c1^2) / |u|^2
    imaginary    (x - c2/|u|)^2 + (y + c1/|u|)^2 = (c1^2 + c2^2) / |u|^2
    spiral+      (x + B)^2 + (y + A)^2 = (c1^2 + c2^2) e^{2 alpha t} / |u|^2
    spiral-      (x - D)^2 + (y - C)^2 = (c1^2 + c2^2) e^{-2 alpha t} / |u|^2

    (c1, c2) is the block's initial velocity, A, B, C, D as in
    :func:`block_solution`.
    """
    if sol.spec is None:
        raise ZeroCenterVelocity("projection identities need u0' != 0")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    spec = sol.spec
    un = spec.u_norm
    V, _ = horizontal(sol, t)
    Cpos = V @ spec.transform.T
    out = []
    for blk in spec.blocks:
        i = blk.start
        x, y = Cpos[:, i], Cpos[:, i + 1]
        c1, c2 = sol.transformed_v0dot[i:i + 2]
        speed2 = (c1 * c1 + c2 * c2) / un**2
        if blk.kind == "real":
            X, Y = x + c2 / un, y + c1 / un
            lhs, rhs = X * X - Y * Y, (c2 * c2 - c1 * c1) / un**2
        elif blk.kind == "imaginary":
            X, Y = x - c2 / un, y + c1 / un
            lhs, rhs = X * X + Y * Y, speed2 + 0 * t
        elif blk.kind == "spiral+":
            w2 = blk.a**2 + blk.b**2
            A = (blk.a * c2 + blk.b * c1) / w2
            B = (blk.a * c1 - blk.b * c2) / w2
            X, Y = x + B, y + A
            lhs, rhs = X * X + Y * Y, speed2 * np.exp(2 * blk.a * t)
        else:
            alpha, beta = -blk.a, -blk.b
            w2 = alpha**2 + beta**2
            C = (alpha * c2 + beta * c1) / w2
            D = (alpha * c1 - beta * c2) / w2
            X, Y = x - D, y - C
            lhs, rhs = X * X + Y * Y, speed2 * np.exp(-2 * alpha * t)
        scale = X * X + Y * Y + np.abs(rhs)
        rel = np.abs(lhs - rhs) / np.where(scale > 0, scale, 1.0)
        out.append({"kind": blk.kind, "start": i, "quartet": blk.quartet,
                    "residual": float(rel.max())})
    return out

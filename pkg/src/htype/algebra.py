"""H-type algebras and groups whose horizontal layer carries an indefinite metric.

Conventions (fixed throughout the package):

* ``eta = diag(-1,...,-1, +1,...,+1)`` with ``p`` negative entries;
  ``<v, w>_V = w^t eta v``.
* bracket: ``[v, w]_alpha = w^t j_alpha v``.
* group law in exponential coordinates (2-step BCH):
  ``(v, u) * (v', u') = (v + v', u + u' + [v, v'] / 2)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .clifford import GeneratorSet, validate_generators
from .errors import DimensionMismatch, IndexOutOfRange, InvalidGenerators, InvalidSignature, HTypeError

DEFAULT_SEED = 20100


@dataclass(frozen=True)
class Signature:
    """Index data (p, q) of the horizontal metric; n = p + q."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p < 0 or q < 0:
            raise InvalidSignature(f"p and q must be non-negative, got ({p}, {q})")
        n = p + q
        if n < 2 or n % 2:
            raise InvalidSignature(f"n = p + q must be even and >= 2, got {n}")
        if 2 * p > n:
            raise InvalidSignature(
                f"index p={p} exceeds n/2={n // 2}; use the metric -eta instead")

    @classmethod
    def of(cls, n: int, p: int) -> "Signature":
        return cls(p, n - p)

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def eps(self) -> np.ndarray:
        return np.array([-1.0] * self.p + [1.0] * self.q)

    @property
    def eta(self) -> np.ndarray:
        return np.diag(self.eps)


class CausalType(enum.Enum):
    TIMELIKE = "timelike"
    SPACELIKE = "spacelike"
    LIGHTLIKE = "lightlike"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class GroupElement:
    v: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))
        object.__setattr__(self, "u", np.asarray(self.u, dtype=float))

    @classmethod
    def identity(cls, n: int, m: int) -> "GroupElement":
        return cls(np.zeros(n), np.zeros(m))

    def inverse(self) -> "GroupElement":
        return GroupElement(-self.v, -self.u)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.v, self.u])


@dataclass(frozen=True)
class Velocity:
    """Coordinate velocity (dv/dt, du/dt)."""

    dv: np.ndarray
    du: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dv", np.asarray(self.dv, dtype=float))
        object.__setattr__(self, "du", np.asarray(self.du, dtype=float))


@dataclass(frozen=True, eq=False)
class HTypeAlgebra:
    """Signature + generators + structure constants ``B[alpha, i, j]``.

    ``B[alpha, i, j]`` is the alpha-component of ``[e_i, e_j]``; it is derived
    from ``A[alpha, i, j] = (eta j_alpha)[j, i]`` by ``B = eps_j * A``.
    """

    sig: Signature
    gens: GeneratorSet
    B: np.ndarray = field(repr=False)
    construction_residuals: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.sig.n

    @property
    def m(self) -> int:
        return self.gens.m

    @property
    def p(self) -> int:
        return self.sig.p

    @property
    def J(self) -> np.ndarray:
        return self.gens.J

    @property
    def eta(self) -> np.ndarray:
        return self.sig.eta

    @property
    def eps(self) -> np.ndarray:
        return self.sig.eps

    @property
    def eta_J(self) -> np.ndarray:
        """The matrices eta j_alpha, shape (m, n, n)."""
        return self.eps[None, :, None] * np.asarray(self.J, dtype=float)


def _vec(x, size, what):
    x = np.asarray(x, dtype=float)
    if x.shape != (size,):
        raise DimensionMismatch(f"{what}: expected shape ({size},), got {x.shape}")
    return x


def make_algebra(gens: GeneratorSet, sig, seed: int = DEFAULT_SEED) -> HTypeAlgebra:
    """Assemble an H-type algebra; ``sig`` may be a Signature or the index p."""
    if not isinstance(sig, Signature):
        sig = Signature.of(gens.n, int(sig))
    if gens.n != sig.n:
        raise DimensionMismatch(f"generators act on R^{gens.n} but signature has n={sig.n}")
    report = validate_generators(gens)
    if not report.passed:
        raise InvalidGenerators(report)

    J = np.asarray(gens.J, dtype=float)
    eps = sig.eps
    # A[alpha, i, j]: coefficient of e_j in (eta j_alpha) e_i
    A = np.transpose(eps[None, :, None] * J, (0, 2, 1))
    B = eps[None, None, :] * A
    B.setflags(write=False)

    # B is a cache of the bracket; the bracket formula is the reference
    direct = np.transpose(J, (0, 2, 1))
    res = {"B_vs_bracket": float(np.abs(B - direct).max(initial=0.0)),
           "B_skew": float(np.abs(B + np.transpose(B, (0, 2, 1))).max(initial=0.0))}
    rng = np.random.default_rng(seed)
    eta = sig.eta
    worst_i, worst_ii = 0.0, 0.0
    for _ in range(20):
        u = rng.normal(size=gens.m)
        Au = eta @ np.tensordot(u, J, axes=1)
        worst_i = max(worst_i, np.abs(Au @ Au.T - (u @ u) * np.eye(sig.n)).max())
        worst_ii = max(worst_ii, np.abs(eta @ Au + Au.T @ eta).max())
    res["AAt"] = float(worst_i)
    res["eta_skew"] = float(worst_ii)
    res["seed"] = seed
    if max(res["B_vs_bracket"], res["B_skew"]) > 1e-12 or max(worst_i, worst_ii) > 1e-10:
        raise HTypeError(f"algebra invariants failed: {res}")
    return HTypeAlgebra(sig, gens, B, res)


def inner_v(sig: Signature, v, w) -> float:
    v = _vec(v, sig.n, "v")
    w = _vec(w, sig.n, "w")
    return float(np.sum(sig.eps * v * w))


def causal_type(sig: Signature, v, rtol: float = 1e-12) -> CausalType:
    """Causal character of a horizontal vector.

    ``<v, v>`` is treated as zero when ``|<v, v>| <= rtol * sum(v_i^2)``; the
    zero vector is spacelike.
    """
    v = _vec(v, sig.n, "v")
    norm2 = float(v @ v)
    if norm2 == 0.0:
        return CausalType.SPACELIKE
    q = inner_v(sig, v, v)
    if abs(q) <= rtol * norm2:
        return CausalType.LIGHTLIKE
    return CausalType.TIMELIKE if q < 0 else CausalType.SPACELIKE


def j_of_u(alg: HTypeAlgebra, u) -> np.ndarray:
    u = _vec(u, alg.m, "u")
    return np.tensordot(u, np.asarray(alg.J, dtype=float), axes=1) if alg.m else np.zeros((alg.n, alg.n))


def a_of_u(alg: HTypeAlgebra, u) -> np.ndarray:
    """The geodesic operator A = eta j(u)."""
    return alg.eps[:, None] * j_of_u(alg, u)


def bracket(alg: HTypeAlgebra, v, w) -> np.ndarray:
    v = _vec(v, alg.n, "v")
    w = _vec(w, alg.n, "w")
    return np.einsum("aij,i,j->a", np.asarray(alg.J, dtype=float), w, v)


def bracket_rows(alg: HTypeAlgebra, V, W) -> np.ndarray:
    """Row-wise bracket of two (T, n) arrays, returning (T, m)."""
    return np.einsum("aij,ti,tj->ta", np.asarray(alg.J, dtype=float), W, V)


def group_multiply(alg: HTypeAlgebra, a: GroupElement, b: GroupElement) -> GroupElement:
    for g in (a, b):
        _vec(g.v, alg.n, "v")
        _vec(g.u, alg.m, "u")
    return GroupElement(a.v + b.v, a.u + b.u + 0.5 * bracket(alg, a.v, b.v))


def left_invariant_frame(alg: HTypeAlgebra, at: GroupElement) -> np.ndarray:
    """Columns V_1..V_n, U_1..U_m in coordinates (d/dv, d/du) at ``at``.

    V_i = d/dv_i + 1/2 sum_alpha (sum_j v_j B[alpha, j, i]) d/du_alpha.
    """
    v = _vec(at.v, alg.n, "v")
    n, m = alg.n, alg.m
    F = np.eye(n + m)
    F[n:, :n] = 0.5 * np.einsum("j,aji->ai", v, alg.B)
    return F


def _frame_jacobians(alg: HTypeAlgebra) -> np.ndarray:
    """d(frame column k)/d(coordinate l); the frame is affine in v."""
    n, m = alg.n, alg.m
    D = np.zeros((n + m, n + m, n + m))
    # column i (< n), row n+alpha depends on v_l through B[alpha, l, i] / 2
    D[:n, n:, :n] = 0.5 * np.transpose(alg.B, (2, 0, 1))
    return D


def frame_bracket(alg: HTypeAlgebra, X: int, Y: int, at: GroupElement) -> np.ndarray:
    """Lie bracket of two frame fields at a point, in coordinates."""
    N = alg.n + alg.m
    for idx in (X, Y):
        if not 0 <= idx < N:
            raise IndexOutOfRange(f"frame index {idx} outside 0..{N - 1}")
    F = left_invariant_frame(alg, at)
    D = _frame_jacobians(alg)
    return D[Y] @ F[:, X] - D[X] @ F[:, Y]


def metric_at(alg: HTypeAlgebra, at: GroupElement) -> np.ndarray:
    """Left-invariant metric tensor in coordinates at ``at``."""
    F = left_invariant_frame(alg, at)
    Finv = np.linalg.inv(F)
    G0 = np.diag(np.concatenate([alg.eps, np.ones(alg.m)]))
    return Finv.T @ G0 @ Finv


def connection_on_frame(alg: HTypeAlgebra, X: int, Y: int) -> np.ndarray:
    """nabla_X Y expanded in the frame {V_1..V_n, U_1..U_m} (0-based indices)."""
    n, m = alg.n, alg.m
    N = n + m
    for idx in (X, Y):
        if not 0 <= idx < N:
            raise IndexOutOfRange(f"frame index {idx} outside 0..{N - 1}")
    out = np.zeros(N)
    if X < n and Y < n:
        out[n:] = 0.5 * alg.B[:, X, Y]
    elif X < n or Y < n:
        i, alpha = (X, Y - n) if X < n else (Y, X - n)
        out[:n] = -0.5 * alg.eta_J[alpha][:, i]
    return out


@dataclass(frozen=True)
class J2Report:
    satisfied: bool
    max_residual: float
    vacuous: bool
    trials: int
    seed: int
    tol: float = 1e-8

    def to_json(self) -> dict:
        return dict(self.__dict__)


def check_j2_condition(alg: HTypeAlgebra, trials: int = 50, seed: int = DEFAULT_SEED,
                       tol: float = 1e-8) -> J2Report:
    """Test j(u1) j(u2) v in {j(u3) v} for random u1 orthogonal to u2.

    The residual of the least-squares fit for u3 is taken relative to
    ``|j(u1) j(u2) v|``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if alg.m < 2:
        return J2Report(True, 0.0, True, trials, seed, tol)
    rng = np.random.default_rng(seed)
    J = np.asarray(alg.J, dtype=float)
    worst = 0.0
    for _ in range(trials):
        u1 = rng.normal(size=alg.m)
        u2 = rng.normal(size=alg.m)
        u2 -= (u1 @ u2) / (u1 @ u1) * u1
        v = rng.normal(size=alg.n)
        target = j_of_u(alg, u1) @ j_of_u(alg, u2) @ v
        basis = (J @ v).T  # column alpha is j_alpha v
        u3, *_ = np.linalg.lstsq(basis, target, rcond=None)
        r = np.linalg.norm(basis @ u3 - target) / max(np.linalg.norm(target), 1e-300)
        worst = max(worst, float(r))
    return J2Report(worst <= tol, worst, False, trials, seed, tol)


def bracket_generating_sigma(alg: HTypeAlgebra, at: GroupElement) -> float:
    """Smallest of the top n+m singular values of [V_1..V_n, [V_i, V_j] (i<j)] at a point.

    Positive iff the frame and its first brackets span the tangent space.
    """
    n, N = alg.n, alg.n + alg.m
    F = left_invariant_frame(alg, at)
    cols = [F[:, i] for i in range(n)]
    cols += [frame_bracket(alg, i, j, at) for i in range(n) for j in range(i + 1, n)]
    sv = np.linalg.svd(np.column_stack(cols), compute_uv=False)
    return float(sv[N - 1]) if len(sv) >= N else 0.0

"""Spectral analysis of the geodesic operator A = eta j(u).

Since A A^t = |u|^2 I, the matrix A / |u| is orthogonal, so A is normal and
its real Schur form is block diagonal.  That Schur basis is turned into the
ordered block form

    Dtilde = diag(real block, imaginary blocks..., (spiral+, spiral-) per quartet)

with

    real block       [[0, |u|], [|u|, 0]]        eigenvalues +-|u|
    imaginary block  [[0, |u|], [-|u|, 0]]       eigenvalues +-i|u|
    spiral+ block    [[a, b], [-b, a]]           eigenvalues a +- ib
    spiral- block    [[-a, -b], [b, -a]]         eigenvalues -a -+ ib

where a > 0, b >= 0 and a^2 + b^2 = |u|^2.  With M = Ptilde @ P we have
``A = M.T @ Dtilde @ M``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.linalg import schur

from .algebra import HTypeAlgebra, a_of_u
from .errors import (DimensionMismatch, HTypeError, IndexOutOfRange, NotSkewSymmetric,
                     SizeLimitExceeded, ZeroCenterVelocity)

REAL_TOL = 1e-8
PAIR_TOL = 1e-7
ORACLE_MAX_N = 12

_E = np.array([[0.0, 1.0], [-1.0, 0.0]])
_X = np.array([[0.0, 1.0], [1.0, 0.0]])


def char_poly(A) -> np.ndarray:
    """Coefficients of det(lambda I - A), highest degree first (Faddeev-LeVerrier)."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError(f"char_poly needs a square matrix, got {A.shape}")
    coeffs = np.zeros(n + 1)
    coeffs[0] = 1.0
    M = np.zeros((n, n))
    eye = np.eye(n)
    for k in range(1, n + 1):
        M = A @ M + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(A @ M) / k
    return coeffs


def char_poly_oracle(A) -> np.ndarray:
    """Characteristic polynomial from sums of principal minors.

    The coefficient of lambda^(n-k) is (-1)^k times the sum of all k x k
    principal minors.  Cost grows like 2^n, so n is capped at 12.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if n > ORACLE_MAX_N:
        raise SizeLimitExceeded(f"minor-sum oracle limited to n <= {ORACLE_MAX_N}, got {n}")
    coeffs = np.zeros(n + 1)
    coeffs[0] = 1.0
    for k in range(1, n + 1):
        total = 0.0
        for idx in combinations(range(n), k):
            total += np.linalg.det(A[np.ix_(idx, idx)])
        coeffs[k] = (-1) ** k * total
    return coeffs


@dataclass(frozen=True)
class Block:
    """One 2x2 diagonal block of Dtilde starting at row ``start``.

    ``kind`` is "real", "imaginary", "spiral+" or "spiral-".  For all kinds
    but "real" the block is ``a I + b E`` with E = [[0, 1], [-1, 0]].
    """

    kind: str
    start: int
    a: float
    b: float
    quartet: int = -1

    def matrix(self, u_norm: float) -> np.ndarray:
        if self.kind == "real":
            return u_norm * _X
        return self.a * np.eye(2) + self.b * _E


@dataclass(frozen=True, eq=False)
class SpectralData:
    u: np.ndarray
    u_norm: float
    s: int
    r: int
    quartets: tuple
    P: np.ndarray = field(repr=False)
    Ptilde: np.ndarray = field(repr=False)
    Dtilde: np.ndarray = field(repr=False)
    blocks: tuple = field(repr=False)
    eigenvalues: np.ndarray = field(repr=False)
    residuals: dict = field(default_factory=dict, repr=False)
    p: int = 0

    @property
    def transform(self) -> np.ndarray:
        """M = Ptilde @ P, mapping original coordinates to the Dtilde basis."""
        return self.Ptilde @ self.P

    @property
    def invariants_ok(self) -> bool:
        r = self.residuals
        return (r["count_ok"] and r["parity_ok"]
                and r["reconstruction"] <= 1e-9 and r["orthogonality"] <= 1e-10
                and r["DDt"] <= 1e-9 * max(1.0, self.u_norm**2)
                and r["quartet_norm"] <= 1e-9 * max(1.0, self.u_norm**2)
                and r["eigen_modulus"] <= 1e-9 * max(1.0, self.u_norm))

    def to_json(self) -> dict:
        ev = sorted(self.eigenvalues, key=lambda z: (round(z.real, 12), round(z.imag, 12)))
        return {
            "u": self.u.tolist(),
            "u_norm": self.u_norm,
            "p": self.p,
            "s": self.s,
            "r": self.r,
            "quartets": [list(q) for q in self.quartets],
            "eigenvalues": [[float(z.real), float(z.imag)] for z in ev],
            "residuals": dict(self.residuals),
        }


def _schur_blocks(T: np.ndarray):
    n = T.shape[0]
    k = 0
    while k < n:
        if k + 1 < n and T[k + 1, k] != 0.0:
            yield k, 2
            k += 2
        else:
            yield k, 1
            k += 1


def classify_spectrum(alg: HTypeAlgebra, u) -> SpectralData:
    A = a_of_u(alg, u)
    u = np.asarray(u, dtype=float)
    un = float(np.linalg.norm(u))
    if un == 0.0:
        raise ZeroCenterVelocity()
    n = alg.n
    T, Z = schur(A, output="real")
    Z = Z.copy()

    pos_real, neg_real = [], []   # column indices of Z
    imag, plus, minus = [], [], []  # (col1, col2, a, b)
    for k, size in _schur_blocks(T):
        b, c = (T[k, k + 1], T[k + 1, k]) if size == 2 else (0.0, 0.0)
        if size == 2 and np.sqrt(max(-b * c, 0.0)) <= REAL_TOL * un:
            # leftover coupling inside a repeated real eigenvalue
            size = 1
            for kk in (k, k + 1):
                (pos_real if T[kk, kk] > 0 else neg_real).append(kk)
            continue
        if size == 1:
            (pos_real if T[k, k] > 0 else neg_real).append(k)
            continue
        a = 0.5 * (T[k, k] + T[k + 1, k + 1])
        if b < 0:  # flip second basis vector so the upper off-diagonal is positive
            Z[:, k + 1] *= -1
            b, c = -b, -c
        beta = 0.5 * (abs(b) + abs(c))
        if abs(a) <= REAL_TOL * un:
            imag.append((k, k + 1, 0.0, beta))
        elif a > 0:
            plus.append((k, k + 1, a, beta))
        else:
            minus.append((k, k + 1, a, beta))

    if len(pos_real) != len(neg_real) or len(plus) != len(minus):
        raise HTypeError("unbalanced spectrum: eigenvalues do not come in +- pairs")

    n_real_pairs = len(pos_real)
    s = n_real_pairs % 2
    # collided real pairs (spiral blocks with b = 0) beyond the first
    extra_pos, extra_neg = pos_real[s:], neg_real[s:]
    for i in range(0, len(extra_pos), 2):
        a_pos = 0.5 * (T[extra_pos[i], extra_pos[i]] + T[extra_pos[i + 1], extra_pos[i + 1]])
        a_neg = 0.5 * (T[extra_neg[i], extra_neg[i]] + T[extra_neg[i + 1], extra_neg[i + 1]])
        plus.append((extra_pos[i], extra_pos[i + 1], a_pos, 0.0))
        minus.append((extra_neg[i], extra_neg[i + 1], a_neg, 0.0))

    real_cols = None
    if s:
        kp, km = pos_real[0], neg_real[0]
        xp, xm = Z[:, kp].copy(), Z[:, km].copy()
        e1, e2 = (xp + xm) / np.sqrt(2), (xp - xm) / np.sqrt(2)
        # the four bases (e1,e2), (-e1,-e2), (e2,e1), (-e2,-e1) all give the
        # same block; pick the one whose first vector peaks earliest, positive
        i1, i2 = np.argmax(np.abs(e1)), np.argmax(np.abs(e2))
        if i2 < i1:
            e1, e2 = e2, e1
        if e1[np.argmax(np.abs(e1))] < 0:
            e1, e2 = -e1, -e2
        Z[:, kp], Z[:, km] = e1, e2
        real_cols = (kp, km)

    # match every spiral+ half with a spiral- half of the same (|a|, b)
    pairs = []
    remaining = list(minus)
    for blk in plus:
        dist = [abs(blk[2] + mb[2]) + abs(blk[3] - mb[3]) for mb in remaining]
        j = int(np.argmin(dist))
        if dist[j] > PAIR_TOL * un:
            raise HTypeError(f"cannot pair eigenvalue quartet (distance {dist[j]:.3e})")
        pairs.append((blk, remaining.pop(j)))

    # the spiral- block must read [[-a, -b], [b, -a]]: flip its second vector
    for _, mb in pairs:
        Z[:, mb[1]] *= -1

    order, blocks, signs = [], [], []
    if s:
        order += list(real_cols)
        blocks.append(Block("real", 0, 0.0, un))
    for c1, c2, _, beta in imag:
        blocks.append(Block("imaginary", len(order), 0.0, beta))
        order += [c1, c2]
    quartets = []
    for q, (pb, mb) in enumerate(pairs):
        alpha = 0.5 * (pb[2] - mb[2])
        beta = 0.5 * (pb[3] + mb[3])
        quartets.append((float(alpha), float(beta)))
        blocks.append(Block("spiral+", len(order), pb[2], pb[3], q))
        order += [pb[0], pb[1]]
        blocks.append(Block("spiral-", len(order), mb[2], -mb[3], q))
        order += [mb[0], mb[1]]

    if sorted(order) != list(range(n)):
        raise HTypeError("block bookkeeping lost a Schur vector")

    # P: orthogonal, rows are the adjusted Schur vectors in Schur order.
    # Ptilde: signed permutation moving them into Dtilde order.  The sign
    # flips above were folded into Z, so Ptilde is a plain permutation.
    P = Z.T.copy()
    Ptilde = np.zeros((n, n))
    Ptilde[np.arange(n), order] = 1.0
    Dtilde = np.zeros((n, n))
    for blk in blocks:
        i = blk.start
        Dtilde[i:i + 2, i:i + 2] = blk.matrix(un)

    eigs = np.linalg.eigvals(A)
    M = Ptilde @ P
    res = {
        "reconstruction": float(np.linalg.norm(A - M.T @ Dtilde @ M, 2) / un),
        "orthogonality": float(np.abs(P.T @ P - np.eye(n)).max()),
        "DDt": float(np.abs(Dtilde @ Dtilde.T - un**2 * np.eye(n)).max()),
        "quartet_norm": max((abs(a * a + b * b - un**2) for a, b in quartets), default=0.0),
        "eigen_modulus": float(np.abs(np.abs(eigs) - un).max()),
        "count_ok": 2 * (s + len(imag)) + 4 * len(quartets) == n,
        "parity_ok": s == alg.p % 2,
        "real_pairs_raw": n_real_pairs,
    }
    return SpectralData(
        u=u.copy(), u_norm=un, s=s, r=s + len(imag), quartets=tuple(quartets),
        P=P, Ptilde=Ptilde, Dtilde=Dtilde, blocks=tuple(blocks), eigenvalues=eigs,
        residuals=res, p=alg.p)


def count_real_pairs(A, tol: float = REAL_TOL) -> int:
    """Number of real eigenvalue pairs, bucketed by |Im| <= tol * max|lambda|."""
    eigs = np.linalg.eigvals(np.asarray(A, dtype=float))
    scale = np.abs(eigs).max()
    return int(np.sum(np.abs(eigs.imag) <= tol * scale)) // 2


def canonical_skew_form(J, tol: float = 1e-10):
    """Orthogonal Q and block magnitudes mu >= 0 with J = Q Jtilde Q^t.

    Jtilde is block diagonal with blocks [[0, mu_k], [-mu_k, 0]].  Requires an
    even dimension.
    """
    J = np.asarray(J, dtype=float)
    n = J.shape[0]
    if J.shape != (n, n) or n % 2:
        raise ValueError(f"canonical_skew_form needs an even square matrix, got {J.shape}")
    if np.abs(J + J.T).max(initial=0.0) > tol:
        raise NotSkewSymmetric("matrix is not skew-symmetric")
    if not np.any(J):
        return np.eye(n), np.zeros(n // 2)
    T, Z = schur(J, output="real")
    cols, mu, zeros = [], [], []
    for k, size in _schur_blocks(T):
        if size == 1:
            zeros.append(k)
            continue
        z1, z2 = Z[:, k], Z[:, k + 1]
        b = T[k, k + 1]
        if b < 0:
            z1, z2, b = z2, z1, -b
        cols += [z1, z2]
        mu.append(0.5 * (abs(T[k, k + 1]) + abs(T[k + 1, k])))
    for k in zeros:
        cols.append(Z[:, k])
    mu += [0.0] * (len(zeros) // 2)
    return np.column_stack(cols), np.array(mu)


def murnaghan_matrix(mu) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    out = np.zeros((2 * len(mu), 2 * len(mu)))
    for k, m in enumerate(mu):
        out[2 * k:2 * k + 2, 2 * k:2 * k + 2] = m * _E
    return out


def eta_j_alpha_spectrum(alg: HTypeAlgebra, alpha: int) -> np.ndarray:
    """Eigenvalues of eta j_alpha (alpha is 1-based), sorted."""
    if not 1 <= alpha <= alg.m:
        raise IndexOutOfRange(f"generator index {alpha} outside 1..{alg.m}")
    eigs = np.linalg.eigvals(alg.eta_J[alpha - 1])
    return np.sort_complex(np.round(eigs.real, 12) + 1j * np.round(eigs.imag, 12))


def octonion_char_poly(p: int, u) -> np.ndarray:
    """Closed-form characteristic polynomial of eta j(u) for the octonion
    generators at index p in {1, 2, 3, 4}, coefficients highest degree first.

    In the p = 2 case the lambda^4 coefficient is 2|u|^2 (|u|^2 + 2 d) with
    d = u1^2 - u2^2 - ... - u7^2.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (7,):
        raise DimensionMismatch(f"expected a 7-vector, got shape {u.shape}")
    w = float(u @ u)
    c = np.zeros(9)
    c[0] = 1.0
    if p == 1:
        c[2], c[6], c[8] = 2 * w, -2 * w**3, -w**4
    elif p == 2:
        d = u[0]**2 - float(u[1:] @ u[1:])
        c[2], c[4], c[6], c[8] = 4 * u[0]**2, 2 * w * (w + 2 * d), 4 * w**2 * u[0]**2, w**4
    elif p == 3:
        d = float(u[:3] @ u[:3] - u[3:] @ u[3:])
        c[2], c[6], c[8] = 2 * d, -2 * w**2 * d, -w**4
    elif p == 4:
        d = float(u[:3] @ u[:3] - u[3:] @ u[3:])
        c[2], c[4], c[6], c[8] = 4 * d, 2 * (w**2 + 2 * d * d), 4 * w**2 * d, w**4
    else:
        raise ValueError(f"octonion index must be 1..4, got {p}")
    return c

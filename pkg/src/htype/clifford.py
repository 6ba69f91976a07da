"""Clifford-module generator sets: anti-commuting skew square roots of -I.

Generators are built as tensor products ("Pauli words") of the real 2x2
matrices

    I = [[1, 0], [0, 1]]     X = [[0, 1], [1, 0]]
    Z = [[1, 0], [0, -1]]    E = [[0, 1], [-1, 0]]

A word with an odd number of ``E`` factors is skew-symmetric and squares to
``-I``; two words anti-commute iff they anti-commute in an odd number of
tensor slots.  Every word is a signed permutation matrix.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import AdmissibilityError

LOADED_TOL = 1e-12

_PAULI = {
    "I": np.array([[1, 0], [0, 1]], dtype=np.int64),
    "X": np.array([[0, 1], [1, 0]], dtype=np.int64),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.int64),
    "E": np.array([[0, 1], [-1, 0]], dtype=np.int64),
}

# maximal anti-commuting sets on R^2, R^4, R^8 (found by lexicographic search)
_BASE_WORDS = {
    1: [],
    2: ["E"],
    4: ["IE", "EX", "EZ"],
    8: ["IIE", "EIX", "IEZ", "EXZ", "EZZ", "XEX", "ZEX"],
}

# octonion generators, one signed 1-based column index per row
_OCTONION_ROWS = [
    [2, -1, 4, -3, 6, -5, -8, 7],
    [3, -4, -1, 2, 7, 8, -5, -6],
    [4, 3, -2, -1, 8, -7, 6, -5],
    [5, -6, -7, -8, -1, 2, 3, 4],
    [6, 5, -8, 7, -2, -1, -4, 3],
    [7, 8, 5, -6, -3, 4, -1, -2],
    [8, -7, 6, 5, -4, -3, 2, -1],
]


def hurwitz_radon(n: int) -> int:
    """Hurwitz-Radon number: for n = k * 2**(4r + s), k odd, 0 <= s <= 3,
    return 8r + 2**s."""
    if n < 1:
        raise ValueError(f"hurwitz_radon needs a positive integer, got {n}")
    a = 0
    while n % 2 == 0:
        n //= 2
        a += 1
    r, s = divmod(a, 4)
    return 8 * r + 2**s


def _word(w: str) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.int64)
    for c in w:
        out = np.kron(out, _PAULI[c])
    return out


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """m anti-commuting skew-symmetric square roots of -I on R^n.

    ``J`` has shape (m, n, n) and is read-only.  ``exact`` is True for sets
    constructed here in integer arithmetic.
    """

    n: int
    m: int
    J: np.ndarray = field(repr=False)
    exact: bool = True

    def __post_init__(self):
        J = np.asarray(self.J)
        if J.ndim != 3 or J.shape[0] != self.m or J.shape[1:] != (self.n, self.n):
            raise ValueError(
                f"expected generator array of shape ({self.m}, {self.n}, {self.n}), "
                f"got {J.shape}")
        J = J.astype(np.int64 if self.exact else float, copy=True)
        object.__setattr__(self, "J", _freeze(J))

    def __len__(self):
        return self.m

    def __getitem__(self, alpha):
        return self.J[alpha]

    def prefix(self, m: int) -> "GeneratorSet":
        return GeneratorSet(self.n, m, self.J[:m], self.exact)

    def to_json(self) -> dict:
        mats = self.J.tolist() if self.exact else np.asarray(self.J).tolist()
        return {"n": self.n, "m": self.m, "matrices": mats}

    @classmethod
    def from_json(cls, doc) -> "GeneratorSet":
        if isinstance(doc, str):
            doc = json.loads(doc)
        mats = np.asarray(doc["matrices"], dtype=float)
        n, m = int(doc["n"]), int(doc["m"])
        if m == 0:
            mats = np.zeros((0, n, n))
        exact = bool(np.all(mats == np.round(mats)))
        return cls(n, m, np.round(mats) if exact else mats, exact=exact)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@lru_cache(maxsize=None)
def _pow2_words(a: int) -> tuple:
    """Maximal generator list on R^(2**a) as integer matrices."""
    if a <= 3:
        return tuple(_word(w) for w in _BASE_WORDS[2**a])
    # Cl(0, 8) on R^16: E (x) I_8 together with X (x) g for the seven g on R^8
    f = [np.kron(_PAULI["E"], np.eye(8, dtype=np.int64))]
    f += [np.kron(_PAULI["X"], g) for g in _pow2_words(3)]
    omega = np.eye(16, dtype=np.int64)
    for fi in f:
        omega = omega @ fi
    inner = _pow2_words(a - 4)
    N = 2 ** (a - 4)
    eye = np.eye(N, dtype=np.int64)
    return tuple([np.kron(fi, eye) for fi in f] + [np.kron(omega, e) for e in inner])


def build_generators(n: int, m: int) -> GeneratorSet:
    """Deterministic generator set for R^n with m generators.

    n = k * 2**a with k odd; the 2**a-dimensional set is repeated along the
    diagonal k times.  The list for fixed n is built once at maximal length
    and truncated, so smaller m always gives a prefix.
    """
    if n < 2 or n % 2:
        raise ValueError(f"horizontal dimension must be a positive even integer, got {n}")
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    rho = hurwitz_radon(n)
    if m >= rho:
        raise AdmissibilityError(n, m, rho)
    a, k = 0, n
    while k % 2 == 0:
        k //= 2
        a += 1
    full = _pow2_words(a)
    eye = np.eye(k, dtype=np.int64)
    mats = np.array([np.kron(eye, g) for g in full[:m]], dtype=np.int64).reshape(m, n, n)
    return GeneratorSet(n, m, mats)


def octonion_generators() -> GeneratorSet:
    """The seven 8x8 generators of the octonion H-type algebra."""
    J = np.zeros((7, 8, 8), dtype=np.int64)
    for alpha, rows in enumerate(_OCTONION_ROWS):
        for i, col in enumerate(rows):
            J[alpha, i, abs(col) - 1] = 1 if col > 0 else -1
    return GeneratorSet(8, 7, J)


def heisenberg_generators(n: int = 2) -> GeneratorSet:
    return build_generators(n, 1)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    max_violation: float
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "max_violation": self.max_violation, "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple
    tol: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_violation(self) -> float:
        return max((c.max_violation for c in self.checks), default=0.0)

    def failed(self) -> list:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"passed": self.passed, "tol": self.tol,
                "checks": [c.to_json() for c in self.checks]}


def validate_generators(g: GeneratorSet, tol: float = LOADED_TOL) -> ValidationReport:
    """Check every GeneratorSet invariant and record the worst violation."""
    J = np.asarray(g.J, dtype=float)
    n, m = g.n, g.m
    eye = np.eye(n)

    def check(name, viol, detail=""):
        viol = float(viol)
        return Check(name, viol <= tol, viol, detail)

    skew = max((np.abs(Ja + Ja.T).max() for Ja in J), default=0.0)
    square = max((np.abs(Ja @ Ja + eye).max() for Ja in J), default=0.0)
    anti, worst_pair = 0.0, ""
    for a in range(m):
        for b in range(a):
            v = np.abs(J[a] @ J[b] + J[b] @ J[a]).max()
            if v > anti:
                anti, worst_pair = v, f"worst pair ({b + 1}, {a + 1})"
    # signed permutation: entries in {-1, 0, 1}, one nonzero per row and column
    perm = 0.0
    for Ja in J:
        dist = np.minimum(np.abs(Ja), np.abs(np.abs(Ja) - 1.0)).max() if Ja.size else 0.0
        nz = np.abs(Ja) > 0.5
        count = max(np.abs(nz.sum(axis=0) - 1).max(), np.abs(nz.sum(axis=1) - 1).max())
        perm = max(perm, dist, float(count))
    rho = hurwitz_radon(n)
    checks = (
        check("skew_symmetric", skew),
        check("square_minus_identity", square),
        check("anti_commuting", anti, worst_pair),
        check("signed_permutation", perm),
        Check("hurwitz_radon_bound", m < rho, 0.0 if m < rho else float(m - rho + 1),
              f"m={m}, rho(n)={rho}"),
    )
    return ValidationReport(checks, tol)

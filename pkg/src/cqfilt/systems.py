"""State-space data for quantum plants and coherent filters.

A plant carries matrices (A, B, C, D) together with its commutation
matrix Theta1 and noise commutation matrix J1; a filter carries
(a, b, c, d, e) with Theta2 and J2.  Physical realizability (PR) of
either system is a pair of quadratic matrix identities; this module
provides the residuals of those identities, the parameterizations that
solve them exactly (a from a symmetric Hamiltonian matrix R, c from b),
and seeded random generators of PR instances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadDimensions,
    DimensionMismatch,
    GenerationFailed,
    SingularTheta,
)
from .linop import is_hurwitz

__all__ = [
    "PlantRealization",
    "FilterRealization",
    "canonical_ccr",
    "plant_pr_residuals",
    "filter_pr_residuals",
    "filter_a_from_R",
    "filter_c_from_b",
    "orthonormal_feedthrough",
    "random_pr_plant",
    "random_pr_filter",
    "filter_from_parameters",
]

MAX_RESAMPLE = 200


def canonical_ccr(mu: int) -> np.ndarray:
    """Canonical commutation matrix [[0, I], [-I, 0]] of order 2*mu."""
    if mu < 1:
        raise BadDimensions("mu must be >= 1")
    eye = np.eye(mu)
    zero = np.zeros((mu, mu))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True)
class PlantRealization:
    """Stable quantum plant dx = A x dt + B dw, dy = C x dt + D dw."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    theta1: np.ndarray
    j1: np.ndarray

    def __post_init__(self):
        for name in ("A", "B", "C", "D", "theta1", "j1"):
            object.__setattr__(self, name,
                               np.asarray(getattr(self, name), dtype=float))
        n, m1, p = self.n, self.m1, self.p
        if self.A.shape != (n, n):
            raise DimensionMismatch("A must be square")
        if self.C.shape != (p, n):
            raise DimensionMismatch("C incompatible with A and D")
        if self.D.shape != (p, m1):
            raise DimensionMismatch("D incompatible with B")
        if self.theta1.shape != (n, n):
            raise DimensionMismatch("theta1 incompatible with A")
        if self.j1.shape != (m1, m1):
            raise DimensionMismatch("j1 incompatible with B")
        if n % 2 or m1 % 2:
            raise BadDimensions("state and noise dimensions must be even")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m1(self) -> int:
        return self.B.shape[1]

    @property
    def p(self) -> int:
        return self.C.shape[0]


@dataclass(frozen=True)
class FilterRealization:
    """Coherent filter d xi = a xi dt + b dw' + e dy, d eta = c xi dt + d dw'."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    e: np.ndarray
    theta2: np.ndarray
    j2: np.ndarray

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "e", "theta2", "j2"):
            object.__setattr__(self, name,
                               np.asarray(getattr(self, name), dtype=float))
        q, m2, r = self.q, self.m2, self.r
        if self.a.shape != (q, q):
            raise DimensionMismatch("a must be square")
        if self.c.shape != (r, q):
            raise DimensionMismatch("c incompatible with a and d")
        if self.d.shape != (r, m2):
            raise DimensionMismatch("d incompatible with b")
        if self.e.shape[0] != q:
            raise DimensionMismatch("e incompatible with a")
        if self.theta2.shape != (q, q):
            raise DimensionMismatch("theta2 incompatible with a")
        if self.j2.shape != (m2, m2):
            raise DimensionMismatch("j2 incompatible with b")
        if q % 2 or m2 % 2:
            raise BadDimensions("state and noise dimensions must be even")

    @property
    def q(self) -> int:
        return self.a.shape[0]

    @property
    def m2(self) -> int:
        return self.b.shape[1]

    @property
    def r(self) -> int:
        return self.c.shape[0]

    @property
    def p(self) -> int:
        return self.e.shape[1]

    def replace(self, **kwargs) -> "FilterRealization":
        fields = dict(a=self.a, b=self.b, c=self.c, d=self.d, e=self.e,
                      theta2=self.theta2, j2=self.j2)
        fields.update(kwargs)
        return FilterRealization(**fields)


def plant_pr_residuals(plant: PlantRealization):
    """Left-hand sides of the two plant PR identities; both vanish iff PR."""
    A, B, C, D = plant.A, plant.B, plant.C, plant.D
    th, j1 = plant.theta1, plant.j1
    r1 = A @ th + th @ A.T + B @ j1 @ B.T
    r2 = th @ C.T + B @ j1 @ D.T
    return r1, r2


def filter_pr_residuals(flt: FilterRealization, plant: PlantRealization):
    """Left-hand sides of the two filter PR identities.

    The first identity picks up the plant noise that reaches the filter
    through the output feedthrough, hence the e D J1 D^T e^T term.
    """
    if flt.e.shape[1] != plant.p:
        raise DimensionMismatch("filter gain e incompatible with plant output")
    a, b, e = flt.a, flt.b, flt.e
    th2, j2 = flt.theta2, flt.j2
    D, j1 = plant.D, plant.j1
    r1 = a @ th2 + th2 @ a.T + e @ D @ j1 @ D.T @ e.T + b @ j2 @ b.T
    r2 = th2 @ flt.c.T + b @ j2 @ flt.d.T
    return r1, r2


def _inv_theta(theta: np.ndarray) -> np.ndarray:
    if abs(np.linalg.det(theta)) < 1e-300 or \
            np.linalg.cond(theta) > 1e12:
        raise SingularTheta("commutation matrix is singular")
    return np.linalg.inv(theta)


def filter_a_from_R(R: np.ndarray, b: np.ndarray, e: np.ndarray,
                    theta2: np.ndarray, D: np.ndarray, j1: np.ndarray,
                    j2: np.ndarray) -> np.ndarray:
    """General solution of the first filter PR identity for a.

    a = 2 Theta2 R - (e D J1 D^T e^T + b J2 b^T) Theta2^-1 / 2, with R the
    symmetric Hamiltonian matrix of the filter.
    """
    th_inv = _inv_theta(theta2)
    noise = e @ D @ j1 @ D.T @ e.T + b @ j2 @ b.T
    return 2.0 * theta2 @ np.asarray(R, dtype=float) - 0.5 * noise @ th_inv


def filter_c_from_b(b: np.ndarray, d: np.ndarray, j2: np.ndarray,
                    theta2: np.ndarray) -> np.ndarray:
    """c = -d J2 b^T Theta2^-1, the unique c satisfying the second PR identity."""
    th_inv = _inv_theta(theta2)
    return -np.asarray(d, dtype=float) @ j2 @ np.asarray(b, dtype=float).T @ th_inv


def orthonormal_feedthrough(rows: int, cols: int,
                            rng: np.random.Generator) -> np.ndarray:
    """Random rows-by-cols matrix with orthonormal rows (D D^T = I)."""
    if rows > cols:
        raise BadDimensions(f"cannot build {rows} orthonormal rows in "
                            f"dimension {cols}")
    g = rng.standard_normal((cols, rows))
    qmat, _ = np.linalg.qr(g)
    return qmat[:, :rows].T


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_pr_plant(n: int, m1: int, p: int, seed=None) -> PlantRealization:
    """Seeded random PR plant with canonical Theta1, J1 and Hurwitz A.

    C is forced by the second PR identity, A is built from a random
    symmetric Hamiltonian matrix via the PR parameterization; the
    Hamiltonian is redrawn (progressively shrunk) until A is Hurwitz.
    """
    if n % 2 or m1 % 2:
        raise BadDimensions("n and m1 must be even")
    if p > m1:
        raise BadDimensions("p must not exceed m1")
    rng = _as_rng(seed)
    theta1 = canonical_ccr(n // 2)
    j1 = canonical_ccr(m1 // 2)
    th_inv = np.linalg.inv(theta1)
    D = orthonormal_feedthrough(p, m1, rng)
    scale = 1.0
    for attempt in range(MAX_RESAMPLE):
        B = rng.standard_normal((n, m1))
        R = rng.standard_normal((n, n)) * scale
        R = (R + R.T) / 2.0
        A = 2.0 * theta1 @ R - 0.5 * B @ j1 @ B.T @ th_inv
        if is_hurwitz(A):
            C = -D @ j1 @ B.T @ th_inv
            return PlantRealization(A=A, B=B, C=C, D=D, theta1=theta1, j1=j1)
        if attempt % 10 == 9:
            scale *= 0.5
    raise GenerationFailed("could not draw a Hurwitz PR plant")


def filter_from_parameters(R: np.ndarray, b: np.ndarray, e: np.ndarray,
                           d: np.ndarray, theta2: np.ndarray,
                           plant: PlantRealization) -> FilterRealization:
    """Assemble a PR filter from its free parameters (R, b, e, d).

    The Hurwitz property of the resulting a is not enforced here.
    """
    d = np.asarray(d, dtype=float)
    r = d.shape[0]
    m2 = d.shape[1]
    if np.linalg.norm(d @ d.T - np.eye(r)) > 1e-9:
        raise BadDimensions("d must have orthonormal rows")
    j2 = canonical_ccr(m2 // 2)
    a = filter_a_from_R(R, b, e, theta2, plant.D, plant.j1, j2)
    c = filter_c_from_b(b, d, j2, theta2)
    return FilterRealization(a=a, b=b, c=c, d=d, e=e,
                             theta2=theta2, j2=j2)


def random_pr_filter(plant: PlantRealization, q: int, m2: int, r: int,
                     seed=None, require_hurwitz: bool = True,
                     theta2: np.ndarray | None = None,
                     d: np.ndarray | None = None) -> FilterRealization:
    """Seeded random PR filter, redrawn until a is Hurwitz if requested."""
    if q % 2 or m2 % 2:
        raise BadDimensions("q and m2 must be even")
    if r > m2:
        raise BadDimensions("r must not exceed m2")
    rng = _as_rng(seed)
    if theta2 is None:
        theta2 = canonical_ccr(q // 2)
    if d is None:
        d = orthonormal_feedthrough(r, m2, rng)
    scale = 1.0
    for attempt in range(MAX_RESAMPLE):
        R = rng.standard_normal((q, q)) * scale
        R = (R + R.T) / 2.0
        b = rng.standard_normal((q, m2))
        e = rng.standard_normal((q, plant.p))
        flt = filter_from_parameters(R, b, e, d, theta2, plant)
        if not require_hurwitz or is_hurwitz(flt.a):
            return flt
        if attempt % 10 == 9:
            scale *= 0.5
    raise GenerationFailed("could not draw a Hurwitz PR filter")

"""Dense matrix-operator toolbox.

Sylvester/Lyapunov solves by Kronecker vectorization, special linear
operators of arbitrary grade with inversion, spectral radius, Hurwitz
tests, and the positive-semidefiniteness criterion for grade-two
self-adjoint operators.  Everything here is desk-scale dense algebra
(orders up to a few tens), so O(n^6) vectorized solves are acceptable
and keep one code path for both the Sylvester and operator-inversion
routes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NotAntisymmetric,
    NotHurwitz,
    NotPositiveDefinite,
    NumericalFailure,
    Singular,
    SingularOperator,
)

# Numerical policy for double-precision dense algebra at desk scale.
HURWITZ_MARGIN = 1e-9
COND_MAX = 1e12
TOL_SOLVE = 1e-10

__all__ = [
    "HURWITZ_MARGIN",
    "COND_MAX",
    "TOL_SOLVE",
    "SpecialLinearOperator",
    "spectral_radius",
    "is_hurwitz",
    "solve_sylvester",
    "solve_lyapunov",
    "grade_two_psd",
    "vec",
    "unvec",
]


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization, so that vec(a X b) = (b^T kron a) vec(X)."""
    return np.asarray(x).reshape(-1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return np.asarray(v).reshape((rows, cols), order="F")


def spectral_radius(m: np.ndarray) -> float:
    """Largest eigenvalue modulus of a square matrix."""
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0.0
    try:
        eigs = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise NumericalFailure(f"eigensolver failed: {exc}") from exc
    return float(np.max(np.abs(eigs)))


def is_hurwitz(m: np.ndarray, margin: float = HURWITZ_MARGIN) -> bool:
    """True iff every eigenvalue has real part < -margin."""
    m = np.asarray(m, dtype=float)
    try:
        eigs = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise NumericalFailure(f"eigensolver failed: {exc}") from exc
    return bool(np.max(eigs.real) < -margin)


def _frob(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, "fro"))


def solve_sylvester(alpha: np.ndarray, beta: np.ndarray,
                    x: np.ndarray) -> np.ndarray:
    """Solve alpha Y + Y beta + X = 0 for Hurwitz alpha, beta.

    Equivalent to the integral of e^{alpha t} X e^{beta t} over t >= 0.
    Solved densely via (I kron alpha + beta^T kron I) vec(Y) = -vec(X).
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    x = np.asarray(x, dtype=float)
    n = alpha.shape[0]
    m = beta.shape[0]
    if alpha.shape != (n, n) or beta.shape != (m, m):
        raise DimensionMismatch("alpha and beta must be square")
    if x.shape != (n, m):
        raise DimensionMismatch(
            f"X must be {n}x{m}, got {x.shape}")
    if not is_hurwitz(alpha):
        raise NotHurwitz("alpha is not Hurwitz")
    if not is_hurwitz(beta):
        raise NotHurwitz("beta is not Hurwitz")
    k = np.kron(np.eye(m), alpha) + np.kron(beta.T, np.eye(n))
    if np.linalg.cond(k) > COND_MAX:
        raise Singular("vectorized Sylvester system is numerically "
                       "rank-deficient")
    y = unvec(np.linalg.solve(k, -vec(x)), n, m)
    resid = _frob(alpha @ y + y @ beta + x)
    if resid > TOL_SOLVE * (1.0 + _frob(x)):
        raise Singular(f"Sylvester residual {resid:.3e} above tolerance")
    return y


def solve_lyapunov(alpha: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Solve alpha Y + Y alpha^T + X = 0 for Hurwitz alpha.

    Symmetry or antisymmetry of X is preserved exactly by projecting the
    output when the input carries the property to machine precision.
    """
    alpha = np.asarray(alpha, dtype=float)
    x = np.asarray(x, dtype=float)
    y = solve_sylvester(alpha, alpha.T, x)
    eps = 1e-13 * (1.0 + _frob(x))
    if _frob(x - x.T) <= eps:
        y = (y + y.T) / 2.0
    elif _frob(x + x.T) <= eps:
        y = (y - y.T) / 2.0
    return y


@dataclass(frozen=True)
class SpecialLinearOperator:
    """Operator X -> sum_k alpha_k X beta_k given by ordered matrix pairs.

    The number of pairs is the grade of the operator.  All alpha_k share
    one square dimension r, all beta_k another square dimension s; the
    operator acts on r-by-s matrices.
    """

    pairs: tuple[tuple[np.ndarray, np.ndarray], ...]

    def __init__(self, pairs):
        pairs = tuple((np.asarray(a, dtype=float), np.asarray(b, dtype=float))
                      for a, b in pairs)
        if not pairs:
            raise DimensionMismatch("operator needs at least one pair")
        r = pairs[0][0].shape[0]
        s = pairs[0][1].shape[0]
        for a, b in pairs:
            if a.shape != (r, r):
                raise DimensionMismatch(
                    f"left factors must all be {r}x{r}, got {a.shape}")
            if b.shape != (s, s):
                raise DimensionMismatch(
                    f"right factors must all be {s}x{s}, got {b.shape}")
        object.__setattr__(self, "pairs", pairs)

    @property
    def grade(self) -> int:
        return len(self.pairs)

    @property
    def left_dim(self) -> int:
        return self.pairs[0][0].shape[0]

    @property
    def right_dim(self) -> int:
        return self.pairs[0][1].shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        r, s = self.left_dim, self.right_dim
        if x.shape != (r, s):
            raise DimensionMismatch(f"argument must be {r}x{s}, got {x.shape}")
        out = np.zeros((r, s))
        for a, b in self.pairs:
            out += a @ x @ b
        return out

    def matrix(self) -> np.ndarray:
        """The rs-by-rs matrix of the vectorized operator."""
        r, s = self.left_dim, self.right_dim
        k = np.zeros((r * s, r * s))
        for a, b in self.pairs:
            k += np.kron(b.T, a)
        return k

    def invert(self, y: np.ndarray) -> np.ndarray:
        """Solve apply(X) = Y via the vectorized rs-by-rs system."""
        y = np.asarray(y, dtype=float)
        r, s = self.left_dim, self.right_dim
        if y.shape != (r, s):
            raise DimensionMismatch(f"argument must be {r}x{s}, got {y.shape}")
        k = self.matrix()
        if np.linalg.cond(k) > COND_MAX:
            raise SingularOperator(
                "vectorized operator is numerically singular")
        x = unvec(np.linalg.solve(k, vec(y)), r, s)
        resid = _frob(self.apply(x) - y)
        if resid > TOL_SOLVE * (1.0 + _frob(y)):
            raise SingularOperator(
                f"inversion residual {resid:.3e} above tolerance")
        return x


def apply_operator(op: SpecialLinearOperator, x: np.ndarray) -> np.ndarray:
    return op.apply(x)


def invert_operator(op: SpecialLinearOperator, y: np.ndarray) -> np.ndarray:
    return op.invert(y)


def grade_two_psd(alpha: np.ndarray, beta: np.ndarray,
                  sigma: np.ndarray, tau: np.ndarray) -> bool:
    """Positive-semidefiniteness of X -> alpha X beta + sigma X tau.

    Requires alpha, beta symmetric positive definite and sigma, tau
    antisymmetric; the operator is then self-adjoint and is PSD exactly
    when rho(alpha^-1 sigma) * rho(tau beta^-1) <= 1.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    tau = np.asarray(tau, dtype=float)
    for name, m in (("alpha", alpha), ("beta", beta)):
        if _frob(m - m.T) > 1e-12 * (1.0 + _frob(m)):
            raise NotPositiveDefinite(f"{name} is not symmetric")
        if np.min(np.linalg.eigvalsh(m)) <= 0.0:
            raise NotPositiveDefinite(f"{name} is not positive definite")
    for name, m in (("sigma", sigma), ("tau", tau)):
        if _frob(m + m.T) > 1e-12 * (1.0 + _frob(m)):
            raise NotAntisymmetric(f"{name} is not antisymmetric")
    rho = spectral_radius(np.linalg.solve(alpha, sigma))
    rho *= spectral_radius(tau @ np.linalg.inv(beta))
    return bool(rho <= 1.0)

"""Classical Kalman-filter reduction.

With the PR constraints switched off (zero Lagrange multipliers) and a
filter of the same order as the plant, the stationarity equations
collapse to the classical filtering Riccati equation.  The construction
here serves as initializer and as an independent correctness oracle for
the constrained synthesis loop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import BadDimensions, NoStabilizingSolution, RankDeficientG
from .linop import is_hurwitz
from .systems import PlantRealization

__all__ = ["RiccatiSolution", "ClassicalFilter", "solve_riccati",
           "kalman_filter"]

RICCATI_TOL = 1e-9


@dataclass(frozen=True)
class RiccatiSolution:
    """Stabilizing solution Pi of the filtering Riccati equation with gain e."""

    pi: np.ndarray
    e: np.ndarray
    residual: float


@dataclass(frozen=True)
class ClassicalFilter:
    """Kalman filter matrices in the normalized coordinates (q = n)."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    e: np.ndarray
    pi: np.ndarray


def riccati_residual(plant: PlantRealization, pi: np.ndarray) -> float:
    A, B, C, D = plant.A, plant.B, plant.C, plant.D
    gain = pi @ C.T + B @ D.T
    res = A @ pi + pi @ A.T + B @ B.T - gain @ gain.T
    return float(np.linalg.norm(res, "fro"))


def solve_riccati(plant: PlantRealization) -> RiccatiSolution:
    """Stabilizing Pi >= 0 of A Pi + Pi A^T + BB^T - (Pi C^T + BD^T)(...)^T = 0.

    Mapped onto the standard continuous algebraic Riccati equation with
    cross term S = B D^T and unit innovation intensity (D D^T = I).
    """
    A, B, C, D = plant.A, plant.B, plant.C, plant.D
    n, p = plant.n, plant.p
    try:
        pi = scipy.linalg.solve_continuous_are(
            A.T, C.T, B @ B.T, np.eye(p), s=B @ D.T)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NoStabilizingSolution(str(exc)) from exc
    pi = (pi + pi.T) / 2.0
    e = pi @ C.T + B @ D.T
    res = riccati_residual(plant, pi)
    scale = 1.0 + float(np.linalg.norm(B @ B.T, "fro"))
    if res > RICCATI_TOL * scale:
        raise NoStabilizingSolution(
            f"Riccati residual {res:.3e} above tolerance")
    if not is_hurwitz(A - e @ C, margin=0.0):
        raise NoStabilizingSolution("A - eC is not Hurwitz")
    return RiccatiSolution(pi=pi, e=e, residual=res)


def kalman_filter(plant: PlantRealization, F: np.ndarray,
                  G: np.ndarray, q: int | None = None) -> ClassicalFilter:
    """Classical optimal filter: a = A - eC, b = 0, c = (G^T G)^-1 G^T F.

    Only the plant-order case q = n is supported; the additional filter
    noise is redundant classically, hence b = 0.
    """
    F = np.asarray(F, dtype=float)
    G = np.asarray(G, dtype=float)
    if q is not None and q != plant.n:
        raise BadDimensions("classical construction requires q = n")
    if np.linalg.matrix_rank(G) < G.shape[1]:
        raise RankDeficientG("G must have full column rank")
    ric = solve_riccati(plant)
    a = plant.A - ric.e @ plant.C
    c = np.linalg.solve(G.T @ G, G.T @ F)
    b = np.zeros((plant.n, 0))
    return ClassicalFilter(a=a, b=b, c=c, e=ric.e, pi=ric.pi)

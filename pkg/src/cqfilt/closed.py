"""Plant-filter cascade: combined system, Gramians, Hankelian, cost.

The cascade has block lower triangular dynamics (no feedback from the
filter to the plant).  The mean-square performance index is half the
Frobenius inner product of C^T C with the controllability Gramian of
the combined system.  Blockwise Gramian formulas are provided as
independent verification paths; production code always solves the
full-order Lyapunov equations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHurwitz, RankDeficientG
from .linop import is_hurwitz, solve_lyapunov, solve_sylvester
from .systems import FilterRealization, PlantRealization

__all__ = [
    "ClosedSystem",
    "GramianSet",
    "assemble",
    "controllability_gramian",
    "observability_gramian",
    "gramians",
    "hankelian",
    "ccr_residual",
    "cost",
    "cost_blockwise",
    "uncertainty_check",
    "p11_block",
    "p12_block",
    "p22_block",
    "q21_block",
    "q22_block",
]


@dataclass(frozen=True)
class ClosedSystem:
    """Combined plant-filter system with block CCR data and weights."""

    plant: PlantRealization
    filter: FilterRealization
    F: np.ndarray
    G: np.ndarray
    calA: np.ndarray
    calB: np.ndarray
    calC: np.ndarray
    theta: np.ndarray
    j: np.ndarray

    @property
    def n(self) -> int:
        return self.plant.n

    @property
    def q(self) -> int:
        return self.filter.q

    def split(self, m: np.ndarray):
        """2x2 block views of an (n+q)-order matrix, plant block first."""
        n = self.n
        return m[:n, :n], m[:n, n:], m[n:, :n], m[n:, n:]


def _blkdiag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]))
    out[:a.shape[0], :a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


def assemble(plant: PlantRealization, flt: FilterRealization,
             F: np.ndarray, G: np.ndarray) -> ClosedSystem:
    """Build the cascade with dynamics [[A,0],[eC,a]] and error output F x - G c xi."""
    F = np.asarray(F, dtype=float)
    G = np.asarray(G, dtype=float)
    n, q, p = plant.n, flt.q, plant.p
    if flt.e.shape != (q, p):
        raise DimensionMismatch("filter gain e incompatible with plant output")
    if F.shape[1] != n:
        raise DimensionMismatch("F incompatible with plant state")
    if G.shape[1] != flt.r or G.shape[0] != F.shape[0]:
        raise DimensionMismatch("G incompatible with F and filter output")
    if G.shape[0] < G.shape[1] or \
            np.linalg.matrix_rank(G) < G.shape[1]:
        raise RankDeficientG("G must have full column rank")
    calA = np.block([[plant.A, np.zeros((n, q))],
                     [flt.e @ plant.C, flt.a]])
    calB = np.block([[plant.B, np.zeros((n, flt.m2))],
                     [flt.e @ plant.D, flt.b]])
    calC = np.hstack([F, -G @ flt.c])
    theta = _blkdiag(plant.theta1, flt.theta2)
    j = _blkdiag(plant.j1, flt.j2)
    return ClosedSystem(plant=plant, filter=flt, F=F, G=G,
                        calA=calA, calB=calB, calC=calC, theta=theta, j=j)


def controllability_gramian(sys: ClosedSystem) -> np.ndarray:
    """Symmetric P >= 0 with calA P + P calA^T + calB calB^T = 0."""
    if not is_hurwitz(sys.calA):
        raise NotHurwitz("combined dynamics matrix is not Hurwitz")
    return solve_lyapunov(sys.calA, sys.calB @ sys.calB.T)


def observability_gramian(sys: ClosedSystem) -> np.ndarray:
    """Symmetric Q >= 0 with calA^T Q + Q calA + calC^T calC = 0."""
    if not is_hurwitz(sys.calA):
        raise NotHurwitz("combined dynamics matrix is not Hurwitz")
    return solve_lyapunov(sys.calA.T, sys.calC.T @ sys.calC)


def hankelian(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """H = Q P, whose spectrum is the squared Hankel singular values."""
    if P.shape != Q.shape:
        raise DimensionMismatch("P and Q must have equal order")
    return Q @ P


@dataclass(frozen=True)
class GramianSet:
    """Controllability and observability Gramians with the Hankelian."""

    P: np.ndarray
    Q: np.ndarray
    H: np.ndarray
    n: int

    def _split(self, m: np.ndarray):
        n = self.n
        return m[:n, :n], m[:n, n:], m[n:, :n], m[n:, n:]

    @property
    def P11(self):
        return self._split(self.P)[0]

    @property
    def P12(self):
        return self._split(self.P)[1]

    @property
    def P21(self):
        return self._split(self.P)[2]

    @property
    def P22(self):
        return self._split(self.P)[3]

    @property
    def Q21(self):
        return self._split(self.Q)[2]

    @property
    def Q22(self):
        return self._split(self.Q)[3]

    @property
    def H21(self):
        return self._split(self.H)[2]

    @property
    def H22(self):
        return self._split(self.H)[3]


def gramians(sys: ClosedSystem) -> GramianSet:
    P = controllability_gramian(sys)
    Q = observability_gramian(sys)
    return GramianSet(P=P, Q=Q, H=hankelian(P, Q), n=sys.n)


def ccr_residual(sys: ClosedSystem) -> np.ndarray:
    """calA Theta + Theta calA^T + calB J calB^T; zero iff CCRs are preserved."""
    return sys.calA @ sys.theta + sys.theta @ sys.calA.T \
        + sys.calB @ sys.j @ sys.calB.T


def cost(sys: ClosedSystem, P: np.ndarray) -> float:
    """Mean-square error <calC^T calC, P> / 2."""
    return float(np.trace(sys.calC.T @ sys.calC @ P)) / 2.0


def cost_blockwise(sys: ClosedSystem, P: np.ndarray) -> float:
    """Cost re-evaluated from the 2x2 block partitioning (verification path)."""
    p11, p12, _, p22 = sys.split(P)
    F, G, c = sys.F, sys.G, sys.filter.c
    val = np.trace(F.T @ F @ p11) / 2.0
    val -= np.trace((F.T @ G @ c).T @ p12)
    val += np.trace(c.T @ G.T @ G @ c @ p22) / 2.0
    return float(val)


def uncertainty_check(p22: np.ndarray, theta2: np.ndarray) -> float:
    """Min eigenvalue of the Hermitian matrix P22 + i Theta2.

    Nonnegative (up to rounding) for any physically realizable filter:
    this is the steady-state second-moment form of the uncertainty
    principle for the filter variables.
    """
    h = np.asarray(p22, dtype=float) + 1j * np.asarray(theta2, dtype=float)
    return float(np.min(np.linalg.eigvalsh(h)))


# Blockwise Gramian formulas (verification paths only).

def p11_block(plant: PlantRealization) -> np.ndarray:
    """Plant-only controllability Gramian; independent of the filter."""
    return solve_lyapunov(plant.A, plant.B @ plant.B.T)


def p12_block(plant: PlantRealization, flt: FilterRealization,
              p11: np.ndarray) -> np.ndarray:
    x = (p11 @ plant.C.T + plant.B @ plant.D.T) @ flt.e.T
    return solve_sylvester(plant.A, flt.a.T, x)


def p22_block(plant: PlantRealization, flt: FilterRealization,
              p12: np.ndarray) -> np.ndarray:
    e, b = flt.e, flt.b
    x = e @ plant.C @ p12 + p12.T @ plant.C.T @ e.T + e @ e.T + b @ b.T
    return solve_lyapunov(flt.a, x)


def q22_block(flt: FilterRealization, G: np.ndarray) -> np.ndarray:
    G = np.asarray(G, dtype=float)
    return solve_lyapunov(flt.a.T, flt.c.T @ G.T @ G @ flt.c)


def q21_block(plant: PlantRealization, flt: FilterRealization,
              F: np.ndarray, G: np.ndarray, q22: np.ndarray) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    G = np.asarray(G, dtype=float)
    x = q22 @ flt.e @ plant.C - flt.c.T @ G.T @ F
    return solve_sylvester(flt.a.T, plant.A, x)

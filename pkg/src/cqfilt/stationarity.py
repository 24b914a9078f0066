"""Optimality machinery for the constrained filter-synthesis problem.

Lagrange function of the mean-square cost with the two PR identities as
constraints, its Frechet derivatives with respect to the filter
matrices, the stationarity residuals, the Gramian ratio matrices that
make the stationarity equations explicit, and the resulting linear
solves for a, b, c, e via special linear operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closed import ClosedSystem, GramianSet, cost
from .errors import (
    NotHurwitz,
    RankDeficientG,
    SingularBlock,
    SingularTheta,
    SingularU,
)
from .linop import SpecialLinearOperator, is_hurwitz, spectral_radius
from .systems import FilterRealization, filter_pr_residuals

__all__ = [
    "LagrangeMultipliers",
    "RatioMatrices",
    "StationarityResiduals",
    "lagrangian",
    "gradients",
    "residuals",
    "upsilon",
    "ratio_matrices",
    "solve_a",
    "solve_b",
    "solve_c",
    "solve_e",
    "eliminate_T",
    "solve_b_grade3",
    "update_xi",
]


@dataclass(frozen=True)
class LagrangeMultipliers:
    """Multipliers for the two PR constraints: antisymmetric xi, and gamma q-by-r."""

    xi: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xi", np.asarray(self.xi, dtype=float))
        object.__setattr__(self, "gamma", np.asarray(self.gamma, dtype=float))

    @staticmethod
    def zero(q: int, r: int) -> "LagrangeMultipliers":
        return LagrangeMultipliers(np.zeros((q, q)), np.zeros((q, r)))


@dataclass(frozen=True)
class RatioMatrices:
    """Block quotients of the Gramians, CCR matrix and multipliers.

    L = Q22^-1 Q21, M = P12 P22^-1, N = Q22^-1 Xi, S = Theta2 P22^-1,
    T = Q22^-1 Gamma, U = Q22 Theta2 P22^-1.
    """

    L: np.ndarray
    M: np.ndarray
    N: np.ndarray
    S: np.ndarray
    T: np.ndarray
    U: np.ndarray


@dataclass(frozen=True)
class StationarityResiduals:
    """Gradient blocks, PR residuals and the multiplier symmetry defect."""

    r_a: np.ndarray
    r_b: np.ndarray
    r_c: np.ndarray
    r_e: np.ndarray
    r_pr1: np.ndarray
    r_pr2: np.ndarray
    r_sym: np.ndarray

    def norms(self) -> dict[str, float]:
        return {name: float(np.linalg.norm(getattr(self, name), "fro"))
                for name in ("r_a", "r_b", "r_c", "r_e",
                             "r_pr1", "r_pr2", "r_sym")}

    def normalized_norms(self, flt: FilterRealization,
                         mult: LagrangeMultipliers) -> dict[str, float]:
        """Each residual norm divided by (1 + norm of the matrix it grades)."""
        def nrm(m):
            return float(np.linalg.norm(m, "fro"))

        sym_arg = mult.xi @ flt.a + mult.gamma @ flt.c
        scales = dict(r_a=flt.a, r_b=flt.b, r_c=flt.c, r_e=flt.e,
                      r_pr1=flt.a, r_pr2=flt.c, r_sym=sym_arg)
        raw = self.norms()
        return {k: raw[k] / (1.0 + nrm(scales[k])) for k in raw}

    def max_normalized(self, flt: FilterRealization,
                       mult: LagrangeMultipliers,
                       include_pr: bool = True) -> float:
        norms = self.normalized_norms(flt, mult)
        if not include_pr:
            norms = {k: v for k, v in norms.items()
                     if k not in ("r_pr1", "r_pr2")}
        return max(norms.values())


def lagrangian(sys: ClosedSystem, P: np.ndarray,
               mult: LagrangeMultipliers) -> float:
    """Cost plus <Xi, PR1>/2 + <Gamma, PR2>, PR1/PR2 the constraint residuals."""
    r1, r2 = filter_pr_residuals(sys.filter, sys.plant)
    val = cost(sys, P)
    val += float(np.trace(mult.xi.T @ r1)) / 2.0
    val += float(np.trace(mult.gamma.T @ r2))
    return val


def gradients(sys: ClosedSystem, gram: GramianSet,
              mult: LagrangeMultipliers):
    """Frechet derivatives of the Lagrange function wrt (a, b, c, e)."""
    flt, plant = sys.filter, sys.plant
    if not is_hurwitz(flt.a):
        raise NotHurwitz("filter matrix a is not Hurwitz")
    xi, gamma = mult.xi, mult.gamma
    th2, j2, d = flt.theta2, flt.j2, flt.d
    delta = plant.D @ plant.j1 @ plant.D.T
    F, G = sys.F, sys.G
    d_a = gram.H22 - xi @ th2
    d_b = gram.Q22 @ flt.b - xi @ flt.b @ j2 - gamma @ d @ j2
    d_c = -G.T @ F @ gram.P12 + G.T @ G @ flt.c @ gram.P22 + gamma.T @ th2
    d_e = gram.H21 @ plant.C.T + gram.Q21 @ plant.B @ plant.D.T \
        + gram.Q22 @ flt.e - xi @ flt.e @ delta
    return d_a, d_b, d_c, d_e


def residuals(sys: ClosedSystem, gram: GramianSet,
              mult: LagrangeMultipliers) -> StationarityResiduals:
    """Full stationarity report: gradients, PR residuals, symmetry defect."""
    d_a, d_b, d_c, d_e = gradients(sys, gram, mult)
    r1, r2 = filter_pr_residuals(sys.filter, sys.plant)
    sym_arg = mult.xi @ sys.filter.a + mult.gamma @ sys.filter.c
    return StationarityResiduals(r_a=d_a, r_b=d_b, r_c=d_c, r_e=d_e,
                                 r_pr1=r1, r_pr2=r2,
                                 r_sym=sym_arg - sym_arg.T)


def upsilon(sys: ClosedSystem, gram: GramianSet) -> np.ndarray:
    """Q21 A P12 + Q22 e C P12 + Q22 a P22 (the second Gramian cross block)."""
    plant, flt = sys.plant, sys.filter
    return gram.Q21 @ plant.A @ gram.P12 \
        + gram.Q22 @ flt.e @ plant.C @ gram.P12 \
        + gram.Q22 @ flt.a @ gram.P22


def _require_pd(m: np.ndarray, name: str) -> None:
    eigs = np.linalg.eigvalsh((m + m.T) / 2.0)
    if eigs[0] < 1e-10 * max(np.trace(m), 1e-300):
        raise SingularBlock(name, float(eigs[0]))


def ratio_matrices(gram: GramianSet, mult: LagrangeMultipliers,
                   theta2: np.ndarray) -> RatioMatrices:
    """Form L, M, N, S, T, U; requires P22 and Q22 positive definite."""
    p22, q22 = gram.P22, gram.Q22
    _require_pd(p22, "P22")
    _require_pd(q22, "Q22")
    p22_inv = np.linalg.inv(p22)
    q22_inv = np.linalg.inv(q22)
    return RatioMatrices(
        L=q22_inv @ gram.Q21,
        M=gram.P12 @ p22_inv,
        N=q22_inv @ mult.xi,
        S=theta2 @ p22_inv,
        T=q22_inv @ mult.gamma,
        U=q22 @ theta2 @ p22_inv,
    )


def solve_c(M: np.ndarray, T: np.ndarray, U: np.ndarray,
            F: np.ndarray, G: np.ndarray) -> np.ndarray:
    """c = (G^T G)^-1 (G^T F M - T^T U)."""
    gtg = G.T @ G
    if np.linalg.matrix_rank(G) < G.shape[1]:
        raise RankDeficientG("G must have full column rank")
    return np.linalg.solve(gtg, G.T @ F @ M - T.T @ U)


def solve_a(N: np.ndarray, S: np.ndarray, T: np.ndarray, c: np.ndarray,
            L: np.ndarray, A: np.ndarray, e: np.ndarray, C: np.ndarray,
            M: np.ndarray) -> np.ndarray:
    """Solve a = (N a + T c) S - (L A + e C) M for a.

    Rearranged as the grade-two operator a - N a S applied to a, with
    right-hand side T c S - (L A + e C) M.
    """
    q = N.shape[0]
    op = SpecialLinearOperator([(np.eye(q), np.eye(q)), (-N, S)])
    rhs = T @ c @ S - (L @ A + e @ C) @ M
    return op.invert(rhs)


def solve_b(N: np.ndarray, T: np.ndarray, d: np.ndarray,
            j2: np.ndarray) -> np.ndarray:
    """Solve b = N b J2 + T d J2 for b."""
    q = N.shape[0]
    m2 = j2.shape[0]
    op = SpecialLinearOperator([(np.eye(q), np.eye(m2)), (-N, j2)])
    return op.invert(T @ d @ j2)


def solve_e(N: np.ndarray, delta: np.ndarray, L: np.ndarray,
            p11: np.ndarray, C: np.ndarray, B: np.ndarray, D: np.ndarray,
            p21: np.ndarray) -> np.ndarray:
    """Solve e = N e Delta - (L (P11 C^T + B D^T) + P21 C^T) for e."""
    q = N.shape[0]
    p = delta.shape[0]
    op = SpecialLinearOperator([(np.eye(q), np.eye(p)), (-N, delta)])
    rhs = -(L @ (p11 @ C.T + B @ D.T) + p21 @ C.T)
    return op.invert(rhs)


def _inv_transpose_u(U: np.ndarray) -> np.ndarray:
    if np.linalg.cond(U) > 1e12:
        raise SingularU("ratio matrix U is numerically singular")
    return np.linalg.inv(U).T


def eliminate_T(U: np.ndarray, M: np.ndarray, F: np.ndarray, G: np.ndarray,
                theta2: np.ndarray, b: np.ndarray, j2: np.ndarray,
                d: np.ndarray) -> np.ndarray:
    """T = U^-T (M^T F^T G + Theta2^-1 b J2 d^T G^T G).

    With this T, the b and c produced by the stationarity solves satisfy
    the second PR identity.
    """
    u_inv_t = _inv_transpose_u(U)
    if np.linalg.cond(theta2) > 1e12:
        raise SingularTheta("theta2 is numerically singular")
    th_inv = np.linalg.inv(theta2)
    return u_inv_t @ (M.T @ F.T @ G + th_inv @ b @ j2 @ d.T @ G.T @ G)


def solve_b_grade3(N: np.ndarray, U: np.ndarray, M: np.ndarray,
                   F: np.ndarray, G: np.ndarray, d: np.ndarray,
                   j2: np.ndarray, theta2: np.ndarray) -> np.ndarray:
    """Solve for b with T eliminated: a grade-three operator inversion.

    (b - N b J2 - U^-T Theta2^-1 b J2 d^T G^T G d J2) = U^-T M^T F^T G d J2.
    """
    q = N.shape[0]
    m2 = j2.shape[0]
    u_inv_t = _inv_transpose_u(U)
    if np.linalg.cond(theta2) > 1e12:
        raise SingularTheta("theta2 is numerically singular")
    th_inv = np.linalg.inv(theta2)
    op = SpecialLinearOperator([
        (np.eye(q), np.eye(m2)),
        (-N, j2),
        (-u_inv_t @ th_inv, j2 @ d.T @ G.T @ G @ d @ j2),
    ])
    return op.invert(u_inv_t @ M.T @ F.T @ G @ d @ j2)


def update_xi(h22: np.ndarray, theta2: np.ndarray) -> np.ndarray:
    """Xi = (H22 Theta2^-1 + Theta2^-1 H22^T) / 2, antisymmetrized exactly.

    A fixed point whenever H22 = Xi Theta2 already holds.
    """
    if np.linalg.cond(theta2) > 1e12:
        raise SingularTheta("theta2 is numerically singular")
    th_inv = np.linalg.inv(theta2)
    xi = (h22 @ th_inv + th_inv @ h22.T) / 2.0
    return (xi - xi.T) / 2.0


def rho_n(gram: GramianSet, xi: np.ndarray) -> float:
    """Spectral radius of N = Q22^-1 Xi; below one, the operator solves are safe."""
    return spectral_radius(np.linalg.solve(gram.Q22, xi))

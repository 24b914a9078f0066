"""Exception hierarchy shared across the synthesis toolbox."""


class CqfiltError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(CqfiltError):
    pass


class BadDimensions(CqfiltError):
    pass


class NotHurwitz(CqfiltError):
    pass


class Singular(CqfiltError):
    pass


class SingularOperator(CqfiltError):
    pass


class SingularTheta(CqfiltError):
    pass


class SingularBlock(CqfiltError):
    """A Gramian block required to be positive definite is numerically singular."""

    def __init__(self, block: str, min_eigenvalue: float):
        self.block = block
        self.min_eigenvalue = min_eigenvalue
        super().__init__(f"block {block} is not positive definite "
                         f"(min eigenvalue {min_eigenvalue:.3e})")


class SingularU(CqfiltError):
    pass


class NotPositiveDefinite(CqfiltError):
    pass


class NotAntisymmetric(CqfiltError):
    pass


class NumericalFailure(CqfiltError):
    pass


class RankDeficientG(CqfiltError):
    pass


class GenerationFailed(CqfiltError):
    pass


class NoStabilizingSolution(CqfiltError):
    pass


class NonHurwitzIterate(CqfiltError):
    """Damping backtracking could not restore a Hurwitz filter matrix."""

"""Exception and warning types raised by corrstress."""


class CorrStressError(Exception):
    """Base class for all library errors."""


class NotSquare(CorrStressError, ValueError):
    pass


class NotSymmetric(CorrStressError, ValueError):
    pass


class NotPositiveDefinite(CorrStressError, ValueError):
    pass


class NotTraceless(CorrStressError, ValueError):
    pass


class NotAntisymmetric(CorrStressError, ValueError):
    pass


class DimensionMismatch(CorrStressError, ValueError):
    pass


class SingularBasis(CorrStressError, ValueError):
    pass


class DeterminantMismatch(CorrStressError, ValueError):
    """The two covariances differ in determinant, so the stress between
    them is not a pure correlation stress."""


class BadIndices(CorrStressError, ValueError):
    pass


class NonPositiveVol(CorrStressError, ValueError):
    pass


class DegenerateSpectrum(CorrStressError, ValueError):
    pass


class StressTooLarge(CorrStressError, ValueError):
    pass


class NonSpdAlongPath(CorrStressError, ValueError):
    pass


class BadGeneratorSpec(CorrStressError, ValueError):
    pass


class Infeasible(CorrStressError):
    """No positive-definite completion was found."""


class NotConverged(CorrStressError):
    """The optimizer hit its evaluation budget.

    The best partial result is available as ``exc.result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class MultipleMinimaWarning(UserWarning):
    """Optimizer restarts disagree on the minimizer."""


class MatrixFormatError(CorrStressError, ValueError):
    """A matrix, vector or completion file could not be parsed."""

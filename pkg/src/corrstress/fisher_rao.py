"""Fisher-Rao geometry of fixed-mean Gaussians.

Distances, geodesics and the exponential/logarithm maps on the manifold of
covariance matrices, restricted where needed to the constant-determinant
(correlation stress) submanifold.
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DeterminantMismatch, DimensionMismatch
from .spdcore import (
    SpdMatrix,
    SymMatrix,
    TangentDirection,
    _check_same_n,
    as_direction,
    as_spd,
    spd_inv_sqrt,
    spd_log,
    spd_sqrt,
    sym_exp,
    symmetrize,
)

DET_MATCH_TOL = 1e-8


def _whiten(s1, s2):
    """``S1^{-1/2} S2 S1^{-1/2}``, symmetric and congruent to ``S1^{-1} S2``."""
    w = spd_inv_sqrt(s1).entries
    return SpdMatrix._trusted(symmetrize(w @ s2.entries @ w))


def rao_distance(s1, s2):
    """Fisher-Rao geodesic distance between two covariances.

    ``d = sqrt(0.5 * sum(log(lam)**2))`` where ``lam`` are the eigenvalues of
    ``S1^{-1} S2``, taken from the symmetric congruent form so they come out
    real and positive.
    """
    s1, s2 = as_spd(s1), as_spd(s2)
    _check_same_n(s1, s2)
    lam = np.linalg.eigvalsh(_whiten(s1, s2).entries)
    return float(np.sqrt(0.5 * np.sum(np.log(lam) ** 2)))


@dataclass(frozen=True)
class GeodesicCurve:
    """Geodesic ``start -> end``: ``S1^{1/2} exp(t L) S1^{1/2}``."""

    start: SpdMatrix
    end: SpdMatrix
    log_term: SymMatrix

    @cached_property
    def _root(self):
        return spd_sqrt(self.start).entries

    def evaluate(self, t):
        e = sym_exp(float(t) * self.log_term.entries).entries
        return SpdMatrix._trusted(self._root @ e @ self._root)

    @property
    def length(self):
        return float(np.sqrt(0.5 * np.sum(self.log_term.eigenvalues ** 2)))


def geodesic(s1, s2):
    s1, s2 = as_spd(s1), as_spd(s2)
    _check_same_n(s1, s2)
    return GeodesicCurve(s1, s2, spd_log(_whiten(s1, s2)))


def exp_map(base, x, t=1.0):
    """Stress ``base`` along direction ``x`` by ``t``: ``S^{1/2} exp(t X) S^{1/2}``."""
    base, x = as_spd(base), as_direction(x)
    _check_same_n(base, x)
    r = spd_sqrt(base).entries
    e = sym_exp(float(t) * x.entries).entries
    return SpdMatrix._trusted(r @ e @ r)


def log_map(s1, s2, allow_covariance=False):
    """Direction ``X = log(S1^{-1/2} S2 S1^{-1/2})`` with ``exp_map(S1, X, 1) == S2``.

    Raises :class:`DeterminantMismatch` when the determinants differ by more
    than 1e-8 relative, unless ``allow_covariance`` is set, in which case the
    returned direction keeps its trace ``log(det S2 / det S1)``.
    """
    s1, s2 = as_spd(s1), as_spd(s2)
    _check_same_n(s1, s2)
    log_ratio = s2.logdet - s1.logdet
    log_term = spd_log(_whiten(s1, s2)).entries
    if abs(log_ratio) <= DET_MATCH_TOL:
        return TangentDirection.projected(log_term)
    if not allow_covariance:
        raise DeterminantMismatch(
            f"det ratio {np.exp(log_ratio):.10g} != 1; not a pure correlation stress"
        )
    return TangentDirection(log_term, allow_trace=True)


def tangent_inner(x, y):
    """Fisher-Rao inner product of two tangent directions, ``Tr(XY) / 2``."""
    x, y = as_direction(x), as_direction(y)
    _check_same_n(x, y)
    return 0.5 * float(np.sum(x.entries * y.entries))


def stress_distance(x, t=1.0):
    """Rao distance covered by stressing any base along ``x`` by ``t``."""
    x = as_direction(x)
    return abs(float(t)) * float(np.sqrt(0.5 * np.sum(x.eigenvalues ** 2)))


def plausibility(x, t=1.0):
    return float(np.exp(-stress_distance(x, t)))


def plausibility_between(s1, s2):
    return float(np.exp(-rao_distance(s1, s2)))


def entropy(s):
    """Differential entropy (nats) of a zero-mean Gaussian with covariance ``s``."""
    s = as_spd(s)
    n = s.n
    return 0.5 * n + 0.5 * n * np.log(2 * np.pi) + 0.5 * s.logdet


def mahalanobis(x, s):
    """``sqrt(x^T S^{-1} x)`` via the cached eigendecomposition of ``s``."""
    s = as_spd(s)
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != s.n:
        raise DimensionMismatch(f"vector length {x.shape[0]} != n={s.n}")
    y = s.basis.T @ x
    return float(np.sqrt(np.sum(y * y / s.spectrum)))


@dataclass(frozen=True)
class PathSample:
    t: float
    matrix: SpdMatrix
    distance: float
    plausibility: float
    eigenvalues: np.ndarray
    det: float


@dataclass(frozen=True)
class StressPath:
    """Correlation stress path ``t -> S^{1/2} exp(tX) S^{1/2}``."""

    base: SpdMatrix
    direction: TangentDirection
    _root: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        base, x = as_spd(self.base), as_direction(self.direction)
        _check_same_n(base, x)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "direction", x)
        object.__setattr__(self, "_root", spd_sqrt(base).entries)

    def evaluate(self, t):
        if t == 0:
            return self.base
        e = sym_exp(float(t) * self.direction.entries).entries
        return SpdMatrix._trusted(self._root @ e @ self._root)

    def factor(self, t):
        """``G(t) = exp(tX/2) S^{1/2}`` with ``evaluate(t) == G^T G``."""
        return sym_exp(0.5 * float(t) * self.direction.entries).entries @ self._root

    def spectrum(self, t):
        """Eigenvalues of ``evaluate(t)``, descending.

        Taken as squared singular values of :meth:`factor`, which keeps the
        small eigenvalues accurate far along the path where the condition
        number of the stressed matrix exceeds 1/eps.
        """
        sv = np.linalg.svd(self.factor(t), compute_uv=False)
        return sv ** 2

    def distance(self, t):
        return stress_distance(self.direction, t)

    def plausibility(self, t):
        return plausibility(self.direction, t)

    def sample(self, t):
        ev = self.spectrum(t)
        d = self.distance(t)
        return PathSample(
            t=float(t),
            matrix=self.evaluate(t),
            distance=d,
            plausibility=float(np.exp(-d)),
            eigenvalues=ev,
            det=float(np.prod(ev)),
        )

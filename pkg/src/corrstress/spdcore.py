"""Symmetric and SPD matrix types with their spectral primitives.

Every matrix function (sqrt, inverse sqrt, exp, log) goes through the
symmetric eigendecomposition, and every composite product is re-symmetrized
with ``(A + A.T) / 2`` so returned matrices are exactly symmetric.
"""
from functools import cached_property

import numpy as np

from .errors import (
    DimensionMismatch,
    NotPositiveDefinite,
    NotSquare,
    NotSymmetric,
    NotTraceless,
    SingularBasis,
)

DEFAULT_REL_TOL = 1e-12
ASYMMETRY_TOL = 1e-8


def symmetrize(a):
    """Return ``(a + a.T) / 2``; the result is symmetric bit for bit."""
    a = np.asarray(a, dtype=float)
    return 0.5 * (a + a.T)


def _square(a):
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise NotSquare(f"expected a non-empty square matrix, got shape {a.shape}")
    return a


def _readonly(a):
    a.flags.writeable = False
    return a


def eigh_desc(a):
    """Symmetric eigendecomposition with a deterministic layout.

    Eigenvalues are returned in descending order. Each eigenvector is
    signed so that its largest-magnitude component is positive.
    """
    w, v = np.linalg.eigh(a)
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.where(v[idx, np.arange(v.shape[1])] < 0, -1.0, 1.0)
    return w, v * signs


def _from_eig(w, v):
    return symmetrize((v * w) @ v.T)


def _check_same_n(*mats):
    ns = {m.n for m in mats}
    if len(ns) != 1:
        raise DimensionMismatch(f"dimension mismatch: {sorted(ns)}")


class SymMatrix:
    """Real symmetric matrix, symmetrized on construction."""

    def __init__(self, entries):
        self._entries = _readonly(symmetrize(_square(entries)))

    @property
    def entries(self):
        return self._entries

    @property
    def n(self):
        return self._entries.shape[0]

    @property
    def trace(self):
        return float(np.trace(self._entries))

    @cached_property
    def _eig(self):
        w, v = eigh_desc(self._entries)
        return _readonly(w), _readonly(v)

    @property
    def eigenvalues(self):
        """Eigenvalues, descending."""
        return self._eig[0]

    @property
    def eigenvectors(self):
        """Orthonormal eigenvectors as columns, in the order of ``eigenvalues``."""
        return self._eig[1]

    def __array__(self, dtype=None, copy=None):
        return np.array(self._entries, dtype=dtype)

    def __repr__(self):
        return f"{type(self).__name__}({self._entries.tolist()!r})"


class SpdMatrix(SymMatrix):
    """Symmetric positive-definite matrix with cached spectral data.

    Build one with :func:`validate_spd`. Results of spectral operations are
    constructed directly from their known factors and skip the relative
    conditioning check, which only guards user input.
    """

    @classmethod
    def _trusted(cls, entries, eig=None):
        obj = cls.__new__(cls)
        obj._entries = _readonly(symmetrize(entries))
        if eig is not None:
            w, v = eig
            obj.__dict__["_eig"] = (_readonly(np.array(w, dtype=float)),
                                    _readonly(np.array(v, dtype=float)))
        return obj

    @cached_property
    def _eig(self):
        w, v = eigh_desc(self._entries)
        if w[-1] <= 0.0:
            raise NotPositiveDefinite(
                f"matrix lost positive definiteness numerically (min eigenvalue {w[-1]:.3e})"
            )
        return _readonly(w), _readonly(v)

    @property
    def spectrum(self):
        """Eigenvalues, descending."""
        return self._eig[0]

    @property
    def basis(self):
        return self._eig[1]

    @property
    def det(self):
        return float(np.prod(self.spectrum))

    @property
    def logdet(self):
        return float(np.sum(np.log(self.spectrum)))


class TangentDirection(SymMatrix):
    """Traceless symmetric generator of a correlation stress path.

    ``allow_trace=True`` admits a direction with nonzero trace; such a
    direction generates a general covariance stress that rescales the
    determinant by ``exp(t * trace)``.
    """

    def __init__(self, entries, allow_trace=False):
        super().__init__(entries)
        fro = float(np.linalg.norm(self._entries))
        self.is_traceless = abs(self.trace) <= 1e-12 * (fro + 1.0)
        if not (self.is_traceless or allow_trace):
            raise NotTraceless(f"trace {self.trace:.3e} is not zero")

    @classmethod
    def projected(cls, entries):
        """Remove the trace part ``(tr/n) I``, e.g. from rounded printed values."""
        a = symmetrize(_square(entries))
        a -= np.eye(a.shape[0]) * (np.trace(a) / a.shape[0])
        return cls(a)

    @classmethod
    def zero(cls, n):
        return cls(np.zeros((n, n)))


def as_sym(x):
    return x if isinstance(x, SymMatrix) else SymMatrix(x)


def as_spd(x, rel_tol=DEFAULT_REL_TOL):
    return x if isinstance(x, SpdMatrix) else validate_spd(x, rel_tol)


def as_direction(x):
    return x if isinstance(x, TangentDirection) else TangentDirection(np.asarray(x))


def validate_spd(m, rel_tol=DEFAULT_REL_TOL):
    """Validate raw values as a covariance matrix.

    Parameters
    ----------
    m : array_like, shape (n, n)
        Candidate matrix.
    rel_tol : float
        The smallest eigenvalue must exceed ``rel_tol`` times the largest.

    Returns
    -------
    SpdMatrix
        The symmetrized matrix ``(m + m.T) / 2`` with its spectrum cached.

    Raises
    ------
    NotSquare, NotSymmetric, NotPositiveDefinite
    """
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    a = _square(m)
    if not np.all(np.isfinite(a)):
        raise NotPositiveDefinite("matrix has non-finite entries")
    scale = np.linalg.norm(a)
    if scale > 0 and np.linalg.norm(a - a.T) > ASYMMETRY_TOL * scale:
        raise NotSymmetric(
            f"relative asymmetry {np.linalg.norm(a - a.T) / scale:.3e} exceeds {ASYMMETRY_TOL}"
        )
    s = symmetrize(a)
    w, v = eigh_desc(s)
    if w[0] <= 0 or w[-1] <= rel_tol * w[0]:
        raise NotPositiveDefinite(
            f"min eigenvalue {w[-1]:.6g} is not above {rel_tol:g} x max eigenvalue {w[0]:.6g}"
        )
    return SpdMatrix._trusted(s, (w, v))


def spd_sqrt(s):
    """The unique SPD square root."""
    s = as_spd(s)
    w = np.sqrt(s.spectrum)
    return SpdMatrix._trusted(_from_eig(w, s.basis), (w, s.basis))


def spd_inv_sqrt(s):
    """Inverse of the SPD square root."""
    s = as_spd(s)
    w = 1.0 / np.sqrt(s.spectrum)
    # ascending after inversion; flip to keep the descending layout
    return SpdMatrix._trusted(_from_eig(w, s.basis), (w[::-1], s.basis[:, ::-1]))


def sym_exp(x):
    """Matrix exponential of a symmetric matrix, ``V diag(exp(w)) V^T``."""
    x = as_sym(x)
    w = np.exp(x.eigenvalues)
    return SpdMatrix._trusted(_from_eig(w, x.eigenvectors), (w, x.eigenvectors))


def spd_log(s):
    """Principal matrix logarithm of an SPD matrix as a :class:`SymMatrix`."""
    s = as_spd(s)
    return SymMatrix(_from_eig(np.log(s.spectrum), s.basis))


def spd_inverse(s):
    s = as_spd(s)
    w = 1.0 / s.spectrum
    return SpdMatrix._trusted(_from_eig(w, s.basis), (w[::-1], s.basis[:, ::-1]))


def congruence(s, v):
    """Change of basis ``V^T S V``; the determinant scales by ``det(V)**2``."""
    s = as_spd(s)
    v = np.asarray(v, dtype=float)
    if v.shape != (s.n, s.n):
        raise DimensionMismatch(f"basis shape {v.shape} does not match n={s.n}")
    cond = np.linalg.cond(v)
    if not np.isfinite(cond) or cond * np.finfo(float).eps >= 1.0:
        raise SingularBasis(f"basis is singular (condition number {cond:.3e})")
    return SpdMatrix._trusted(v.T @ s.entries @ v)


def equalizing_basis(s1, s2):
    """Basis ``V = S2^{-1/2} S1^{1/2}`` with ``congruence(S2, V) == S1``.

    Any covariance stress ``S1 -> S2`` can be read as this passive change of
    the risk-factor basis.
    """
    s1, s2 = as_spd(s1), as_spd(s2)
    _check_same_n(s1, s2)
    return spd_inv_sqrt(s2).entries @ spd_sqrt(s1).entries


def cov_to_corr(s):
    """Split a covariance into its correlation matrix and volatilities."""
    s = as_spd(s)
    vols = np.sqrt(np.diag(s.entries))
    corr = s.entries / np.outer(vols, vols)
    corr = symmetrize(corr)
    np.fill_diagonal(corr, 1.0)
    return corr, vols

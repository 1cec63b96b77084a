"""Eigenvalue-preserving covariance paths and Rao lengths of arbitrary paths.

An isospectral path rotates the base covariance, ``R(t) S R(t)^T`` with
``R(t) = exp(tA)`` for a constant antisymmetric ``A``; it solves the Lax
equation ``dS/dt = [A, S]``. Such paths are never geodesics when the base
spectrum is non-degenerate, so their Rao length only bounds the geodesic
distance from above.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonSpdAlongPath, NotAntisymmetric
from .generators import eig_derivatives
from .spdcore import SpdMatrix, _check_same_n, as_direction, as_spd, spd_sqrt, symmetrize


def rotation(a, t):
    """``exp(tA)`` for antisymmetric ``A`` via the Hermitian matrix ``iA``."""
    h = 1j * np.asarray(a, dtype=float)
    w, v = np.linalg.eigh(h)
    # exp(tA) = exp(-it H) with H = iA
    r = (v * np.exp(-1j * t * w)) @ v.conj().T
    return r.real


def plane_generator(n, i, j):
    """Unit rotation generator in the ``(i, j)`` plane."""
    a = np.zeros((n, n))
    a[i, j], a[j, i] = 1.0, -1.0
    return a


@dataclass(frozen=True)
class IsospectralPath:
    base: SpdMatrix
    rotation_generator: np.ndarray

    def __post_init__(self):
        base = as_spd(self.base)
        a = np.array(self.rotation_generator, dtype=float)
        if a.shape != (base.n, base.n):
            raise DimensionMismatch(f"generator shape {a.shape} does not match n={base.n}")
        if np.linalg.norm(a + a.T) >= 1e-12:
            raise NotAntisymmetric("rotation generator must satisfy A^T = -A")
        a.flags.writeable = False
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "rotation_generator", a)

    def evaluate(self, t):
        return isospectral_evaluate(self, t)

    def velocity(self, t):
        """``[A, S(t)]``, the right-hand side of the Lax equation."""
        s = self.evaluate(t).entries
        a = self.rotation_generator
        return a @ s - s @ a

    def __call__(self, t):
        return self.evaluate(t)


def isospectral_evaluate(path, t):
    r = rotation(path.rotation_generator, float(t))
    s = path.base
    return SpdMatrix._trusted(symmetrize(r @ s.entries @ r.T))


def path_length(evaluator, t0, t1, steps=1000):
    """Rao length of a covariance path by the composite midpoint rule.

    The speed ``sqrt(0.5 * tr((S^-1 S')^2))`` is evaluated at each cell
    midpoint with ``S'`` from the central difference of the cell end
    points, so the error is O(h^2).

    Raises
    ------
    NonSpdAlongPath
        The evaluator returned a matrix that is not positive definite.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    ts = np.linspace(t0, t1, steps + 1)
    h = (t1 - t0) / steps
    if h == 0:
        return 0.0

    def mat(t):
        m = evaluator(t)
        return np.asarray(getattr(m, "entries", m), dtype=float)

    nodes = [mat(t) for t in ts]
    total = 0.0
    for k in range(steps):
        mid = mat(0.5 * (ts[k] + ts[k + 1]))
        try:
            chol = np.linalg.cholesky(mid)
        except np.linalg.LinAlgError:
            raise NonSpdAlongPath(f"path is not SPD at t={0.5 * (ts[k] + ts[k + 1]):g}") from None
        d = (nodes[k + 1] - nodes[k]) / h
        # tr((S^-1 D)^2) = ||L^-1 D L^-T||_F^2 for S = L L^T
        y = np.linalg.solve(chol, np.linalg.solve(chol, d).T)
        total += np.sqrt(0.5 * np.sum(y * y)) * abs(h)
    return float(total)


def geodesic_isospectral_obstruction(base, x):
    """Second derivatives at ``t=0`` of the eigenvalues along ``exp_map(base, x, t)``.

    With ``S' = S^{1/2} X S^{1/2}`` and ``S'' = S^{1/2} X^2 S^{1/2}``, in the
    eigenbasis of the base this is
    ``s_i^2 sum_k X_ik^2 + 2 sum_{k != i} X_ik^2 s_i^2 s_k^2 / (l_i - l_k)``.
    For the largest eigenvalue every term is non-negative, and peeling off
    one eigenvalue at a time shows the output vanishes only for ``X = 0``:
    no nonzero geodesic keeps a non-degenerate spectrum fixed.

    Returns values ordered like ``base.spectrum`` (descending).
    """
    base, x = as_spd(base), as_direction(x)
    _check_same_n(base, x)
    r = spd_sqrt(base).entries
    xe = x.entries
    _, second = eig_derivatives(base, r @ xe @ r, r @ xe @ xe @ r)
    return second

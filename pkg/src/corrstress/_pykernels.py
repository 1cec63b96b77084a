"""Pure numpy implementations of the hot kernels.

Same signatures as the compiled ``_ckernels`` module; used when the
extension is not built or when the python backend is forced.
"""
import numpy as np


def det(a):
    return float(np.linalg.det(a))


def sym_eigvalsh(a):
    """Ascending eigenvalues of a symmetric matrix."""
    return np.linalg.eigvalsh(a)


def whitened_log_sq(w, c):
    """Return ``(sum(log(eig)**2), min(eig))`` for ``eig = eig(w @ c @ w)``.

    The log sum is NaN when the smallest eigenvalue is not positive.
    """
    m = w @ c @ w
    m = 0.5 * (m + m.T)
    ev = np.linalg.eigvalsh(m)
    mn = float(ev[0])
    if mn <= 0.0:
        return float("nan"), mn
    return float(np.sum(np.log(ev) ** 2)), mn

"""Canonical stress directions and eigenvalue stress formulas.

Four families of traceless generators, each with a closed-form exponential:

* ``pair``: stress the correlation of two factors,
* ``diag``: move variance from one factor to another,
* ``row``: stress all correlations of one factor equally,
* ``all``: stress every correlation equally.

Generators are defined in whatever basis the covariance is expressed in;
nothing here rotates into an eigenbasis.
"""
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadGeneratorSpec,
    BadIndices,
    DegenerateSpectrum,
    NonPositiveVol,
    StressTooLarge,
)
from .spdcore import SpdMatrix, TangentDirection, as_spd, as_sym

KINDS = ("pair", "diag", "row", "all")

# Eigenvalues of S^{1/2}(I + tX)S^{1/2} with X the hollow all-ones generator
# and S diagonal agree to second order in t with lawley_stress(eigs, s) at
# s = -t**2 (established against exact eigenvalues in the test-suite).
def lawley_parameter(t):
    """Lawley stress size matching a linearized all-equal stress of size ``t``."""
    return -float(t) ** 2


@dataclass(frozen=True)
class GeneratorKind:
    name: str
    n: int
    i: int | None = None
    j: int | None = None

    def __post_init__(self):
        if self.name not in KINDS:
            raise BadGeneratorSpec(f"unknown generator kind {self.name!r}")
        if not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise BadIndices(f"dimension must be an integer >= 2, got {self.n!r}")
        if self.name in ("pair", "diag"):
            if self.i is None or self.j is None:
                raise BadIndices(f"{self.name} needs two indices")
            if self.i == self.j or not (0 <= self.i < self.n and 0 <= self.j < self.n):
                raise BadIndices(f"bad indices ({self.i}, {self.j}) for n={self.n}")
        elif self.name == "row":
            if self.i is None or not 0 <= self.i < self.n:
                raise BadIndices(f"bad row index {self.i} for n={self.n}")

    @classmethod
    def pair(cls, i, j, n):
        return cls("pair", n, i, j)

    @classmethod
    def diag(cls, i, j, n):
        return cls("diag", n, i, j)

    @classmethod
    def row(cls, i, n):
        return cls("row", n, i)

    @classmethod
    def all_equal(cls, n):
        return cls("all", n)

    @classmethod
    def parse(cls, spec, n):
        """Parse ``pair:i,j``, ``diag:i,j``, ``row:i`` or ``all``."""
        name, _, args = spec.strip().partition(":")
        name = name.lower()
        try:
            idx = [int(a) for a in args.split(",")] if args else []
        except ValueError:
            raise BadGeneratorSpec(f"bad generator indices in {spec!r}") from None
        wanted = {"pair": 2, "diag": 2, "row": 1, "all": 0}.get(name)
        if wanted is None:
            raise BadGeneratorSpec(f"unknown generator {spec!r}")
        if len(idx) != wanted:
            raise BadGeneratorSpec(f"{name} takes {wanted} indices, got {spec!r}")
        return cls(name, n, *idx)


def make_generator(kind):
    """The traceless symmetric matrix of a generator family."""
    n = kind.n
    x = np.zeros((n, n))
    if kind.name == "pair":
        x[kind.i, kind.j] = x[kind.j, kind.i] = 1.0
    elif kind.name == "diag":
        x[kind.i, kind.i] = 1.0
        x[kind.j, kind.j] = -1.0
    elif kind.name == "row":
        x[kind.i, :] = 1.0
        x[:, kind.i] = 1.0
        x[kind.i, kind.i] = 0.0
    else:
        x[:] = 1.0
        np.fill_diagonal(x, 0.0)
    return TangentDirection(x)


def closed_form_exp(kind, t):
    """``exp(t X)`` for a generator family without an eigendecomposition."""
    n, t = kind.n, float(t)
    e = np.eye(n)
    if kind.name == "pair":
        i, j = kind.i, kind.j
        e[i, i] = e[j, j] = np.cosh(t)
        e[i, j] = e[j, i] = np.sinh(t)
    elif kind.name == "diag":
        e[kind.i, kind.i] = np.exp(t)
        e[kind.j, kind.j] = np.exp(-t)
    elif kind.name == "row":
        x = make_generator(kind).entries
        m = n - 1
        r = np.sqrt(m)
        # X^2 = Z and X^k alternates between multiples of X and Z
        cosh_m1 = 2.0 * np.sinh(0.5 * r * t) ** 2
        e = e + x * (np.sinh(r * t) / r) + (x @ x) * (cosh_m1 / m)
    else:
        # X = J - I with J the rank-one matrix of ones
        e = np.exp(-t) * (e + np.full((n, n), np.expm1(n * t) / n))
    return SpdMatrix._trusted(e)


def pair_stress_diagonal_base(vols, i, j, t):
    """Pair stress of ``diag(vols**2)``; only the ``(i, j)`` block moves.

    The implied correlation between ``i`` and ``j`` becomes ``tanh(t)`` and
    both variances are inflated by ``cosh(t)``.
    """
    vols = np.asarray(vols, dtype=float).reshape(-1)
    if np.any(~(vols > 0)):
        raise NonPositiveVol("all volatilities must be positive")
    GeneratorKind.pair(i, j, len(vols))
    s = np.diag(vols ** 2)
    s[i, i] *= np.cosh(t)
    s[j, j] *= np.cosh(t)
    s[i, j] = s[j, i] = vols[i] * vols[j] * np.sinh(t)
    return SpdMatrix._trusted(s)


def _require_gaps(eigs, rel_gap):
    eigs = np.asarray(eigs, dtype=float)
    gaps = np.abs(eigs[:, None] - eigs[None, :])
    np.fill_diagonal(gaps, np.inf)
    if len(eigs) > 1 and gaps.min() <= rel_gap * np.abs(eigs).max():
        raise DegenerateSpectrum(
            f"eigenvalue gap {gaps.min():.3e} below {rel_gap:g} x max eigenvalue"
        )


def lawley_stress(eigs, s):
    """One-parameter trace-preserving eigenvalue stress.

    ``lam_r = l_r * (1 - s * sum_{i != r} l_i / (l_r - l_i))``. The pairwise
    terms cancel antisymmetrically, so the sum of eigenvalues is preserved.

    Raises
    ------
    DegenerateSpectrum
        Eigenvalues closer than 1e-10 relative.
    StressTooLarge
        Some stressed eigenvalue is not positive.
    """
    l = np.asarray(eigs, dtype=float).reshape(-1)
    if np.any(~(l > 0)):
        raise ValueError("eigenvalues must be positive")
    _require_gaps(l, 1e-10)
    diff = l[:, None] - l[None, :]
    np.fill_diagonal(diff, 1.0)
    # c[r, i] = s l_r l_i / (l_r - l_i) = -c[i, r]
    c = float(s) * np.outer(l, l) / diff
    np.fill_diagonal(c, 0.0)
    c = 0.5 * (c - c.T)
    lam = l - c.sum(axis=1)
    if np.any(lam <= 0):
        raise StressTooLarge(f"stress s={s} gives non-positive eigenvalues {lam}")
    return lam


def eig_derivatives(base, path_first, path_second):
    """First and second derivatives at ``t=0`` of the eigenvalues of ``A(t)``.

    Parameters
    ----------
    base : SpdMatrix
        ``A(0)``, with pairwise distinct eigenvalues.
    path_first, path_second : array_like
        ``A'(0)`` and ``A''(0)``.

    Returns
    -------
    first, second : ndarray
        Ordered like ``base.spectrum`` (descending). The second derivative
        includes the repulsion term ``2 sum_j |u_j^T A' u_i|^2 / (l_i - l_j)``.
    """
    base = as_spd(base)
    lam, u = base.spectrum, base.basis
    _require_gaps(lam, 1e-8)
    b1 = u.T @ as_sym(path_first).entries @ u
    b2 = u.T @ as_sym(path_second).entries @ u
    diff = lam[:, None] - lam[None, :]
    np.fill_diagonal(diff, np.inf)
    first = np.diag(b1).copy()
    second = np.diag(b2) + 2.0 * np.sum(b1 ** 2 / diff, axis=1)
    return first, second


def parse_generator(spec, n, allow_trace=False):
    """Resolve a CLI generator spec into a :class:`TangentDirection`.

    ``file:<path>`` loads a JSON symmetric matrix; it must be traceless
    unless ``allow_trace`` is set.
    """
    if spec.startswith("file:"):
        from .io import load_matrix

        entries = load_matrix(spec[5:])
        if entries.shape != (n, n):
            raise BadGeneratorSpec(f"generator file is {entries.shape}, base has n={n}")
        return TangentDirection(entries, allow_trace=allow_trace)
    return make_generator(GeneratorKind.parse(spec, n))

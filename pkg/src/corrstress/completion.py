"""Most plausible completion of a partially specified stressed covariance.

Given a base covariance and some pinned entries of the stressed target,
the remaining (free) entries are chosen to minimize the squared Rao
distance to the base, keeping the determinant fixed by default.

The determinant constraint is eliminated rather than penalized whenever a
diagonal entry is free: the determinant is affine in any single diagonal
entry, ``det = a + b * c_kk`` with ``b`` the complementary principal minor,
so that entry is solved for exactly at every trial point. Without a free
diagonal entry, a quadratic log-determinant penalty with a geometrically
increasing weight is used instead.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .errors import BadIndices, Infeasible, MultipleMinimaWarning, NotConverged
from .fisher_rao import log_map, rao_distance
from .spdcore import SpdMatrix, TangentDirection, as_spd, spd_inv_sqrt, validate_spd

PENALTY = 1e6
DET_RTOL = 1e-8
DISAGREE_RTOL = 1e-3


@dataclass(frozen=True)
class CompletionSpec:
    """Base covariance plus the pinned upper-triangle entries of the target."""

    base: SpdMatrix
    pinned: dict
    preserve_determinant: bool = True
    free: tuple = field(init=False)

    def __post_init__(self):
        base = as_spd(self.base)
        n = base.n
        pinned = {}
        for (i, j), v in dict(self.pinned).items():
            i, j = int(i), int(j)
            if i > j:
                i, j = j, i
            if not (0 <= i < n and 0 <= j < n):
                raise BadIndices(f"pinned position ({i}, {j}) out of range for n={n}")
            if (i, j) in pinned:
                raise BadIndices(f"position ({i}, {j}) pinned twice")
            if i == j and not v > 0:
                raise ValueError(f"pinned variance at ({i}, {i}) must be positive")
            pinned[(i, j)] = float(v)
        free = tuple((i, j) for i in range(n) for j in range(i, n) if (i, j) not in pinned)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "pinned", pinned)
        object.__setattr__(self, "free", free)

    @property
    def n(self):
        return self.base.n

    def assemble(self, free_values):
        """Candidate target with pinned entries and the given free values."""
        c = self.base.entries.copy()
        for (i, j), v in self.pinned.items():
            c[i, j] = c[j, i] = v
        for (i, j), v in zip(self.free, np.asarray(free_values, dtype=float)):
            c[i, j] = c[j, i] = v
        return c

    def free_start(self):
        """Unstressed (base) values of the free entries."""
        return np.array([self.base.entries[i, j] for i, j in self.free])


@dataclass(frozen=True)
class CompletionResult:
    target: SpdMatrix
    direction: TangentDirection
    distance: float
    plausibility: float
    iterations: int
    evaluations: int
    converged: bool
    restart_values: tuple = ()
    history: tuple = ()


@dataclass
class CompletionOptions:
    restarts: int = 8
    seed: int = 42
    fatol: float = 1e-12
    xrtol: float = 1e-10
    max_evals: int = 50_000
    spread: float = 0.2
    eliminate: tuple | None = None
    penalty_rounds: int = 12


class _Problem:
    """Reduced objective over the free entries not eliminated by the constraint."""

    def __init__(self, spec, opts):
        self.spec = spec
        self.white = spd_inv_sqrt(spec.base).entries
        self.det0 = spec.base.det
        self.logdet0 = spec.base.logdet
        free = list(spec.free)
        self.elim = None
        if spec.preserve_determinant:
            diag_free = [p for p in free if p[0] == p[1]]
            if opts.eliminate is not None:
                if tuple(opts.eliminate) not in diag_free:
                    raise BadIndices(f"cannot eliminate {opts.eliminate}: not a free diagonal")
                self.elim = tuple(opts.eliminate)
            elif diag_free:
                # largest base variance, lowest index on ties
                self.elim = max(diag_free, key=lambda p: (spec.base.entries[p], -p[0]))
        self.vars = [p for p in free if p != self.elim]
        self.scale = np.array([np.sqrt(spec.base.entries[i, i] * spec.base.entries[j, j])
                               for i, j in self.vars])
        self.x0 = np.array([spec.base.entries[p] for p in self.vars])
        self.mu = 0.0

    def candidate(self, u):
        """Target for normalized reduced variables ``u`` and a feasibility flag."""
        c = self.spec.base.entries.copy()
        for (i, j), v in self.spec.pinned.items():
            c[i, j] = c[j, i] = v
        vals = self.x0 + u * self.scale
        for (i, j), v in zip(self.vars, vals):
            c[i, j] = c[j, i] = v
        if self.elim is not None:
            k = self.elim[0]
            minor = np.delete(np.delete(c, k, 0), k, 1)
            b = kernels.det(minor)
            c[k, k] = 0.0
            a = kernels.det(c)
            if not b > 0:
                return c, False
            c[k, k] = (self.det0 - a) / b
        return c, True

    def value(self, u):
        c, ok = self.candidate(u)
        sq, mn = kernels.whitened_log_sq(self.white, c)
        if not ok or not mn > 0:
            return PENALTY + PENALTY * abs(mn if np.isfinite(mn) else 1.0)
        f = 0.5 * sq
        if self.mu:
            f += self.mu * (kernels_logdet(c) - self.logdet0) ** 2
        return f


def kernels_logdet(c):
    d = kernels.det(c)
    return np.log(d) if d > 0 else -np.inf


def objective(spec, free_values, constrained=False):
    """Squared Rao distance from the base to the assembled candidate.

    ``free_values`` follow ``spec.free``. With ``constrained=True`` the
    designated diagonal entry is re-solved from the determinant constraint
    and its supplied value ignored. Non-SPD candidates score
    ``1e6 * (1 + |min eigenvalue|)`` of the whitened candidate, above any
    feasible value.
    """
    if not isinstance(spec, CompletionSpec):
        spec = CompletionSpec(**spec)
    free_values = np.asarray(free_values, dtype=float)
    if constrained and spec.preserve_determinant:
        prob = _Problem(spec, CompletionOptions())
        lookup = dict(zip(spec.free, free_values))
        u = np.array([(lookup[p] - x0) / s for p, x0, s in zip(prob.vars, prob.x0, prob.scale)])
        return prob.value(u)
    c = spec.assemble(free_values)
    sq, mn = kernels.whitened_log_sq(spd_inv_sqrt(spec.base).entries, c)
    if not mn > 0:
        return PENALTY + PENALTY * abs(mn)
    return 0.5 * sq


def _start_points(prob, opts):
    m = len(prob.vars)
    starts = [np.zeros(m)]
    for k in range(1, opts.restarts):
        rng = np.random.default_rng([opts.seed, k])
        starts.append(rng.normal(0.0, opts.spread, m))
    return starts


def _nelder_mead(prob, u0, opts, history):
    m = len(u0)
    step = 0.05
    simplex = np.vstack([u0] + [u0 + step * np.eye(m)[i] for i in range(m)])

    def f(u):
        v = prob.value(u)
        # running best over every restart so far
        history.append(min(v, history[-1]) if history else v)
        return v

    res = minimize(
        f,
        u0,
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "xatol": opts.xrtol,
            "fatol": opts.fatol,
            "maxfev": opts.max_evals,
            "maxiter": opts.max_evals,
        },
    )
    hit_budget = res.nfev >= opts.max_evals or res.nit >= opts.max_evals
    return res, not hit_budget


def _solve_restart(prob, u0, opts, history):
    if prob.elim is None and prob.spec.preserve_determinant:
        # penalty continuation on log det
        u = u0
        prob.mu = 1.0
        nit = nfev = 0
        ok = True
        for _ in range(opts.penalty_rounds):
            res, ok = _nelder_mead(prob, u, opts, history)
            u, nit, nfev = res.x, nit + res.nit, nfev + res.nfev
            c, _ = prob.candidate(u)
            if abs(kernels_logdet(c) - prob.logdet0) < 0.1 * DET_RTOL:
                break
            prob.mu *= 10.0
        prob.mu = 0.0
        return u, nit, nfev, ok
    res, ok = _nelder_mead(prob, u0, opts, history)
    return res.x, res.nit, res.nfev, ok


def _fully_pinned(spec):
    c = spec.assemble([])
    try:
        target = validate_spd(c)
    except Exception as exc:
        raise Infeasible(f"fully pinned target is not SPD: {exc}") from None
    if spec.preserve_determinant and abs(target.logdet - spec.base.logdet) > DET_RTOL:
        raise Infeasible("fully pinned target changes the determinant")
    direction = log_map(spec.base, target, allow_covariance=not spec.preserve_determinant)
    d = rao_distance(spec.base, target)
    return CompletionResult(target, direction, d, float(np.exp(-d)), 0, 0, True, (d * d,), ())


def complete(spec, options=None, **kwargs):
    """Most plausible completion of ``spec``.

    Runs a multi-start Nelder-Mead search over the free entries; restart 0
    starts at the unstressed values and the others at seeded perturbations
    of them. The best restart wins, ties going to the lowest index.

    Parameters
    ----------
    spec : CompletionSpec or dict
        Completion problem; a dict is passed to :class:`CompletionSpec`.
    options : CompletionOptions, optional
        Optimizer settings; keyword arguments override individual fields.

    Returns
    -------
    CompletionResult

    Raises
    ------
    Infeasible
        No restart found an SPD target satisfying the determinant constraint.
    NotConverged
        The best restart exhausted its evaluation budget; ``exc.result``
        holds the partial result with ``converged=False``.

    Warns
    -----
    MultipleMinimaWarning
        Converged restarts disagree by more than 1e-3 relative.
    """
    if not isinstance(spec, CompletionSpec):
        spec = CompletionSpec(**spec)
    opts = options or CompletionOptions()
    if kwargs:
        opts = CompletionOptions(**{**opts.__dict__, **kwargs})
    if not spec.free:
        return _fully_pinned(spec)

    prob = _Problem(spec, opts)
    runs = []
    history = []
    if not prob.vars:
        # only the eliminated entry is free: the constraint fixes it
        runs.append((np.zeros(0), 0, 1, True))
    else:
        for u0 in _start_points(prob, opts):
            runs.append(_solve_restart(prob, u0, opts, history))

    scored = []
    for idx, (u, nit, nfev, ok) in enumerate(runs):
        c, feasible = prob.candidate(u)
        val = prob.value(u)
        feasible = feasible and val < PENALTY
        if feasible and prob.spec.preserve_determinant:
            feasible = abs(kernels_logdet(c) - prob.logdet0) <= DET_RTOL
        scored.append((val if feasible else np.inf, idx, c, nit, nfev, ok))
    feasible_runs = [s for s in scored if np.isfinite(s[0])]
    if not feasible_runs:
        raise Infeasible("no SPD completion satisfying the constraints was found")
    val, idx, c, nit, nfev, ok = min(feasible_runs, key=lambda s: (s[0], s[1]))

    converged_runs = [s for s in feasible_runs if s[5]]
    if len(converged_runs) > 1:
        best_vals = np.array([prob.x0 + runs[s[1]][0] * prob.scale for s in converged_runs])
        ref = prob.x0 + runs[idx][0] * prob.scale
        denom = np.maximum(np.abs(ref), prob.scale)
        if np.max(np.abs(best_vals - ref) / denom) > DISAGREE_RTOL:
            warnings.warn(
                "completion restarts disagree beyond 1e-3 relative; reporting the best",
                MultipleMinimaWarning,
                stacklevel=2,
            )

    target = SpdMatrix._trusted(c)
    direction = log_map(spec.base, target, allow_covariance=not spec.preserve_determinant)
    d = rao_distance(spec.base, target)
    result = CompletionResult(
        target=target,
        direction=direction,
        distance=d,
        plausibility=float(np.exp(-d)),
        iterations=int(sum(r[1] for r in runs)),
        evaluations=int(sum(r[2] for r in runs)),
        converged=bool(ok),
        restart_values=tuple(float(s[0]) for s in scored),
        history=tuple(history),
    )
    if not ok:
        raise NotConverged("best restart hit the evaluation budget", result)
    return result

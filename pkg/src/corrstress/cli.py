"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 not SPD or dimension mismatch,
4 bad generator spec, 5 direction not traceless (or determinants differ),
6 infeasible completion, 7 completion not converged.
"""
import argparse
import json
import sys

import numpy as np

from . import io as mio
from .completion import CompletionSpec, complete
from .errors import (
    BadGeneratorSpec,
    BadIndices,
    DeterminantMismatch,
    DimensionMismatch,
    Infeasible,
    MatrixFormatError,
    NonSpdAlongPath,
    NotConverged,
    NotPositiveDefinite,
    NotSquare,
    NotSymmetric,
    NotTraceless,
)
from .fisher_rao import StressPath, log_map, mahalanobis, rao_distance
from .generators import parse_generator
from .isospectral import IsospectralPath, path_length, plane_generator
from .spdcore import TangentDirection, cov_to_corr, validate_spd, DEFAULT_REL_TOL


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _g(v, digits=6):
    return f"{v:.{digits}g}"


def _load_spd(path, args):
    try:
        raw = mio.load_matrix(path) * args.input_scale
        return validate_spd(raw, args.tol)
    except (MatrixFormatError, NotSquare, NotSymmetric) as exc:
        raise CliError(2, str(exc)) from None
    except NotPositiveDefinite as exc:
        raise CliError(3, f"{path}: {exc}") from None


def _matrix_lines(a, scale):
    a = np.asarray(a) / scale
    return ["  " + "  ".join(f"{v:>12.6g}" for v in row) for row in a]


def _emit(args, human_lines, obj):
    if args.json:
        print(json.dumps(obj))
    else:
        print("\n".join(human_lines))


def _same_n(a, b):
    if a.n != b.n:
        raise CliError(3, f"dimension mismatch: {a.n} vs {b.n}")


def _direction(args, base):
    try:
        x = parse_generator(args.generator, base.n, allow_trace=True)
    except (BadGeneratorSpec, BadIndices) as exc:
        raise CliError(4, str(exc)) from None
    except (MatrixFormatError, NotSquare) as exc:
        raise CliError(4, f"generator file: {exc}") from None
    if not x.is_traceless:
        if args.project_traceless:
            x = TangentDirection.projected(x.entries)
        elif not args.allow_covariance:
            raise CliError(5, f"generator has trace {x.trace:.6g}; pass --allow-covariance "
                              "or --project-traceless")
    return x


def cmd_validate(args):
    s = _load_spd(args.file, args)
    corr, vols = cov_to_corr(s)
    sc = args.scale
    if args.json:
        _emit(args, [], {
            "n": s.n, "spd": True,
            "eigenvalues": (s.spectrum / sc).tolist(),
            "det": s.det / sc ** s.n,
            "vols": vols.tolist(),
            "correlation": corr.tolist(),
        })
        return 0
    lines = [f"SPD: yes (n={s.n})",
             "eigenvalues: " + " ".join(_g(v) for v in s.spectrum / sc),
             f"det: {_g(s.det / sc ** s.n)}",
             "vols: " + " ".join(_g(v) for v in vols),
             "correlation:"] + _matrix_lines(corr, 1.0)
    _emit(args, lines, None)
    return 0


def cmd_distance(args):
    s1, s2 = _load_spd(args.file1, args), _load_spd(args.file2, args)
    _same_n(s1, s2)
    d = rao_distance(s1, s2)
    w = s1.basis / np.sqrt(s1.spectrum)
    lam = np.sort(np.linalg.eigvalsh(w.T @ s2.entries @ w))[::-1]
    contrib = 0.5 * np.log(lam) ** 2
    obj = {"distance": d, "distance_sq": d * d, "plausibility": float(np.exp(-d)),
           "eigenvalues": lam.tolist(), "log_contributions": contrib.tolist()}
    lines = [f"distance: {_g(d)}", f"distance^2: {_g(d * d)}",
             f"plausibility: {_g(np.exp(-d))}",
             "eigenvalues of S1^-1 S2: " + " ".join(_g(v) for v in lam),
             "0.5*log(lambda)^2: " + " ".join(_g(v) for v in contrib)]
    _emit(args, lines, obj)
    return 0


def cmd_logmap(args):
    s1, s2 = _load_spd(args.file1, args), _load_spd(args.file2, args)
    _same_n(s1, s2)
    try:
        x = log_map(s1, s2, allow_covariance=args.allow_covariance)
    except DeterminantMismatch as exc:
        raise CliError(5, str(exc)) from None
    sq = float(np.sum(x.eigenvalues ** 2))
    d = np.sqrt(0.5 * sq)
    obj = {"n": x.n, "entries": x.entries.tolist(), "trace": x.trace,
           "sum_sq_eigenvalues": sq, "distance": d}
    lines = ["X:"] + _matrix_lines(x.entries, 1.0) + [
        f"trace: {_g(x.trace)}", f"sum of squared eigenvalues: {_g(sq)}", f"distance: {_g(d)}"]
    _emit(args, lines, obj)
    return 0


def _write_matrix(args, a, src_path, report):
    """Matrix to ``-o`` (report on stdout) or to stdout (report on stderr)."""
    sc = args.scale
    if args.json:
        obj = mio.matrix_to_obj(a, sc)
        obj.update(report)
        if args.output:
            mio.save_matrix(args.output, a, sc)
        print(json.dumps(obj))
        return
    lines = [f"{k}: {_g(v) if isinstance(v, float) else v}" for k, v in report.items()]
    if args.output:
        mio.save_matrix(args.output, a, sc)
        print("\n".join(lines))
    else:
        fmt = "csv" if src_path.lower().endswith((".csv", ".txt")) else "json"
        sys.stdout.write(mio.dumps_matrix(a, fmt, sc))
        if fmt == "json":
            sys.stdout.write("\n")
        print("\n".join(lines), file=sys.stderr)


def cmd_stress(args):
    base = _load_spd(args.file, args)
    x = _direction(args, base)
    path = StressPath(base, x)
    out = path.evaluate(args.t)
    d = path.distance(args.t)
    _write_matrix(args, out.entries, args.file,
                  {"distance": d, "plausibility": float(np.exp(-d))})
    return 0


def sweep_rows(path, t_max, steps):
    """Sweep table rows ``(t, distance, plausibility, eigenvalues, det)``."""
    ts = [0.0] if t_max == 0 else np.linspace(0.0, t_max, steps + 1)
    return [path.sample(t) for t in ts]


def cmd_sweep(args):
    if args.steps < 2:
        raise CliError(2, "--steps must be >= 2")
    base = _load_spd(args.file, args)
    x = _direction(args, base)
    rows = sweep_rows(StressPath(base, x), args.t_max, args.steps)
    sc, n = args.scale, base.n
    if args.json:
        print(json.dumps([{"t": r.t, "distance": r.distance, "plausibility": r.plausibility,
                           "eigenvalues": (r.eigenvalues / sc).tolist(), "det": r.det / sc ** n}
                          for r in rows]))
        return 0
    header = ["t", "distance", "plausibility"] + [f"eig{k + 1}" for k in range(n)] + ["det"]
    print(",".join(header))
    for r in rows:
        vals = [r.t, r.distance, r.plausibility, *(r.eigenvalues / sc), r.det / sc ** n]
        print(",".join(f"{v:.9g}" for v in vals))
    return 0


def cmd_complete(args):
    try:
        kw = mio.load_completion_spec(args.spec)
    except MatrixFormatError as exc:
        raise CliError(2, str(exc)) from None
    try:
        base = validate_spd(kw.pop("base") * args.input_scale, args.tol)
    except (NotSquare, NotSymmetric) as exc:
        raise CliError(2, str(exc)) from None
    except NotPositiveDefinite as exc:
        raise CliError(3, f"base: {exc}") from None
    opts = {k: kw.pop(k) for k in ("restarts", "seed") if k in kw}
    if args.restarts is not None:
        opts["restarts"] = args.restarts
    if args.seed is not None:
        opts["seed"] = args.seed
    try:
        spec = CompletionSpec(base, **kw)
    except (BadIndices, ValueError) as exc:
        raise CliError(2, str(exc)) from None
    code = 0
    try:
        res = complete(spec, **opts)
    except Infeasible as exc:
        raise CliError(6, str(exc)) from None
    except NotConverged as exc:
        res, code = exc.result, 7
        print("warning: optimizer did not converge; writing best partial result",
              file=sys.stderr)
    report = {"distance": res.distance, "distance_sq": res.distance ** 2,
              "sum_sq_eigenvalues": 2 * res.distance ** 2,
              "plausibility": res.plausibility, "converged": res.converged,
              "evaluations": res.evaluations}
    if args.json:
        report["direction"] = res.direction.entries.tolist()
        _write_matrix(args, res.target.entries, args.output or "", report)
        return code
    if args.output:
        mio.save_matrix(args.output, res.target.entries, args.scale)
    lines = ["target:"] + _matrix_lines(res.target.entries, args.scale)
    lines += ["direction X:"] + _matrix_lines(res.direction.entries, 1.0)
    lines += [f"{k}: {_g(v) if isinstance(v, float) else v}" for k, v in report.items()]
    print("\n".join(lines))
    return code


def cmd_mahalanobis(args):
    s = _load_spd(args.sigma, args)
    try:
        x = mio.load_vector(args.vector)
    except MatrixFormatError as exc:
        raise CliError(2, str(exc)) from None
    try:
        d = mahalanobis(x, s)
    except DimensionMismatch as exc:
        raise CliError(3, str(exc)) from None
    _emit(args, [f"distance: {_g(d)}", f"distance^2: {_g(d * d)}"],
          {"distance": d, "distance_sq": d * d})
    return 0


def cmd_isospectral(args):
    base = _load_spd(args.file, args)
    if args.rotation:
        try:
            a = mio.load_matrix(args.rotation)
        except MatrixFormatError as exc:
            raise CliError(2, str(exc)) from None
    else:
        try:
            i, j = (int(v) for v in args.plane.split(","))
            if i == j or not (0 <= i < base.n and 0 <= j < base.n):
                raise ValueError
        except ValueError:
            raise CliError(4, f"bad --plane {args.plane!r}") from None
        a = plane_generator(base.n, i, j)
    try:
        path = IsospectralPath(base, a)
        end = path.evaluate(args.t)
        length = path_length(path, 0.0, args.t, args.steps)
    except (DimensionMismatch, NonSpdAlongPath) as exc:
        raise CliError(3, str(exc)) from None
    except ValueError as exc:
        raise CliError(4, str(exc)) from None
    d = rao_distance(base, end)
    obj = mio.matrix_to_obj(end.entries, args.scale)
    obj.update({"path_length": length, "rao_distance": d,
                "eigenvalues": (end.spectrum / args.scale).tolist()})
    lines = ["S(t):"] + _matrix_lines(end.entries, args.scale) + [
        "eigenvalues: " + " ".join(_g(v) for v in end.spectrum / args.scale),
        f"path length: {_g(length)}", f"rao distance of endpoints: {_g(d)}"]
    _emit(args, lines, obj)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSON output")
    common.add_argument("--scale", type=float, default=1.0,
                        help="divide matrix entries by this on output (e.g. 1e-4)")
    common.add_argument("--input-scale", type=float, default=1.0,
                        help="multiply loaded matrix entries by this")
    common.add_argument("--tol", type=float, default=DEFAULT_REL_TOL,
                        help="relative SPD tolerance (min eig > tol * max eig)")

    gen = argparse.ArgumentParser(add_help=False)
    gen.add_argument("--generator", "-g", required=True,
                     help="pair:i,j | diag:i,j | row:i | all | file:X.json")
    gen.add_argument("--allow-covariance", action="store_true",
                     help="accept a generator with nonzero trace")
    gen.add_argument("--project-traceless", action="store_true",
                     help="remove the trace of a file generator (rounded inputs)")

    p = argparse.ArgumentParser(prog="corrstress", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("validate", parents=[common], help="check a covariance file")
    q.add_argument("file")
    q.set_defaults(func=cmd_validate)

    q = sub.add_parser("distance", parents=[common], help="Rao distance and plausibility")
    q.add_argument("file1")
    q.add_argument("file2")
    q.set_defaults(func=cmd_distance)

    q = sub.add_parser("logmap", parents=[common], help="direction X joining two covariances")
    q.add_argument("file1")
    q.add_argument("file2")
    q.add_argument("--allow-covariance", action="store_true")
    q.set_defaults(func=cmd_logmap)

    q = sub.add_parser("stress", parents=[common, gen], help="apply a stress of size t")
    q.add_argument("file")
    q.add_argument("--t", type=float, required=True)
    q.add_argument("--output", "-o")
    q.set_defaults(func=cmd_stress)

    q = sub.add_parser("sweep", parents=[common, gen], help="CSV table along a stress path")
    q.add_argument("file")
    q.add_argument("--t-max", type=float, required=True)
    q.add_argument("--steps", type=int, default=100)
    q.set_defaults(func=cmd_sweep)

    q = sub.add_parser("complete", parents=[common], help="most plausible completion")
    q.add_argument("spec")
    q.add_argument("--output", "-o")
    q.add_argument("--restarts", type=int)
    q.add_argument("--seed", type=int)
    q.set_defaults(func=cmd_complete)

    q = sub.add_parser("mahalanobis", parents=[common], help="Mahalanobis distance of a move")
    q.add_argument("sigma")
    q.add_argument("vector")
    q.set_defaults(func=cmd_mahalanobis)

    q = sub.add_parser("isospectral", parents=[common], help="rotation path demo")
    q.add_argument("file")
    grp = q.add_mutually_exclusive_group(required=True)
    grp.add_argument("--rotation", help="JSON antisymmetric generator")
    grp.add_argument("--plane", help="i,j: unit rotation in that plane")
    q.add_argument("--t", type=float, required=True)
    q.add_argument("--steps", type=int, default=1000)
    q.set_defaults(func=cmd_isospectral)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NotTraceless as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())

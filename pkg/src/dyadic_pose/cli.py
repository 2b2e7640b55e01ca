"""Command-line front door: generate, encode, solve, verify, stability."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from .encoding import PixelGrid, encode_pixel
from .errors import DyadicError, SolverFailure
from .padic import to_digit_string, valuation_of_int
from .pose import POINTS, SOLVERS, Correspondence, EssentialCandidate
from .pose.matrix3 import det3, trace_condition
from .scene import gen_scene
from . import stability

PRECISION_ENV = "DYADIC_POSE_PRECISION"


class InputError(Exception):
    """Malformed user input (exit status 2)."""


def default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV, "32")
    try:
        N = int(raw)
    except ValueError:
        raise InputError(f"{PRECISION_ENV}={raw!r} is not an integer") from None
    if N < 1:
        raise InputError(f"{PRECISION_ENV} must be positive")
    return N


def _open_in(path: str):
    return sys.stdin if path == "-" else open(path, encoding="utf-8")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _triple(obj, key: str, lineno: int) -> list[int]:
    v = obj.get(key)
    if not (isinstance(v, list) and len(v) == 3 and all(isinstance(c, int) and not isinstance(c, bool) for c in v)):
        raise InputError(f"line {lineno}: {key!r} must be a list of 3 integers")
    return v


def read_correspondences(path: str) -> list[tuple[list[int], list[int]]]:
    pairs = []
    with _open_in(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"line {lineno}: {exc.msg}") from None
            if not isinstance(obj, dict):
                raise InputError(f"line {lineno}: expected an object with 'u' and 'v'")
            pairs.append((_triple(obj, "u", lineno), _triple(obj, "v", lineno)))
    return pairs


def to_correspondences(pairs, N: int) -> list[Correspondence]:
    out = []
    for k, (u, v) in enumerate(pairs, 1):
        try:
            out.append(Correspondence.from_ints(u, v, N))
        except ValueError as exc:
            raise InputError(f"correspondence {k}: {exc}") from None
    return out


def _take(pairs, method: str):
    k = POINTS[method]
    if len(pairs) < k:
        raise InputError(f"{method} needs {k} correspondences, file has {len(pairs)}")
    return pairs[:k]


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def candidate_record(c: EssentialCandidate) -> dict:
    rec = c.to_json()
    rec["extra"] = {k: _jsonable(v) for k, v in c.extra.items()}
    return rec


# --------------------------------------------------------------- subcommands


def cmd_generate(args) -> int:
    seed = args.seed
    scene = gen_scene(seed, n_points=args.points, bound=args.bound)
    if args.require:
        N = args.precision or default_precision()
        k = POINTS[args.require]
        for seed in range(args.seed, args.seed + args.attempts):
            scene = gen_scene(seed, n_points=max(args.points, k), bound=args.bound)
            try:
                SOLVERS[args.require](scene.corrs(N, k), N)
                break
            except SolverFailure:
                continue
        else:
            print(f"no seed in [{args.seed}, {args.seed + args.attempts}) solves with {args.require}", file=sys.stderr)
            return 1
        print(f"seed: {seed}", file=sys.stderr)
    _write(args.output, "".join(line + "\n" for line in scene.correspondence_lines()))
    if args.truth:
        Path(args.truth).write_text(json.dumps(scene.ground_truth_json(), indent=2) + "\n", encoding="utf-8")
    return 0


def cmd_encode(args) -> int:
    try:
        grid = PixelGrid.parse(args.grid)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    lines = []
    with _open_in(args.input) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            parts = line.split()
            try:
                x, y = (int(p) for p in parts)
            except ValueError:
                raise InputError(f"line {lineno}: expected two integers 'x y'") from None
            try:
                pt = encode_pixel(x, y, grid)
            except DyadicError as exc:
                raise InputError(f"line {lineno}: {exc}") from None
            lines.append(f"{to_digit_string(pt.r)} {to_digit_string(pt.s)}\n")
    _write(args.output, "".join(lines))
    return 0


def _format_candidate(k: int, c: EssentialCandidate) -> list[str]:
    out = [f"candidate {k}: seed {list(c.seed)}"]
    out.append(f"  E mod 2^{c.precision}:")
    out += [f"    {row}" for row in c.residues()]
    if c.minor:
        (r0, r1), (c0, c1) = c.minor
        out.append(f"  rank-2 minor: rows ({r0},{r1}) cols ({c0},{c1})")
    out.append(f"iterations: {c.iterations}")
    return out


def cmd_solve(args) -> int:
    N = args.precision or default_precision()
    pairs = _take(read_correspondences(args.corrs), args.method)
    corrs = to_correspondences(pairs, N)
    result = SOLVERS[args.method](corrs, N)
    cands = result if isinstance(result, list) else [result]
    doc = {"method": args.method, "precision": N, "candidates": [candidate_record(c) for c in cands]}
    if args.output:
        _write(args.output, json.dumps(doc, indent=2) + "\n")
    if args.json:
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
        return 0
    print(f"method: {args.method}  precision: {N}  candidates: {len(cands)}")
    for k, c in enumerate(cands):
        print("\n".join(_format_candidate(k, c)))
    return 0


def _valuation_line(label: str, value: int, N: int) -> tuple[str, bool]:
    v = valuation_of_int(value, 2, N)
    ok = v >= N
    return f"{label}: valuation {'≥ ' + str(N) if ok else v}", ok


def verify_candidate(rec: dict, pairs) -> tuple[list[str], bool]:
    try:
        N = int(rec["precision"])
        E = [[int(v) for v in row] for row in rec["E"]]
        method = rec.get("method", "")
    except (KeyError, TypeError, ValueError):
        raise InputError("candidate needs integer 'precision' and a 3x3 'E'") from None
    if len(E) != 3 or any(len(r) != 3 for r in E):
        raise InputError("candidate 'E' must be 3x3")
    mod = 1 << N
    lines, ok = [], True
    for k, (u, v) in enumerate(pairs):
        r = sum(u[i] * E[i][j] * v[j] for i in range(3) for j in range(3)) % mod
        line, good = _valuation_line(f"epipolar {k}", r, N)
        lines.append(line)
        ok &= good
    line, good = _valuation_line("det", det3(E) % mod, N)
    lines.append(line)
    ok &= good
    if method == "fivept":
        for k, t in enumerate(trace_condition(E)):
            line, good = _valuation_line(f"trace {k}", t % mod, N)
            lines.append(line)
            ok &= good
    return lines, ok


def cmd_verify(args) -> int:
    try:
        with _open_in(args.candidates) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"candidate file: {exc.msg}") from None
    records = doc.get("candidates", [doc]) if isinstance(doc, dict) else doc
    if not isinstance(records, list) or not records:
        raise InputError("candidate file holds no candidates")
    pairs = read_correspondences(args.corrs)
    all_ok = True
    for k, rec in enumerate(records):
        method = rec.get("method")
        count = {"eightpt": 8, "sevenpt": 7, "fivept": 5}.get(method, len(pairs))
        if len(pairs) < count:
            raise InputError(f"candidate {k} needs {count} correspondences, file has {len(pairs)}")
        lines, ok = verify_candidate(rec, pairs[:count])
        print(f"candidate {k} ({method}, precision {rec['precision']}): {'ok' if ok else 'FAILED'}")
        for line in lines:
            print(f"  {line}")
        all_ok &= ok
    if not all_ok:
        print("VerificationFailed", file=sys.stderr)
        return 1
    return 0


def cmd_stability(args) -> int:
    N = args.precision or default_precision()
    methods = list(POINTS) if args.method == "all" else [args.method]
    worst = None
    found_any = False
    for method in methods:
        report = None
        for seed in range(args.seed, args.seed + args.attempts):
            scene = gen_scene(seed, n_points=8, bound=args.bound)
            if args.target == "coefficients" and method != "8pt":
                report = stability.run_coefficients(scene, method, N, args.guard, seed=args.noise_seed)
            else:
                report = stability.run_matrix(scene, method, N, args.guard, seed=args.noise_seed)
            if report.status == "ok":
                break
        if report is None or report.status != "ok":
            print(f"{method}: no solvable scene in {args.attempts} seeds")
            continue
        found_any = True
        print(f"{report.line()}  (scene seed {seed}, working precision {report.working_precision})")
        if not report.stable:
            worst = 0
        digit = report.first_divergent
        if digit is not None and (worst is None or digit < worst):
            worst = digit
    if not found_any:
        print("NoSolvableScene", file=sys.stderr)
        return 1
    if worst is None or worst >= N:
        print(f"first divergent digit: ≥ {N}")
        return 0
    print(f"first divergent digit: {worst}")
    return 1


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dyadic-pose", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="synthetic scene to correspondence + ground-truth files")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--points", type=int, default=8)
    g.add_argument("--bound", type=int, default=64, help="|coordinate| bound for 3D points")
    g.add_argument("-o", "--output", default="-", help="correspondence JSONL (default stdout)")
    g.add_argument("--truth", help="ground-truth JSON path")
    g.add_argument("--require", choices=sorted(SOLVERS), help="advance the seed until this solver succeeds")
    g.add_argument("--attempts", type=int, default=1000)
    g.add_argument("--precision", type=int, help=f"precision for --require (default ${PRECISION_ENV} or 32)")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("encode", help="pixel 'x y' lines to digit strings")
    e.add_argument("--grid", required=True, help="MxH, e.g. 640x480")
    e.add_argument("input", nargs="?", default="-")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_encode)

    s = sub.add_parser("solve", help="correspondences to essential-matrix candidates")
    s.add_argument("corrs")
    s.add_argument("--method", choices=sorted(SOLVERS), default="8pt")
    s.add_argument("--precision", type=int, help=f"digits (default ${PRECISION_ENV} or 32)")
    s.add_argument("-o", "--output", help="write candidate JSON here")
    s.add_argument("--json", action="store_true", help="print candidate JSON instead of the summary")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="residual report for a candidate file")
    v.add_argument("candidates")
    v.add_argument("corrs")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("stability", help="perturb by 2^N multiples and compare digits")
    t.add_argument("--precision", type=int, help=f"N (default ${PRECISION_ENV} or 32)")
    t.add_argument("--method", choices=["all", *sorted(SOLVERS)], default="all")
    t.add_argument("--target", choices=["matrix", "coefficients"], default="matrix")
    t.add_argument("--guard", type=int, default=16, help="extra working digits beyond N")
    t.add_argument("--seed", type=int, default=0, help="first scene seed to try")
    t.add_argument("--attempts", type=int, default=1000)
    t.add_argument("--bound", type=int, default=64)
    t.add_argument("--noise-seed", type=int, default=0)
    t.set_defaults(func=cmd_stability)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("precision",):
        val = getattr(args, name, None)
        if val is not None and val < 1:
            parser.error("--precision must be positive")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverFailure as exc:
        print(f"{exc.status}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

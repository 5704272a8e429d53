"""Command-line interface.

Exit codes: 0 success, 1 usage or parse error, 2 domain error (collision,
degenerate input), 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import checks
from .curvature import sectional_curvature
from .dynamics import (
    PhaseState,
    compare_newton_jm,
    integrate_jm_geodesic,
    integrate_newton,
    matched_initial_data,
)
from .errors import CollisionError, FrameError, ShapeCurvError
from .nbody import com_embedding, complexify, realify
from .scan import FRAMES, fmt_number, run_scan, to_csv, to_json
from .shape import CollinearChart, ReducedPoint, TangentPair, collinear_point, horizontal_frame

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json_object(d: dict) -> str:
    parts = []
    for k, v in d.items():
        if isinstance(v, (float, np.floating, int)) and not isinstance(v, bool):
            tok = fmt_number(v)
        elif isinstance(v, (list, tuple)):
            tok = "[" + ", ".join(fmt_number(x) for x in v) + "]"
        else:
            tok = json.dumps(v)
        parts.append(f"{json.dumps(k)}: {tok}")
    return "{" + ", ".join(parts) + "}\n"


# -- scan ------------------------------------------------------------------


def cmd_scan(args) -> int:
    if args.n != 4:
        raise UsageError("collinear chart scans are defined for --n 4 only")
    records = run_scan(args.theta, args.phi_min, args.phi_max, args.samples, args.plane, args.workers)
    text = to_json(records) if args.format == "json" else to_csv(records)
    _emit(text, args.out)
    if not any(r.ok for r in records):
        print("every sample is a collision", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


# -- verify ----------------------------------------------------------------


def cmd_verify(args) -> int:
    results = checks.run_suite(args.suite)
    for c in results:
        print(c.line())
    failed = [c for c in results if not c.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


# -- curvature-at ----------------------------------------------------------


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"malformed {what}: {text!r}") from exc


def _pair_from_args(args):
    if args.chart is not None:
        vals = _floats(args.chart, "--chart")
        if len(vals) != 2:
            raise UsageError("--chart expects phi,theta")
        chart = CollinearChart(*vals)
        if not (args.v1 or args.v2):
            return FRAMES[args.plane or "normal"](chart), {"phi": vals[0], "theta": vals[1]}
        base = collinear_point(chart)
    else:
        coords = _floats(" ".join(args.point), "--point")
        if len(coords) < 4 or len(coords) % 2:
            raise UsageError("--point expects 2(n-1) reals, n >= 3")
        base = ReducedPoint(complexify(coords))
        base.check_collisions()
        if args.plane:
            raise UsageError("--plane normal|tangent needs --chart; give --v1/--v2 with --point")
    info = {"point": list(realify(base.coords))}
    if args.v1 and args.v2:
        w1 = _floats(" ".join(args.v1), "--v1")
        w2 = _floats(" ".join(args.v2), "--v2")
        if len(w1) != base.real.size or len(w2) != base.real.size:
            raise UsageError(f"--v1/--v2 need {base.real.size} reals each")
        try:
            return TangentPair.spanning(base, w1, w2), info
        except FrameError as exc:
            raise UsageError(f"malformed vectors: {exc}") from exc
    if base.n == 3:
        f1, f2 = horizontal_frame(base)
        return TangentPair(base, f1, f2), info
    raise UsageError("give both --v1 and --v2 (or --plane with --chart)")


def cmd_curvature_at(args) -> int:
    pair, info = _pair_from_args(args)
    b = sectional_curvature(pair)
    record = {"status": "ok", **info, "plane": args.plane or ("custom" if args.v1 else "horizontal")}
    record.update({k: float(v) for k, v in b.as_dict().items()})
    record["kn_block"] = float(b.kn_block)
    if args.format == "json":
        sys.stdout.write(_json_object(record))
    else:
        for k, v in record.items():
            if isinstance(v, list):
                v = ",".join(fmt_number(x) for x in v)
            elif isinstance(v, float):
                v = fmt_number(v)
            print(f"{k}: {v}")
    return EXIT_OK


# -- geodesic --------------------------------------------------------------


def load_initial_state(path: str) -> PhaseState:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read initial-condition file {path}: {exc}") from exc
    try:
        pos = [complex(float(a), float(b)) for a, b in doc["positions"]]
        vel = [complex(float(a), float(b)) for a, b in doc["velocities"]]
        masses = [float(m) for m in doc.get("masses", [1.0] * len(pos))]
        return PhaseState(pos, vel, masses)
    except KeyError as exc:
        raise UsageError(f"{path}: missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def dump_initial_state(state: PhaseState) -> str:
    pairs = lambda zs: "[" + ", ".join(f"[{fmt_number(z.real)}, {fmt_number(z.imag)}]" for z in zs) + "]"
    return (
        "{\n"
        f'  "masses": [{", ".join(fmt_number(m) for m in state.masses)}],\n'
        f'  "positions": {pairs(state.positions)},\n'
        f'  "velocities": {pairs(state.velocities)}\n'
        "}\n"
    )


def _write_newton(tr, path: Path) -> None:
    status = "truncated" if tr.truncated else "ok"
    n = tr.masses.size
    header = ["status", "t", "H", "J", "I", "Idot", "Iddot_residual"]
    header += [f"{c}{k + 1}" for k in range(n) for c in ("x", "y")]
    resid = tr.inertia_accel_residual
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for s in range(tr.times.size):
            row = [tr.times[s], tr.energy[s], tr.angular_momentum[s], tr.inertia[s], tr.inertia_rate[s], resid[s]]
            row += list(realify(tr.positions[s]))
            w.writerow([status] + [fmt_number(x) for x in row])


def _write_geodesic(tr, path: Path) -> None:
    status = "truncated" if tr.truncated else "ok"
    d = tr.points.shape[1]
    header = ["status", "tau", "jm_speed"] + [f"{c}{k + 1}" for k in range(d) for c in ("re_p", "im_p")]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for s in range(tr.times.size):
            row = [tr.times[s], tr.jm_speed[s]] + list(realify(tr.points[s]))
            w.writerow([status] + [fmt_number(x) for x in row])


def cmd_geodesic(args) -> int:
    state = load_initial_state(args.init)
    prefix = Path(args.out)
    truncated = False
    if args.mode == "newton":
        tr = integrate_newton(state, args.t_end, args.dt)
        _write_newton(tr, prefix.with_name(prefix.name + "_newton.csv"))
        truncated = tr.truncated
        print(f"energy drift {fmt_number(np.max(np.abs(tr.energy - tr.energy[0])))}")
        print(f"angular momentum drift {fmt_number(np.max(np.abs(tr.angular_momentum - tr.angular_momentum[0])))}")
    elif args.mode == "jm":
        emb = com_embedding(state.masses.size)
        p0 = emb.project(state.positions - state.positions.mean())
        v0 = emb.project(state.velocities - state.velocities.mean())
        tr = integrate_jm_geodesic(p0, v0, args.t_end, args.dt)
        _write_geodesic(tr, prefix.with_name(prefix.name + "_jm.csv"))
        truncated = tr.truncated
    else:
        res = compare_newton_jm(state, args.t_end, args.dt)
        _write_newton(res.newton, prefix.with_name(prefix.name + "_newton.csv"))
        _write_geodesic(res.geodesic, prefix.with_name(prefix.name + "_jm.csv"))
        truncated = res.newton.truncated or res.geodesic.truncated
        print(f"hausdorff {fmt_number(res.hausdorff)}")
    if truncated:
        print("trajectory truncated near a collision", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_make_init(args) -> int:
    state, _, _ = matched_initial_data(args.phi, args.theta, args.mix, args.scale)
    _emit(dump_initial_state(state), args.out)
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="shapecurv", description="Curvature of the reduced Jacobi-Maupertuis metric on N-body shape space")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("scan", help="sweep phi along a collinear chart")
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--theta", type=float, default=math.pi / 2)
    sp.add_argument("--phi-min", type=float, required=True)
    sp.add_argument("--phi-max", type=float, required=True)
    sp.add_argument("--samples", type=int, default=64)
    sp.add_argument("--plane", choices=sorted(FRAMES), default="normal")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", default=None)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_scan)

    vp = sub.add_parser("verify", help="run seeded verification suites")
    vp.add_argument("--suite", choices=("derivatives", "curvature", "appendix", "pants", "dynamics", "all"), default="all")
    vp.set_defaults(func=cmd_verify)

    cp = sub.add_parser("curvature-at", help="curvature breakdown at one point and plane")
    where = cp.add_mutually_exclusive_group(required=True)
    where.add_argument("--chart", help="phi,theta of a collinear four-body shape")
    where.add_argument("--point", nargs="+", help="2(n-1) reals: interleaved re, im of Jacobi coordinates")
    cp.add_argument("--plane", choices=sorted(FRAMES))
    cp.add_argument("--v1", nargs="+")
    cp.add_argument("--v2", nargs="+")
    cp.add_argument("--format", choices=("json", "text"), default="json")
    cp.set_defaults(func=cmd_curvature_at)

    gp = sub.add_parser("geodesic", help="integrate Newton and/or JM geodesic trajectories")
    gp.add_argument("--init", required=True, help="JSON with masses, positions, velocities")
    gp.add_argument("--t-end", type=float, default=1.0)
    gp.add_argument("--dt", type=float, default=1e-4)
    gp.add_argument("--mode", choices=("newton", "jm", "both"), default="both")
    gp.add_argument("--out", default="trajectory", help="output prefix")
    gp.set_defaults(func=cmd_geodesic)

    mp = sub.add_parser("make-init", help="write zero-energy, zero-momentum initial data")
    mp.add_argument("--phi", type=float, default=math.pi / 8)
    mp.add_argument("--theta", type=float, default=math.pi / 2)
    mp.add_argument("--mix", type=float, default=0.6)
    mp.add_argument("--scale", type=float, default=4.0)
    mp.add_argument("--out", default=None)
    mp.set_defaults(func=cmd_make_init)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CollisionError as exc:
        print(f"collision: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ShapeCurvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

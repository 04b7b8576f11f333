"""Command-line interface: simulate / field / curvature / optimize / check.

A single JSON config drives every command; sections `drag`, `gait`, `sim`,
`slice`, `objective`, `optimizer`, `output`. All outputs are deterministic
functions of the config (the summary's wall_time field excepted). Exit codes:
0 success, 1 check failure, 2 config error, 3 runtime singularity.
"""

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import checks
from .errors import SingularConfiguration
from .gaitlab import (
    COORD_NAMES,
    CoordinateSeries,
    Gait,
    Harmonic,
    SliceSpec,
    curvature_of_field,
    sample_field,
)
from .liegroup import identity_pose, quaternion_from_rotation
from .model import DragParams, connection_batch
from .optimizer import Objective, OptimizerConfig, optimize_gait, evaluate_objective
from .reconstruct import SimConfig, integrate

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_SINGULAR = 3


class ConfigError(Exception):
    pass


def _fmt(x):
    return "%.17g" % x


def _require(cfg, dotted, kind=None):
    node = cfg
    walked = []
    for key in dotted.split("."):
        walked.append(key)
        if not isinstance(node, dict) or key not in node:
            raise ConfigError(f"missing field: {'.'.join(walked)}")
        node = node[key]
    if kind is not None and not isinstance(node, kind):
        raise ConfigError(f"field {dotted} has wrong type")
    return node


def load_config(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: line {exc.lineno}: {exc.msg}")


def parse_drag(cfg):
    k = _require(cfg, "drag.k", (int, float))
    L = _require(cfg, "drag.L", (int, float))
    try:
        return DragParams(k=float(k), L=float(L))
    except ValueError as exc:
        raise ConfigError(str(exc))


def parse_gait(cfg):
    period = _require(cfg, "gait.period", (int, float))
    coords = cfg["gait"].get("coordinates", {})
    unknown = set(coords) - set(COORD_NAMES)
    if unknown:
        raise ConfigError(f"unknown gait coordinates: {sorted(unknown)}")
    series = {}
    for name, spec in coords.items():
        harmonics = []
        for j, h in enumerate(spec.get("harmonics", [])):
            if not (isinstance(h, list) and len(h) == 3):
                raise ConfigError(
                    f"field gait.coordinates.{name}.harmonics[{j}] must be [n, amplitude, phase]"
                )
            harmonics.append(Harmonic(int(h[0]), float(h[1]), float(h[2])))
        series[name] = CoordinateSeries(float(spec.get("offset", 0.0)), tuple(harmonics))
    try:
        return Gait(period=float(period), **series)
    except ValueError as exc:
        raise ConfigError(str(exc))


def parse_sim(cfg):
    dt = _require(cfg, "sim.dt", (int, float))
    sim = cfg["sim"]
    try:
        return SimConfig(
            dt=float(dt),
            cycles=int(sim.get("cycles", 1)),
            record_stride=int(sim.get("record_stride", 1)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc))


def parse_slice(cfg):
    coords = _require(cfg, "slice.coords", list)
    ranges = _require(cfg, "slice.ranges", list)
    counts = _require(cfg, "slice.counts", list)
    fixed = cfg["slice"].get("fixed", {})
    try:
        return SliceSpec(
            coords=tuple(coords),
            ranges=tuple((float(lo), float(hi)) for lo, hi in ranges),
            counts=tuple(int(n) for n in counts),
            fixed={k: float(v) for k, v in fixed.items()},
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid slice spec: {exc}")


def parse_objective(cfg):
    obj = cfg.get("objective", {})
    try:
        return Objective(
            target=obj.get("target", "x_displacement"),
            penalty_weight=float(obj.get("penalty_weight", 10.0)),
            amplitude_bound=float(obj.get("amplitude_bound", np.pi / 2)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc))


def parse_optimizer(cfg):
    opt = _require(cfg, "optimizer", dict)
    try:
        ocfg = OptimizerConfig(
            max_evaluations=int(_require(cfg, "optimizer.max_evaluations", int)),
            simplex_scale=float(opt.get("simplex_scale", 0.1)),
            tolerance=float(opt.get("tolerance", 1e-10)),
            seed=int(opt.get("seed", 0)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc))
    free = opt.get("free_coordinates", list(COORD_NAMES))
    unknown = set(free) - set(COORD_NAMES)
    if unknown:
        raise ConfigError(f"unknown optimizer.free_coordinates: {sorted(unknown)}")
    return ocfg, free


def output_prefix(cfg, override):
    if override:
        return override
    return _require(cfg, "output.prefix", str)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _threads():
    env = os.environ.get("SWIM3D_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _parallel_connection(shapes, params):
    """connection_batch split over SWIM3D_THREADS chunks; output order is
    fixed by the node order regardless of scheduling."""
    n = _threads()
    if n <= 1 or len(shapes) < 2 * n:
        return connection_batch(shapes, params)
    bounds = np.linspace(0, len(shapes), n + 1).astype(int)
    conn = np.empty((len(shapes), 6, 4))
    cond = np.empty(len(shapes))
    with ThreadPoolExecutor(max_workers=n) as pool:
        futures = {
            pool.submit(connection_batch, shapes[a:b], params): (a, b)
            for a, b in zip(bounds[:-1], bounds[1:])
            if b > a
        }
        for fut, (a, b) in futures.items():
            conn[a:b], cond[a:b] = fut.result()
    return conn, cond


def cmd_simulate(cfg, prefix):
    params = parse_drag(cfg)
    gait = parse_gait(cfg)
    sim = parse_sim(cfg)
    start = time.perf_counter()
    samples = integrate(gait, identity_pose(), params, sim)
    wall = time.perf_counter() - start

    rows = []
    prev_q = None
    for s in samples:
        q = quaternion_from_rotation(s.pose.rotation)
        if prev_q is not None and float(np.dot(q, prev_q)) < 0.0:
            q = -q
        prev_q = q
        r = s.shape.as_array()
        xi = s.twist.as_array()
        rows.append(
            [_fmt(v) for v in (s.t, *s.pose.position, *q, *r, *xi)]
        )
    header = [
        "t", "x", "y", "z", "qw", "qx", "qy", "qz",
        "theta1", "phi1", "theta2", "phi2",
        "vx", "vy", "vz", "wx", "wy", "wz",
    ]
    _write_csv(prefix + "_trajectory.csv", header, rows)

    # per-cycle displacement from the recorded samples nearest cycle boundaries
    per_cycle = []
    for c in range(1, sim.cycles + 1):
        t_target = c * gait.period
        nearest = min(samples, key=lambda s: abs(s.t - t_target))
        per_cycle.append(
            {"cycle": c, "position": list(nearest.pose.position),
             "displacement_norm": float(np.linalg.norm(nearest.pose.position))}
        )
    final = samples[-1]
    q = quaternion_from_rotation(final.pose.rotation)
    summary = {
        "per_cycle_displacement": per_cycle,
        "final_position": list(final.pose.position),
        "final_quaternion_wxyz": list(q),
        "step_count": max(1, int(round(sim.cycles * gait.period / sim.dt))),
        "wall_time_s": wall,
    }
    with open(prefix + "_summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return EXIT_OK


def _field_rows(fs):
    spec = fs.spec
    axis_a, axis_b = spec.axes()
    fixed_names = [c for c in COORD_NAMES if c not in spec.coords]
    header = (
        [spec.coords[0], spec.coords[1]]
        + fixed_names
        + [f"A{i}{j}" for i in range(1, 7) for j in range(1, 5)]
        + ["condition", "singular"]
    )
    rows = []
    for ia, a in enumerate(axis_a):
        for ib, b in enumerate(axis_b):
            singular = bool(fs.singular[ia, ib])
            entries = (
                [""] * 24
                if singular
                else [_fmt(v) for v in fs.connection[ia, ib].ravel()]
            )
            cond = fs.condition[ia, ib]
            rows.append(
                [_fmt(a), _fmt(b)]
                + [_fmt(spec.fixed[c]) for c in fixed_names]
                + entries
                + [_fmt(cond) if np.isfinite(cond) else "inf",
                   "true" if singular else "false"]
            )
    return header, rows


def cmd_field(cfg, prefix):
    params = parse_drag(cfg)
    spec = parse_slice(cfg)
    fs = sample_field(spec, params, connection_fn=_parallel_connection)
    header, rows = _field_rows(fs)
    _write_csv(prefix + "_field.csv", header, rows)
    return EXIT_OK


def cmd_curvature(cfg, prefix):
    params = parse_drag(cfg)
    spec = parse_slice(cfg)
    if any(n < 3 for n in spec.counts):
        raise ConfigError("curvature requires slice.counts >= 3 in both directions")
    row = int(cfg["slice"].get("row", 1))
    if not 1 <= row <= 6:
        raise ConfigError("slice.row must be in 1..6")
    fs = sample_field(spec, params, connection_fn=_parallel_connection)
    curv = curvature_of_field(fs, row)
    axis_a, axis_b = spec.axes()
    fixed_names = [c for c in COORD_NAMES if c not in spec.coords]
    header = [spec.coords[0], spec.coords[1]] + fixed_names + [f"curvature_row{row}"]
    rows = []
    for ia, a in enumerate(axis_a):
        for ib, b in enumerate(axis_b):
            value = curv[ia, ib]
            rows.append(
                [_fmt(a), _fmt(b)]
                + [_fmt(fs.spec.fixed[c]) for c in fixed_names]
                + [_fmt(value) if np.isfinite(value) else ""]
            )
    _write_csv(prefix + "_curvature.csv", header, rows)
    return EXIT_OK


def _gait_to_json(gait):
    return {
        "period": gait.period,
        "coordinates": {
            name: {
                "offset": series.offset,
                "harmonics": [[h.n, h.amplitude, h.phase] for h in series.harmonics],
            }
            for name, series in gait.coordinates.items()
        },
    }


def cmd_optimize(cfg, prefix):
    params = parse_drag(cfg)
    gait = parse_gait(cfg)
    sim = parse_sim(cfg)
    obj = parse_objective(cfg)
    ocfg, free = parse_optimizer(cfg)
    initial_value = evaluate_objective(gait, obj, params, sim)
    result = optimize_gait(gait, obj, ocfg, params, sim, free_coordinates=free)
    with open(prefix + "_best_gait.json", "w") as fh:
        json.dump(
            {
                "objective": result.value,
                "initial_objective": initial_value,
                "evaluations": result.evaluations,
                "gait": _gait_to_json(result.gait),
            },
            fh,
            indent=2,
        )
        fh.write("\n")
    _write_csv(
        prefix + "_trace.csv",
        ["evaluation", "objective", "incumbent"],
        [[str(i), _fmt(v), _fmt(inc)] for i, v, inc in result.trace],
    )
    return EXIT_OK


def cmd_check(flip_omega2_sign=False, out=None):
    out = out if out is not None else sys.stdout
    results = checks.run_all(flip_omega2_sign=flip_omega2_sign)
    all_ok = True
    for name, ok, residual, tol in results:
        all_ok &= ok
        out.write(
            f"{'PASS' if ok else 'FAIL'} {name}: residual {residual:.3e} (tol {tol:.0e})\n"
        )
    return EXIT_OK if all_ok else EXIT_CHECK_FAILED


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="swim3d",
        description="Three-link low-Reynolds swimmer: simulation, field maps, gait optimization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", "field", "curvature", "optimize"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=None, help="output path prefix override")
    p_check = sub.add_parser("check")
    p_check.add_argument(
        "--inject-omega2-sign-flip", action="store_true", help=argparse.SUPPRESS
    )
    args = parser.parse_args(argv)

    if args.command == "check":
        return cmd_check(flip_omega2_sign=args.inject_omega2_sign_flip)

    try:
        cfg = load_config(args.config)
        prefix = output_prefix(cfg, args.out)
        handler = {
            "simulate": cmd_simulate,
            "field": cmd_field,
            "curvature": cmd_curvature,
            "optimize": cmd_optimize,
        }[args.command]
        return handler(cfg, prefix)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except SingularConfiguration as exc:
        print(f"singular configuration: {exc}", file=sys.stderr)
        return EXIT_SINGULAR


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()

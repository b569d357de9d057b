"""Command-line front end: file formats, checks, counterexample bundles.

Formats:

- Signal CSV: header row ``t,u1,...,um``, one sample per row. Files
  written by the tool carry a leading ``# peu-config: ...`` comment
  echoing the tolerances and seed; readers accept files with or
  without it.
- Trajectory CSV: columns ``t,u*,x*,y*`` with T+1 rows; the final row
  holds only the post-input state (u/y cells empty).
- System JSON: ``{"n","m","p","A","B","C","D"}`` with row-major arrays.
- Certificate JSON: all certificate fields plus tolerances, seed and
  verification residuals.

Exit codes: 0 success/true, 2 input error, 3 checked false,
4 numerical construction failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import adversary, flemma
from .defaults import RTOL, SEED, TOL_CERT
from .errors import ConstructionError, ValidationError
from .lti import StateSpaceSystem, simulate
from .numkit import rank_report
from .signals import Signal, hankel, is_pe, pe_order

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_FALSE = 3
EXIT_CONSTRUCTION = 4


@dataclass(frozen=True)
class RunConfig:
    """Tolerances and seed in force for one invocation; echoed into outputs."""

    rtol: float = RTOL
    tol_cert: float = TOL_CERT
    seed: int = SEED
    output_format: str = "json"

    def __post_init__(self):
        if self.rtol <= 0 or self.tol_cert <= 0:
            raise ValidationError("tolerances must be positive")

    def to_dict(self):
        return {
            "rtol": self.rtol,
            "tol_cert": self.tol_cert,
            "seed": self.seed,
            "format": self.output_format,
        }

    def comment_line(self) -> str:
        return (f"# peu-config: rtol={self.rtol!r} tol_cert={self.tol_cert!r} "
                f"seed={self.seed}")


# ---------------------------------------------------------------------------
# file formats


def read_signal_csv(path) -> Signal:
    """Read a signal CSV with header t,u1,...,um (comment lines allowed)."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise ValidationError(f"{path}: empty signal file")
    header = [c.strip() for c in rows[0]]
    if len(header) < 2 or header[0] != "t":
        raise ValidationError(f"{path}: expected header t,u1,...,um, got {header}")
    m = len(header) - 1
    data = []
    for r in rows[1:]:
        if len(r) != m + 1:
            raise ValidationError(f"{path}: row has {len(r)} cells, expected {m + 1}")
        try:
            data.append([float(c) for c in r[1:]])
        except ValueError as exc:
            raise ValidationError(f"{path}: non-numeric cell: {exc}") from exc
    if not data:
        raise ValidationError(f"{path}: no samples")
    return Signal(np.asarray(data))


def write_signal_csv(path, v: Signal, config: RunConfig):
    buf = io.StringIO()
    buf.write(config.comment_line() + "\n")
    buf.write("t," + ",".join(f"u{j + 1}" for j in range(v.dim)) + "\n")
    for t in range(v.length):
        buf.write(str(t) + "," + ",".join(repr(float(x)) for x in v.samples[t]) + "\n")
    _write_text(path, buf.getvalue())


def write_trajectory_csv(path, u: Signal, x: Signal, y: Signal, config: RunConfig):
    """Columns t,u*,x*,y*; T+1 rows, the last with only the state filled."""
    T = u.length
    if x.length != T + 1 or y.length != T:
        raise ValidationError("trajectory signals must have lengths T, T+1, T")
    names = (["t"] + [f"u{j + 1}" for j in range(u.dim)]
             + [f"x{j + 1}" for j in range(x.dim)]
             + [f"y{j + 1}" for j in range(y.dim)])
    buf = io.StringIO()
    buf.write(config.comment_line() + "\n")
    buf.write(",".join(names) + "\n")
    for t in range(T + 1):
        cells = [str(t)]
        cells += [repr(float(v)) for v in u.samples[t]] if t < T else [""] * u.dim
        cells += [repr(float(v)) for v in x.samples[t]]
        cells += [repr(float(v)) for v in y.samples[t]] if t < T else [""] * y.dim
        buf.write(",".join(cells) + "\n")
    _write_text(path, buf.getvalue())


def read_trajectory_csv(path):
    """Read a t,u*,x*,y* table; returns a dict of signals present.

    Rows with empty cells in a group are excluded from that group's
    signal, so the state keeps its extra final sample.
    """
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise ValidationError(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    if header[0] != "t":
        raise ValidationError(f"{path}: first column must be t")
    groups = {}
    for idx, name in enumerate(header[1:], start=1):
        key = name.rstrip("0123456789")
        if key not in ("u", "x", "y") or name == key:
            raise ValidationError(f"{path}: unexpected column {name}")
        groups.setdefault(key, []).append(idx)
    out = {}
    for key, cols in groups.items():
        vals = []
        for r in rows[1:]:
            cells = [r[c].strip() if c < len(r) else "" for c in cols]
            if all(cells):
                try:
                    vals.append([float(c) for c in cells])
                except ValueError as exc:
                    raise ValidationError(f"{path}: non-numeric cell: {exc}") from exc
            elif any(cells):
                raise ValidationError(f"{path}: partially filled {key} row")
        if vals:
            out[key] = Signal(np.asarray(vals))
    return out


def read_system_json(path) -> StateSpaceSystem:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from exc
    try:
        sys_ = StateSpaceSystem(np.asarray(obj["A"], dtype=float),
                                np.asarray(obj["B"], dtype=float),
                                np.asarray(obj["C"], dtype=float),
                                np.asarray(obj["D"], dtype=float))
    except KeyError as exc:
        raise ValidationError(f"{path}: missing field {exc}") from exc
    for field in ("n", "m", "p"):
        if field in obj and obj[field] != getattr(sys_, field):
            raise ValidationError(f"{path}: declared {field}={obj[field]} does not match matrices")
    return sys_


def write_json(path, obj):
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _load_array_json(path, name):
    with open(path) as fh:
        try:
            return np.asarray(json.load(fh), dtype=float)
        except (json.JSONDecodeError, ValueError) as exc:
            raise ValidationError(f"{path}: invalid {name} file: {exc}") from exc


# ---------------------------------------------------------------------------
# subcommands


def _config_from_args(args) -> RunConfig:
    seed = args.seed
    if seed is None:
        env = os.environ.get("PEU_SEED")
        if env:
            try:
                seed = int(env)
            except ValueError as exc:
                raise ValidationError(f"PEU_SEED must be an integer: {env!r}") from exc
        else:
            seed = SEED
    return RunConfig(rtol=args.rtol, tol_cert=args.tol_cert, seed=seed,
                     output_format=args.format)


def cmd_pe(args) -> int:
    cfg = _config_from_args(args)
    u = read_signal_csv(args.signal)
    if args.order is not None:
        if not (1 <= args.order <= u.length):
            raise ValidationError(f"--order {args.order} out of range [1, {u.length}]")
        ok, rep = is_pe(u, args.order, cfg.rtol)
        write_json(args.out, {"order": args.order, "is_pe": ok,
                              "rank_report": rep.to_dict(), "config": cfg.to_dict()})
        return EXIT_OK if ok else EXIT_FALSE
    report = pe_order(u, cfg.rtol)
    write_json(args.out, {**report.to_dict(), "config": cfg.to_dict()})
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    sys_ = read_system_json(args.system)
    u = read_signal_csv(args.signal)
    if args.x0 is None:
        x0 = np.zeros(sys_.n)
    else:
        try:
            x0 = np.asarray([float(c) for c in args.x0.split(",")])
        except ValueError as exc:
            raise ValidationError(f"--x0 must be comma-separated numbers: {exc}") from exc
    traj = simulate(sys_, x0, u)
    write_trajectory_csv(args.out, traj.u, traj.x, traj.y, cfg)
    return EXIT_OK


def cmd_check(args) -> int:
    cfg = _config_from_args(args)
    sys_ = read_system_json(args.system)
    data = read_trajectory_csv(args.data)
    if "u" not in data or "y" not in data:
        raise ValidationError(f"{args.data}: need u and y columns")
    check = flemma.check_behavior_equality(sys_, data["u"], data["y"], args.L, cfg.rtol)
    write_json(args.out, {**check.to_dict(), "config": cfg.to_dict()})
    return EXIT_OK if check.behavior_equal else EXIT_FALSE


def cmd_universal(args) -> int:
    cfg = _config_from_args(args)
    u = read_signal_csv(args.signal)
    verdict = flemma.universality_verdict(
        u, args.n, args.L, rtol=cfg.rtol, tol_cert=cfg.tol_cert, seed=cfg.seed
    )
    payload = {
        "universal": verdict.universal,
        "pe_order_needed": verdict.pe_order_needed,
        "pe_report": verdict.pe_report.to_dict(),
        "certificate": None if verdict.counterexample is None
        else verdict.counterexample.to_dict(),
        "config": cfg.to_dict(),
    }
    write_json(args.out, payload)
    return EXIT_OK if verdict.universal else EXIT_FALSE


def cmd_counterexample(args) -> int:
    cfg = _config_from_args(args)
    u = read_signal_csv(args.signal)
    overrides = {}
    if args.override_eta:
        overrides["eta"] = _load_array_json(args.override_eta, "eta")
    if args.override_A:
        overrides["A"] = _load_array_json(args.override_A, "A")
    if args.override_zeta:
        overrides["zeta"] = _load_array_json(args.override_zeta, "zeta")

    kwargs = dict(rtol=cfg.rtol, tol_cert=cfg.tol_cert, seed=cfg.seed, **overrides)
    if args.L0:
        cert = adversary.construct_certificate_l0(u, args.n, **kwargs)
        u_used = u.window(0, u.length - 1)
    else:
        if args.L is None:
            raise ValidationError("--L is required unless --L0 is given")
        cert = adversary.construct_certificate(u, args.n, args.L, **kwargs)
        u_used = u

    os.makedirs(args.out, exist_ok=True)
    write_json(os.path.join(args.out, "certificate.json"),
               {**cert.to_dict(), "config": cfg.to_dict()})
    write_json(os.path.join(args.out, "system.json"), cert.state_pair().to_dict())
    traj = simulate(cert.state_pair(), cert.x0, u_used)
    write_trajectory_csv(os.path.join(args.out, "trajectory.csv"),
                         traj.u, traj.x, traj.y, cfg)
    sys.stdout.write(
        f"certificate.json system.json trajectory.csv written to {args.out}\n"
    )
    return EXIT_OK


def cmd_cloud(args) -> int:
    cfg = _config_from_args(args)
    u = read_signal_csv(args.signal)
    try:
        a_lo, a_hi, z_lo, z_hi = (float(c) for c in args.ranges.split(","))
    except ValueError as exc:
        raise ValidationError(f"--ranges must be amin,amax,zmin,zmax: {exc}") from exc
    if args.samples < 0:
        raise ValidationError("--samples must be non-negative")
    rng = np.random.default_rng(cfg.seed)
    pairs = np.empty((args.samples, 2))
    pairs[:, 0] = rng.uniform(a_lo, a_hi, size=args.samples)
    z = rng.uniform(z_lo, z_hi, size=args.samples)
    while np.any(z == 0.0):
        z[z == 0.0] = rng.uniform(z_lo, z_hi, size=int(np.sum(z == 0.0)))
    pairs[:, 1] = z
    result = adversary.sample_system_cloud(u, args.L, pairs, rtol=cfg.rtol,
                                           tol_cert=cfg.tol_cert)
    buf = io.StringIO()
    buf.write(cfg.comment_line() + f" skipped={result.n_skipped}\n")
    buf.write("a," + ",".join(f"b{j + 1}" for j in range(u.dim)) + ",x0,verified\n")
    for pt in result.points:
        buf.write(repr(pt.a) + ","
                  + ",".join(repr(float(b)) for b in pt.b) + ","
                  + repr(pt.x0) + "," + ("1" if pt.verified else "0") + "\n")
    _write_text(args.out, buf.getvalue())
    return EXIT_OK


# ---------------------------------------------------------------------------
# reproduction of the reference examples


def _fixture_path(name) -> str:
    return str(resources.files("peu").joinpath("fixtures", name))


def _repro_ex1(cfg: RunConfig):
    sys_ = read_system_json(_fixture_path("ex1_system.json"))
    u = read_signal_csv(_fixture_path("ex1_input.csv"))
    results = []
    report = pe_order(u, cfg.rtol)
    results.append(("excitation order of (1,0,0) is 1", report.max_order == 1,
                    f"max_order={report.max_order}"))
    rng = np.random.default_rng(cfg.seed)
    all_ok = True
    for _ in range(20):
        x0 = rng.standard_normal(2)
        traj = simulate(sys_, x0, u)
        stacked = np.vstack([hankel(u, 1), hankel(traj.y, 1)])
        rep = rank_report(stacked, cfg.rtol)
        check = flemma.check_behavior_equality(sys_, u, traj.y, 1, cfg.rtol)
        all_ok &= rep.rank == 2 and check.behavior_equal
    results.append(("20 random x(0): stacked rank 2 and behavior equality", all_ok, ""))
    verdict = flemma.universality_verdict(u, 2, 1, rtol=cfg.rtol,
                                          tol_cert=cfg.tol_cert, seed=cfg.seed)
    ok = (not verdict.universal and verdict.counterexample is not None
          and verdict.counterexample.rank_deficit_confirmed)
    results.append(("input is nonetheless not universal (certificate attached)", ok, ""))
    return results


def _repro_ex2(cfg: RunConfig, tol=1e-3):
    u = read_signal_csv(_fixture_path("ex2_input.csv"))
    with open(_fixture_path("ex2_values.json")) as fh:
        vals = json.load(fh)
    with open(_fixture_path("ex2_states.csv")) as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    X_ref = np.asarray([[float(c) for c in r[1:]] for r in rows[1:]])

    results = []
    ok, _ = is_pe(u, 4, cfg.rtol)
    results.append(("input not persistently exciting of order 4", not ok, ""))

    cert = adversary.construct_certificate(
        u, vals["n"], vals["L"], rtol=cfg.rtol, tol_cert=cfg.tol_cert, seed=cfg.seed,
        eta=np.asarray(vals["eta"], dtype=float),
        A=np.asarray(vals["A"], dtype=float),
        zeta=np.asarray(vals["zeta"], dtype=float),
    )

    def against(label, computed, expected):
        dev = float(np.abs(np.asarray(computed) - np.asarray(expected)).max())
        results.append((f"{label} within {tol:g}", dev <= tol, f"max dev {dev:.2e}"))

    k = vals["n"] + vals["L"]
    for i, key in ((2, "E2"), (1, "E1"), (0, "E0"), (-1, "Em1")):
        against(f"recursion matrix E_{i}", cert.E[k - 1 - i], vals[key])
    against("B", cert.B, vals["Em1"])
    against("x(0)", cert.x0, vals["x0"])
    against("xi", cert.xi, vals["xi"])
    against("state trajectory", cert.states, X_ref)

    rep = cert.stacked_rank
    results.append(("stacked input/state matrix rank 4 < 5", rep.rank == 4,
                    f"rank={rep.rank}"))
    return results


def _repro_ex3(cfg: RunConfig):
    u = read_signal_csv(_fixture_path("ex3_input.csv"))
    with open(_fixture_path("ex3_reddot.json")) as fh:
        red = json.load(fh)
    results = []
    ok, _ = is_pe(u, 3, cfg.rtol)
    results.append(("input not persistently exciting of order 3", not ok, ""))

    L = red["L"]
    pairs = np.array([[red["a"], 1.0]])
    cloud = adversary.sample_system_cloud(u, L, pairs, rtol=cfg.rtol)
    pt = cloud.points[0]
    d = pt.b  # family direction at zeta = 1
    zeta_star = float(np.asarray(red["b"]) @ d / (d @ d))
    b_star = zeta_star * d
    x0_star = zeta_star * pt.x0
    dev_b = float(np.abs(b_star - np.asarray(red["b"])).max())
    dev_x0 = abs(x0_star - red["x0"])
    results.append(("red-dot system lies on the constructive family (1.5e-4)",
                    dev_b <= 1.5e-4 and dev_x0 <= 1.5e-4,
                    f"dev b {dev_b:.2e}, dev x0 {dev_x0:.2e}"))

    x = [x0_star]
    for t in range(u.length - L):
        x.append(red["a"] * x[-1] + float(b_star @ u.samples[t]))
    stacked = np.vstack([hankel(u, L), np.asarray(x)[None, :]])
    rep = rank_report(stacked, cfg.rtol)
    results.append(("family member yields stacked rank 4 at rtol", rep.rank == 4,
                    f"rank={rep.rank}"))

    xp = [red["x0"]]
    for t in range(u.length - L):
        xp.append(red["a"] * xp[-1] + float(np.asarray(red["b"]) @ u.samples[t]))
    stacked_p = np.vstack([hankel(u, L), np.asarray(xp)[None, :]])
    rep_p = rank_report(stacked_p, 1e-4)  # printed values carry 4 decimals
    results.append(("printed triple yields rank 4 at print-resolution tolerance",
                    rep_p.rank == 4, f"rank={rep_p.rank}"))
    return results


def cmd_repro(args) -> int:
    cfg = _config_from_args(args)
    runner = {"ex1": _repro_ex1, "ex2": _repro_ex2, "ex3": _repro_ex3}[args.example]
    results = runner(cfg)
    all_ok = True
    for label, ok, detail in results:
        all_ok &= ok
        suffix = f"  ({detail})" if detail else ""
        sys.stdout.write(f"{'PASS' if ok else 'FAIL'}  {args.example}: {label}{suffix}\n")
    return EXIT_OK if all_ok else EXIT_FALSE


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rtol", type=float, default=RTOL,
                        help="relative rank tolerance (default %(default)g)")
    common.add_argument("--tol-cert", dest="tol_cert", type=float, default=TOL_CERT,
                        help="certificate residual budget (default %(default)g)")
    common.add_argument("--seed", type=int, default=None,
                        help="master seed (falls back to PEU_SEED, then 0)")
    common.add_argument("--format", choices=("json", "csv"), default="json",
                        help="output format tag echoed into artifacts")

    parser = argparse.ArgumentParser(
        prog="peu",
        description="Excitation orders, fundamental-lemma checks and "
                    "counterexample construction for finite input signals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("pe", help="excitation order report for a signal")
    p.add_argument("signal")
    p.add_argument("--order", type=int, default=None, help="check one order only")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_pe)

    p = add_parser("simulate", help="simulate a system on an input signal")
    p.add_argument("system")
    p.add_argument("signal")
    p.add_argument("--x0", default=None, help="comma-separated initial state (default 0)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = add_parser("check", help="behavior-equality check for recorded data")
    p.add_argument("system")
    p.add_argument("data")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_check)

    p = add_parser("universal", help="universality verdict for an input")
    p.add_argument("signal")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_universal)

    p = add_parser("counterexample", help="construct a counterexample bundle")
    p.add_argument("signal")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--L", type=int, default=None)
    p.add_argument("--L0", action="store_true",
                   help="depth-0 variant (state Hankel rank deficiency)")
    p.add_argument("--override-eta", default=None, help="JSON file with a kernel vector")
    p.add_argument("--override-A", default=None, help="JSON file with the A matrix")
    p.add_argument("--override-zeta", default=None, help="JSON file with the zeta vector")
    p.add_argument("--out", default=".", help="output directory (default .)")
    p.set_defaults(func=cmd_counterexample)

    p = add_parser("cloud", help="sample scalar-state counterexample systems")
    p.add_argument("signal")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--ranges", default="-1,1,-1,1",
                   help="amin,amax,zmin,zmax (default %(default)s)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_cloud)

    p = add_parser("repro", help="reproduce a packaged reference example")
    p.add_argument("example", choices=("ex1", "ex2", "ex3"))
    p.set_defaults(func=cmd_repro)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except ConstructionError as exc:
        sys.stderr.write(f"construction failed: {exc}\n")
        return EXIT_CONSTRUCTION


if __name__ == "__main__":
    sys.exit(main())

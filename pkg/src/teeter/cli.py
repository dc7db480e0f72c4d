"""Command-line front end.

Commands: simulate | scan | asymptote | zero-delay | burst.  Options may
come from a flat key=value config file (--config) with command-line flags
taking precedence.  Exit codes: 0 success, 1 invalid configuration,
2 numeric failure.
"""
from __future__ import annotations

import argparse
import os
import sys

from .engine import SimulationError, simulate
from .filippov import simulate_zero_delay
from .io import SvgPlot, phase_plot, write_csv, write_events_csv, write_trajectory_csv
from .model import GKind, Params, Rule, State
from .series import (
    NoIntersection,
    NoPeriodicOrbit,
    criticality_curve,
    dib_curve,
    homoclinic_curve,
    rule2_periodic,
)


class ConfigError(Exception):
    pass


def load_config(path: str) -> dict[str, str]:
    """Flat key=value file; blank lines and '#' comments ignored."""
    out: dict[str, str] = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, _, value = line.partition("=")
                out[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teeter",
        description="Delayed ON/OFF PD control of an inverted pendulum",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--config", help="key=value config file")
        sp.add_argument("--rule", choices=("1", "2"))
        sp.add_argument("--g", choices=("one", "cos"))
        sp.add_argument("--a", type=float)
        sp.add_argument("--b", type=float)
        sp.add_argument("--tau", type=float)
        sp.add_argument("--s", type=float)
        sp.add_argument("--sigma", type=float)
        sp.add_argument("--theta0", type=float)
        sp.add_argument("--phi0", type=float)
        sp.add_argument("--tmax", type=float)
        sp.add_argument("--dt", type=float)
        sp.add_argument("--out", default=".", help="output directory")

    for name in ("simulate", "scan", "asymptote", "zero-delay", "burst"):
        sp = sub.add_parser(name)
        add_common(sp)
        if name == "simulate":
            sp.add_argument("--stride", type=float, help="CSV sample stride")
            sp.add_argument("--plot", action="store_true", help="write phase-plane SVG")
        if name == "scan":
            sp.add_argument("--mode", choices=("dib", "plane", "branch"))
            sp.add_argument("--a-grid", help="lo:hi:n")
            sp.add_argument("--b-grid", help="lo:hi:n")
        if name == "asymptote":
            sp.add_argument("--curve", choices=("dib", "criticality", "homoclinic", "rule2"))
            sp.add_argument("--a-grid", help="lo:hi:n")
            sp.add_argument("--tau-grid", help="lo:hi:n")
    return parser


_DEFAULTS = {
    "rule": "1", "g": "cos", "a": 2.0, "b": 2.0, "tau": 0.0, "s": -0.01,
    "sigma": 0.3, "theta0": 0.1, "phi0": None, "tmax": 20.0, "dt": 1e-3,
    "stride": None, "mode": None, "curve": None,
    "a_grid": None, "b_grid": None, "tau_grid": None, "plot": False,
}


def merge_options(args: argparse.Namespace) -> dict:
    """Defaults, then config file, then explicit flags."""
    opts = dict(_DEFAULTS)
    if getattr(args, "config", None):
        cfg = load_config(args.config)
        for key, raw in cfg.items():
            k = key.replace("-", "_")
            if k not in opts and k != "out":
                raise ConfigError(f"unknown config key {key!r}")
            if k in ("rule", "g", "mode", "curve", "a_grid", "b_grid", "tau_grid"):
                opts[k] = raw
            elif k == "plot":
                opts[k] = raw.lower() in ("1", "true", "yes")
            elif k == "out":
                if args.out == ".":
                    args.out = raw
            else:
                try:
                    opts[k] = float(raw)
                except ValueError as exc:
                    raise ConfigError(f"config key {key!r}: not a number: {raw!r}") from exc
    for k in opts:
        v = getattr(args, k, None)
        if v is not None and not (k == "plot" and v is False):
            opts[k] = v
    return opts


def _params(opts: dict) -> Params:
    try:
        return Params(
            a=float(opts["a"]),
            b=float(opts["b"]),
            tau=float(opts["tau"]),
            s=float(opts["s"]),
            sigma=float(opts["sigma"]),
            g_kind=GKind.COSINE if opts["g"] == "cos" else GKind.ONE,
            rule=Rule.RULE1 if str(opts["rule"]) == "1" else Rule.RULE2,
        )
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc


def _grid(spec: str | None, what: str) -> list[float]:
    if not spec:
        raise ConfigError(f"missing {what} grid")
    try:
        lo_s, hi_s, n_s = spec.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError as exc:
        raise ConfigError(f"bad grid spec {spec!r}, expected lo:hi:n") from exc
    if n < 1:
        raise ConfigError(f"empty grid {spec!r}")
    if n == 1:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def cmd_simulate(opts: dict, out: str) -> None:
    p = _params(opts)
    theta0 = float(opts["theta0"])
    phi0 = opts["phi0"]
    phi0 = p.s * theta0 if phi0 is None and p.rule is Rule.RULE1 else float(phi0 or 0.0)
    t_max = float(opts["tmax"])
    result = simulate(State(theta0, phi0), p, t_max, float(opts["dt"]))
    stride = opts["stride"]
    stride = float(stride) if stride else max(t_max / 2000.0, float(opts["dt"]))
    write_trajectory_csv(os.path.join(out, "trajectory.csv"), result, stride)
    write_events_csv(os.path.join(out, "events.csv"), result)
    if opts["plot"]:
        phase_plot(os.path.join(out, "phase.svg"), result, p, stride)
    print(f"status={result.status} t_end={result.t_end:.6g}")


def cmd_zero_delay(opts: dict, out: str) -> None:
    p = _params(opts)
    theta0 = float(opts["theta0"])
    phi0 = opts["phi0"]
    phi0 = p.s * theta0 if phi0 is None else float(phi0)
    res = simulate_zero_delay(State(theta0, phi0), p, float(opts["tmax"]), float(opts["dt"]))
    rows = [(t, x.theta, x.phi) for t, x in zip(res.times, res.states)]
    write_csv(os.path.join(out, "trajectory.csv"), ("t", "theta", "phi"), rows)
    write_csv(
        os.path.join(out, "events.csv"),
        ("t", "kind", "theta", "phi"),
        [(e.t, e.kind.value, e.state.theta, e.state.phi) for e in res.events],
    )
    print(f"events={len(res.events)} diverged={res.diverged}")


def cmd_asymptote(opts: dict, out: str) -> None:
    p = _params(opts)
    curve = opts["curve"]
    if curve in (None, "dib", "criticality", "homoclinic"):
        grid = _grid(opts["a_grid"], "a")
    rows: list[tuple] = []
    comments = [f"b={p.b:.17g} s={p.s:.17g}"]
    if curve == "dib":
        for a in grid:
            try:
                rows.append((a, dib_curve(a, p.b, p.s)))
            except ValueError:
                comments.append(f"skipped a={a:.17g}: singular")
    elif curve == "criticality":
        for a in grid:
            try:
                rows.append((a, criticality_curve(a, p.b, p.s, p.g_kind)))
            except ValueError:
                comments.append(f"skipped a={a:.17g}: singular")
    elif curve == "homoclinic":
        for a in grid:
            try:
                rows.append((a, homoclinic_curve(a, p.b, p.s)))
            except ValueError:
                comments.append(f"skipped a={a:.17g}: no saddle")
    elif curve == "rule2":
        comments = [f"a={p.a:.17g} b={p.b:.17g} sigma={p.sigma:.17g}"]
        for tau in _grid(opts["tau_grid"], "tau"):
            try:
                pt = Params(a=p.a, b=p.b, tau=tau, s=p.s, sigma=p.sigma,
                            g_kind=p.g_kind, rule=Rule.RULE2)
                rows.append((tau, rule2_periodic(pt)[0]))
            except (NoPeriodicOrbit, NoIntersection):
                comments.append(f"skipped tau={tau:.17g}: no orbit")
    else:
        raise ConfigError(f"unknown curve {curve!r}")
    xcol = "tau" if curve == "rule2" else "a"
    ycol = "phi0" if curve == "rule2" else "tau"
    write_csv(os.path.join(out, f"curve_{curve}.csv"), (xcol, ycol), rows, comments)
    print(f"wrote {len(rows)} rows")


def cmd_scan(opts: dict, out: str) -> None:
    from .scan import bif_diagram, classify_plane_point, find_dib

    p = _params(opts)
    mode = opts["mode"]
    if mode == "dib":
        rows = []
        for a in _grid(opts["a_grid"], "a"):
            pt = find_dib(a, p.b, p.s, p.g_kind)
            if pt is not None:
                rows.append((pt.kind.value, pt.a, pt.b, pt.tau, pt.s_or_sigma, pt.witness))
        write_csv(
            os.path.join(out, "bif_set.csv"),
            ("kind", "a", "b", "tau", "s_or_sigma", "witness"), rows,
        )
        # overlay of numeric points on the asymptotic curve
        plot = SvgPlot(xlabel="a", ylabel="tau", title="zigzag birth curve")
        if rows:
            a_vals = [r[1] for r in rows]
            plot.add_line(a_vals, [dib_curve(a, p.b, p.s) for a in a_vals], "#3aa655")
            plot.add_points(a_vals, [r[3] for r in rows])
        plot.write(os.path.join(out, "bif_set.svg"))
    elif mode == "plane":
        rows = []
        for a in _grid(opts["a_grid"], "a"):
            for b in _grid(opts["b_grid"], "b"):
                lab = classify_plane_point(a, b, p.tau, p.s)
                rows.append((a, b, lab.zigzag, lab.spiral))
        write_csv(
            os.path.join(out, "plane.csv"),
            ("a", "b", "zigzag_label", "spiral_label"), rows,
        )
    elif mode == "branch":
        rows = [
            (r.a, r.branch_id, r.theta_min, r.theta_max, r.stability)
            for r in bif_diagram(_grid(opts["a_grid"], "a"), p)
        ]
        write_csv(
            os.path.join(out, "branches.csv"),
            ("a", "branch_id", "theta_min", "theta_max", "stability"), rows,
        )
    else:
        raise ConfigError(f"scan requires --mode, got {mode!r}")
    print("scan complete")


def cmd_burst(opts: dict, out: str) -> None:
    from .scan import burst_diagnose

    p = _params(opts)
    diag = burst_diagnose(b=p.b, s=p.s, tau=p.tau)
    rows = []
    for name, val in (("a1", diag.a1), ("a2", diag.a2), ("a3", diag.a3)):
        if val is not None:
            rows.append((name, val, p.b, p.tau, p.s, 0.0))
    write_csv(
        os.path.join(out, "burst.csv"),
        ("kind", "a", "b", "tau", "s_or_sigma", "witness"), rows,
        comments=[
            f"reentry_theta={diag.excursion_reentry_theta}",
            f"short_off_exit_theta={diag.short_off_exit_theta}",
            f"attractor={diag.attractor_kind}",
        ],
    )
    print(f"a1={diag.a1} a2={diag.a2} a3={diag.a3} attractor={diag.attractor_kind}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = merge_options(args)
        out = args.out
        os.makedirs(out, exist_ok=True)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if args.command == "simulate":
            cmd_simulate(opts, out)
        elif args.command == "zero-delay":
            cmd_zero_delay(opts, out)
        elif args.command == "asymptote":
            cmd_asymptote(opts, out)
        elif args.command == "scan":
            cmd_scan(opts, out)
        elif args.command == "burst":
            cmd_burst(opts, out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SimulationError, ValueError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: invert, forward, roundtrip, map, check, specfun.

File conventions: CSV data files carry "#"-prefixed "key = value" metadata
lines before the column header, numeric fields are written with 12
significant digits, and each command prints a JSON report to stdout.
Exit codes: 0 success, 2 usage/parse error, 3 no admissible T,
4 determinant scan unsettled, 1 any other deliberate failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, fields

import numpy as np

from . import __version__
from .consistency import admissible_1d, admissibility_map, scan_zeros, select_physical
from .ctcore import (
    InputSet,
    ShiftedSet,
    asymptotic_data,
    expansion_coeffs,
    moment_closed_form,
    phases_from_T,
    solve_T,
    sum_rules,
)
from .errors import (
    CtinvError,
    DomainError,
    ParseError,
    TailFitError,
    UnsettledScanError,
)
from .forward import SampledPotential, WoodsSaxon, extract_phase, phase_table
from .glm import (
    PotentialProfile,
    RadialGrid,
    TailFit,
    moment_numeric,
    potential,
    solve_kernel,
    transformed_wave,
)
from .specfun import bessel_jy, riccati

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_ADMISSIBLE = 3
EXIT_UNSETTLED = 4


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


@dataclass
class RunConfig:
    """Flat configuration; file keys and CLI flags share these names."""

    lambda_max: float = 400.0
    step: float = 0.005
    k_range: int = 3
    seeds_per_axis: int = 12
    scan_resolution: float = 0.05
    map_resolution: float = 0.02
    forward_lambda: float = 60.0
    threads: int = 1


_CONFIG_ALIASES = {"lambda": "lambda_max", "h": "step"}


def load_config(path: str | None) -> RunConfig:
    """Read a flat key=value config file; CTINV_CONFIG supplies the default path."""
    cfg = RunConfig()
    if path is None:
        path = os.environ.get("CTINV_CONFIG")
    if not path:
        return cfg
    try:
        text = open(path, "r", encoding="utf-8").read()
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}")
    types = {f.name: f.type for f in fields(RunConfig)}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key=value in {path}", line=lineno)
        key, _, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        key = _CONFIG_ALIASES.get(key, key)
        if key not in types:
            raise ParseError(f"unknown config key {key!r} in {path}", line=lineno)
        try:
            caster = int if types[key] == "int" else float
            setattr(cfg, key, caster(value.strip()))
        except ValueError:
            raise ParseError(f"bad value for {key!r} in {path}", line=lineno)
    return cfg


def read_phase_file(path: str) -> InputSet:
    """Parse 'ell delta' lines (comma or whitespace separated, # comments)."""
    try:
        text = open(path, "r", encoding="utf-8").read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")
    ells: list[int] = []
    deltas: list[float] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ParseError(f"expected 'ell delta', got {raw!r}", line=lineno)
        try:
            ell = int(parts[0])
            delta = float(parts[1])
        except ValueError:
            raise ParseError(f"malformed numbers in {raw!r}", line=lineno)
        ells.append(ell)
        deltas.append(delta)
    if not ells:
        raise ParseError(f"no phase shifts found in {path}")
    try:
        return InputSet(tuple(ells), tuple(deltas))
    except DomainError as exc:
        raise ParseError(f"invalid phase table in {path}: {exc}")


def _write_lines(path: str, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_potential_csv(path: str, profile: PotentialProfile, input_set: InputSet | None = None) -> None:
    lines = [f"# ctinv potential v{__version__}"]
    lines.append("# S = " + ",".join(str(int(e)) for e in profile.ells))
    if input_set is not None:
        lines.append("# deltas = " + ",".join(_fmt(d) for d in input_set.deltas))
    if profile.Ls:
        lines.append("# T = " + ",".join(_fmt(v) for v in profile.Ls))
    lines.append("# h = " + _fmt(profile.h))
    lines.append("# lambda = " + _fmt(profile.r_max))
    if profile.q_origin is not None:
        lines.append("# q0 = " + _fmt(profile.q_origin))
    if profile.tail is not None:
        lines.append("# alpha = " + _fmt(profile.tail.alpha))
        lines.append("# beta = " + _fmt(profile.tail.beta))
        lines.append("# gamma = " + _fmt(profile.tail.gamma))
        lines.append("# tail_rms = " + _fmt(profile.tail.rms))
    lines.append("r,q")
    for r, q in zip(profile.r, profile.q):
        lines.append(f"{_fmt(r)},{_fmt(q)}")
    _write_lines(path, lines)


def read_potential_csv(path: str):
    """Read a potential CSV back: (r, q, tail or None, metadata dict)."""
    try:
        text = open(path, "r", encoding="utf-8").read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")
    meta: dict[str, str] = {}
    rs: list[float] = []
    qs: list[float] = []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta[key.strip()] = value.strip()
            continue
        if not seen_header:
            if line.lower().replace(" ", "") != "r,q":
                raise ParseError(f"expected header 'r,q', got {raw!r}", line=lineno)
            seen_header = True
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 'r,q' pair, got {raw!r}", line=lineno)
        try:
            rs.append(float(parts[0]))
            qs.append(float(parts[1]))
        except ValueError:
            raise ParseError(f"malformed numbers in {raw!r}", line=lineno)
    if len(rs) < 4:
        raise ParseError(f"fewer than 4 samples in {path}")
    tail = None
    if all(k in meta for k in ("alpha", "beta", "gamma")):
        try:
            tail = TailFit(
                float(meta["alpha"]),
                float(meta["beta"]),
                float(meta["gamma"]),
                float(meta.get("tail_rms", 0.0)),
                rs[-1],
            )
        except ValueError:
            raise ParseError(f"malformed tail coefficients in {path}")
    return np.asarray(rs), np.asarray(qs), tail, meta


def write_phase_csv(path: str, table, meta: dict[str, str]) -> None:
    lines = [f"# ctinv phases v{__version__}"]
    for key, value in meta.items():
        lines.append(f"# {key} = {value}")
    lines.append("ell,delta,b_norm,residual")
    for row in table.rows:
        if row.error is None:
            lines.append(
                f"{row.ell},{_fmt(row.delta)},{_fmt(row.b_norm)},{_fmt(row.residual)}"
            )
        else:
            lines.append(f"# ell {row.ell} failed: {row.error}")
    _write_lines(path, lines)


def write_map_csv(path: str, amap, meta: dict[str, str]) -> None:
    lines = [f"# ctinv map v{__version__}"]
    lines.append("# S = " + ",".join(str(e) for e in amap.ells))
    for key, value in meta.items():
        lines.append(f"# {key} = {value}")
    lines.append("L1,L2,admissible")
    for l1, l2, flag in amap.rows():
        lines.append(f"{_fmt(l1)},{_fmt(l2)},{flag}")
    _write_lines(path, lines)


def _jsonable(obj):
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    return obj


def _emit(report: dict) -> None:
    print(json.dumps(_jsonable(report), indent=2, sort_keys=True))


def _verdict_dict(verdict) -> dict:
    return {
        "admissible": verdict.admissible,
        "settled": verdict.settled,
        "zeros": list(verdict.zeros),
        "scan_r_max": verdict.r_max,
    }


def _invert_pipeline(input_set: InputSet, cfg: RunConfig, out: str | None):
    """Shared by invert and roundtrip: returns (exit_code, report, profile)."""
    t0 = time.perf_counter()
    report: dict = {
        "input": {"ells": list(input_set.ells), "deltas": list(input_set.deltas)},
        "grid": {"h": cfg.step, "lambda": cfg.lambda_max},
    }
    solve = solve_T(
        input_set,
        seeds_per_axis=cfg.seeds_per_axis,
        k_range=cfg.k_range,
    )
    if solve.zero_potential:
        grid = RadialGrid(cfg.step, cfg.lambda_max)
        profile = PotentialProfile(
            grid.r,
            np.zeros_like(grid.r),
            tuple(float(e) for e in input_set.ells),
            (),
            TailFit(0.0, 0.0, 0.0, 0.0, float(grid.r[-1])),
            cfg.step,
            float(grid.r[-1]),
            0.0,
        )
        report.update(
            zero_potential=True,
            candidates=[],
            chosen_T=None,
            moment_closed_form=0.0,
            moment_numeric=0.0,
            timing_seconds=time.perf_counter() - t0,
        )
        if out:
            write_potential_csv(out, profile, input_set)
            report["out"] = out
        return EXIT_OK, report, profile
    report["zero_potential"] = False
    if not solve.candidates:
        finite = [x for x in solve.seed_residuals if math.isfinite(x)]
        report.update(
            candidates=[],
            chosen_T=None,
            seeds_tried=solve.seeds_tried,
            best_seed_residual=min(finite) if finite else None,
            timing_seconds=time.perf_counter() - t0,
        )
        return EXIT_NO_ADMISSIBLE, report, None
    sel = select_physical(input_set, solve.candidates, resolution=cfg.scan_resolution)
    report["candidates"] = [
        {"T": list(cand.Ls), **_verdict_dict(verdict)}
        for cand, verdict in zip(solve.candidates, sel.verdicts)
    ]
    report["ambiguous"] = sel.ambiguous
    if not sel.admissible:
        report.update(chosen_T=None, timing_seconds=time.perf_counter() - t0)
        return (
            EXIT_UNSETTLED if sel.unsettled else EXIT_NO_ADMISSIBLE,
            report,
            None,
        )
    chosen = sel.chosen or sel.admissible[0]
    report["chosen_T"] = list(chosen.Ls)
    grid = RadialGrid(cfg.step, cfg.lambda_max)
    kernel = solve_kernel(input_set, chosen, grid)
    profile = potential(input_set, chosen, grid, kernel=kernel)
    report["q_origin"] = profile.q_origin
    report["moment_closed_form"] = moment_closed_form(input_set, chosen)
    try:
        report["moment_numeric"] = moment_numeric(profile)
    except TailFitError as exc:
        report["moment_numeric"] = None
        report["moment_note"] = str(exc)
    if profile.tail is not None:
        report["tail"] = {
            "alpha": profile.tail.alpha,
            "beta": profile.tail.beta,
            "gamma": profile.tail.gamma,
            "rms": profile.tail.rms,
        }
    asym = asymptotic_data(input_set, chosen)
    report["tail_closed_form"] = {"alpha": asym.alpha, "beta": asym.beta}
    report["expansion_coeffs"] = list(expansion_coeffs(input_set, chosen))
    try:
        b_factors = [
            extract_phase(
                grid.r, transformed_wave(input_set, chosen, float(ell), grid, kernel), ell
            ).b_norm
            for ell in input_set.ells
        ]
        rules = sum_rules(input_set, chosen, input_set.deltas, b_factors)
        report["sum_rules"] = {
            "residual_cos": rules.residual_cos,
            "residual_sin": rules.residual_sin,
            "coeff_sum": rules.coeff_sum,
            "b_factors": b_factors,
        }
    except CtinvError as exc:
        report["sum_rules"] = None
        report["sum_rule_note"] = str(exc)
    report["timing_seconds"] = time.perf_counter() - t0
    if out:
        write_potential_csv(out, profile, input_set)
        report["out"] = out
    return EXIT_OK, report, profile


def cmd_invert(args) -> int:
    cfg = _merged_config(args)
    input_set = read_phase_file(args.phases)
    code, report, _ = _invert_pipeline(input_set, cfg, args.out or "potential.csv")
    report["command"] = "invert"
    _emit(report)
    return code


def cmd_forward(args) -> int:
    cfg = _merged_config(args)
    t0 = time.perf_counter()
    if args.ws is not None:
        if len(args.ws) != 3:
            raise ParseError("--ws needs DEPTH,RADIUS,DIFFUSENESS")
        pot = WoodsSaxon(*args.ws)
        grid = RadialGrid(cfg.step, cfg.forward_lambda)
    else:
        r, q, tail, _ = read_potential_csv(args.potential)
        pot = SampledPotential.from_arrays(r, q, tail, description=f"file:{args.potential}")
        grid = RadialGrid(cfg.step, float(r[-1]))
    table = phase_table(pot, int(args.ellmax), grid)
    out = args.out or "phases.csv"
    write_phase_csv(
        out,
        table,
        {
            "potential": table.source,
            "h": _fmt(grid.h),
            "lambda": _fmt(grid.r[-1]),
        },
    )
    report = {
        "command": "forward",
        "potential": table.source,
        "grid": {"h": grid.h, "lambda": float(grid.r[-1])},
        "phases": [
            {
                "ell": row.ell,
                "delta": row.delta,
                "b_norm": row.b_norm,
                "residual": row.residual,
                "error": row.error,
            }
            for row in table.rows
        ],
        "out": out,
        "timing_seconds": time.perf_counter() - t0,
    }
    _emit(report)
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    cfg = _merged_config(args)
    t0 = time.perf_counter()
    input_set = read_phase_file(args.phases)
    code, report, profile = _invert_pipeline(input_set, cfg, args.out)
    report["command"] = "roundtrip"
    if code != EXIT_OK:
        _emit(report)
        return code
    if report.get("zero_potential"):
        report["max_phase_discrepancy"] = 0.0
        _emit(report)
        return EXIT_OK
    pot = SampledPotential.from_profile(profile)
    grid = RadialGrid(profile.h, profile.r_max)
    table = phase_table(pot, list(input_set.ells), grid)
    comparison = []
    worst = 0.0
    for ell, delta_in in zip(input_set.ells, input_set.deltas):
        try:
            delta_out = table.delta(ell)
        except CtinvError as exc:
            comparison.append({"ell": ell, "input": delta_in, "error": str(exc)})
            worst = math.inf
            continue
        diff = abs(
            math.remainder(delta_out - delta_in, math.pi)
        )
        comparison.append(
            {"ell": ell, "input": delta_in, "recovered": delta_out, "abs_diff": diff}
        )
        worst = max(worst, diff)
    report["phases"] = comparison
    report["max_phase_discrepancy"] = worst
    parities = {int(ell) % 2 for ell in input_set.ells}
    if len(parities) == 1:
        other = [
            ell
            for ell in range(int(max(input_set.ells)) + 2)
            if ell % 2 != next(iter(parities))
        ]
        leak_table = phase_table(pot, other, grid)
        leakage = []
        worst_leak = 0.0
        for ell in other:
            try:
                tan_delta = math.tan(leak_table.delta(ell))
            except CtinvError as exc:
                leakage.append({"ell": ell, "error": str(exc)})
                worst_leak = math.inf
                continue
            leakage.append({"ell": ell, "tan_delta": tan_delta})
            worst_leak = max(worst_leak, abs(tan_delta))
        report["parity_leakage"] = {"ells": other, "rows": leakage, "max_abs_tan": worst_leak}
    report["timing_seconds"] = time.perf_counter() - t0
    _emit(report)
    return EXIT_OK


def cmd_map(args) -> int:
    cfg = _merged_config(args)
    t0 = time.perf_counter()
    ells = args.ells
    if len(ells) != 2:
        raise ParseError("map needs exactly two angular momenta, e.g. --ells 0,1")
    if len(args.box) != 4:
        raise ParseError("--box needs four numbers A,B,C,D")
    amap = admissibility_map(
        ells,
        box=tuple(args.box),
        resolution=args.res if args.res is not None else cfg.map_resolution,
        r_max=args.lam,
        scan_resolution=cfg.scan_resolution,
        threads=args.threads if args.threads is not None else cfg.threads,
    )
    out = args.out or "map.csv"
    write_map_csv(
        out,
        amap,
        {
            "box": ",".join(_fmt(v) for v in args.box),
            "res": _fmt(args.res if args.res is not None else cfg.map_resolution),
        },
    )
    report = {
        "command": "map",
        "S": list(amap.ells),
        "cells": int(amap.admissible.size),
        "admissible_cells": int(np.count_nonzero(amap.admissible)),
        "errors": [f"({i},{j}) {msg}" for i, j, msg in amap.errors],
        "out": out,
        "timing_seconds": time.perf_counter() - t0,
    }
    _emit(report)
    return EXIT_OK


def cmd_check(args) -> int:
    cfg = _merged_config(args)
    ells = args.ells
    t_vals = args.T
    if len(ells) != len(t_vals):
        raise ParseError("--ells and --T must have the same length")
    t0 = time.perf_counter()
    shifted = ShiftedSet(tuple(t_vals))
    verdict = scan_zeros(ells, shifted, r_max=args.lam, resolution=cfg.scan_resolution)
    report = {
        "command": "check",
        "S": list(ells),
        "T": list(shifted.Ls),
        **_verdict_dict(verdict),
    }
    if len(ells) == 1:
        report["single_channel_rule"] = admissible_1d(float(ells[0]), shifted.Ls[0])
    implied = None
    try:
        implied = list(phases_from_T(ells, shifted))
        report["implied_phases"] = implied
    except CtinvError as exc:
        report["implied_phases"] = None
        report["phase_note"] = str(exc)
    asym = asymptotic_data(ells, shifted)
    report["tail_closed_form"] = {"alpha": asym.alpha, "beta": asym.beta}
    report["moment_closed_form"] = moment_closed_form(ells, shifted)
    report["moment_numeric"] = None
    report["sum_rules"] = None
    integral_s = all(float(ell) == int(ell) for ell in ells)
    if verdict.admissible and verdict.settled:
        grid = RadialGrid(cfg.step, cfg.lambda_max)
        kernel = solve_kernel(ells, shifted, grid)
        profile = potential(ells, shifted, grid, kernel=kernel)
        report["q_origin"] = profile.q_origin
        try:
            report["moment_numeric"] = moment_numeric(profile)
        except TailFitError as exc:
            report["moment_note"] = str(exc)
        if profile.tail is not None:
            report["tail_fit"] = {
                "alpha": profile.tail.alpha,
                "beta": profile.tail.beta,
                "gamma": profile.tail.gamma,
                "rms": profile.tail.rms,
            }
        if integral_s and implied is not None:
            try:
                b_factors = [
                    extract_phase(
                        grid.r,
                        transformed_wave(ells, shifted, float(ell), grid, kernel),
                        int(ell),
                    ).b_norm
                    for ell in ells
                ]
                rules = sum_rules(ells, shifted, implied, b_factors)
                report["sum_rules"] = {
                    "residual_cos": rules.residual_cos,
                    "residual_sin": rules.residual_sin,
                    "coeff_sum": rules.coeff_sum,
                    "b_factors": b_factors,
                }
            except CtinvError as exc:
                report["sum_rule_note"] = str(exc)
    report["timing_seconds"] = time.perf_counter() - t0
    _emit(report)
    if not verdict.settled:
        return EXIT_UNSETTLED
    return EXIT_OK if verdict.admissible else EXIT_NO_ADMISSIBLE


def cmd_specfun(args) -> int:
    j, y, jp, yp = bessel_jy(args.nu, args.x)
    print(f"J({args.nu:g}, {args.x:g}) = {_fmt(j)}")
    print(f"Y({args.nu:g}, {args.x:g}) = {_fmt(y)}")
    print(f"J'({args.nu:g}, {args.x:g}) = {_fmt(jp)}")
    print(f"Y'({args.nu:g}, {args.x:g}) = {_fmt(yp)}")
    pair = riccati(args.nu, args.x)
    print(f"u({args.nu:g}, {args.x:g}) = {_fmt(pair.u)}")
    print(f"u'({args.nu:g}, {args.x:g}) = {_fmt(pair.du)}")
    print(f"v({args.nu:g}, {args.x:g}) = {_fmt(pair.v)}")
    print(f"v'({args.nu:g}, {args.x:g}) = {_fmt(pair.dv)}")
    return EXIT_OK


def _merged_config(args) -> RunConfig:
    cfg = load_config(getattr(args, "config", None))
    if getattr(args, "lam", None) is not None and args.command in ("invert", "roundtrip"):
        cfg.lambda_max = args.lam
    if getattr(args, "step", None) is not None:
        cfg.step = args.step
    if getattr(args, "k_range", None) is not None:
        cfg.k_range = args.k_range
    return cfg


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _csv_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctinv",
        description="Fixed-energy inverse scattering: phase shifts <-> potential.",
    )
    parser.add_argument("--config", help="key=value config file (or set CTINV_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invert", help="reconstruct a potential from phase shifts")
    p.add_argument("--phases", required=True, help="file of 'ell delta' lines")
    p.add_argument("--lambda", dest="lam", type=float, help="outer radius of the grid")
    p.add_argument("--step", type=float, help="grid step h")
    p.add_argument("--k-range", dest="k_range", type=int, help="branch range for |S| = 1")
    p.add_argument("--out", help="potential CSV path (default potential.csv)")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("forward", help="phase shifts of a given potential")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--potential", help="potential CSV (r,q with # metadata)")
    group.add_argument(
        "--ws",
        type=_csv_floats,
        metavar="DEPTH,RADIUS,DIFFUSENESS",
        help="Woods-Saxon well parameters",
    )
    p.add_argument("--ellmax", required=True, type=int, help="compute ell = 0..ellmax")
    p.add_argument("--step", type=float, help="grid step h")
    p.add_argument("--out", help="phases CSV path (default phases.csv)")
    p.set_defaults(func=cmd_forward)

    p = sub.add_parser("roundtrip", help="invert, re-solve forward, compare phases")
    p.add_argument("--phases", required=True, help="file of 'ell delta' lines")
    p.add_argument("--lambda", dest="lam", type=float, help="outer radius of the grid")
    p.add_argument("--step", type=float, help="grid step h")
    p.add_argument("--k-range", dest="k_range", type=int)
    p.add_argument("--out", help="also write the reconstructed potential CSV here")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("map", help="admissibility map over (L1, L2) for |S| = 2")
    p.add_argument("--ells", required=True, type=_csv_ints, metavar="L1,L2")
    p.add_argument(
        "--box",
        type=_csv_floats,
        default=[-0.5, 6.0, -0.5, 6.0],
        metavar="A,B,C,D",
        help="rectangle [A,B] x [C,D] (default -0.5,6,-0.5,6)",
    )
    p.add_argument("--res", type=float, help="lattice resolution (default 0.02)")
    p.add_argument("--threads", type=int, help="worker threads")
    p.add_argument("--lambda", dest="lam", type=float, help="scan radius per cell")
    p.add_argument("--out", help="map CSV path (default map.csv)")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("check", help="scan one explicit (S, T) pair")
    p.add_argument("--ells", required=True, type=_csv_floats)
    p.add_argument("--T", required=True, type=_csv_floats)
    p.add_argument("--lambda", dest="lam", type=float, help="scan radius")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("specfun", help="evaluate the special functions (debug)")
    p.add_argument("--nu", required=True, type=float)
    p.add_argument("--x", required=True, type=float)
    p.set_defaults(func=cmd_specfun)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"ctinv: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsettledScanError as exc:
        print(f"ctinv: {exc}", file=sys.stderr)
        return EXIT_UNSETTLED
    except CtinvError as exc:
        print(f"ctinv: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

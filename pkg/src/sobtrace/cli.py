"""Command-line front end: `sobtrace analyze|extend|verify|euler`."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from math import factorial

import numpy as np

from .errors import SobtraceError
from .extend_lmp import assemble_extension, extension_eval, lmp_seminorm
from .extend_wmp import wmp_extend, wmp_norm
from .finiteness import deboor_Cm, euler_spline, favard_cm, km_lower_experiment
from .functionals import (TraceReport, n_infty, n_sequence, n_variational_exact,
                          nw_sequence, nw_variational_exact, sharp_k_lp_norm,
                          sharp_m_global_lp_norm)
from .polycore import DEFAULT_RTOL, SampleSet
from .verify import run_verify
from .whitfield import build_field, jet_sequence_functional, jet_variational_exact

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
ANALYZE_SUBSET_GUARD = 20_000


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    m: int = 2
    p: float = 2.0
    input: str | None = None
    mode: str = "lmp"
    sample_count: int = 1000
    seed: int = 42
    out: str | None = None
    tolerance: float = DEFAULT_RTOL
    instances: int = 10
    inject_fault: bool = False

    def __post_init__(self):
        if not 1 <= self.m <= 8:
            raise InputError(f"m must be an integer in 1..8, got {self.m}")
        if not (self.p > 1):
            raise InputError(f"p must be > 1 or 'inf', got {self.p}")
        if self.sample_count < 2:
            raise InputError("sample count must be >= 2")
        if self.mode not in ("lmp", "wmp"):
            raise InputError(f"unknown mode {self.mode!r}")
        if not (self.tolerance > 0):
            raise InputError("tolerance must be positive")


def parse_p(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise InputError(f"bad exponent p={text!r}") from None


def p_json(p: float):
    return "inf" if p == math.inf else p


def read_samples(path: str) -> SampleSet:
    """CSV with header 'x,f'; rows are sorted, duplicates and non-finite values rejected."""
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot open {path}: {exc.strerror}") from None
    with fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["x", "f"]:
        raise InputError("line 1: header must be 'x,f'")
    xs, ys, lines = [], [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise InputError(f"line {lineno}: expected 2 fields, got {len(row)}")
        try:
            x, y = float(row[0]), float(row[1])
        except ValueError:
            raise InputError(f"line {lineno}: not a number") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise InputError(f"line {lineno}: non-finite value")
        xs.append(x)
        ys.append(y)
        lines.append(lineno)
    if not xs:
        raise InputError("no data rows")
    order = np.argsort(xs, kind="stable")
    sx = np.asarray(xs)[order]
    dup = np.flatnonzero(np.diff(sx) == 0)
    if dup.size:
        a, b = sorted((lines[order[dup[0]]], lines[order[dup[0] + 1]]))
        raise InputError(f"line {b}: duplicate x={sx[dup[0]]!r} (also on line {a})")
    return SampleSet(sx, np.asarray(ys)[order])


def _finite_or_none(v):
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


def _ratio(a, b):
    if a is None or b is None or b == 0:
        return None
    return _finite_or_none(a / b)


def analyze(E: SampleSet, m: int, p: float) -> TraceReport:
    rep = TraceReport(m=m, p=p)
    why = rep.reasons
    n = len(E)

    def attempt(name, fn):
        try:
            setattr(rep, name, fn())
        except SobtraceError as exc:
            why[name] = f"{type(exc).__name__}: {exc}"

    if n > m:
        attempt("n_infty", lambda: n_infty(E, m=m))
    else:
        why["n_infty"] = f"needs #E >= m+1 = {m + 1}"
    if n >= max(m, 2):
        attempt("extension_seminorm",
                lambda: lmp_seminorm(assemble_extension(build_field(E, m)), p))
    else:
        why["extension_seminorm"] = f"needs #E >= max(m, 2) = {max(m, 2)}"
    attempt("extension_wnorm", lambda: wmp_norm(wmp_extend(E, m, p), p))

    finite = ("n_exact", "n_sequence", "nw_exact", "nw_sequence",
              "sharp_norms", "sharp_m_global_norm", "jet_sequence", "jet_exact")
    if p == math.inf:
        for k in finite:
            why[k] = "defined for p in (1, inf) only"
    else:
        attempt("nw_sequence", lambda: nw_sequence(E, m=m, p=p))
        if n > m:
            attempt("n_sequence", lambda: n_sequence(E, m=m, p=p))
            attempt("n_exact", lambda: n_variational_exact(E, m=m, p=p))
            attempt("nw_exact", lambda: nw_variational_exact(E, m=m, p=p))
            if math.comb(n, m + 1) <= ANALYZE_SUBSET_GUARD:
                attempt("sharp_norms", lambda: [sharp_k_lp_norm(E, m=m, k=k, p=p)
                                                for k in range(m + 1)])
                attempt("sharp_m_global_norm", lambda: sharp_m_global_lp_norm(E, m=m, p=p))
            else:
                why["sharp_norms"] = why["sharp_m_global_norm"] = "subset count above guard"
        else:
            for k in ("n_sequence", "n_exact", "nw_exact", "sharp_norms", "sharp_m_global_norm"):
                why[k] = f"needs #E >= m+1 = {m + 1}"
        if n >= max(m, 2):
            field = build_field(E, m)
            attempt("jet_sequence", lambda: jet_sequence_functional(field, p))
            attempt("jet_exact", lambda: jet_variational_exact(field, p))
        else:
            why["jet_sequence"] = why["jet_exact"] = f"needs #E >= max(m, 2) = {max(m, 2)}"

    sharp_sum = sum(rep.sharp_norms) if rep.sharp_norms is not None else None
    rep.ratios = {
        "extension_seminorm/n_exact": _ratio(rep.extension_seminorm, rep.n_exact),
        "extension_seminorm/n_sequence": _ratio(rep.extension_seminorm, rep.n_sequence),
        "n_exact/n_sequence": _ratio(rep.n_exact, rep.n_sequence),
        "extension_wnorm/nw_exact": _ratio(rep.extension_wnorm, rep.nw_exact),
        "extension_wnorm/nw_sequence": _ratio(rep.extension_wnorm, rep.nw_sequence),
        "extension_wnorm/sharp_sum": _ratio(rep.extension_wnorm, sharp_sum),
        "extension_seminorm/sharp_m_global_norm": _ratio(rep.extension_seminorm,
                                                         rep.sharp_m_global_norm),
        "jet_exact/extension_seminorm": _ratio(rep.jet_exact, rep.extension_seminorm),
        "extension_seminorm/(m!*n_infty)": _ratio(rep.extension_seminorm,
                                                  None if rep.n_infty is None
                                                  else factorial(m) * rep.n_infty),
    }
    return rep


def report_json(rep: TraceReport, n_points: int) -> dict:
    d = asdict(rep)
    d["p"] = p_json(rep.p)
    for k, v in list(d.items()):
        if isinstance(v, float):
            d[k] = _finite_or_none(v)
    if d["sharp_norms"] is not None:
        d["sharp_norms"] = [_finite_or_none(v) for v in d["sharp_norms"]]
    return {"schema_version": SCHEMA_VERSION, "n_points": n_points, **d}


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(cfg: RunConfig) -> int:
    E = read_samples(cfg.input)
    rep = analyze(E, cfg.m, cfg.p)
    _emit(json.dumps(report_json(rep, len(E)), indent=2) + "\n", cfg.out)
    return EXIT_OK


def extension_table(E: SampleSet, m: int, p: float, mode: str, samples: int):
    F = wmp_extend(E, m, p) if mode == "wmp" else assemble_extension(build_field(E, m))
    delta = 3.0 * (m + 2)
    lo, hi = E.xs[0] - delta, E.xs[-1] + delta
    br = F.breaks[(F.breaks >= lo) & (F.breaks <= hi)]
    xs = np.unique(np.concatenate([np.linspace(lo, hi, samples), br, E.xs]))
    cols = [extension_eval(F, xs, k) for k in range(m + 1)]
    return xs, np.column_stack(cols)


def cmd_extend(cfg: RunConfig) -> int:
    E = read_samples(cfg.input)
    if cfg.mode == "lmp" and len(E) < max(cfg.m, 2):
        raise InputError(f"lmp mode needs at least max(m, 2) = {max(cfg.m, 2)} points")
    xs, vals = extension_table(E, cfg.m, cfg.p, cfg.mode, cfg.sample_count)
    lines = [",".join(["x"] + [f"F{k}" for k in range(cfg.m + 1)])]
    for x, row in zip(xs, vals):
        lines.append(",".join(repr(float(v)) for v in (x, *row)))
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, ps=None) -> int:
    ps = ps or (1.5, 2.0, 4.0)
    lines, summary, ok = run_verify(cfg.seed, cfg.m, ps, cfg.instances,
                                    cfg.tolerance, fault=cfg.inject_fault)
    sys.stdout.write("\n".join(lines) + "\n")
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def euler_table(m_max: int):
    rows = []
    for m in range(1, m_max + 1):
        c, C = favard_cm(m), deboor_Cm(m)
        lower, upper = (math.pi / 2) ** (m - 1), (m - 1) * 9.0 ** m
        spline = euler_spline(m)
        rows.append({
            "m": m,
            "c_m": c,
            "C_m": C,
            "lower_(pi/2)^(m-1)": lower,
            "upper_(m-1)*9^m": upper,
            "chain_holds": bool(lower < c <= C < upper) if m > 2 else None,
            "euler_top_derivative_sup": spline.top_derivative_sup(),
            "c_m*2^m": c * 2.0 ** m,
            "whitney_ratio_n=m+10": km_lower_experiment(m, m + 10),
        })
    return rows


def cmd_euler(cfg: RunConfig) -> int:
    m_max = min(cfg.m, 6)
    doc = {"schema_version": SCHEMA_VERSION, "K(2)": 2.0, "rows": euler_table(m_max)}
    _emit(json.dumps(doc, indent=2) + "\n", cfg.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sobtrace",
                                 description="Whitney-type Sobolev extension and trace functionals on the line.")
    ap.add_argument("command", choices=["analyze", "extend", "verify", "euler"])
    ap.add_argument("--input", help="CSV file with header 'x,f'")
    ap.add_argument("--m", type=int, default=None,
                    help="order m (verify/euler: largest m to run; default 2, verify 3, euler 6)")
    ap.add_argument("--p", default=None, help="exponent p > 1 or 'inf' (default 2)")
    ap.add_argument("--mode", choices=["lmp", "wmp"], default="lmp")
    ap.add_argument("--samples", type=int, default=1000, help="uniform sample count for extend")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--instances", type=int, default=10, help="instances per (m, p) cell for verify")
    ap.add_argument("--inject-fault", action="store_true",
                    help="verify: corrupt one extension (negative control, must exit 1)")
    ap.add_argument("--out", help="write the report here instead of stdout")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = DEFAULT_RTOL
        env = os.environ.get("SOBTRACE_TOL")
        if env:
            try:
                tol = float(env)
            except ValueError:
                raise InputError(f"SOBTRACE_TOL={env!r} is not a number") from None
        default_m = {"verify": 3, "euler": 6}.get(args.command, 2)
        cfg = RunConfig(
            command=args.command,
            m=default_m if args.m is None else args.m,
            p=2.0 if args.p is None else parse_p(args.p),
            input=args.input, mode=args.mode, sample_count=args.samples,
            seed=args.seed, out=args.out, tolerance=tol,
            instances=args.instances, inject_fault=args.inject_fault,
        )
        if cfg.command in ("analyze", "extend") and not cfg.input:
            raise InputError("--input is required")
        if cfg.command == "verify" and cfg.instances < 1:
            raise InputError("--instances must be >= 1")
        if cfg.command == "verify" and cfg.p == math.inf:
            raise InputError("verify needs a finite p")
        if cfg.command == "analyze":
            return cmd_analyze(cfg)
        if cfg.command == "extend":
            return cmd_extend(cfg)
        if cfg.command == "verify":
            return cmd_verify(cfg, None if args.p is None else (cfg.p,))
        return cmd_euler(cfg)
    except InputError as exc:
        print(f"sobtrace: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SobtraceError as exc:
        print(f"sobtrace: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

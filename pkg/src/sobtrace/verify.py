"""Seeded invariant sweep behind `sobtrace verify`."""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .extend_lmp import assemble_extension, lmp_seminorm, smoothness_report
from .extend_wmp import support_radius, wmp_extend, wmp_norm
from .functionals import (n_sequence, n_variational_exact, nw_sequence,
                          nw_variational_exact, sharp_m_global_eval,
                          subsequence_inequality_check, weighted_sharp_eval)
from .instances import random_samples, rng_for
from .polycore import Poly
from .whitfield import build_field, jet_variational_exact

HARD = ("interpolation", "smoothness", "necessity_2", "necessity_e",
        "sequence_bound", "ordering", "qs4", "sharp_sandwich", "support_radius")


def corrupt(F, gap: int = 0, delta: float = 1e-3):
    """Copy of F with one gap coefficient perturbed (negative control)."""
    polys = list(F.gap_polys)
    q = polys[gap]
    c = q.coeffs.copy()
    c[0] += delta * (1.0 + abs(c[0]))
    polys[gap] = Poly(q.center, c)
    return replace(F, gap_polys=tuple(polys))


def check_instance(E, m, p, rng, tol, fault=False):
    """Returns (hard results name -> bool, monitored ratios name -> float)."""
    ok = {}
    mon = {}
    F = assemble_extension(build_field(E, m))
    if fault:
        F = corrupt(F)
    scale = 1.0 + np.abs(E.ys).max()
    interp = max(abs(q(a) - y) for q, a, y in zip(F.gap_polys, E.xs[:-1], E.ys[:-1]))
    ok["interpolation"] = interp <= 1e-12 * scale * 10
    ok["smoothness"] = smoothness_report(F) <= tol

    norm = lmp_seminorm(F, p)
    ne = n_variational_exact(E, m=m, p=p)
    ns = n_sequence(E, m=m, p=p)
    slack = 1.0 + tol
    ok["necessity_2"] = ne <= 2.0 * norm * slack + 1e-300
    field = build_field(E, m)
    ok["necessity_e"] = jet_variational_exact(field, p) <= math.e * norm * slack + 1e-300
    ok["sequence_bound"] = ne ** p <= (2 * m + 2) * m ** (p - 1) * ns ** p * slack + 1e-300
    nwe = nw_variational_exact(E, m=m, p=p)
    nws = nw_sequence(E, m=m, p=p)
    ok["ordering"] = ns <= ne * slack and nws <= nwe * slack

    n = len(E)
    k = int(rng.integers(1, n))
    inner = np.sort(rng.choice(np.arange(1, n - 1), size=k - 1, replace=False)) if k > 1 else []
    sub = np.concatenate([[0], inner, [n - 1]]).astype(int)
    lhs, rhs = subsequence_inequality_check(E, k=k, p=p, sub_indices=sub)
    ok["qs4"] = lhs <= rhs * slack + 1e-300

    xq = rng.uniform(E.xs[0] - 3.0, E.xs[-1] + 3.0, size=20)
    g = sharp_m_global_eval(E, m=m, x=xq)
    w = weighted_sharp_eval(E, m=m, x=xq)
    ok["sharp_sandwich"] = bool(np.all(g <= w * slack + 1e-300) and np.all(w <= 2 * g * slack + 1e-300))

    Fw = wmp_extend(E, m, p)
    ok["support_radius"] = support_radius(Fw, E) <= 3 * (m + 2)

    if ne > 0:
        mon["norm/n_exact"] = norm / ne
        mon["n_exact/n_sequence"] = ne / ns
    if nwe > 0:
        mon["wnorm/nw_exact"] = wmp_norm(Fw, p) / nwe
    return ok, mon


def run_verify(seed: int, m_max: int, ps, instances: int, tol: float, fault: bool = False):
    """Returns (lines of text summary, summary dict, all_passed)."""
    cells = []
    all_ok = True
    for m in range(1, m_max + 1):
        for pi, p in enumerate(ps):
            counts = {h: 0 for h in HARD}
            worst = {}
            for i in range(instances):
                rng = rng_for(seed, m, pi, i)
                n = int(rng.integers(m + 1, min(m + 8, 12) + 1))
                E = random_samples(rng, n, log_gap=(-1.5, 2.0))
                ok, mon = check_instance(E, m, p, rng, tol, fault=fault and i == 0)
                for h, v in ok.items():
                    counts[h] += bool(v)
                for key, v in mon.items():
                    worst[key] = max(worst.get(key, 0.0), v)
            cell_ok = all(c == instances for c in counts.values())
            all_ok &= cell_ok
            cells.append({"m": m, "p": p, "instances": instances, "passed": counts,
                          "worst_ratios": worst, "ok": cell_ok})
    lines = []
    for c in cells:
        status = "PASS" if c["ok"] else "FAIL"
        lines.append(f"[{status}] m={c['m']} p={c['p']:g} instances={c['instances']}")
        for h in HARD:
            lines.append(f"    {h:<16} {c['passed'][h]}/{c['instances']}")
        for key in sorted(c["worst_ratios"]):
            lines.append(f"    worst {key:<20} {c['worst_ratios'][key]:.12g}")
    lines.append("ALL PASS" if all_ok else "FAILURES PRESENT")
    summary = {"schema_version": 1, "seed": seed, "fault_injected": fault,
               "cells": cells, "ok": all_ok}
    return lines, summary, all_ok

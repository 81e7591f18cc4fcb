"""Comparisons of suite output against the measured tables.

Used by ``run --check``.  Each check is a ``(name, passed, detail)`` triple.
"""
from __future__ import annotations

import math

import numpy as np

from . import reference as ref
from .runner import ResultRow

EXACT_TOL = 1e-12
MC_EQUALITY_BAND = (0.95, 1.03)
TABLE4_MC_RMS = 0.03
FIG2_MC_RMS = 0.02
ALPHA1_MC_INFO = 0.03
TABLE2_EXACT_INFO = 0.15
TABLE4_SIGMAS = 3.0


def _index(rows):
    return {(round(r.alpha_or_betaE, 12), r.t_or_hf, r.quantity): r for r in rows}


def _check(name, passed, detail=""):
    return (name, bool(passed), detail)


def check_table2(rows: list[ResultRow]) -> list[tuple]:
    idx = _index(rows)
    out = []
    a1 = ref.TABLE2_ALPHAS[0]
    cells = [idx[(round(a1, 12), str(k), q)] for k in ref.TABLE2_TIMES for q in ("sum_p_I", "exp_neg_I")]
    if cells[0].exact is not None:
        worst = max(
            abs(r.exact - (0.0 if r.quantity == "sum_p_I" else 1.0)) for r in cells
        )
        out.append(_check("table2 alpha=1 exact MI=0 and equality=1", worst < EXACT_TOL, f"max dev {worst:.2e}"))
        devs = []
        for a in ref.TABLE2_ALPHAS[1:]:
            for k, (measured, _) in zip(ref.TABLE2_TIMES, ref.TABLE2[a]["sum_p_I"]):
                devs.append(abs(idx[(round(a, 12), str(k), "sum_p_I")].exact - measured))
        out.append(_check(
            "table2 mixed-alpha exact sum p I within 0.15 of measured",
            max(devs) <= TABLE2_EXACT_INFO, f"max dev {max(devs):.3f}",
        ))
    if cells[0].mc_mean is not None:
        info = [r.mc_mean for r in cells if r.quantity == "sum_p_I"]
        eq = [r.mc_mean for r in cells if r.quantity == "exp_neg_I"]
        lo, hi = MC_EQUALITY_BAND
        out.append(_check(
            "table2 alpha=1 MC |sum p I| <= 0.03 and <e^-I> in [0.95, 1.03]",
            max(abs(v) for v in info) <= ALPHA1_MC_INFO and all(lo <= v <= hi for v in eq),
            f"sum p I {np.round(info, 4).tolist()}, <e^-I> {np.round(eq, 4).tolist()}",
        ))
    return out


def check_table4(rows: list[ResultRow]) -> list[tuple]:
    idx = _index(rows)
    out = []
    first = idx[(0.2, "Hf1", "dissipation")]
    if first.exact is not None:
        ok_closed, ok_measured, details = True, True, []
        for be in ref.TABLE4_BETA_E:
            closed = be * math.tanh(be)
            for hf, (measured, err) in zip(ref.TABLE4_HF, ref.TABLE4[be]["dissipation"]):
                val = idx[(be, hf, "dissipation")].exact
                ok_closed &= abs(val - closed) < EXACT_TOL
                ok_measured &= abs(val - measured) <= TABLE4_SIGMAS * err
                details.append(f"{be}/{hf}:{val:.5f}")
        out.append(_check("table4 exact dissipation = betaE tanh(betaE)", ok_closed, " ".join(details)))
        out.append(_check("table4 exact dissipation within 3 sigma of measured", ok_measured))
        jz = [idx[(be, hf, "jarzynski")].exact for be in ref.TABLE4_BETA_E for hf in ref.TABLE4_HF]
        out.append(_check("table4 exact Jarzynski = 1", max(abs(v - 1) for v in jz) < EXACT_TOL))
    if first.mc_mean is not None:
        lo, hi = MC_EQUALITY_BAND
        jz = [idx[(be, hf, "jarzynski")] for be in ref.TABLE4_BETA_E for hf in ref.TABLE4_HF]
        out.append(_check(
            "table4 MC Jarzynski mean in [0.95, 1.03] with RMS <= 0.03",
            all(lo <= r.mc_mean <= hi and r.mc_rms <= TABLE4_MC_RMS for r in jz),
            f"means {[round(r.mc_mean, 4) for r in jz]} rms max {max(r.mc_rms for r in jz):.4f}",
        ))
    return out


def check_fig2(rows: list[ResultRow]) -> list[tuple]:
    idx = _index(rows)
    a = round(ref.FIG2_ALPHA, 12)
    times = [str(k) for k in ref.TABLE2_TIMES]
    out = []
    if rows and rows[0].exact is not None:
        p_ok = all(
            abs(idx[(a, t, "p_-")].exact - 2 / 3) < EXACT_TOL
            and abs(idx[(a, t, "p_+")].exact - 1 / 3) < EXACT_TOL
            for t in times
        )
        out.append(_check("fig2 exact p_n = (2/3, 1/3) at every t", p_ok))
        varying = [
            q for q in ("q_-", "q_+", "p_-|-", "p_-|+", "p_+|-", "p_+|+")
            if np.ptp([idx[(a, t, q)].exact for t in times]) > 1e-6
        ]
        out.append(_check("fig2 q_m and conditionals vary with t", len(varying) == 6, ",".join(varying)))
    if rows and rows[0].mc_rms is not None:
        worst = max(r.mc_rms for r in rows)
        out.append(_check("fig2 MC per-point RMS <= 0.02", worst <= FIG2_MC_RMS, f"max rms {worst:.4f}"))
    return out


CHECKS = {"table2": check_table2, "table4": check_table4, "fig2": check_fig2}


def run_checks(suite: str, rows: list[ResultRow]) -> list[tuple]:
    if suite not in CHECKS:
        return []
    return CHECKS[suite](rows)

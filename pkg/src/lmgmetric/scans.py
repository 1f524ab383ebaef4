"""Grid scans, the finite-N convergence study and the formula audit.

Every driver returns a list of row dicts with a fixed column order, so the
CLI can emit CSV or JSON from the same rows. Grid points are independent;
they are evaluated on a thread pool and collected in submission order,
which keeps the output identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .errors import DomainError, UsageError
from .limit import (
    Phase,
    RicciMethod,
    Variant,
    classify,
    critical_beta,
    metric_limit,
    metric_limit_numeric,
    pullback_reduced_coefficient,
    reduced_metric,
    ricci_limit,
    single_spin_fisher_rao,
)
from .metric_finite import metric_fluctuations
from .spectrum import ModelParams

PHASE_COLUMNS = ["T", "h", "phase", "mu_xy", "g_bb", "g_bh", "g_hh", "det", "ricci"]
METRIC_COLUMNS = ["T", "h", "phase", "mu_xy", "g_bb", "g_bh", "g_hh", "det"]
CONVERGENCE_COLUMNS = [
    "N",
    "beta",
    "h",
    "g_bb",
    "g_bh",
    "g_hh",
    "det",
    "delta_corrected",
    "delta_printed",
]

NAN = float("nan")


@dataclass(frozen=True)
class ScanRequest:
    t_min: float
    t_max: float
    t_steps: int
    h_min: float
    h_max: float
    h_steps: int
    with_ricci: bool = True
    n_list: Optional[Sequence[int]] = None

    def validate(self) -> None:
        for name, lo, hi, n in (
            ("T", self.t_min, self.t_max, self.t_steps),
            ("h", self.h_min, self.h_max, self.h_steps),
        ):
            if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
                raise UsageError(f"{name} range must satisfy min < max, got [{lo}, {hi}]")
            if int(n) != n or n < 2:
                raise UsageError(f"{name} steps must be an integer >= 2, got {n}")
        if not self.t_min > 0:
            raise UsageError(f"temperatures must be positive, got T_min = {self.t_min}")
        if self.n_list is not None:
            check_n_list(self.n_list)

    def points(self):
        T = np.linspace(self.t_min, self.t_max, int(self.t_steps))
        H = np.linspace(self.h_min, self.h_max, int(self.h_steps))
        return [(float(t), float(h)) for t in T for h in H]


def check_n_list(n_list: Sequence[int]) -> List[int]:
    out = [int(n) for n in n_list]
    if not out:
        raise UsageError("empty N list")
    if any(n != m for n, m in zip(out, n_list)) or any(n <= 0 or n % 2 for n in out):
        raise UsageError(f"N values must be positive even integers, got {list(n_list)}")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise UsageError("N list must be strictly ascending")
    return out


def _pool_map(fn, items: Iterable, threads: int):
    items = list(items)
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def grid_cell(T: float, h: float, with_ricci: bool = True) -> dict:
    beta = 1.0 / T
    pt = classify(beta, h)
    row = {"T": T, "h": h, "phase": pt.phase.value, "mu_xy": pt.mu_xy}
    if pt.phase is Phase.BOUNDARY:
        row.update(g_bb=NAN, g_bh=NAN, g_hh=NAN, det=NAN, ricci=None)
        return row
    lm = metric_limit(beta, h)
    t = lm.tensor
    row.update(g_bb=t.g_bb, g_bh=t.g_bh, g_hh=t.g_hh, det=lm.det, ricci=None)
    if with_ricci and pt.phase is Phase.ORDERED:
        try:
            row["ricci"] = ricci_limit(beta, h)
        except DomainError:
            # stencil straddles the boundary
            row["ricci"] = NAN
    return row


def run_phase_diagram(request: ScanRequest, threads: int = 1) -> List[dict]:
    request.validate()
    return _pool_map(
        lambda p: grid_cell(p[0], p[1], request.with_ricci), request.points(), threads
    )


def run_metric_scan(request: ScanRequest, threads: int = 1) -> List[dict]:
    request.validate()
    rows = _pool_map(lambda p: grid_cell(p[0], p[1], False), request.points(), threads)
    return [{k: r[k] for k in METRIC_COLUMNS} for r in rows]


def _limit_deltas(beta: float, h: float, g) -> dict:
    out = {}
    for variant in Variant:
        try:
            lt = metric_limit(beta, h, variant).tensor
        except DomainError:
            out[variant] = NAN
            continue
        out[variant] = max(
            abs(g.g_bb - lt.g_bb), abs(g.g_bh - lt.g_bh), abs(g.g_hh - lt.g_hh)
        )
    return out


def convergence_row(N: int, beta: float, h: float) -> dict:
    g = metric_fluctuations(ModelParams(N, beta, h)).scaled(1.0 / N)
    d = _limit_deltas(beta, h, g)
    return {
        "N": N,
        "beta": beta,
        "h": h,
        "g_bb": g.g_bb,
        "g_bh": g.g_bh,
        "g_hh": g.g_hh,
        "det": g.det,
        "delta_corrected": d[Variant.CORRECTED],
        "delta_printed": d[Variant.AS_PRINTED],
    }


def run_convergence(beta: float, h: float, n_list: Sequence[int], threads: int = 1) -> List[dict]:
    ns = check_n_list(n_list)
    ModelParams(ns[0], beta, h)
    return _pool_map(lambda n: convergence_row(n, beta, h), ns, threads)


def convergence_verdict(rows: List[dict]) -> Optional[str]:
    """Variant whose distance to the largest-N row is smaller (``None`` on ties)."""
    last = rows[-1]
    dc, dp = last["delta_corrected"], last["delta_printed"]
    if math.isnan(dc) or math.isnan(dp) or dc == dp:
        return None
    return Variant.CORRECTED.value if dc < dp else Variant.AS_PRINTED.value


# ---------------------------------------------------------------------------
# audit

AUDIT_GBB_GRID = [(b, h) for h in (0.0, 0.3) for b in (1.3, 1.6, 2.0, 2.5, 3.0)]
AUDIT_GBB_RTOL = 1e-6
AUDIT_TREND_POINT = (2.0, 0.0)
AUDIT_TREND_NS = (50, 100, 200, 400, 800)
AUDIT_ZERO_T_H = 0.3
AUDIT_ZERO_T_TEMPS = (0.2, 0.1, 0.05, 0.02)
AUDIT_HBAR = (0.0, 0.5, 1.0, 2.0, 3.0)
# (T / T_c, h) pairs, all at or below 0.9 T_c
AUDIT_RICCI_FRACTIONS = [
    (0.2, 0.0), (0.4, 0.0), (0.6, 0.0), (0.9, 0.0),
    (0.3, 0.2), (0.6, 0.2), (0.9, 0.2),
    (0.25, 0.5), (0.5, 0.5), (0.9, 0.5),
]
AUDIT_RICCI_POINTS = [(critical_beta(h) / f, h) for f, h in AUDIT_RICCI_FRACTIONS]


@dataclass
class AuditItem:
    name: str
    verdict: Optional[str]
    passed: bool
    details: dict = field(default_factory=dict)


def audit_ordered_gbb(
    grid=AUDIT_GBB_GRID, rtol: float = AUDIT_GBB_RTOL, trend_ns=AUDIT_TREND_NS
) -> AuditItem:
    matches = {v: 0 for v in Variant}
    worst = {v: 0.0 for v in Variant}
    for beta, h in grid:
        ref = metric_limit_numeric(beta, h)
        for v in Variant:
            val = metric_limit(beta, h, v).tensor.g_bb
            rel = abs(val - ref) / abs(ref)
            worst[v] = max(worst[v], rel)
            matches[v] += rel <= rtol
    winners = [v for v in Variant if matches[v] == len(grid)]
    verdict = winners[0] if len(winners) == 1 else None

    beta, h = AUDIT_TREND_POINT
    finite = [
        metric_fluctuations(ModelParams(n, beta, h)).g_bb / n for n in trend_ns
    ]
    gaps = {
        v: [abs(x - metric_limit(beta, h, v).tensor.g_bb) for x in finite] for v in Variant
    }
    trend = {
        v: all(b < a for a, b in zip(gaps[v], gaps[v][1:])) and gaps[v][-1] < 0.01
        * metric_limit(beta, h, v).tensor.g_bb
        for v in Variant
    }
    zero_t = [
        metric_limit(1.0 / T, AUDIT_ZERO_T_H, verdict or Variant.CORRECTED).tensor.g_bb
        for T in AUDIT_ZERO_T_TEMPS
    ]
    vanishing = all(b < a for a, b in zip(zero_t, zero_t[1:])) and zero_t[-1] < 1e-20
    passed = verdict is not None and trend[verdict] and vanishing and sum(trend.values()) == 1
    return AuditItem(
        "ordered g_bb",
        verdict.value if verdict else None,
        passed,
        {
            "grid_points": len(grid),
            "matches": {v.value: matches[v] for v in Variant},
            "max_rel_error": {v.value: worst[v] for v in Variant},
            "finite_N": dict(zip(trend_ns, finite)),
            "finite_N_trend": {v.value: trend[v] for v in Variant},
            "zero_T_g_bb": dict(zip(AUDIT_ZERO_T_TEMPS, zero_t)),
            "vanishes_as_T_to_0": vanishing,
        },
    )


def audit_reduced_metric(hbars=AUDIT_HBAR, tol: float = 1e-12) -> AuditItem:
    agree = True
    selected = {v: True for v in Variant}
    for hb in hbars:
        beta = 0.5  # paramagnetic for every h
        pull = pullback_reduced_coefficient(beta, hb / beta)
        fr = single_spin_fisher_rao(hb)
        agree &= abs(pull - fr) <= tol
        for v in Variant:
            selected[v] &= abs(reduced_metric(hb, v).coefficient - fr) <= tol
    winners = [v for v in Variant if selected[v]]
    verdict = winners[0] if agree and len(winners) == 1 else None
    return AuditItem(
        "reduced 1D coefficient",
        verdict.value if verdict else None,
        verdict is not None,
        {
            "oracles_agree": agree,
            "coefficient_at_hbar_2": {
                v.value: reduced_metric(2.0, v).coefficient for v in Variant
            },
        },
    )


def audit_ricci(points=AUDIT_RICCI_POINTS, rtol: float = 1e-4) -> AuditItem:
    values = []
    agree = True
    negative = True
    printed_positive = 0
    for beta, h in points:
        fd = ricci_limit(beta, h, RicciMethod.CHRISTOFFEL_FD)
        cf = ricci_limit(beta, h, RicciMethod.ORTHOGONAL_CLOSED_FORM)
        pr = ricci_limit(beta, h, RicciMethod.AS_PRINTED)
        agree &= abs(fd - cf) <= rtol * abs(cf)
        negative &= fd < 0
        printed_positive += pr > 0
        values.append({"beta": beta, "h": h, "christoffel": fd, "orthogonal": cf, "printed": pr})
    return AuditItem(
        "ricci scalar",
        RicciMethod.CHRISTOFFEL_FD.value if agree else None,
        agree and negative,
        {
            "christoffel_matches_orthogonal": agree,
            "negative_everywhere": negative,
            "printed_formula_positive_at": printed_positive,
            "samples": values,
        },
    )


def run_audit() -> List[AuditItem]:
    return [audit_ordered_gbb(), audit_reduced_metric(), audit_ricci()]

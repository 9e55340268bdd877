"""Admissibility checks: where does the Fredholm determinant vanish?

A shifted set T is physically usable for S only when D(r) has no zero on
r > 0; a zero makes the reconstructed potential blow up like a double pole
there and the first moment integral diverge.  For |S| = |T| = 1 the exact
rule is |L - ell| <= 1 (boundary included); in general the determinant is
scanned out to a radius where it has demonstrably settled onto its
r -> infinity limit.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .ctcore import InputSet, ShiftedSet, _as_Ls, _as_ells, _check_disjoint, _ll1
from .errors import DomainError, InternalInconsistencyError
from .glm import det_and_scale, fredholm_det

__all__ = [
    "AdmissibilityVerdict",
    "SelectionReport",
    "AdmissibilityMap",
    "default_scan_radius",
    "admissible_1d",
    "scan_zeros",
    "select_physical",
    "admissibility_map",
]

SETTLE_TOL = 1e-4
DIP_TOL = 1e-10
MAX_DOUBLINGS = 2


@dataclass(frozen=True)
class AdmissibilityVerdict:
    """Scan outcome: zeros found (if any) and whether the scan settled.

    `admissible` is meaningful only when `settled` is True; an unsettled
    verdict with no zeros means the determinant had not converged onto its
    limit within the allowed range doublings.
    """

    admissible: bool
    zeros: tuple[float, ...]
    r_max: float
    settled: bool


def admissible_1d(ell: float, big_l: float) -> bool:
    """Exact single-channel rule: no determinant zero iff |L - ell| <= 1."""
    if not (math.isfinite(ell) and ell > -0.5):
        raise DomainError("ell must be finite and > -1/2")
    if not (math.isfinite(big_l) and big_l > -0.5):
        raise DomainError("L must be finite and > -1/2")
    return abs(big_l - ell) <= 1.0


def default_scan_radius(s, t) -> float:
    """Default outer scan radius for the pair (S, T).

    D(r) approaches its limit like 1/(2r), so resolving the settlement
    band of 1e-4 over the last decade of the range needs a radius in the
    several hundreds regardless of the orders involved.
    """
    ells = _as_ells(s)
    Ls = _as_Ls(t)
    top = float(max(np.max(ells), np.max(Ls)))
    return max(50.0 + 10.0 * top, 700.0)


def _limit_det_and_scale(ells: np.ndarray, Ls: np.ndarray):
    """r -> infinity limit of the matching matrix determinant and scale."""
    den = _ll1(ells)[:, None] - _ll1(Ls)[None, :]
    m_inf = np.cos(0.5 * math.pi * (ells[:, None] - Ls[None, :])) / den
    det = float(np.linalg.det(m_inf))
    scale = float(np.prod(np.linalg.norm(m_inf, axis=1)))
    return det, scale


def scan_zeros(
    s,
    t,
    r_max: float | None = None,
    resolution: float = 0.05,
    max_doublings: int = MAX_DOUBLINGS,
) -> AdmissibilityVerdict:
    """Locate zeros of the Fredholm determinant on (0, r_max].

    Samples D(r) on a uniform grid, brackets sign changes and refines them
    with Brent's method; grid points where |D| drops below 1e-10 times the
    row-norm scale count as (tangential) zeros too.  The scan is `settled`
    when, over the last 10% of the range, D stays within 1e-4 of its final
    sample and the sign of that sample agrees with the analytic
    r -> infinity limit whenever the latter is numerically nonzero (a
    disagreement proves a crossing beyond r_max).  An unsettled scan is
    retried with the range doubled, at most `max_doublings` times.
    """
    ells = _as_ells(s)
    Ls = _as_Ls(t)
    if len(ells) != len(Ls):
        raise DomainError("S and T must have equal size")
    _check_disjoint(ells, Ls)
    if resolution <= 0.0:
        raise DomainError("resolution must be > 0")
    radius = float(r_max) if r_max is not None else default_scan_radius(ells, Ls)
    if radius <= resolution:
        raise DomainError("r_max must exceed the resolution")
    det_inf, scale_inf = _limit_det_and_scale(ells, Ls)

    for attempt in range(max_doublings + 1):
        span = radius * 2.0**attempt
        rr = np.arange(1, int(span / resolution) + 1, dtype=float) * resolution
        det, scale = det_and_scale(ells, Ls, rr)

        zeros: list[float] = []
        sign_change = np.nonzero(det[:-1] * det[1:] < 0.0)[0]
        for k in sign_change:
            root = brentq(
                lambda x: fredholm_det(ells, Ls, x),
                rr[k],
                rr[k + 1],
                xtol=1e-12,
                rtol=8.9e-16,
            )
            zeros.append(float(root))
        dips = np.nonzero(np.abs(det) < DIP_TOL * scale)[0]
        for k in dips:
            x = float(rr[k])
            if not any(abs(x - z) <= resolution for z in zeros):
                zeros.append(x)
        zeros.sort()

        window = rr >= 0.9 * span
        d_end = det[-1]
        settled = bool(np.max(np.abs(det[window] - d_end)) <= SETTLE_TOL)
        if settled and abs(det_inf) > 1e-8 * scale_inf:
            settled = math.copysign(1.0, d_end) == math.copysign(1.0, det_inf)
        if settled:
            return AdmissibilityVerdict(len(zeros) == 0, tuple(zeros), float(span), True)
        if zeros:
            # A located zero decides inadmissibility regardless of settlement.
            return AdmissibilityVerdict(False, tuple(zeros), float(span), True)
    return AdmissibilityVerdict(False, (), float(span), False)


@dataclass
class SelectionReport:
    """Per-candidate verdicts and the physical choice, when unique."""

    chosen: ShiftedSet | None
    admissible: list[ShiftedSet]
    verdicts: list[AdmissibilityVerdict]
    ambiguous: bool
    unsettled: bool


def select_physical(
    input_set: InputSet,
    candidates: list[ShiftedSet],
    r_max: float | None = None,
    resolution: float = 0.05,
) -> SelectionReport:
    """Scan every candidate T and single out the admissible one(s).

    For |S| = 1 the exact |L - ell| <= 1 rule is applied as well and any
    disagreement with the scan raises InternalInconsistencyError (the rule
    is an iff, so disagreement means the scan failed).  `chosen` is set
    only when exactly one candidate is admissible; more than one sets
    `ambiguous` and callers must decide (all of them reproduce the data).
    """
    ells = tuple(input_set.ells) if hasattr(input_set, "ells") else tuple(input_set)
    verdicts: list[AdmissibilityVerdict] = []
    admissible: list[ShiftedSet] = []
    unsettled = False
    for cand in candidates:
        verdict = scan_zeros(ells, cand, r_max=r_max, resolution=resolution)
        if len(ells) == 1 and verdict.settled:
            rule = admissible_1d(float(ells[0]), cand.Ls[0])
            if rule != verdict.admissible:
                raise InternalInconsistencyError(
                    f"scan and single-channel rule disagree for T={cand.Ls}"
                )
        verdicts.append(verdict)
        if not verdict.settled:
            unsettled = True
        elif verdict.admissible:
            admissible.append(cand)
    chosen = admissible[0] if len(admissible) == 1 else None
    return SelectionReport(chosen, admissible, verdicts, len(admissible) > 1, unsettled)


@dataclass
class AdmissibilityMap:
    """Boolean admissibility over a rectangle of candidate pairs (L1, L2)."""

    ells: tuple[int, ...]
    axis1: np.ndarray
    axis2: np.ndarray
    admissible: np.ndarray  # bool, shape (len(axis1), len(axis2))
    errors: list[tuple[int, int, str]] = field(default_factory=list)

    def rows(self):
        """Yield (L1, L2, 0/1) in row-major order for CSV export."""
        for i, l1 in enumerate(self.axis1):
            for j, l2 in enumerate(self.axis2):
                yield float(l1), float(l2), int(self.admissible[i, j])


def admissibility_map(
    s,
    box: tuple[float, float, float, float] = (-0.5, 6.0, -0.5, 6.0),
    resolution: float = 0.02,
    r_max: float | None = None,
    scan_resolution: float = 0.05,
    threads: int = 1,
) -> AdmissibilityMap:
    """Scan a lattice of (L1, L2) pairs for a two-channel S.

    Cells with L <= -1/2, coincident components, or a collision with S are
    inadmissible by construction and are not scanned.  The map is symmetric
    under swapping L1 and L2 (T is a set), so only the upper triangle is
    computed and mirrored.  Per-cell failures are recorded in `errors` and
    leave the cell marked inadmissible rather than aborting the sweep.
    """
    ells_arr = _as_ells(s)
    if len(ells_arr) != 2:
        raise DomainError("the admissibility map is defined for |S| = 2")
    ells = tuple(int(e) for e in ells_arr)
    a, b, c, d = (float(x) for x in box)
    if not (b > a and d > c):
        raise DomainError("box must satisfy a < b and c < d")
    axis1 = np.arange(a, b + 0.5 * resolution, resolution)
    axis2 = np.arange(c, d + 0.5 * resolution, resolution)
    flags = np.zeros((len(axis1), len(axis2)), dtype=bool)
    errors: list[tuple[int, int, str]] = []

    def valid(l1: float, l2: float) -> bool:
        if l1 <= -0.5 + 1e-9 or l2 <= -0.5 + 1e-9:
            return False
        if abs(l1 - l2) < 1e-6:
            return False
        if min(abs(l1 - e) for e in ells) < 1e-6:
            return False
        if min(abs(l2 - e) for e in ells) < 1e-6:
            return False
        return True

    cells = [
        (i, j)
        for i in range(len(axis1))
        for j in range(len(axis2))
        if (axis2[j] > axis1[i] or abs(axis2[j] - axis1[i]) < 1e-12)
        and valid(float(axis1[i]), float(axis2[j]))
    ]

    def work(idx: tuple[int, int]):
        i, j = idx
        try:
            verdict = scan_zeros(
                ells_arr,
                (float(axis1[i]), float(axis2[j])),
                r_max=r_max,
                resolution=scan_resolution,
            )
            return i, j, bool(verdict.settled and verdict.admissible), None
        except Exception as exc:  # recorded per cell, sweep continues
            return i, j, False, f"{type(exc).__name__}: {exc}"

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, cells))
    else:
        results = [work(idx) for idx in cells]
    for i, j, ok, err in results:
        flags[i, j] = ok
        if err is not None:
            errors.append((i, j, err))

    # Mirror across the diagonal where both axes cover the same values.
    for i, l1 in enumerate(axis1):
        for j, l2 in enumerate(axis2):
            if l2 < l1:
                i2 = np.argmin(np.abs(axis1 - l2))
                j2 = np.argmin(np.abs(axis2 - l1))
                if abs(axis1[i2] - l2) < 1e-9 and abs(axis2[j2] - l1) < 1e-9:
                    flags[i, j] = flags[i2, j2]
    return AdmissibilityMap(ells, axis1, axis2, flags, errors)

"""Forward radial problem at unit energy: integrate, then read off phases.

The regular solution of

    phi'' = [ ell(ell+1)/r^2 + q(r) - 1 ] phi,      phi ~ r^{ell+1} at 0,

is propagated with the Numerov three-term scheme (O(h^4) global error) and
matched to B sin(r - ell pi/2 + delta) by least squares over an asymptotic
window.  Seeds are normalised like the free solution r^{ell+1}/(2ell+1)!!
so that q = 0 reproduces the Riccati-Bessel u_ell exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .ctcore import reduce_phase
from .errors import DomainError, WindowTooSmallError
from .glm import PotentialProfile, RadialGrid, TailFit, tail_q
from .specfun import riccati

__all__ = [
    "WoodsSaxon",
    "SampledPotential",
    "PhaseExtraction",
    "PhaseRow",
    "PhaseShiftTable",
    "integrate_regular",
    "extract_phase",
    "phase_table",
]


@dataclass(frozen=True)
class WoodsSaxon:
    """Attractive Woods-Saxon well -depth / (1 + exp((r - radius)/diffuseness))."""

    depth: float
    radius: float
    diffuseness: float

    def __post_init__(self):
        if self.diffuseness <= 0.0:
            raise DomainError("diffuseness must be > 0")

    def __call__(self, r):
        rr = np.asarray(r, dtype=float)
        with np.errstate(over="ignore"):
            return -self.depth / (1.0 + np.exp((rr - self.radius) / self.diffuseness))

    def describe(self) -> str:
        return f"ws({self.depth:g},{self.radius:g},{self.diffuseness:g})"


class SampledPotential:
    """A radial potential the integrator can evaluate anywhere.

    Wraps either an analytic callable or grid samples.  Sampled data is
    interpolated with a cubic spline; beyond the last sample the fitted
    oscillatory tail (when available) or zero is used, and below the first
    sample the value is held constant (reconstructed potentials have
    q'(0) = 0, so the constant extension is second-order accurate).
    """

    def __init__(self, fn: Callable, description: str = "callable", r_span: tuple[float, float] | None = None):
        self._fn = fn
        self.description = description
        self.r_span = r_span

    @classmethod
    def from_callable(cls, fn: Callable, description: str | None = None) -> "SampledPotential":
        if description is None:
            description = getattr(fn, "describe", lambda: "callable")()
        return cls(fn, description)

    @classmethod
    def from_arrays(
        cls,
        r: np.ndarray,
        q: np.ndarray,
        tail: TailFit | None = None,
        description: str = "sampled",
    ) -> "SampledPotential":
        r = np.asarray(r, dtype=float)
        q = np.asarray(q, dtype=float)
        if r.ndim != 1 or r.shape != q.shape or len(r) < 4:
            raise DomainError("need matching 1-d arrays with at least 4 samples")
        if np.any(np.diff(r) <= 0.0) or r[0] <= 0.0:
            raise DomainError("radii must be positive and strictly increasing")
        spline = CubicSpline(r, q, extrapolate=False)
        r_lo, r_hi = float(r[0]), float(r[-1])
        q_lo = float(q[0])

        def evaluate(x):
            xx = np.asarray(x, dtype=float)
            scalar = xx.ndim == 0
            xx = np.atleast_1d(xx)
            out = np.empty_like(xx, dtype=float)
            inside = (xx >= r_lo) & (xx <= r_hi)
            out[inside] = spline(xx[inside])
            out[xx < r_lo] = q_lo
            above = xx > r_hi
            if np.any(above):
                if tail is not None:
                    out[above] = tail_q(tail, xx[above])
                else:
                    warnings.warn(
                        f"no fitted tail for {description}: treating q = 0 "
                        f"beyond r = {r_hi:g}",
                        stacklevel=2,
                    )
                    out[above] = 0.0
            return float(out[0]) if scalar else out

        return cls(evaluate, description, (r_lo, r_hi))

    @classmethod
    def from_profile(cls, profile: PotentialProfile) -> "SampledPotential":
        label = f"reconstruction(S={list(profile.ells)}, T={[round(v, 6) for v in profile.Ls]})"
        return cls.from_arrays(profile.r, profile.q, profile.tail, label)

    def __call__(self, r):
        return self._fn(np.asarray(r, dtype=float))


def _double_factorial_odd(ell: int) -> float:
    """(2 ell + 1)!! as a float."""
    out = 1.0
    for k in range(3, 2 * ell + 2, 2):
        out *= k
    return out


def integrate_regular(pot, ell: int, grid: RadialGrid) -> np.ndarray:
    """Regular solution phi_ell on grid.r for the given potential.

    `pot` is any callable q(r) (SampledPotential included).  The leading
    samples come from the small-r series
    phi = r^{ell+1}/(2ell+1)!! [1 + (q0 - 1) r^2 / (2(2ell+3))], extended
    past any points where the centrifugal term makes h^2 f / 12 approach 1
    (the scheme's denominator would vanish there); after that Numerov's
    method propagates.  If the amplitude ever exceeds 1e250 the whole
    history is rescaled in place and propagation continues; the returned
    samples are then uniformly scaled, which leaves phases untouched.
    """
    if ell < 0 or int(ell) != ell:
        raise DomainError("ell must be a non-negative integer")
    ell = int(ell)
    r = grid.r
    if len(r) < 8:
        raise DomainError("grid too short to integrate")
    h = grid.h
    q = np.asarray(pot(r), dtype=float)
    if not np.all(np.isfinite(q)):
        raise DomainError("potential evaluates to non-finite values on the grid")
    f = ell * (ell + 1.0) / r**2 + q - 1.0

    h2 = h * h
    # seed every point where |h^2 f / 12| >= 0.3, plus one more pair
    n_seed = 2
    while n_seed < len(r) - 4 and abs(h2 * f[n_seed - 2] / 12.0) >= 0.3:
        n_seed += 1
    norm = _double_factorial_odd(ell)
    a2 = (q[0] - 1.0) / (2.0 * (2.0 * ell + 3.0))
    phi = np.empty_like(r)
    rs = r[:n_seed]
    phi[:n_seed] = rs ** (ell + 1) / norm * (1.0 + a2 * rs**2)
    w_prev = (1.0 - h2 / 12.0 * f[n_seed - 2]) * phi[n_seed - 2]
    w_cur = (1.0 - h2 / 12.0 * f[n_seed - 1]) * phi[n_seed - 1]
    for i in range(n_seed - 1, len(r) - 1):
        w_next = 2.0 * w_cur - w_prev + h2 * f[i] * phi[i]
        phi_next = w_next / (1.0 - h2 / 12.0 * f[i + 1])
        if abs(phi_next) > 1e250:
            phi[: i + 1] *= 1e-100
            w_next *= 1e-100
            w_cur *= 1e-100
            phi_next *= 1e-100
        phi[i + 1] = phi_next
        w_prev, w_cur = w_cur, w_next
    return phi


class PhaseExtraction(NamedTuple):
    """Least-squares asymptotic match phi ~ b sin(r - ell pi/2 + delta)."""

    delta: float
    b_norm: float
    residual: float


def extract_phase(
    r: np.ndarray,
    wave: np.ndarray,
    ell: int,
    window: tuple[float, float] | None = None,
) -> PhaseExtraction:
    """Fit the free-solution pair over a window and read off the phase.

    Beyond the potential the wave is exactly p u_ell(r) - m v_ell(r) with
    p = B cos delta, m = B sin delta, so the fit basis is (u_ell, -v_ell)
    rather than bare sinusoids; that keeps every 1/r order of the free
    equation out of the residual.  The window defaults to the last quarter
    of the grid and must span at least two oscillation periods.  The rms
    misfit must stay below 1e-3 |b|; a larger residual means the window is
    not asymptotic (or too short) and raises WindowTooSmallError.
    """
    r = np.asarray(r, dtype=float)
    wave = np.asarray(wave, dtype=float)
    if r.shape != wave.shape or r.ndim != 1:
        raise DomainError("r and wave must be matching 1-d arrays")
    if window is None:
        window = (float(r[0] + 0.75 * (r[-1] - r[0])), float(r[-1]))
    lo, hi = float(window[0]), float(window[1])
    mask = (r >= lo) & (r <= hi)
    if hi - lo < 4.0 * math.pi or int(np.count_nonzero(mask)) < 16:
        raise WindowTooSmallError(
            f"window [{lo:g}, {hi:g}] spans less than two periods"
        )
    free = riccati(float(ell), r[mask])
    basis = np.column_stack((free.u, -free.v))
    coef, *_ = np.linalg.lstsq(basis, wave[mask], rcond=None)
    a_sin, a_cos = float(coef[0]), float(coef[1])
    delta = reduce_phase(math.atan2(a_cos, a_sin))
    b = a_sin * math.cos(delta) + a_cos * math.sin(delta)
    resid = float(np.sqrt(np.mean((wave[mask] - basis @ coef) ** 2)))
    if abs(b) == 0.0 or resid > 1e-3 * abs(b):
        raise WindowTooSmallError(
            f"asymptotic fit residual {resid:.3g} exceeds 1e-3 |b| = {1e-3 * abs(b):.3g}"
        )
    return PhaseExtraction(delta, b, resid)


@dataclass(frozen=True)
class PhaseRow:
    """One phase-table entry; error is None when extraction succeeded."""

    ell: int
    delta: float | None
    b_norm: float | None
    residual: float | None
    error: str | None = None


@dataclass
class PhaseShiftTable:
    """Phase shifts for ell = 0..ell_max of one potential."""

    source: str
    rows: list[PhaseRow]

    def delta(self, ell: int) -> float:
        for row in self.rows:
            if row.ell == ell:
                if row.delta is None:
                    raise WindowTooSmallError(f"no phase for ell={ell}: {row.error}")
                return row.delta
        raise KeyError(f"ell={ell} not in table")

    @property
    def ok(self) -> bool:
        return all(row.error is None for row in self.rows)


def phase_table(
    pot,
    ells: Sequence[int] | int,
    grid: RadialGrid | None = None,
    window: tuple[float, float] | None = None,
) -> PhaseShiftTable:
    """Integrate and extract phases for several ell at once.

    `ells` is a sequence of angular momenta or an int meaning 0..ell_max.
    Per-ell extraction failures are recorded in the row instead of raised,
    so one bad channel does not lose the others.
    """
    if grid is None:
        grid = RadialGrid(h=0.005, r_max=60.0)
    if isinstance(ells, (int, np.integer)):
        ells = list(range(int(ells) + 1))
    rows: list[PhaseRow] = []
    for ell in ells:
        try:
            wave = integrate_regular(pot, int(ell), grid)
            ext = extract_phase(grid.r, wave, int(ell), window)
            rows.append(PhaseRow(int(ell), ext.delta, ext.b_norm, ext.residual))
        except (DomainError, WindowTooSmallError) as exc:
            rows.append(PhaseRow(int(ell), None, None, None, f"{type(exc).__name__}: {exc}"))
    source = getattr(pot, "description", None) or getattr(pot, "describe", lambda: "callable")()
    return PhaseShiftTable(source, rows)

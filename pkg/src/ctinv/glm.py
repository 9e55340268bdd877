"""Separable translation-kernel machinery on a radial grid.

The kernel K(r, r') = sum_{L in T} A_L(r) u_L(r') is fixed by the pointwise
linear system

    sum_L A_L(r) [u_L(r) v_ell'(r) - u_L'(r) v_ell(r)]
                 / (ell(ell+1) - L(L+1))  =  v_ell(r),   ell in S,

whose matrix determinant D(r) (the Fredholm determinant of the underlying
integral equation) must stay away from zero for the reconstruction to be
admissible.  The potential follows from the kernel diagonal,
q(r) = -(2/r) d/dr [K(r, r)/r].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .ctcore import _as_Ls, _as_ells, _check_disjoint, _ll1, expansion_coeffs
from .errors import DomainError, InadmissibleConfigurationError, TailFitError
from .specfun import riccati

__all__ = [
    "RadialGrid",
    "KernelSolution",
    "TailFit",
    "PotentialProfile",
    "glm_matrix",
    "fredholm_det",
    "det_and_scale",
    "solve_kernel",
    "potential",
    "transformed_wave",
    "kernel_diag_series",
    "tail_q",
    "moment_numeric",
]

DET_FLOOR = 1e-12


@dataclass
class RadialGrid:
    """Uniform radial grid r = h, 2h, ..., ~r_max (the origin excluded)."""

    h: float = 0.005
    r_max: float = 400.0

    def __post_init__(self):
        if not (math.isfinite(self.h) and self.h > 0.0):
            raise DomainError("step h must be finite and > 0")
        if not (math.isfinite(self.r_max) and self.r_max > self.h):
            raise DomainError("r_max must exceed the step")

    @cached_property
    def n(self) -> int:
        return int(round(self.r_max / self.h))

    @cached_property
    def r(self) -> np.ndarray:
        return (np.arange(self.n, dtype=float) + 1.0) * self.h


def _orders_table(orders: np.ndarray, r: np.ndarray):
    """Riccati u, u', v, v' for each order, stacked (len(orders), len(r))."""
    u = np.empty((len(orders), len(r)))
    du = np.empty_like(u)
    v = np.empty_like(u)
    dv = np.empty_like(u)
    for i, lam in enumerate(orders):
        pair = riccati(float(lam), r)
        u[i], du[i], v[i], dv[i] = pair.u, pair.du, pair.v, pair.dv
    return u, du, v, dv


def _matrices(ells: np.ndarray, Ls: np.ndarray, r: np.ndarray):
    """Stacked GLM matrices M(r_k) plus the ingredient tables.

    Returns (M, uL, duL, vE, dvE) with M of shape (len(r), |S|, |T|).
    """
    uL, duL, _, _ = _orders_table(Ls, r)
    _, _, vE, dvE = _orders_table(ells, r)
    den = _ll1(ells)[:, None] - _ll1(Ls)[None, :]
    # wron[k, i, j] = u_{L_j} v'_{ell_i} - u'_{L_j} v_{ell_i} at r_k
    wron = uL.T[:, None, :] * dvE.T[:, :, None] - duL.T[:, None, :] * vE.T[:, :, None]
    return wron / den[None, :, :], uL, duL, vE, dvE


def _validate_pair(s, t):
    ells = _as_ells(s)
    Ls = _as_Ls(t)
    if len(ells) != len(Ls):
        raise DomainError("S and T must have equal size")
    _check_disjoint(ells, Ls)
    return ells, Ls


def glm_matrix(s, t, r: float) -> np.ndarray:
    """The |S| x |T| kernel matching matrix at a single radius."""
    ells, Ls = _validate_pair(s, t)
    rr = np.asarray([float(r)])
    if rr[0] <= 0.0:
        raise DomainError("r must be > 0")
    m, *_ = _matrices(ells, Ls, rr)
    return m[0]


def det_and_scale(s, t, r):
    """Determinant of the matching matrix and its Hadamard row-norm scale.

    The scale (product of row 2-norms) bounds |det| from above and gives
    the natural yardstick for "numerically zero".
    """
    ells, Ls = _validate_pair(s, t)
    rr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(rr <= 0.0):
        raise DomainError("r must be > 0")
    m, *_ = _matrices(ells, Ls, rr)
    det = np.linalg.det(m)
    scale = np.prod(np.linalg.norm(m, axis=2), axis=1)
    if np.isscalar(r) or np.asarray(r).ndim == 0:
        return float(det[0]), float(scale[0])
    return det, scale


def fredholm_det(s, t, r):
    """Fredholm determinant D(r) of the kernel equation (scalar or array)."""
    det, _ = det_and_scale(s, t, r)
    return det


@dataclass
class KernelSolution:
    """Kernel coefficients and derived diagonal data on a grid."""

    grid: RadialGrid
    ells: tuple[float, ...]
    Ls: tuple[float, ...]
    a: np.ndarray  # (n_points, |T|) coefficients A_L(r)
    a_prime: np.ndarray
    k_diag: np.ndarray  # K(r, r)
    k_prime: np.ndarray  # d/dr K(r, r)
    det: np.ndarray
    det_scale: np.ndarray


def solve_kernel(s, t, grid: RadialGrid) -> KernelSolution:
    """Solve the pointwise matching system for A_L and its derivative.

    A' comes from differentiating the system in place (dM/dr has the exact
    entries u_L v_ell / r^2), so no finite differencing of A is involved.

    Raises InadmissibleConfigurationError at the first grid point where
    |D(r)| < 1e-12 * scale; run the consistency scan first to pick a T
    without determinant zeros.
    """
    ells, Ls = _validate_pair(s, t)
    r = grid.r
    m, uL, duL, vE, dvE = _matrices(ells, Ls, r)
    det = np.linalg.det(m)
    scale = np.prod(np.linalg.norm(m, axis=2), axis=1)
    # compare against the grid-wide scale too: for |S|=1 the pointwise
    # Hadamard scale IS |det| and can never expose a vanishing determinant
    bad = np.abs(det) < DET_FLOOR * max(float(np.max(scale)), np.finfo(float).tiny)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise InadmissibleConfigurationError(
            f"kernel determinant vanishes at r = {r[k]:.6g} "
            f"(|D| = {abs(det[k]):.3g}, scale = {scale[k]:.3g})"
        )
    rhs = vE.T  # (n_points, |S|)
    a = np.linalg.solve(m, rhs[..., None])[..., 0]
    # dM/dr[k, i, j] = u_{L_j} v_{ell_i} / r^2
    m_prime = (uL.T[:, None, :] * vE.T[:, :, None]) / (r**2)[:, None, None]
    rhs_prime = dvE.T - np.einsum("kij,kj->ki", m_prime, a)
    a_prime = np.linalg.solve(m, rhs_prime[..., None])[..., 0]
    k_diag = np.sum(a * uL.T, axis=1)
    k_prime = np.sum(a_prime * uL.T + a * duL.T, axis=1)
    return KernelSolution(
        grid, tuple(ells), tuple(Ls), a, a_prime, k_diag, k_prime, det, scale
    )


@dataclass(frozen=True)
class TailFit:
    """Least-squares tail K(r,r) ~ alpha sin 2r + beta cos 2r + gamma."""

    alpha: float
    beta: float
    gamma: float
    rms: float
    window_start: float


def _fit_tail(r: np.ndarray, k_diag: np.ndarray) -> TailFit | None:
    n = len(r)
    start = int(0.75 * n)
    rw = r[start:]
    if len(rw) < 16 or rw[-1] - rw[0] < 4.0 * math.pi:
        return None
    basis = np.column_stack((np.sin(2.0 * rw), np.cos(2.0 * rw), np.ones_like(rw)))
    coef, *_ = np.linalg.lstsq(basis, k_diag[start:], rcond=None)
    resid = k_diag[start:] - basis @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    return TailFit(float(coef[0]), float(coef[1]), float(coef[2]), rms, float(rw[0]))


@dataclass
class PotentialProfile:
    """Reconstructed potential on a grid with its fitted oscillatory tail."""

    r: np.ndarray
    q: np.ndarray
    ells: tuple[float, ...]
    Ls: tuple[float, ...]
    tail: TailFit | None
    h: float
    r_max: float
    q_origin: float | None = None


def _extrapolate_origin(r: np.ndarray, q: np.ndarray) -> float:
    # q is even in r to leading order (q'(0) = 0), so fit q0 + c r^2
    k = min(len(r), 12)
    basis = np.column_stack((np.ones(k), r[:k] ** 2))
    coef, *_ = np.linalg.lstsq(basis, q[:k], rcond=None)
    return float(coef[0])


def potential(
    s, t, grid: RadialGrid | None = None, kernel: KernelSolution | None = None
) -> PotentialProfile:
    """Reconstruct q(r) = -(2/r) d/dr [K(r,r)/r] on the grid.

    The tail of K(r, r) is fitted over the last quarter of the grid; the
    fit is omitted (tail = None) when that window spans less than two
    oscillation periods.  q(0) is reported by quadratic extrapolation of
    the innermost samples (the potential starts with zero slope).
    """
    if grid is None:
        grid = RadialGrid()
    sol = solve_kernel(s, t, grid) if kernel is None else kernel
    r = grid.r
    q = -2.0 * sol.k_prime / r**2 + 2.0 * sol.k_diag / r**3
    tail = _fit_tail(r, sol.k_diag)
    return PotentialProfile(
        r, q, sol.ells, sol.Ls, tail, grid.h, float(r[-1]), _extrapolate_origin(r, q)
    )


def transformed_wave(s, t, ell: float, grid: RadialGrid, kernel: KernelSolution | None = None) -> np.ndarray:
    """Regular solution of the reconstructed potential at angular momentum ell.

    phi_ell = u_ell - sum_L A_L (u_L u_ell' - u_L' u_ell)
                              / (ell(ell+1) - L(L+1)).

    Exact by construction: asymptotically B_ell sin(r - ell pi/2 + delta_ell)
    when ell is in S.
    """
    ells, Ls = _validate_pair(s, t)
    if kernel is None:
        kernel = solve_kernel(s, t, grid)
    r = grid.r
    ue = riccati(float(ell), r)
    uL, duL, _, _ = _orders_table(Ls, r)
    den = _ll1(float(ell)) - _ll1(Ls)
    if np.min(np.abs(den)) < 1e-12:
        raise DomainError(f"ell={ell:g} collides with an element of T")
    wron = uL.T * ue.du[:, None] - duL.T * ue.u[:, None]
    return ue.u - np.sum(kernel.a * wron / den[None, :], axis=1)


def kernel_diag_series(s, t, grid: RadialGrid, waves) -> np.ndarray:
    """K(r, r) assembled from the S-side expansion sum_ell c_ell phi_ell v_ell.

    `waves` maps each ell in S to its transformed wave on the grid (a
    Mapping keyed by ell, or a sequence in S order).  Independent of the
    A_L route through solve_kernel; the two must agree pointwise.
    """
    ells, Ls = _validate_pair(s, t)
    c = expansion_coeffs(ells, Ls)
    r = grid.r
    if isinstance(waves, Mapping):
        seq = [np.asarray(waves[key]) for key in (s.ells if hasattr(s, "ells") else ells)]
    else:
        seq = [np.asarray(w) for w in waves]
    if len(seq) != len(ells):
        raise DomainError("need one transformed wave per element of S")
    total = np.zeros_like(r)
    for ce, ell, phi in zip(c, ells, seq):
        if phi.shape != r.shape:
            raise DomainError("transformed wave not sampled on the grid")
        total += ce * phi * riccati(float(ell), r).v
    return total


def tail_q(tail: TailFit, r) -> np.ndarray:
    """Leading oscillatory tail of the potential, 4(beta sin 2r - alpha cos 2r)/r^2."""
    rr = np.asarray(r, dtype=float)
    return 4.0 * (tail.beta * np.sin(2.0 * rr) - tail.alpha * np.cos(2.0 * rr)) / rr**2


def moment_numeric(profile: PotentialProfile) -> float:
    """First moment integral_0^infinity r q(r) dr of a reconstructed potential.

    Trapezoid over the grid plus the exact tail contribution: r q is the
    total derivative -2 (K/r)', so the remainder beyond r_max equals
    2 K(r_max)/r_max with K evaluated from the fitted tail.
    """
    if profile.tail is None:
        raise TailFitError(
            "tail not fitted (grid too short); rerun with a larger r_max"
        )
    r = np.concatenate(([0.0], profile.r))
    integrand = np.concatenate(([0.0], profile.r * profile.q))
    body = float(np.trapezoid(integrand, r))
    t = profile.tail
    rm = profile.r_max
    k_tail = t.alpha * math.sin(2.0 * rm) + t.beta * math.cos(2.0 * rm) + t.gamma
    return body + 2.0 * k_tail / rm

"""Cylinder and Riccati-Bessel functions at real order, plus their zeros.

All routines are pure functions of their arguments (no hidden state), accept
scalar or array abscissae, and raise typed errors instead of returning
inf/nan.  Orders are real; the radial functions used elsewhere in the
package are

    u_lam(x) = sqrt(pi x / 2) J_{lam+1/2}(x)      (regular at x = 0)
    v_lam(x) = sqrt(pi x / 2) Y_{lam+1/2}(x)      (irregular at x = 0)

normalised so that the same-order Wronskian u v' - u' v equals 1.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import special

from .errors import BracketingError, DomainError, SaturationError

__all__ = [
    "FunctionPair",
    "InterlacingResult",
    "bessel_jy",
    "riccati",
    "cross_wronskian",
    "positive_zeros",
    "interlacing_check",
]

ZERO_KINDS = ("j", "y", "jp", "yp")


class FunctionPair(NamedTuple):
    """Regular/irregular Riccati-Bessel values and radial derivatives."""

    u: np.ndarray | float
    du: np.ndarray | float
    v: np.ndarray | float
    dv: np.ndarray | float


class InterlacingResult(NamedTuple):
    """Outcome of an interlacing-chain verification.

    ``violated_at`` is the 1-based block index s of the first failed
    inequality and ``relation`` names it; both are None when the chain holds.
    """

    holds: bool
    violated_at: int | None
    relation: str | None


def _as_positive_array(x, name: str) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    if arr.size == 0:
        raise DomainError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    if np.any(arr <= 0.0):
        raise DomainError(f"{name} must be > 0")
    return arr, scalar


def bessel_jy(nu: float, x):
    """Evaluate J_nu, Y_nu and their derivatives at x > 0.

    Parameters
    ----------
    nu : float
        Real order, nu >= 0.
    x : float or array_like
        Strictly positive abscissae.

    Returns
    -------
    (J, Y, Jp, Yp)
        Values and first derivatives with respect to x, scalars for scalar
        input and ndarrays otherwise.

    Raises
    ------
    DomainError
        For x <= 0 or nu < 0.
    SaturationError
        If any value overflows or is otherwise non-finite (Y_nu near the
        origin at large order overflows double precision long before x
        reaches 0).
    """
    if not math.isfinite(nu) or nu < 0.0:
        raise DomainError("order nu must be finite and >= 0")
    arr, scalar = _as_positive_array(x, "x")
    j = special.jv(nu, arr)
    y = special.yv(nu, arr)
    jp = special.jvp(nu, arr)
    yp = special.yvp(nu, arr)
    for vals in (j, y, jp, yp):
        if not np.all(np.isfinite(vals)):
            bad = arr[~np.isfinite(np.asarray(vals))]
            raise SaturationError(
                f"Bessel value saturated at nu={nu:g}, x~{float(np.min(bad)):.6g}"
            )
    if scalar:
        return float(j), float(y), float(jp), float(yp)
    return j, y, jp, yp


def riccati(lam: float, x) -> FunctionPair:
    """Riccati-Bessel pair u_lam, v_lam and derivatives at x > 0.

    The order must satisfy lam > -1/2 so that u is the recessive solution at
    the origin.  Derivatives follow from d/dx [sqrt(x) C_nu(x)] =
    sqrt(x) [C_nu/(2x) + C_nu'].
    """
    if not math.isfinite(lam) or lam <= -0.5:
        raise DomainError("order lam must be finite and > -1/2")
    arr, scalar = _as_positive_array(x, "x")
    nu = lam + 0.5
    factor = np.sqrt(0.5 * math.pi * arr)
    j, y, jp, yp = bessel_jy(nu, arr)
    u = factor * j
    v = factor * y
    du = factor * (j / (2.0 * arr) + jp)
    dv = factor * (y / (2.0 * arr) + yp)
    if scalar:
        return FunctionPair(float(u), float(du), float(v), float(dv))
    return FunctionPair(u, du, v, dv)


def cross_wronskian(big_l: float, ell: float, x):
    """Mixed-order Wronskian u_L v_ell' - u_L' v_ell at x > 0.

    Unlike the same-order case this is not constant; it tends to
    cos((ell - L) pi / 2) as x -> infinity.
    """
    ul = riccati(big_l, x)
    vl = riccati(ell, x)
    return ul.u * vl.dv - ul.du * vl.v


def _cyl(kind: str, nu: float, x):
    if kind == "j":
        return special.jv(nu, x)
    if kind == "y":
        return special.yv(nu, x)
    if kind == "jp":
        return special.jvp(nu, x)
    if kind == "yp":
        return special.yvp(nu, x)
    raise DomainError(f"unknown zero kind {kind!r}; expected one of {ZERO_KINDS}")


def _cyl_deriv(kind: str, nu: float, x):
    if kind == "j":
        return special.jvp(nu, x)
    if kind == "y":
        return special.yvp(nu, x)
    if kind == "jp":
        return special.jvp(nu, x, 2)
    if kind == "yp":
        return special.yvp(nu, x, 2)
    raise DomainError(f"unknown zero kind {kind!r}")


def positive_zeros(kind: str, nu: float, count: int) -> np.ndarray:
    """First `count` strictly positive zeros of J, Y, J' or Y' at order nu.

    Parameters
    ----------
    kind : {"j", "y", "jp", "yp"}
        Which cylinder function (prime meaning d/dx).
    nu : float
        Real order, nu >= 0.
    count : int
        Number of zeros, >= 1.

    Returns
    -------
    ndarray
        Ascending zeros, refined to near machine accuracy (bracket scan,
        Brent, one Newton polish).

    Notes
    -----
    x = 0 is never reported even where classical zero counting includes it
    (J_0' at the origin); callers that need that convention add it
    themselves.
    """
    if kind not in ZERO_KINDS:
        raise DomainError(f"unknown zero kind {kind!r}; expected one of {ZERO_KINDS}")
    if not math.isfinite(nu) or nu < 0.0:
        raise DomainError("order nu must be finite and >= 0")
    if count < 1:
        raise DomainError("count must be >= 1")

    # All first zeros of the four kinds lie at or above nu (the classical
    # chain starts nu <= j'_{nu,1}), so scanning can start there.
    from scipy.optimize import brentq

    step = 0.25 * math.pi
    x_lo = max(1e-6, nu)
    f_lo = _cyl(kind, nu, x_lo)
    zeros: list[float] = []
    # Zeros of cylinder functions and their derivatives are separated by at
    # least ~1 for nu >= 0, so a pi/4 scan step cannot skip a sign change.
    max_steps = int((count + 2) * math.pi / step * 3) + 200
    for _ in range(max_steps):
        x_hi = x_lo + step
        f_hi = _cyl(kind, nu, x_hi)
        if f_lo == 0.0:
            root = x_lo
        elif f_lo * f_hi < 0.0:
            root = brentq(lambda t: _cyl(kind, nu, t), x_lo, x_hi, xtol=1e-14, rtol=8.9e-16)
        else:
            root = None
        if root is not None and (not zeros or root - zeros[-1] > 1e-9):
            fp = _cyl_deriv(kind, nu, root)
            if fp != 0.0:
                polished = root - _cyl(kind, nu, root) / fp
                if x_lo <= polished <= x_hi and abs(_cyl(kind, nu, polished)) <= abs(
                    _cyl(kind, nu, root)
                ):
                    root = polished
            zeros.append(float(root))
            if len(zeros) == count:
                return np.array(zeros)
        x_lo, f_lo = x_hi, f_hi
    raise BracketingError(
        f"found only {len(zeros)} of {count} zeros of {kind} at nu={nu:g}"
    )


_CHAIN = (
    ("jp", 0, "y", 0, "j'(nu,s) < y(nu,s)"),
    ("y", 0, "y", 1, "y(nu,s) < y(nu+eps,s)"),
    ("y", 1, "yp", 0, "y(nu+eps,s) < y'(nu,s)"),
    ("yp", 0, "j", 0, "y'(nu,s) < j(nu,s)"),
    ("j", 0, "j", 1, "j(nu,s) < j(nu+eps,s)"),
    ("j", 1, "jp+", 0, "j(nu+eps,s) < j'(nu,s+1)"),
)


def interlacing_check(nu: float, eps: float, depth: int = 10) -> InterlacingResult:
    """Verify the shifted interlacing chain of Bessel zeros to given depth.

    For each block s = 1..depth the chain

        j'_{nu,s} < y_{nu,s} < y_{nu+eps,s} < y'_{nu,s}
                  < j_{nu,s} < j_{nu+eps,s} < j'_{nu,s+1}

    is checked together with the head inequality nu <= j'_{nu,1}.  It holds
    for every 0 < eps <= 1 and breaks for eps > 1; the returned result
    pinpoints the first failing comparison.

    Ties within the zero-refinement tolerance count as interlaced: at
    nu = 0, eps = 1 the chain degenerates to equality (Y_0' = -Y_1 makes
    y_{1,s} and y'_{0,s} the same points), and the eps <= 1 criterion only
    survives that corner with a non-strict reading.

    For nu = 0 the chain uses the classical count in which x = 0 is the
    first zero of J_0', so j'_{0,1} = 0 there.
    """
    if not math.isfinite(nu) or nu < 0.0:
        raise DomainError("order nu must be finite and >= 0")
    if not math.isfinite(eps) or eps <= 0.0:
        raise DomainError("shift eps must be finite and > 0")
    if depth < 2:
        raise DomainError("depth must be >= 2")

    if nu == 0.0:
        jp_base = np.concatenate(([0.0], positive_zeros("jp", 0.0, depth)))
    else:
        jp_base = positive_zeros("jp", nu, depth + 1)
    tables = {
        ("jp", 0): jp_base,
        ("y", 0): positive_zeros("y", nu, depth),
        ("y", 1): positive_zeros("y", nu + eps, depth),
        ("yp", 0): positive_zeros("yp", nu, depth),
        ("j", 0): positive_zeros("j", nu, depth),
        ("j", 1): positive_zeros("j", nu + eps, depth),
    }

    if nu > jp_base[0]:
        return InterlacingResult(False, 1, "nu <= j'(nu,1)")
    for s in range(depth):
        for kind_a, shift_a, kind_b, shift_b, label in _CHAIN:
            left = tables[("jp", 0)][s] if kind_a == "jp" else tables[(kind_a, shift_a)][s]
            if kind_b == "jp+":
                if s + 1 >= len(jp_base):
                    continue
                right = jp_base[s + 1]
            else:
                right = tables[(kind_b, shift_b)][s]
            if not left < right + 1e-9:
                return InterlacingResult(False, s + 1, label)
    return InterlacingResult(True, None, None)

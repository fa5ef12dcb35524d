"""Kernel-weighted local polynomial regression and boundary density estimation.

Three estimators live here:

* ``local_poly_fit`` fits a weighted polynomial in the centred running
  variable and reads the level off the intercept, one-sided or interior.
* ``boundary_density`` estimates the density at a point as the slope of a
  local polynomial fit to the empirical CDF, one degree above the requested
  order.
* ``rot_bandwidth`` supplies the rule-of-thumb default bandwidth.

Everything is a pure function of its arguments and safe to call from
multiple threads.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSupport,
    InsufficientData,
    InvalidConfig,
    SingularDesign,
)

MAX_ORDER = 4
#: Floor applied to non-positive density estimates; downstream ratios need f > 0.
DENSITY_FLOOR = 1e-6
#: Lower bound for rule-of-thumb bandwidths (guards zero-variance sides).
MIN_BANDWIDTH = 1e-8
#: In-window duplicate share beyond which the running variable is treated as discrete.
DUPLICATE_FRACTION_LIMIT = 0.2


class KernelKind(enum.Enum):
    TRIANGULAR = "triangular"
    UNIFORM = "uniform"
    EPANECHNIKOV = "epanechnikov"


class Side(enum.Enum):
    """Which observations enter a fit, relative to the evaluation point.

    RIGHT includes the evaluation point itself (treatment-side convention,
    x >= point); LEFT is strict (x < point); INTERIOR uses both sides.
    """

    LEFT = "left"
    RIGHT = "right"
    INTERIOR = "interior"


@dataclass(frozen=True)
class FitSpec:
    """Degree, bandwidth, kernel and side of one local fit."""

    order: int
    bandwidth: float
    kernel: KernelKind = KernelKind.TRIANGULAR
    side: Side = Side.INTERIOR

    def __post_init__(self):
        if not (0 <= self.order <= MAX_ORDER):
            raise InvalidConfig(f"polynomial order must be in [0, {MAX_ORDER}], got {self.order}")
        if not (self.bandwidth > 0 and np.isfinite(self.bandwidth)):
            raise InvalidConfig(f"bandwidth must be positive and finite, got {self.bandwidth}")


@dataclass(frozen=True)
class LocalFitResult:
    """Coefficients of the local polynomial in (x - eval_point) powers.

    ``coefficients[0]`` is the level estimate at the evaluation point,
    ``coefficients[1]`` the slope, and so on. ``effective_n`` counts
    observations that carried nonzero kernel weight.
    """

    coefficients: np.ndarray
    effective_n: int
    residual_scale: float


def kernel_weight(u, kernel: KernelKind = KernelKind.TRIANGULAR):
    """Evaluate the kernel at ``u``; zero outside [-1, 1], symmetric.

    Accepts scalars or arrays; returns the matching shape.
    """
    u = np.asarray(u, dtype=float)
    au = np.abs(u)
    if kernel is KernelKind.TRIANGULAR:
        w = np.maximum(0.0, 1.0 - au)
    elif kernel is KernelKind.UNIFORM:
        w = np.where(au <= 1.0, 0.5, 0.0)
    elif kernel is KernelKind.EPANECHNIKOV:
        w = np.where(au <= 1.0, 0.75 * (1.0 - u * u), 0.0)
    else:  # pragma: no cover - enum is closed
        raise InvalidConfig(f"unknown kernel {kernel!r}")
    if w.ndim == 0:
        return float(w)
    return w


def _side_mask(x: np.ndarray, point: float, side: Side) -> np.ndarray:
    if side is Side.LEFT:
        return x < point
    if side is Side.RIGHT:
        return x >= point
    return np.ones(x.shape, dtype=bool)


def _weighted_polyfit(u, w, v, degree, side_label):
    """Weighted LS of v on powers of u (already scaled to [-1, 1])."""
    design = np.vander(u, degree + 1, increasing=True)
    sw = np.sqrt(w)
    beta, _, rank, _ = np.linalg.lstsq(design * sw[:, None], v * sw, rcond=None)
    if rank < degree + 1:
        raise SingularDesign(
            f"normal equations rank {rank} < {degree + 1}; "
            "not enough distinct running-variable values in window",
            side=side_label,
        )
    return beta


def local_poly_fit(points, eval_point: float, spec: FitSpec) -> LocalFitResult:
    """Kernel-weighted polynomial regression of y on (x - eval_point).

    Parameters
    ----------
    points : array-like of shape (n, 2) or sequence of (x, y) pairs
    eval_point : where the level is evaluated (approached from ``spec.side``)
    spec : FitSpec

    Returns
    -------
    LocalFitResult with ``coefficients[0]`` the one-sided level estimate.

    Raises
    ------
    InsufficientData : fewer than order+1 points carry nonzero weight
    SingularDesign : the weighted design is rank deficient
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidConfig("points must be an (n, 2) array of (x, y) pairs")
    x, y = pts[:, 0], pts[:, 1]
    return _local_fit_arrays(x, y, eval_point, spec)


def _local_fit_arrays(x: np.ndarray, y: np.ndarray, eval_point: float, spec: FitSpec) -> LocalFitResult:
    """Array fast path used by the boundary and bootstrap code."""
    u = (x - eval_point) / spec.bandwidth
    w = kernel_weight(u, spec.kernel)
    keep = (np.asarray(w) > 0) & _side_mask(x, eval_point, spec.side)
    m = int(np.count_nonzero(keep))
    if m < spec.order + 1:
        raise InsufficientData(
            f"{m} in-window points on side {spec.side.value!r}, "
            f"need at least {spec.order + 1} for order {spec.order}",
            side=spec.side.value,
        )
    u, w, y = u[keep], np.asarray(w)[keep], y[keep]
    beta = _weighted_polyfit(u, w, y, spec.order, spec.side.value)
    resid = y - np.vander(u, spec.order + 1, increasing=True) @ beta
    scale = float(np.sqrt(np.sum(w * resid * resid) / np.sum(w)))
    # beta is in u-powers; convert back to (x - eval_point) powers
    coef = beta / spec.bandwidth ** np.arange(spec.order + 1)
    return LocalFitResult(coefficients=coef, effective_n=m, residual_scale=scale)


def _boundary_density_detail(xs: np.ndarray, eval_point: float, spec: FitSpec,
                             check_support: bool = True):
    """Density estimate plus a flag for whether the positivity floor bound.

    Fits the full-sample empirical CDF locally at ``eval_point`` with a
    polynomial of degree ``spec.order + 1`` and returns the slope.
    ``check_support=False`` skips the discreteness heuristic; bootstrap
    resamples duplicate values by construction and must not trip it.
    """
    xs = np.asarray(xs, dtype=float)
    n = xs.size
    h = spec.bandwidth
    if spec.side is Side.RIGHT:
        lo_edge = eval_point
    else:
        lo_edge = eval_point - h
    if spec.side is Side.LEFT:
        in_win = (xs >= lo_edge) & (xs < eval_point)
    elif spec.side is Side.RIGHT:
        in_win = (xs >= eval_point) & (xs <= eval_point + h)
    else:
        in_win = (xs >= lo_edge) & (xs <= eval_point + h)
    win = np.sort(xs[in_win])
    m = win.size
    if m > 0:
        n_distinct = 1 + int(np.count_nonzero(np.diff(win) > 0))
        if check_support and (m - n_distinct) > DUPLICATE_FRACTION_LIMIT * m:
            raise DegenerateSupport(
                f"{m - n_distinct} of {m} in-window values are exact duplicates; "
                "the running variable looks discrete",
                side=spec.side.value,
            )
    else:
        n_distinct = 0
    if n_distinct < spec.order + 2:
        raise InsufficientData(
            f"{n_distinct} distinct in-window points on side {spec.side.value!r}, "
            f"need at least {spec.order + 2} for a degree-{spec.order + 1} CDF fit",
            side=spec.side.value,
        )
    # Empirical CDF over the full sample, evaluated at the window points.
    n_below = int(np.count_nonzero(xs < lo_edge))
    ranks = n_below + np.searchsorted(win, win, side="right")
    cdf = ranks / n
    u = (win - eval_point) / h
    w = kernel_weight(u, spec.kernel)
    beta = _weighted_polyfit(u, w, cdf, spec.order + 1, spec.side.value)
    dens = float(beta[1] / h)
    if dens < DENSITY_FLOOR:
        return DENSITY_FLOOR, True
    return dens, False


def boundary_density(xs, eval_point: float, spec: FitSpec) -> float:
    """One-sided (or interior) density estimate at ``eval_point``.

    Negative fitted slopes are clipped to a small positive floor and a
    RuntimeWarning is emitted; ratios built downstream require positivity.
    """
    dens, clipped = _boundary_density_detail(np.asarray(xs, dtype=float), eval_point, spec)
    if clipped:
        warnings.warn(
            f"density estimate at {eval_point} ({spec.side.value}) was non-positive; "
            f"clipped to {DENSITY_FLOOR}",
            RuntimeWarning,
            stacklevel=2,
        )
    return dens


def rot_bandwidth(xs, side: Side, cutoff: float) -> float:
    """Rule-of-thumb bandwidth 1.06 * sd * n^(-1/5) on one side of the cutoff.

    Floored at MIN_BANDWIDTH so degenerate sides still return a positive
    width. Scale-equivariant: scaling xs and the cutoff by k scales the
    result by k (while the floor does not bind).
    """
    xs = np.asarray(xs, dtype=float)
    sub = xs[_side_mask(xs, cutoff, side)]
    if sub.size < 2:
        raise InsufficientData(
            f"need at least 2 observations on side {side.value!r}, got {sub.size}",
            side=side.value,
        )
    bw = 1.06 * float(np.std(sub, ddof=1)) * sub.size ** (-0.2)
    return max(bw, MIN_BANDWIDTH)

"""Wirtinger jets, stretch statistics, and pointwise inequality checks.

For a mapping w with derivatives w_z and w_zbar, the Jacobian matrix has
largest stretch |w_z| + |w_zbar| and smallest stretch ||w_z| - |w_zbar||,
and its determinant is |w_z|^2 - |w_zbar|^2.  Everything in this module
is built from those three scalars, sampled on polar grids inside the
unit disk, plus an independent finite-difference oracle used to
cross-check the symbolic derivatives.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from typing import Callable, IO

import numpy as np

from .expr import MappingExpr, d_z, d_zbar, laplacian

logger = logging.getLogger(__name__)

__all__ = [
    "WirtingerJet",
    "GradStats",
    "SampleGrid",
    "InequalityReport",
    "PolarReport",
    "jet_at",
    "jet_grid",
    "grad_stats",
    "operator_norm_2x2",
    "fd_wirtinger",
    "fd_jet",
    "lipschitz_estimate",
    "colipschitz_estimate",
    "pde_inequality_check",
    "product_inequality_check",
    "polar_decomposition_check",
    "rho_harmonic_residual",
    "approx_analytic_constant",
    "grid_report_csv",
]

#: default finite-difference step for first derivatives
FD_STEP = 1e-5
#: wider default step for the 5-point second-derivative stencil; at 1e-5 the
#: cancellation noise (~eps/h^2) would be ~1e-6 per unit of |w|
FD_LAP_STEP = 1e-3


@dataclass(frozen=True)
class WirtingerJet:
    """Values (w, w_z, w_zbar, Laplacian) at one point."""

    w: complex
    wz: complex
    wzbar: complex
    lap: complex


@dataclass(frozen=True)
class GradStats:
    grad_norm: float  # |w_z| + |w_zbar|, the largest stretch
    l_grad: float     # ||w_z| - |w_zbar||, the smallest stretch
    jac: float        # |w_z|^2 - |w_zbar|^2, the Jacobian determinant


@dataclass(frozen=True)
class SampleGrid:
    """Polar sampling of the disk: r_j = (j+1/2)(1-margin)/n_r, theta_k = 2 pi k/n_theta.

    ``r_min`` > 0 restricts sampling to an annulus; radii then march from
    r_min to 1-margin with the same midpoint layout.  The origin is never
    sampled.
    """

    n_r: int = 200
    n_theta: int = 256
    margin: float = 1e-3
    r_min: float = 0.0

    def __post_init__(self):
        if self.n_r < 1 or self.n_theta < 1:
            raise ValueError("grid sizes must be positive")
        if not 0.0 < self.margin < 0.5:
            raise ValueError("margin must lie in (0, 0.5)")
        if not 0.0 <= self.r_min < 1.0 - self.margin:
            raise ValueError("r_min must lie in [0, 1-margin)")

    def radii(self) -> np.ndarray:
        span = (1.0 - self.margin) - self.r_min
        return self.r_min + (np.arange(self.n_r) + 0.5) * span / self.n_r

    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta

    def points(self) -> np.ndarray:
        """All grid points, radius-major ordering (j outer, k inner)."""
        r = self.radii()[:, None]
        t = self.angles()[None, :]
        return (r * np.exp(1j * t)).ravel()


# ----------------------------------------------------------------------
# jets
# ----------------------------------------------------------------------

def jet_at(e: MappingExpr, z: complex) -> WirtingerJet:
    """Symbolic jet: evaluate e and its exact derivatives at z."""
    return WirtingerJet(e(z), d_z(e)(z), d_zbar(e)(z), laplacian(e)(z))


def jet_grid(e: MappingExpr, points: np.ndarray):
    """Vectorized jet over an array of points: arrays (w, wz, wzbar, lap)."""
    return e(points), d_z(e)(points), d_zbar(e)(points), laplacian(e)(points)


def grad_stats(j: WirtingerJet) -> GradStats:
    p, q = abs(j.wz), abs(j.wzbar)
    return GradStats(p + q, abs(p - q), p * p - q * q)


def _grad_arrays(e: MappingExpr, points: np.ndarray):
    _, wz, wzb, lap = jet_grid(e, points)
    p, q = np.abs(wz), np.abs(wzb)
    return p + q, np.abs(p - q), p * p - q * q, np.abs(lap), wz, wzb


# ----------------------------------------------------------------------
# 2x2 operator norm
# ----------------------------------------------------------------------

def operator_norm_2x2(A) -> tuple[float, float]:
    """Largest and smallest singular value of a real 2x2 matrix.

    Closed form: with q1 = |(a+d, c-b)| and q2 = |(a-d, c+b)|, the singular
    values are (q1+q2)/2 and |q1-q2|/2.  (q1/2 and q2/2 are the moduli of
    the two Wirtinger derivatives of the associated linear map.)
    """
    (a, b), (c, d) = np.asarray(A, dtype=float)
    q1 = math.hypot(a + d, c - b)
    q2 = math.hypot(a - d, c + b)
    return (q1 + q2) / 2.0, abs(q1 - q2) / 2.0


def jacobian_matrix(wz: complex, wzbar: complex) -> np.ndarray:
    """Real 2x2 Jacobian of the mapping with the given Wirtinger pair."""
    wx = wz + wzbar            # u_x + i v_x
    wy = 1j * (wz - wzbar)     # u_y + i v_y
    return np.array([[wx.real, wy.real], [wx.imag, wy.imag]])


# ----------------------------------------------------------------------
# finite-difference oracle
# ----------------------------------------------------------------------

def fd_wirtinger(point_eval: Callable[[complex], complex], z: complex, h: float = FD_STEP):
    """Central-difference Wirtinger pair with one Richardson step (h, h/2)."""

    def pair(step):
        wx = (point_eval(z + step) - point_eval(z - step)) / (2.0 * step)
        wy = (point_eval(z + 1j * step) - point_eval(z - 1j * step)) / (2.0 * step)
        return 0.5 * (wx - 1j * wy), 0.5 * (wx + 1j * wy)

    c1, c2 = pair(h)
    f1, f2 = pair(h / 2.0)
    return (4.0 * f1 - c1) / 3.0, (4.0 * f2 - c2) / 3.0


def fd_jet(
    point_eval: Callable[[complex], complex],
    z: complex,
    h: float = FD_STEP,
    lap_h: float | None = None,
) -> WirtingerJet:
    """Finite-difference jet, independent of the symbolic pipeline.

    First derivatives use step h; the 5-point Laplacian stencil uses the
    wider ``lap_h`` (default max(h, 1e-3)) to keep round-off out of the
    second differences.  Both are Richardson-extrapolated from (step,
    step/2).
    """
    w0 = point_eval(z)
    if not np.isfinite(w0.real) or not np.isfinite(w0.imag):
        raise ValueError(f"point_eval returned a nonfinite value at {z}")
    wz, wzbar = fd_wirtinger(point_eval, z, h)

    lh = max(h, FD_LAP_STEP) if lap_h is None else lap_h

    def lap5(step):
        return (
            point_eval(z + step)
            + point_eval(z - step)
            + point_eval(z + 1j * step)
            + point_eval(z - 1j * step)
            - 4.0 * w0
        ) / step**2

    lap = (4.0 * lap5(lh / 2.0) - lap5(lh)) / 3.0
    for v in (wz, wzbar, lap):
        if not np.isfinite(v.real) or not np.isfinite(v.imag):
            raise ValueError(f"finite differences hit a nonfinite value at {z}")
    return WirtingerJet(w0, wz, wzbar, lap)


# ----------------------------------------------------------------------
# grid estimates
# ----------------------------------------------------------------------

def lipschitz_estimate(e: MappingExpr, grid: SampleGrid) -> float:
    """Sup of the largest stretch over the grid; a lower estimate of the
    true supremum over the disk."""
    gn, _, _, _, _, _ = _grad_arrays(e, grid.points())
    return float(gn.max())


def colipschitz_estimate(e: MappingExpr, grid: SampleGrid) -> float:
    """Inf of the smallest stretch over the grid; an upper estimate of the
    true infimum over the disk."""
    _, lg, _, _, _, _ = _grad_arrays(e, grid.points())
    return float(lg.min())


@dataclass(frozen=True)
class InequalityReport:
    holds: bool
    worst_margin: float
    witness: complex


_HOLD_TOL = 1e-10


def pde_inequality_check(e: MappingExpr, M: float, N: float, grid: SampleGrid) -> InequalityReport:
    """Check |lap w| <= M |grad w|^2 + N on the grid.

    worst_margin is the largest violation (sup of lhs - rhs); ties break to
    the lowest grid index.
    """
    pts = grid.points()
    gn, _, _, lap_abs, _, _ = _grad_arrays(e, pts)
    margin = lap_abs - M * gn**2 - N
    i = int(np.argmax(margin))
    return InequalityReport(bool(margin[i] <= _HOLD_TOL), float(margin[i]), complex(pts[i]))


def product_inequality_check(e: MappingExpr, M: float, grid: SampleGrid) -> InequalityReport:
    """Check |lap w| <= M |w_z w_zbar| on the grid."""
    pts = grid.points()
    _, _, _, lap_abs, wz, wzb = _grad_arrays(e, pts)
    margin = lap_abs - M * np.abs(wz * wzb)
    i = int(np.argmax(margin))
    return InequalityReport(bool(margin[i] <= _HOLD_TOL), float(margin[i]), complex(pts[i]))


# ----------------------------------------------------------------------
# polar decomposition w = rho * S
# ----------------------------------------------------------------------

ZERO_W_TOL = 1e-9


@dataclass(frozen=True)
class PolarReport:
    """Worst margins for the stretch bounds of the polar factors.

    With rho = |w| and S = w/|w|, a (K, K')-quasiregular mapping satisfies

        |grad w|   <= K |grad rho| + sqrt(K')          (upper)
        (|grad rho| - sqrt(K')) / K <= rho |grad S|    (lower)
        rho |grad S| <= K |grad rho| + sqrt(K')        (upper)

    at points where w != 0.  Margins are sups of (lhs - rhs); nonpositive
    margins mean the inequality holds on the sample.
    """

    holds: bool
    margin_grad_vs_rho: float
    margin_lower: float
    margin_upper: float
    n_checked: int
    n_rejected: int


def polar_decomposition_check(e: MappingExpr, K: float, Kp: float, grid: SampleGrid) -> PolarReport:
    if K < 1 or Kp < 0:
        raise ValueError("need K >= 1 and Kp >= 0")
    pts = grid.points()
    w, wz, wzb, _ = jet_grid(e, pts)
    rho = np.abs(w)
    keep = rho >= ZERO_W_TOL
    n_rej = int((~keep).sum())
    if not keep.any():
        raise ValueError("mapping vanishes on the whole grid")
    if n_rej:
        logger.warning("polar decomposition: rejected %d grid points with |w| < %g", n_rej, ZERO_W_TOL)
    w, wz, wzb, rho = w[keep], wz[keep], wzb[keep], rho[keep]

    p, q = np.abs(wz), np.abs(wzb)
    grad_norm = p + q

    # real Jacobian columns: w_x = wz + wzb, w_y = i (wz - wzb)
    wx = wz + wzb
    wy = 1j * (wz - wzb)
    u, v = w.real, w.imag
    # grad rho is the row (1/|w|) w^T grad w
    rx = (u * wx.real + v * wx.imag) / rho
    ry = (u * wy.real + v * wy.imag) / rho
    grad_rho = np.hypot(rx, ry)

    # rho^2 |grad S h|^2 = |grad w h|^2 - <grad w h, w/|w|>^2: subtract the
    # radial component of each Jacobian column pair and take the top
    # singular value of the residual matrix.
    sx = wx - (rx / rho) * w
    sy = wy - (ry / rho) * w
    # operator norm of the 2x2 with columns (sx, sy) via the Wirtinger split
    szz = 0.5 * (sx - 1j * sy)
    szb = 0.5 * (sx + 1j * sy)
    rho_grad_s = np.abs(szz) + np.abs(szb)

    sqkp = math.sqrt(Kp)
    m_a = grad_norm - (K * grad_rho + sqkp)
    m_low = (grad_rho - sqkp) / K - rho_grad_s
    m_up = rho_grad_s - (K * grad_rho + sqkp)
    tol = 1e-9
    worst = (float(m_a.max()), float(m_low.max()), float(m_up.max()))
    return PolarReport(
        holds=bool(max(worst) <= tol),
        margin_grad_vs_rho=worst[0],
        margin_lower=worst[1],
        margin_upper=worst[2],
        n_checked=int(keep.sum()),
        n_rejected=n_rej,
    )


def polar_stretch_arrays(e: MappingExpr, points: np.ndarray):
    """(|grad rho|, rho |grad S|, keep-mask) for testing the sandwich
    l(grad w) <= |grad rho| <= |grad w| pointwise."""
    w, wz, wzb, _ = jet_grid(e, points)
    rho = np.abs(w)
    keep = rho >= ZERO_W_TOL
    wx = wz + wzb
    wy = 1j * (wz - wzb)
    u, v = w.real, w.imag
    with np.errstate(divide="ignore", invalid="ignore"):
        rx = (u * wx.real + v * wx.imag) / rho
        ry = (u * wy.real + v * wy.imag) / rho
        sx = wx - (rx / rho) * w
        sy = wy - (ry / rho) * w
    szz = 0.5 * (sx - 1j * sy)
    szb = 0.5 * (sx + 1j * sy)
    return np.hypot(rx, ry), np.abs(szz) + np.abs(szb), keep


# ----------------------------------------------------------------------
# metric residuals
# ----------------------------------------------------------------------

def rho_harmonic_residual(e: MappingExpr, logrho_w: Callable, grid: SampleGrid) -> float:
    """Sup over the grid of |w_{z zbar} + logrho_w(w) * w_z * w_zbar|.

    ``logrho_w`` is the derivative of log(density) evaluated at w; a zero
    residual means the mapping satisfies the metric's Euler-Lagrange
    equation on the sample.
    """
    pts = grid.points()
    w, wz, wzb, lap = jet_grid(e, pts)
    coef = np.asarray(logrho_w(w), dtype=np.complex128)
    return float(np.abs(lap / 4.0 + coef * wz * wzb).max())


ZERO_H_TOL = 1e-12


def approx_analytic_constant(h: MappingExpr, grid: SampleGrid) -> float:
    """Least C on the sample with |h_zbar| <= C |h| (requires h nonvanishing)."""
    pts = grid.points()
    hv = h(pts)
    hzb = np.abs(d_zbar(h)(pts))
    mod = np.abs(hv)
    keep = mod >= ZERO_H_TOL
    if not keep.any():
        raise ValueError("mapping vanishes on the whole grid")
    n_rej = int((~keep).sum())
    if n_rej:
        logger.warning("approx-analytic constant: rejected %d near-zeros of h", n_rej)
    return float((hzb[keep] / mod[keep]).max())


# ----------------------------------------------------------------------
# CSV export
# ----------------------------------------------------------------------

def grid_report_csv(e: MappingExpr, grid: SampleGrid, out: IO[str]) -> None:
    """Write per-point rows (r, theta, grad_norm, l_grad, jac, lap_abs)."""
    pts = grid.points()
    gn, lg, jac, lap_abs, _, _ = _grad_arrays(e, pts)
    r = np.abs(pts)
    th = np.mod(np.angle(pts), 2.0 * np.pi)
    writer = csv.writer(out)
    writer.writerow(["r", "theta", "grad_norm", "l_grad", "jac", "lap_abs"])
    for row in zip(r, th, gn, lg, jac, lap_abs):
        writer.writerow([repr(float(x)) for x in row])

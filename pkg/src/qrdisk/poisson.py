"""Dirichlet problem for the Laplacian on the unit disk.

The solution of  lap w = g  with boundary values f is

    w(z) = P[f](z) - G[g](z)

where P[f] is the boundary-kernel extension

    P[f](z) = (1/2pi) int_0^{2pi} (1-|z|^2)/|z - e^{i phi}|^2 f(e^{i phi}) dphi

and G[g] integrates the disk Green kernel

    G(z, om) = (1/2pi) log |(1 - z conj(om)) / (z - om)|

against g over the disk.  P[f] is computed by the periodic trapezoid rule
(spectrally accurate for smooth boundary data); G[g] by a polar product
rule with the logarithmic singularity handled by a smooth split:

* the constant part of the source is integrated exactly through the
  closed forms  int G dA = (1-|z|^2)/4,  int G_z dA = -conj(z)/4;
* the remainder (g - g(z)) is split at |om - z| ~ epsilon into a blended
  far field, summed on the global polar grid, and a local polar patch
  centered at z whose radial rule integrates the log weight directly.

Kernel derivatives used for gradients:

    G_z(z, om)    = (1/4pi) [ -conj(om)/(1 - z conj(om)) - 1/(z - om) ]
    G_zbar(z, om) = conj(G_z(z, om))
"""

from __future__ import annotations

import csv
import logging
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import IO, Sequence

import numpy as np

from . import _kernels
from .calculus import SampleGrid, fd_wirtinger
from .expr import MappingExpr

logger = logging.getLogger(__name__)

__all__ = [
    "BoundaryData",
    "SourceField",
    "QuadratureSpec",
    "PoissonSolution",
    "QuadratureConvergenceError",
    "poisson_extend",
    "green_potential",
    "green_gradient",
    "solve",
    "lemma_c_verifier",
    "LemmaCReport",
    "boundary_energy",
    "heinz_check",
    "HeinzReport",
]

#: evaluation is refused closer to the rim than this
RIM_GUARD = 1e-6


class QuadratureConvergenceError(RuntimeError):
    """Doubling the radial rule moved the answer by more than the tolerance."""


# ----------------------------------------------------------------------
# boundary data
# ----------------------------------------------------------------------

def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class BoundaryData:
    """Samples f(e^{i theta_k}) at theta_k = 2 pi k / n, n a power of two.

    ``psi`` optionally stores a strictly increasing lift with
    f(e^{it}) = e^{i psi(t)}; its winding number (1 for a circle
    homeomorphism, higher for multiple covers) is recorded so the checks
    that genuinely need an invertible boundary map can insist on 1.
    """

    samples: np.ndarray
    psi: np.ndarray | None = None

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.complex128)
        object.__setattr__(self, "samples", s)
        if s.ndim != 1 or not _is_power_of_two(s.size) or s.size < 16:
            raise ValueError("need a 1-d sample array whose length is a power of two >= 16")
        if self.psi is not None:
            p = np.asarray(self.psi, dtype=float)
            object.__setattr__(self, "psi", p)
            if p.shape != s.shape:
                raise ValueError("psi must have one angle per sample")
            if not np.all(np.diff(p) > 0):
                raise ValueError("psi must be strictly increasing")
            if np.max(np.abs(np.exp(1j * p) - s)) > 1e-12:
                raise ValueError("samples do not match e^{i psi} within 1e-12")

    @property
    def n(self) -> int:
        return self.samples.size

    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n) / self.n

    # -- constructors ----------------------------------------------------

    @classmethod
    def identity(cls, n: int = 256) -> "BoundaryData":
        th = 2.0 * np.pi * np.arange(n) / n
        return cls(np.exp(1j * th), th.copy())

    @classmethod
    def from_function(cls, fn, n: int = 256) -> "BoundaryData":
        th = 2.0 * np.pi * np.arange(n) / n
        return cls(np.asarray(fn(np.exp(1j * th)), dtype=np.complex128))

    @classmethod
    def from_expr(cls, e: MappingExpr, n: int = 256) -> "BoundaryData":
        th = 2.0 * np.pi * np.arange(n) / n
        return cls(e(np.exp(1j * th)))

    @classmethod
    def from_psi_function(cls, psi_fn, n: int = 256) -> "BoundaryData":
        th = 2.0 * np.pi * np.arange(n) / n
        p = np.asarray([psi_fn(t) for t in th], dtype=float)
        return cls(np.exp(1j * p), p)

    @classmethod
    def from_csv(cls, path) -> "BoundaryData":
        """Read rows (theta, re, im); thetas must be the uniform grid."""
        th, re_, im = [], [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().lower() == "theta":
                    continue
                th.append(float(row[0]))
                re_.append(float(row[1]))
                im.append(float(row[2]))
        th = np.asarray(th)
        n = th.size
        if not _is_power_of_two(n) or np.max(np.abs(th - 2.0 * np.pi * np.arange(n) / n)) > 1e-9:
            raise ValueError("CSV thetas must be 2 pi k/n for a power-of-two n")
        return cls(np.asarray(re_) + 1j * np.asarray(im))

    # -- derived quantities ----------------------------------------------

    @property
    def winding(self) -> int | None:
        """Integer winding of the lift, or None when psi is absent."""
        if self.psi is None:
            return None
        n = self.n
        return int(round((self.psi[-1] - self.psi[0]) * n / ((n - 1) * 2.0 * np.pi)))

    def psi_prime(self) -> np.ndarray:
        """Spectral derivative of the lift at the sample angles."""
        if self.psi is None:
            raise ValueError("boundary data has no psi lift")
        m = self.winding
        periodic = self.psi - m * self.thetas()
        n = self.n
        freqs = np.fft.fftfreq(n, d=1.0 / n)
        coef = np.fft.fft(periodic)
        coef *= 1j * freqs
        coef[n // 2] = 0.0  # drop the Nyquist mode in the derivative
        return m + np.real(np.fft.ifft(coef))

    def at_angles(self, thetas: np.ndarray) -> np.ndarray:
        """Trigonometric interpolation of the samples at arbitrary angles."""
        n = self.n
        coef = np.fft.fft(self.samples) / n
        freqs = np.fft.fftfreq(n, d=1.0 / n)
        th = np.atleast_1d(np.asarray(thetas, dtype=float))
        return np.exp(1j * np.outer(th, freqs)) @ coef

    def fourier_tail(self) -> float:
        """Magnitude of the top-quarter spectrum; the rim-accuracy proxy."""
        coef = np.abs(np.fft.fft(self.samples)) / self.n
        n = self.n
        idx = np.abs(np.fft.fftfreq(n, d=1.0 / n)) >= n // 4
        return float(coef[idx].max(initial=0.0))


# ----------------------------------------------------------------------
# source field
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SourceField:
    """Right-hand side g: a mapping expression or polar-grid samples.

    ``sup_norm`` is an upper estimate of sup |g| over the closed disk,
    taken as the max over a dense sample times a 1.001 safety factor.
    """

    expr: MappingExpr | None = None
    samples: np.ndarray | None = None
    sample_grid: SampleGrid | None = None
    sup_norm: float = 0.0

    def __post_init__(self):
        if (self.expr is None) == (self.samples is None):
            raise ValueError("provide exactly one of expr or samples")
        if self.samples is not None and self.sample_grid is None:
            raise ValueError("samples need their polar grid")

    @classmethod
    def from_expr(cls, e: MappingExpr) -> "SourceField":
        r = np.linspace(0.0, 1.0, 129)[:, None]
        t = np.exp(2j * np.pi * np.arange(256) / 256)[None, :]
        dense = np.abs(e(r * t)).max()
        return cls(expr=e, sup_norm=float(dense) * 1.001)

    @classmethod
    def constant(cls, c: complex) -> "SourceField":
        return cls(expr=MappingExpr({(0, 0): complex(c)}), sup_norm=abs(complex(c)))

    @classmethod
    def from_samples(cls, samples: np.ndarray, grid: SampleGrid) -> "SourceField":
        samples = np.asarray(samples, dtype=np.complex128)
        if samples.shape != (grid.n_r, grid.n_theta):
            raise ValueError("samples must be shaped (n_r, n_theta)")
        return cls(samples=samples, sample_grid=grid, sup_norm=float(np.abs(samples).max()) * 1.001)

    def eval_at(self, points: np.ndarray) -> np.ndarray:
        if self.expr is not None:
            return self.expr(points)
        return self._interpolate(points)

    def _interpolate(self, points: np.ndarray) -> np.ndarray:
        from scipy.interpolate import RegularGridInterpolator

        g = self.sample_grid
        r = g.radii()
        th = g.angles()
        # periodic padding in theta, clamped extrapolation in r
        th_pad = np.concatenate([th, [2.0 * np.pi]])
        vals = np.concatenate([self.samples, self.samples[:, :1]], axis=1)
        interp = RegularGridInterpolator(
            (r, th_pad), vals, method="linear", bounds_error=False, fill_value=None
        )
        pts = np.atleast_1d(points)
        rq = np.clip(np.abs(pts), r[0], r[-1])
        tq = np.mod(np.angle(pts), 2.0 * np.pi)
        return interp(np.stack([rq, tq], axis=-1)).astype(np.complex128).reshape(np.shape(points))


# ----------------------------------------------------------------------
# quadrature plumbing
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureSpec:
    n_theta: int = 512
    n_r: int = 256
    epsilon_split: float = 0.05

    def __post_init__(self):
        if self.n_theta < 8 or self.n_r < 8:
            raise ValueError("quadrature grid too small")
        if not 0.0 < self.epsilon_split < 0.5:
            raise ValueError("epsilon_split must lie in (0, 0.5)")

    def local_sizes(self) -> tuple[int, int]:
        n_s = int(np.clip(self.n_r // 8, 12, 48))
        n_alpha = int(np.clip(self.n_theta // 8, 24, 96))
        return n_s, n_alpha


DEFAULT_QUAD = QuadratureSpec()


@lru_cache(maxsize=8)
def _global_rule(n_r: int, n_theta: int):
    dr = 1.0 / n_r
    r = (np.arange(n_r) + 0.5) * dr
    th = 2.0 * np.pi * np.arange(n_theta) / n_theta
    nodes = (r[:, None] * np.exp(1j * th)[None, :]).ravel()
    wts = np.broadcast_to((r * dr * 2.0 * np.pi / n_theta)[:, None], (n_r, n_theta)).ravel()
    return nodes, np.ascontiguousarray(wts)


@lru_cache(maxsize=8)
def _local_radial_rule(n_s: int):
    # Gauss-Legendre panels on [0, 1/2] and [1/2, 1] of the unit radius;
    # scaled by epsilon at evaluation time.  The inner panel carries the
    # s*log(s) weight of the kernel (integrable; no node at 0).
    x, w = np.polynomial.legendre.leggauss(n_s)
    xs, ws = [], []
    for a, b in ((0.0, 0.5), (0.5, 1.0)):
        mid, half = (a + b) / 2.0, (b - a) / 2.0
        xs.append(mid + half * x)
        ws.append(half * w)
    return np.concatenate(xs), np.concatenate(ws)


def _smoothstep(u):
    u = np.clip(u, 0.0, 1.0)
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u))


def _as_points(z) -> tuple[np.ndarray, bool]:
    scalar = np.isscalar(z) or np.asarray(z).ndim == 0
    pts = np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel()
    if np.any(np.abs(pts) > 1.0 - RIM_GUARD):
        raise ValueError(f"evaluation points must satisfy |z| <= 1 - {RIM_GUARD}")
    return pts, scalar


def _local_patch(source: SourceField, zs, epss, gzs, quad: QuadratureSpec, want_grad: bool):
    """Integral of (1-chi) * kernel * (g - g(z)) over the patch |om-z| < eps."""
    n_s, n_alpha = quad.local_sizes()
    x, wx = _local_radial_rule(n_s)
    alpha = 2.0 * np.pi * np.arange(n_alpha) / n_alpha
    ealpha = np.exp(1j * alpha)

    n_z = zs.shape[0]
    val = np.zeros(n_z, dtype=np.complex128)
    dz = np.zeros(n_z, dtype=np.complex128)
    dzb = np.zeros(n_z, dtype=np.complex128)
    chunk = max(1, (1 << 22) // (x.size * n_alpha))
    for i in range(0, n_z, chunk):
        z = zs[i : i + chunk, None, None]
        eps = epss[i : i + chunk, None, None]
        s = eps * x[None, :, None]
        om = z + s * ealpha[None, None, :]
        gdiff = source.eval_at(om.ravel()).reshape(om.shape) - gzs[i : i + chunk, None, None]
        blend = 1.0 - _smoothstep((s - 0.5 * eps) / (0.5 * eps))
        area = (eps * wx[None, :, None]) * s * (2.0 * np.pi / n_alpha)
        common = blend * area * gdiff
        one_m = 1.0 - z * np.conj(om)
        if want_grad:
            # z - om = -s e^{i alpha} exactly, so the singular factor is stable
            ker_z = (-np.conj(om) / one_m + np.exp(-1j * alpha)[None, None, :] / s) / (4.0 * np.pi)
            dz[i : i + chunk] = np.sum(ker_z * common, axis=(1, 2))
            dzb[i : i + chunk] = np.sum(np.conj(ker_z) * common, axis=(1, 2))
        else:
            ker = (np.log(np.abs(one_m)) - np.log(s)) / (2.0 * np.pi)
            val[i : i + chunk] = np.sum(ker * common, axis=(1, 2))
    return val, dz, dzb


def _green_eval(source: SourceField, z, quad: QuadratureSpec, want_grad: bool):
    pts, scalar = _as_points(z)
    nodes, wts = _global_rule(quad.n_r, quad.n_theta)
    gvals = np.ascontiguousarray(source.eval_at(nodes))
    gzs = np.ascontiguousarray(source.eval_at(pts))
    epss = np.minimum(quad.epsilon_split, 0.5 * (1.0 - np.abs(pts)))
    far_v, far_z, far_zb = _kernels.green_far_batch(nodes, wts, gvals, pts, gzs, epss, want_grad)
    loc_v, loc_z, loc_zb = _local_patch(source, pts, epss, gzs, quad, want_grad)
    if want_grad:
        gz = gzs * (-np.conj(pts) / 4.0) + far_z + loc_z
        gzb = gzs * (-pts / 4.0) + far_zb + loc_zb
        return (gz, gzb), scalar
    val = gzs * (1.0 - np.abs(pts) ** 2) / 4.0 + far_v + loc_v
    return val, scalar


# ----------------------------------------------------------------------
# public operators
# ----------------------------------------------------------------------

def poisson_extend(f: BoundaryData, z, *, warn_tol: float = 1e-8):
    """Boundary-kernel extension of f by the periodic trapezoid rule.

    At the rule's center the value is exactly the sample mean.  Accuracy
    decays like r^(n/2) scaled by the spectral tail of f, so a warning is
    emitted when the estimated aliasing error exceeds ``warn_tol``.
    """
    pts, scalar = _as_points(z)
    rmax = float(np.abs(pts).max(initial=0.0))
    tail = f.fourier_tail()
    est = tail * rmax ** (f.n // 4) * f.n
    if est > warn_tol:
        warnings.warn(
            f"boundary extension at |z|={rmax:.6f} with n={f.n} samples: "
            f"estimated aliasing error {est:.2e}",
            stacklevel=2,
        )
    out = _kernels.poisson_extend_batch(f.samples, pts)
    return complex(out[0]) if scalar else out.reshape(np.shape(z))


def green_potential(
    source: SourceField,
    z,
    quad: QuadratureSpec = DEFAULT_QUAD,
    *,
    convergence_tol: float | None = None,
):
    """Green-kernel volume potential of the source at z (|z| < 1)."""
    val, scalar = _green_eval(source, z, quad, want_grad=False)
    if convergence_tol is not None:
        refined = QuadratureSpec(quad.n_theta, 2 * quad.n_r, quad.epsilon_split)
        val2, _ = _green_eval(source, z, refined, want_grad=False)
        drift = float(np.abs(val2 - val).max())
        if drift > convergence_tol:
            raise QuadratureConvergenceError(
                f"doubling n_r moved the potential by {drift:.3e} > {convergence_tol:.3e}"
            )
    return complex(val[0]) if scalar else val.reshape(np.shape(z))


def green_gradient(source: SourceField, z, quad: QuadratureSpec = DEFAULT_QUAD):
    """(d/dz, d/dzbar) of the volume potential, via the differentiated kernel."""
    (gz, gzb), scalar = _green_eval(source, z, quad, want_grad=True)
    if scalar:
        return complex(gz[0]), complex(gzb[0])
    return gz.reshape(np.shape(z)), gzb.reshape(np.shape(z))


def solve(f: BoundaryData, source: SourceField, z, quad: QuadratureSpec = DEFAULT_QUAD):
    """Value of the solution P[f] - G[g] at z."""
    return poisson_extend(f, z) - green_potential(source, z, quad)


@dataclass(frozen=True)
class PoissonSolution:
    """A configured problem: boundary data, source, and quadrature choices."""

    boundary: BoundaryData
    source: SourceField
    quad: QuadratureSpec = DEFAULT_QUAD

    def __call__(self, z):
        return solve(self.boundary, self.source, z, self.quad)

    def value(self, z):
        return self(z)

    def gradient(self, z):
        """(w_z, w_zbar) combining the extension (by finite differences on
        the trapezoid rule) with the analytic kernel gradient."""
        pts, scalar = _as_points(z)
        pz = np.empty(pts.shape, dtype=np.complex128)
        pzb = np.empty(pts.shape, dtype=np.complex128)
        for i, zz in enumerate(pts):
            pz[i], pzb[i] = fd_wirtinger(lambda q: poisson_extend(self.boundary, q), zz)
        ggz, ggzb = green_gradient(self.source, pts, self.quad)
        wz, wzb = pz - ggz, pzb - ggzb
        if scalar:
            return complex(wz[0]), complex(wzb[0])
        return wz.reshape(np.shape(z)), wzb.reshape(np.shape(z))

    def to_csv_grid(self, out: IO[str], grid: SampleGrid) -> None:
        """Dump rows (r, theta, re_w, im_w) over a polar sample grid."""
        pts = grid.points()
        w = self(pts)
        writer = csv.writer(out)
        writer.writerow(["r", "theta", "re_w", "im_w"])
        for p, v in zip(pts, w):
            writer.writerow(
                [repr(abs(p)), repr(float(np.mod(np.angle(p), 2.0 * np.pi))), repr(v.real), repr(v.imag)]
            )


# ----------------------------------------------------------------------
# gradient bound verifier
# ----------------------------------------------------------------------

VERIFIER_GRID = SampleGrid(n_r=48, n_theta=96, margin=1e-3)
VERIFIER_QUAD = QuadratureSpec(n_theta=256, n_r=128, epsilon_split=0.05)


@dataclass(frozen=True)
class LemmaCReport:
    """Gradient bounds of the volume potential against sup |g|.

    interior: sup over the grid of max(|G_z|, |G_zbar|) vs sup|g|/3;
    boundary: the same sup at r = 1 - 1e-4 vs sup|g|/4 with 5% slack for
    quadrature error; radial: the gradient settles as r -> 1 (differences
    between r = 0.9, 0.99, 0.999 decrease).
    """

    interior_sup: float
    interior_limit: float
    interior_ok: bool
    boundary_sup: float
    boundary_limit: float
    boundary_ok: bool
    radial_diffs: tuple[float, float]
    radial_ok: bool

    @property
    def passed(self) -> bool:
        return self.interior_ok and self.boundary_ok and self.radial_ok


def lemma_c_verifier(
    source: SourceField,
    grid: SampleGrid = VERIFIER_GRID,
    boundary_thetas: np.ndarray | None = None,
    quad: QuadratureSpec = VERIFIER_QUAD,
    interior_tol: float = 1e-3,
    boundary_slack: float = 0.05,
) -> LemmaCReport:
    if boundary_thetas is None:
        boundary_thetas = 2.0 * np.pi * np.arange(64) / 64

    gz, gzb = green_gradient(source, grid.points(), quad)
    interior_sup = float(np.maximum(np.abs(gz), np.abs(gzb)).max())
    interior_limit = source.sup_norm / 3.0

    rim = (1.0 - 1e-4) * np.exp(1j * boundary_thetas)
    bz, bzb = green_gradient(source, rim, quad)
    boundary_sup = float(np.maximum(np.abs(bz), np.abs(bzb)).max())
    boundary_limit = source.sup_norm / 4.0

    probe = np.exp(1j * boundary_thetas[::4])
    diffs = []
    grads = {r: green_gradient(source, r * probe, quad) for r in (0.9, 0.99, 0.999)}
    for r1, r2 in ((0.9, 0.99), (0.99, 0.999)):
        d = np.abs(grads[r1][0] - grads[r2][0]) + np.abs(grads[r1][1] - grads[r2][1])
        diffs.append(float(d.max()))

    return LemmaCReport(
        interior_sup=interior_sup,
        interior_limit=interior_limit,
        interior_ok=interior_sup <= interior_limit + interior_tol,
        boundary_sup=boundary_sup,
        boundary_limit=boundary_limit,
        boundary_ok=boundary_sup <= boundary_limit * (1.0 + boundary_slack),
        radial_diffs=(diffs[0], diffs[1]),
        radial_ok=diffs[1] < diffs[0],
    )


# ----------------------------------------------------------------------
# boundary energy and the minimum-stretch floor
# ----------------------------------------------------------------------

def boundary_energy(f: BoundaryData, theta_index: int) -> float:
    """(1/2pi) int |f(e^{i theta}) - f(e^{i phi})|^2 / |e^{i theta} - e^{i phi}|^2 dphi.

    Periodic trapezoid over the samples; the removable phi = theta node is
    filled with its limit psi'(theta)^2, which needs the psi lift.
    """
    if f.psi is None:
        raise ValueError("boundary energy needs the psi lift to fill the singular node")
    n = f.n
    i = int(theta_index) % n
    e = np.exp(1j * f.thetas())
    num = np.abs(f.samples[i] - f.samples) ** 2
    den = np.abs(e[i] - e) ** 2
    integrand = np.empty(n)
    mask = np.arange(n) != i
    integrand[mask] = num[mask] / den[mask]
    integrand[i] = f.psi_prime()[i] ** 2
    return float(integrand.mean())


@dataclass(frozen=True)
class HeinzReport:
    min_value: float
    holds: bool


HEINZ_FLOOR = 1.0 / math.pi**2


def heinz_check(f: BoundaryData, grid: SampleGrid) -> HeinzReport:
    """Floor for |P_z|^2 + |P_zbar|^2 over the grid.

    For a sense-preserving boundary homeomorphism the harmonic extension
    is a diffeomorphism and the sum of squared Wirtinger derivatives is
    at least 1/pi^2.  Derivatives are taken by finite differences on the
    trapezoid extension, so f must be a genuine circle homeomorphism
    (psi present with winding 1).
    """
    if f.psi is None:
        raise ValueError("heinz check needs the psi lift")
    if f.winding != 1:
        raise ValueError("boundary data is not a circle homeomorphism (winding != 1)")
    pts = grid.points()
    if np.abs(pts).max() + 2e-5 > 1.0 - RIM_GUARD:
        raise ValueError("grid reaches too close to the rim for the difference stencil")
    # batch the 8-point Richardson stencil through one kernel call
    h = 1e-5
    offs = np.array([h, -h, 1j * h, -1j * h, h / 2, -h / 2, 1j * h / 2, -1j * h / 2])
    stencil = (pts[:, None] + offs[None, :]).ravel()
    vals = _kernels.poisson_extend_batch(f.samples, stencil).reshape(pts.size, 8)

    def wirt(a, b, c, d, step):
        wx = (a - b) / (2.0 * step)
        wy = (c - d) / (2.0 * step)
        return 0.5 * (wx - 1j * wy), 0.5 * (wx + 1j * wy)

    cz, czb = wirt(vals[:, 0], vals[:, 1], vals[:, 2], vals[:, 3], h)
    fz, fzb = wirt(vals[:, 4], vals[:, 5], vals[:, 6], vals[:, 7], h / 2)
    pz = (4.0 * fz - cz) / 3.0
    pzb = (4.0 * fzb - czb) / 3.0
    m = float((np.abs(pz) ** 2 + np.abs(pzb) ** 2).min())
    return HeinzReport(m, m >= HEINZ_FLOOR - 1e-6)

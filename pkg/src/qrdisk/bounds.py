"""Explicit Lipschitz/coLipschitz constant chain and curve geometry helpers.

Given the quasiregularity parameters (K, K') and a bound on the source,
the gradient of a normalized disk solution admits the explicit chain

    mu  = 1 / (K (1+pi)^2)
    P_S = 4 (1+pi) 2^mu sqrt(max(2 pi^2 K / log 2,  2 pi K' / (K (1+pi)^2 + 4)))
    M2  = K P_S^(1+mu) * I(mu^2 - 1)
    C0  = (M2 + K|g|/2 + 7|g|/6 + sqrt(K'))^(K (1+pi)^2)
    C1  = (M2 + K|g|/2 + 7|g|/6 + sqrt(K') - (1-mu) M2) / (1 - (1-mu) M2)
                                         (only when (1-mu) M2 < 1)
    M   = C0 if (1-mu) M2 >= 1 else min(C0, C1)
    N2  = P_S^(-2/mu) * I(2/mu - 2)        with N2 <= P_S^(-2/mu) 2^(2/mu-2)
    N1  = N2 - |g|/2 - sqrt(K')
    N   = N1/K^2 - sqrt(K')/K - 7|g|/6

where I(p) = (1/2pi) int_0^{2pi} |e^{i theta} - e^{i phi}|^p dphi is the
circle power integral (independent of theta).  The exponents grow with K,
so C0 and N2 are evaluated in log space and also reported as log10.

The curve utilities (chord-arc constant, equal-arc point triples, Holder
seminorms of the arc-length parameterization) operate on closed polyline
samples; they estimate, never certify.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from . import _kernels
from .poisson import BoundaryData

logger = logging.getLogger(__name__)

__all__ = [
    "BoundSet",
    "CurveSamples",
    "mu",
    "p_s",
    "circle_power_integral",
    "m2",
    "lipschitz_M",
    "colipschitz_N",
    "chord_arc_constant",
    "well_distributed_points",
    "normalized_check",
    "NormalizedReport",
    "holder_seminorm",
]

_ONE_PLUS_PI_SQ = (1.0 + math.pi) ** 2
#: values above 10^300 are reported through their log10 only
OVERFLOW_LOG10 = 300.0


def mu(K: float) -> float:
    """Exponent 1 / (K (1+pi)^2)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    return 1.0 / (K * _ONE_PLUS_PI_SQ)


def p_s(K: float, Kp: float) -> float:
    """Boundary modulus-of-continuity constant for parameters (K, K')."""
    if K < 1 or Kp < 0:
        raise ValueError("need K >= 1 and Kp >= 0")
    m = mu(K)
    branch = max(2.0 * math.pi**2 * K / math.log(2.0), 2.0 * math.pi * Kp / (K * _ONE_PLUS_PI_SQ + 4.0))
    return 4.0 * (1.0 + math.pi) * 2.0**m * math.sqrt(branch)


# ----------------------------------------------------------------------
# circle power integral
# ----------------------------------------------------------------------

@lru_cache(maxsize=256)
def _jacobi_rule(n: int, p: float):
    t, w = roots_jacobi(n, 0.0, p)
    return (1.0 + t) / 2.0, w


def _cpi_fixed(p: float, n: int) -> float:
    # I(p) = (1/pi) int_0^pi chord(t)^p dt with chord(t) = 2 sin(t/2);
    # substituting t = pi x gives int_0^1 x^p h(x) dx with the smooth
    # factor h(x) = (2 sin(pi x/2)/x)^p = (pi sinc(x/2))^p, handled by a
    # Gauss-Jacobi rule that carries the x^p weight exactly.
    x, w = _jacobi_rule(n, p)
    h = (np.pi * np.sinc(x / 2.0)) ** p
    return float(np.sum(w * h) * 2.0 ** (-p - 1.0))


def circle_power_integral(p: float, theta: float = 0.0) -> float:
    """(1/2pi) int_0^{2pi} |e^{i theta} - e^{i phi}|^p dphi for p > -1.

    The substitution phi = theta + t removes theta exactly, so the value
    is independent of the anchor by construction; ``theta`` is accepted
    for interface symmetry.  The rule size doubles until two refinements
    agree to 1e-11 relative.
    """
    del theta
    if p <= -1.0:
        raise ValueError("integral diverges for p <= -1")
    if p > 1000.0:
        raise ValueError("exponent too large for double-precision quadrature")
    prev = _cpi_fixed(p, 96)
    for n in (192, 384):
        cur = _cpi_fixed(p, n)
        if abs(cur - prev) <= 1e-11 * abs(cur):
            return cur
        prev = cur
    logger.warning("circle power integral at p=%g: refinement did not settle to 1e-11", p)
    return prev


# ----------------------------------------------------------------------
# the chain
# ----------------------------------------------------------------------

def m2(K: float, Kp: float) -> float:
    m = mu(K)
    return K * p_s(K, Kp) ** (1.0 + m) * circle_power_integral(m * m - 1.0)


@dataclass(frozen=True)
class BoundSet:
    """The full constant chain with the inputs it was built from.

    ``c0`` / ``n2`` may be inf / 0.0 when they leave double range; the
    log10 companions always carry the magnitude.  ``c1`` is present only
    when (1 - mu) * m2 < 1.
    """

    K: float
    Kp: float
    g_sup: float
    mu: float
    p_s: float
    m2: float
    c0: float
    log10_c0: float
    c1: float | None
    lip_M: float
    log10_lip_M: float
    n1: float
    n2: float
    log10_n2: float
    colip_N: float
    colip_positive: bool

    def to_dict(self) -> dict:
        d = {
            "K": self.K,
            "Kp": self.Kp,
            "g_sup": self.g_sup,
            "mu": self.mu,
            "p_s": self.p_s,
            "m2": self.m2,
            "c0": self.c0 if math.isfinite(self.c0) else None,
            "log10_c0": self.log10_c0,
            "c1": self.c1,
            "lip_M": self.lip_M if math.isfinite(self.lip_M) else None,
            "log10_lip_M": self.log10_lip_M,
            "n1": self.n1,
            "n2": self.n2,
            "log10_n2": self.log10_n2,
            "colip_N": self.colip_N,
            "colip_positive": self.colip_positive,
        }
        return d


def lipschitz_M(K: float, Kp: float, g_sup: float) -> BoundSet:
    """Assemble the whole chain for inputs (K, K', sup|g|)."""
    if g_sup < 0:
        raise ValueError("g_sup must be >= 0")
    m = mu(K)
    ps = p_s(K, Kp)
    m2_val = m2(K, Kp)
    base = m2_val + 0.5 * K * g_sup + 7.0 / 6.0 * g_sup + math.sqrt(Kp)
    exponent = K * _ONE_PLUS_PI_SQ
    log10_c0 = exponent * math.log10(base)
    c0 = 10.0**log10_c0 if log10_c0 <= OVERFLOW_LOG10 else math.inf

    damped = (1.0 - m) * m2_val
    if damped < 1.0:
        c1 = (base - damped) / (1.0 - damped)
        lip = min(c0, c1)
    else:
        c1 = None
        lip = c0
    log10_lip = log10_c0 if c1 is None or lip == c0 else math.log10(lip)

    n1, n2_val, log10_n2, colip = _colipschitz_parts(K, Kp, g_sup, m, ps)
    return BoundSet(
        K=K,
        Kp=Kp,
        g_sup=g_sup,
        mu=m,
        p_s=ps,
        m2=m2_val,
        c0=c0,
        log10_c0=log10_c0,
        c1=c1,
        lip_M=lip,
        log10_lip_M=log10_lip,
        n1=n1,
        n2=n2_val,
        log10_n2=log10_n2,
        colip_N=colip,
        colip_positive=colip > 0.0,
    )


def _colipschitz_parts(K, Kp, g_sup, m, ps):
    q = 2.0 / m
    log10_n2 = -q * math.log10(ps) + math.log10(circle_power_integral(q - 2.0))
    n2_val = 10.0**log10_n2 if log10_n2 >= -OVERFLOW_LOG10 else 0.0
    n1 = n2_val - 0.5 * g_sup - math.sqrt(Kp)
    colip = n1 / K**2 - math.sqrt(Kp) / K - 7.0 / 6.0 * g_sup
    return n1, n2_val, log10_n2, colip


def colipschitz_N(K: float, Kp: float, g_sup: float) -> tuple[float, float, float]:
    """(n1, n2, N); N > 0 is the regime where the floor says anything."""
    if g_sup < 0:
        raise ValueError("g_sup must be >= 0")
    n1, n2_val, _, colip = _colipschitz_parts(K, Kp, g_sup, mu(K), p_s(K, Kp))
    return n1, n2_val, colip


# ----------------------------------------------------------------------
# closed curves as polyline samples
# ----------------------------------------------------------------------

class CurveSamples:
    """Ordered samples of a closed curve with their cumulative arc length.

    The closing segment from the last sample back to the first is
    implied; adjacent samples must be distinct.
    """

    def __init__(self, points: np.ndarray):
        pts = np.asarray(points, dtype=np.complex128).ravel()
        if pts.size >= 2 and pts[0] == pts[-1]:
            pts = pts[:-1]
        if pts.size < 3:
            raise ValueError("need at least 3 distinct samples")
        seg = np.abs(np.roll(pts, -1) - pts)
        if np.any(seg == 0.0):
            raise ValueError("coincident adjacent samples")
        self.points = pts
        self.seg_lengths = seg
        self.arc = np.concatenate([[0.0], np.cumsum(seg)[:-1]])
        self.total = float(seg.sum())
        if self.total == 0.0:
            raise ValueError("degenerate curve of zero length")

    @classmethod
    def circle(cls, n: int = 1024, radius: float = 1.0, center: complex = 0j) -> "CurveSamples":
        th = 2.0 * np.pi * np.arange(n) / n
        return cls(center + radius * np.exp(1j * th))

    @classmethod
    def from_function(cls, fn, n: int = 1024) -> "CurveSamples":
        t = 2.0 * np.pi * np.arange(n) / n
        return cls(np.asarray(fn(t), dtype=np.complex128))

    def point_at_arc(self, s) -> np.ndarray:
        """Linear interpolation along the polyline at arc position(s) s."""
        s = np.mod(np.atleast_1d(np.asarray(s, dtype=float)), self.total)
        idx = np.searchsorted(self.arc, s, side="right") - 1
        frac = (s - self.arc[idx]) / self.seg_lengths[idx]
        nxt = (idx + 1) % self.points.size
        return self.points[idx] + frac * (self.points[nxt] - self.points[idx])

    def arc_position_of(self, q: complex) -> float:
        """Arc position of the polyline point nearest to q."""
        a = self.points
        b = np.roll(a, -1)
        d = b - a
        t = np.clip(((q - a) * np.conj(d)).real / np.abs(d) ** 2, 0.0, 1.0)
        proj = a + t * d
        k = int(np.argmin(np.abs(q - proj)))
        return float((self.arc[k] + t[k] * self.seg_lengths[k]) % self.total)

    def distance_to(self, q: complex) -> float:
        a = self.points
        b = np.roll(a, -1)
        d = b - a
        t = np.clip(((q - a) * np.conj(d)).real / np.abs(d) ** 2, 0.0, 1.0)
        return float(np.abs(q - (a + t * d)).min())


def chord_arc_constant(c: CurveSamples) -> float:
    """Max over sample pairs of along-curve distance over chordal distance.

    At least 16 samples are required; coincident non-adjacent samples
    (self-touching curves) are skipped rather than reported as infinite.
    """
    if c.points.size < 16:
        raise ValueError("need at least 16 samples")
    return _kernels.pairwise_ratio_max(c.points, c.arc, c.total)


def well_distributed_points(c: CurveSamples) -> tuple[complex, complex, complex]:
    """Three points cutting the curve into arcs of equal length, starting
    at the first sample."""
    pts = c.point_at_arc(np.array([0.0, c.total / 3.0, 2.0 * c.total / 3.0]))
    return complex(pts[0]), complex(pts[1]), complex(pts[2])


@dataclass(frozen=True)
class NormalizedReport:
    is_normalized: bool
    gap: float  # largest deviation of the image arcs from total/3


def normalized_check(
    boundary_map: BoundaryData,
    image_curve: CurveSamples,
    tol_on_curve: float = 1e-6,
    tol_gap: float = 1e-3,
) -> NormalizedReport:
    """Does the boundary map send an equal-arc triple to an equal-arc triple?

    The triple 0, 2pi/3, 4pi/3 on the circle is mapped through the
    (trigonometric interpolation of the) boundary samples; image arc gaps
    are measured on the image polyline.  Requires a genuine boundary
    homeomorphism (psi lift with winding 1) whose samples lie on the
    image curve.
    """
    if boundary_map.psi is None or boundary_map.winding != 1:
        raise ValueError("boundary map is not a circle homeomorphism (no psi lift with winding 1)")
    probe = boundary_map.samples[:: max(1, boundary_map.n // 32)]
    worst = max(image_curve.distance_to(complex(q)) for q in probe)
    if worst > tol_on_curve:
        raise ValueError(f"boundary samples are {worst:.2e} off the image curve (tol {tol_on_curve:g})")

    t = np.array([0.0, 2.0 * np.pi / 3.0, 4.0 * np.pi / 3.0])
    images = boundary_map.at_angles(t)
    pos = np.array([image_curve.arc_position_of(complex(q)) for q in images])
    gaps = np.mod(np.diff(np.concatenate([pos, pos[:1]])), image_curve.total)
    gap = float(np.abs(gaps - image_curve.total / 3.0).max())
    return NormalizedReport(gap <= tol_gap * image_curve.total, gap)


def holder_seminorm(c: CurveSamples, n: int, alpha: float) -> float:
    """Discrete Holder quotient sup of the n-th arc-length derivative.

    Derivatives of the arc-length parameterization are estimated by
    cyclic central differences at the sample positions, then the sup of
    |D(t_i) - D(t_j)| / |t_i - t_j|^alpha runs over all sample pairs
    (plain parameter distance, as the quotient is over [0, total]).
    """
    if n not in (1, 2):
        raise ValueError("only first and second derivatives are supported")
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    if c.seg_lengths.max() > 1e-2 * c.total:
        raise ValueError("samples too sparse for stable derivative estimates")
    pts = c.points
    h_plus = c.seg_lengths
    h_minus = np.roll(c.seg_lengths, 1)
    fwd = (np.roll(pts, -1) - pts) / h_plus
    bwd = (pts - np.roll(pts, 1)) / h_minus
    d1 = (h_minus * fwd + h_plus * bwd) / (h_plus + h_minus)
    if n == 1:
        vals = d1
    else:
        vals = 2.0 * (fwd - bwd) / (h_plus + h_minus)
    return _kernels.holder_sup(np.ascontiguousarray(vals), np.ascontiguousarray(c.arc), alpha)

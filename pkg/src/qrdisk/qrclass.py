"""Quasiregularity classification from sampled gradient statistics.

The central inequality is |grad w|^2 <= K * J_w + K' with K >= 1 and
K' >= 0.  On a finite sample the smallest admissible K' at a given K is
max(0, sup(|grad w|^2 - K J_w)); sweeping K gives a trade-off frontier.
A mapping for which no finite K works with K' = 0 is witnessed by the
dilatation ratio |grad w|^2 / J_w blowing up along shrinking boundary
margins.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from .calculus import SampleGrid, jet_grid
from .expr import MappingExpr

logger = logging.getLogger(__name__)

__all__ = [
    "QRProfile",
    "ParetoFrontier",
    "profile_of",
    "qr_deficiency",
    "pareto_frontier",
    "k_qr_blowup",
    "properness_check",
    "lemma11_check",
    "sense_preserving_check",
]


@dataclass(frozen=True)
class QRProfile:
    """Per-point records (z, |grad w|^2, J_w, l(grad w)) over a grid."""

    z: np.ndarray
    grad_sq: np.ndarray
    jac: np.ndarray
    l_grad: np.ndarray
    grid: SampleGrid | None = None

    def __post_init__(self):
        if self.z.size == 0:
            raise ValueError("empty profile")


def profile_of(e: MappingExpr, grid: SampleGrid) -> QRProfile:
    pts = grid.points()
    _, wz, wzb, _ = jet_grid(e, pts)
    p, q = np.abs(wz), np.abs(wzb)
    return QRProfile(pts, (p + q) ** 2, p * p - q * q, np.abs(p - q), grid)


def qr_deficiency(p: QRProfile, K: float) -> float:
    """Minimal admissible offset K' at stretch factor K, on the sample."""
    if K < 1:
        raise ValueError("K must be >= 1")
    return float(max(0.0, np.max(p.grad_sq - K * p.jac)))


@dataclass(frozen=True)
class ParetoFrontier:
    entries: tuple[tuple[float, float], ...]  # (K, kprime_min), kprime_min nonincreasing

    def to_csv(self, out: IO[str]) -> None:
        w = csv.writer(out)
        w.writerow(["K", "kprime_min"])
        for k, kp in self.entries:
            w.writerow([repr(k), repr(kp)])


def pareto_frontier(p: QRProfile, k_values: Sequence[float]) -> ParetoFrontier:
    """Frontier K -> minimal K' over an ascending list of K >= 1.

    Monotonicity is enforced by a running minimum; the raw deficiency can
    only increase with K at points where the Jacobian is negative.
    """
    if len(k_values) == 0:
        raise ValueError("empty k_values")
    ks = [float(k) for k in k_values]
    if any(k < 1 for k in ks) or any(b < a for a, b in zip(ks, ks[1:])):
        raise ValueError("k_values must be ascending and >= 1")
    entries = []
    running = math.inf
    for k in ks:
        running = min(running, qr_deficiency(p, k))
        entries.append((k, running))
    return ParetoFrontier(tuple(entries))


def _circle_points(margin: float, n_theta: int) -> np.ndarray:
    return (1.0 - margin) * np.exp(2j * np.pi * np.arange(n_theta) / n_theta)


def k_qr_blowup(e: MappingExpr, margins: Sequence[float], n_theta: int = 256) -> list[float]:
    """Sup of |grad w|^2 / J_w over the circle |z| = 1 - margin, per margin.

    Only orientation-preserving points (J_w > 0) enter the ratio; excluded
    points are counted in a warning.  A sequence growing without bound is
    the numerical witness that no plain-K bound holds.
    """
    _check_margins(margins)
    out = []
    for m in margins:
        pts = _circle_points(m, n_theta)
        _, wz, wzb, _ = jet_grid(e, pts)
        p, q = np.abs(wz), np.abs(wzb)
        grad_sq = (p + q) ** 2
        jac = p * p - q * q
        keep = jac > 0
        if not keep.any():
            raise ValueError(f"no orientation-preserving points on margin {m}")
        n_rej = int((~keep).sum())
        if n_rej:
            logger.warning("dilatation ratio: dropped %d points with J_w <= 0 at margin %g", n_rej, m)
        out.append(float((grad_sq[keep] / jac[keep]).max()))
    return out


def properness_check(e: MappingExpr, margins: Sequence[float], n_theta: int = 256) -> list[float]:
    """Min of |w| over the circle |z| = 1 - margin, per margin.

    For disk self-maps, values marching to 1 witness properness.
    """
    _check_margins(margins)
    out = []
    for m in margins:
        pts = _circle_points(m, n_theta)
        out.append(float(np.abs(e(pts)).min()))
    return out


def _check_margins(margins: Sequence[float]):
    ms = list(margins)
    if not ms:
        raise ValueError("empty margins")
    if any(not 0.0 < m < 0.5 for m in ms):
        raise ValueError("margins must lie in (0, 0.5)")
    if any(b >= a for a, b in zip(ms, ms[1:])):
        raise ValueError("margins must be strictly decreasing")


@dataclass(frozen=True)
class Lemma11Report:
    holds: bool
    worst_margin: float


def lemma11_check(p: QRProfile, K: float, Kp: float) -> Lemma11Report:
    """Check |grad w| <= K l(grad w) + sqrt(K') on the sample.

    This is implied for any admissible (K, K') pair and so is a consistency
    check on the profile.
    """
    worst = float(np.max(np.sqrt(p.grad_sq) - K * p.l_grad - math.sqrt(Kp)))
    return Lemma11Report(worst <= 1e-9, worst)


@dataclass(frozen=True)
class SenseReport:
    all_positive: bool
    min_jac: float


def sense_preserving_check(p: QRProfile) -> SenseReport:
    m = float(p.jac.min())
    return SenseReport(m > 0.0, m)

"""Independent oracles used by the tests.

Everything here is coded afresh from the defining formulas, separately
from the package implementation: the constant chain is recomputed in
50-digit mpmath arithmetic with the circle power integral taken from its
Gamma-function closed form

    (1/2pi) int_0^{2pi} |1 - e^{it}|^p dt = Gamma(1+p) / Gamma(1+p/2)^2,

and the 2x2 operator norm is a brute-force sweep over unit vectors.
"""

from __future__ import annotations

import mpmath as mp
import numpy as np

mp.mp.dps = 50


def cpi_gamma(p) -> mp.mpf:
    p = mp.mpf(p)
    return mp.gamma(1 + p) / mp.gamma(1 + p / 2) ** 2


def constant_chain(K, Kp, gsup) -> dict:
    """Extended-precision recomputation of the whole bound chain."""
    K, Kp, gsup = mp.mpf(K), mp.mpf(Kp), mp.mpf(gsup)
    pi = mp.pi
    mu = 1 / (K * (1 + pi) ** 2)
    ps = 4 * (1 + pi) * mp.mpf(2) ** mu * mp.sqrt(
        max(2 * pi**2 * K / mp.log(2), 2 * pi * Kp / (K * (1 + pi) ** 2 + 4))
    )
    m2 = K * ps ** (1 + mu) * cpi_gamma(mu**2 - 1)
    base = m2 + K * gsup / 2 + mp.mpf(7) / 6 * gsup + mp.sqrt(Kp)
    log10_c0 = K * (1 + pi) ** 2 * mp.log10(base)
    c0 = mp.power(base, K * (1 + pi) ** 2)
    damped = (1 - mu) * m2
    c1 = (base - damped) / (1 - damped) if damped < 1 else None
    lip = c0 if c1 is None else min(c0, c1)
    n2 = ps ** (-2 / mu) * cpi_gamma(2 / mu - 2)
    n1 = n2 - gsup / 2 - mp.sqrt(Kp)
    colip = n1 / K**2 - mp.sqrt(Kp) / K - mp.mpf(7) / 6 * gsup
    return {
        "mu": mu,
        "p_s": ps,
        "m2": m2,
        "c0": c0,
        "log10_c0": log10_c0,
        "c1": c1,
        "lip_M": lip,
        "n1": n1,
        "n2": n2,
        "colip_N": colip,
    }


def rel_err(value: float, oracle) -> float:
    o = float(oracle)
    return abs(value - o) / abs(o)


def operator_norm_sweep(A: np.ndarray, n_angles: int = 100_000) -> tuple[float, float]:
    t = np.linspace(0.0, 2.0 * np.pi, n_angles, endpoint=False)
    v = np.stack([np.cos(t), np.sin(t)])
    img = np.asarray(A, dtype=float) @ v
    norms = np.hypot(img[0], img[1])
    return float(norms.max()), float(norms.min())


# radial closed forms for the two gallery families ---------------------

def ex21_radial(r: np.ndarray) -> dict:
    """|w_z|, |w_zbar|, grad_norm, l_grad, |w|, |lap| for the quartic-decic map."""
    wz = 8 * r**5 - 7 * r**11
    wzb = np.abs(4 * r**5 - 5 * r**11)
    return {
        "abs_wz": wz,
        "abs_wzbar": wzb,
        "grad_norm": wz + wzb,
        "l_grad": np.abs(wz - wzb),
        "abs_w": 2 * r**6 - r**12,
        "abs_lap": np.abs(64 * r**4 - 140 * r**10),
    }


def ex41_radial(r: np.ndarray, n: int) -> dict:
    two_n = 2 * n
    return {
        "abs_wz": ((two_n + 1) - (n + 1) * r**two_n) / two_n,
        "abs_wzbar": r**two_n / 2,
        "grad_norm": ((two_n + 1) - r**two_n) / two_n,
        "l_grad": (two_n + 1) * (1 - r**two_n) / two_n,
        "jac": (two_n + 1) * (1 - r**two_n) * ((two_n + 1) - r**two_n) / (two_n**2),
    }

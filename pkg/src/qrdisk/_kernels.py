"""Hot numeric kernels with a numba lane and a pure-numpy fallback.

The active lane is chosen at import time: numba is used when it imports
cleanly and the environment variable ``QRDISK_DISABLE_NUMBA`` is unset
(or "0").  Both lanes implement the same signatures and agree to floating
round-off; ``BACKEND`` records which one is live.

Run ``python benchmarks/bench_kernels.py`` for a lane-vs-lane timing table.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("QRDISK_DISABLE_NUMBA", "0") not in ("0", "", "false", "False")

if not _DISABLE:
    try:
        from numba import njit, prange

        _HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _HAVE_NUMBA = False
else:
    _HAVE_NUMBA = False

BACKEND = "numba" if _HAVE_NUMBA else "numpy"


def set_num_threads(n: int) -> None:
    """Bound the worker pool used by the numba lane (no-op on numpy)."""
    if _HAVE_NUMBA:
        import numba

        numba.set_num_threads(max(1, int(n)))


_env_threads = os.environ.get("QRDISK_THREADS")
if _env_threads:
    try:
        set_num_threads(int(_env_threads))
    except ValueError:
        pass


# ----------------------------------------------------------------------
# numpy lane
# ----------------------------------------------------------------------

def _poly_eval_numpy(a_exp, b_exp, coeffs, points):
    out = np.zeros(points.shape, dtype=np.complex128)
    pc = np.conj(points)
    for a, b, c in zip(a_exp, b_exp, coeffs):
        out += c * points**int(a) * pc**int(b)
    return out


def _poisson_extend_numpy(samples, zs):
    # P[f](z) as the uniform-node average of (1-|z|^2)/|z-e|^2 * f(e)
    n = samples.shape[0]
    e = np.exp(2j * np.pi * np.arange(n) / n)
    out = np.empty(zs.shape, dtype=np.complex128)
    chunk = max(1, (1 << 22) // n)
    for i in range(0, zs.shape[0], chunk):
        z = zs[i : i + chunk, None]
        ker = (1.0 - np.abs(z) ** 2) / np.abs(z - e[None, :]) ** 2
        out[i : i + chunk] = ker @ samples / n
    return out


def _smoothstep_np(u):
    u = np.clip(u, 0.0, 1.0)
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u))


def _green_far_numpy(nodes, wts, gvals, zs, gzs, epss, want_grad):
    n_z = zs.shape[0]
    val = np.zeros(n_z, dtype=np.complex128)
    dz = np.zeros(n_z, dtype=np.complex128)
    dzb = np.zeros(n_z, dtype=np.complex128)
    chunk = max(1, (1 << 21) // nodes.shape[0])
    cn = np.conj(nodes)
    for i in range(0, n_z, chunk):
        z = zs[i : i + chunk, None]
        eps = epss[i : i + chunk, None]
        diff = z - nodes[None, :]
        s = np.abs(diff)
        chi = _smoothstep_np((s - 0.5 * eps) / (0.5 * eps))
        dg = (gvals[None, :] - gzs[i : i + chunk, None]) * (wts[None, :] * chi)
        one_m = 1.0 - z * cn[None, :]
        if want_grad:
            with np.errstate(divide="ignore", invalid="ignore"):
                gz_ker = (-cn[None, :] / one_m - 1.0 / diff) / (4.0 * np.pi)
            gz_ker = np.where(chi > 0.0, gz_ker, 0.0)
            dz[i : i + chunk] = np.sum(gz_ker * dg, axis=1)
            dzb[i : i + chunk] = np.sum(np.conj(gz_ker) * dg, axis=1)
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                ker = (np.log(np.abs(one_m)) - np.log(s)) / (2.0 * np.pi)
            ker = np.where(chi > 0.0, ker, 0.0)
            val[i : i + chunk] = np.sum(ker * dg, axis=1)
    return val, dz, dzb


def _pairwise_ratio_max_numpy(pts, arcpos, total):
    # max over sample pairs of along-curve distance / chordal distance
    n = pts.shape[0]
    best = 0.0
    chunk = max(1, (1 << 21) // n)
    for i in range(0, n, chunk):
        d_arc = np.abs(arcpos[i : i + chunk, None] - arcpos[None, :])
        d_arc = np.minimum(d_arc, total - d_arc)
        chord = np.abs(pts[i : i + chunk, None] - pts[None, :])
        mask = chord > 0.0
        ratio = np.where(mask, d_arc / np.where(mask, chord, 1.0), 0.0)
        m = ratio.max(initial=0.0)
        if m > best:
            best = m
    return best


def _holder_sup_numpy(vals, arcpos, alpha):
    n = vals.shape[0]
    best = 0.0
    chunk = max(1, (1 << 21) // n)
    for i in range(0, n, chunk):
        dt = np.abs(arcpos[i : i + chunk, None] - arcpos[None, :])
        dv = np.abs(vals[i : i + chunk, None] - vals[None, :])
        mask = dt > 0.0
        q = np.where(mask, dv / np.where(mask, dt, 1.0) ** alpha, 0.0)
        m = q.max(initial=0.0)
        if m > best:
            best = m
    return best


# ----------------------------------------------------------------------
# numba lane
# ----------------------------------------------------------------------

if _HAVE_NUMBA:

    @njit(cache=True)
    def _poly_eval_nb(a_exp, b_exp, coeffs, points):
        n = points.shape[0]
        m = coeffs.shape[0]
        out = np.zeros(n, dtype=np.complex128)
        for i in range(n):
            z = points[i]
            zb = np.conj(z)
            acc = 0.0 + 0.0j
            for t in range(m):
                acc += coeffs[t] * z ** a_exp[t] * zb ** b_exp[t]
            out[i] = acc
        return out

    @njit(parallel=True, cache=True)
    def _poisson_extend_nb(samples, zs):
        n = samples.shape[0]
        e = np.exp(2j * np.pi * np.arange(n) / n)
        out = np.empty(zs.shape[0], dtype=np.complex128)
        for i in prange(zs.shape[0]):
            z = zs[i]
            top = 1.0 - abs(z) ** 2
            acc = 0.0 + 0.0j
            for k in range(n):
                d = z - e[k]
                acc += top / (d.real * d.real + d.imag * d.imag) * samples[k]
            out[i] = acc / n
        return out

    @njit(inline="always")
    def _smoothstep_nb(u):
        if u <= 0.0:
            return 0.0
        if u >= 1.0:
            return 1.0
        return u * u * u * (10.0 + u * (-15.0 + 6.0 * u))

    @njit(parallel=True, cache=True)
    def _green_far_nb(nodes, wts, gvals, zs, gzs, epss, want_grad):
        n_z = zs.shape[0]
        n_n = nodes.shape[0]
        val = np.zeros(n_z, dtype=np.complex128)
        dz = np.zeros(n_z, dtype=np.complex128)
        dzb = np.zeros(n_z, dtype=np.complex128)
        for i in prange(n_z):
            z = zs[i]
            gz = gzs[i]
            half = 0.5 * epss[i]
            acc_v = 0.0 + 0.0j
            acc_z = 0.0 + 0.0j
            acc_zb = 0.0 + 0.0j
            for k in range(n_n):
                om = nodes[k]
                diff = z - om
                s = abs(diff)
                chi = _smoothstep_nb((s - half) / half)
                if chi == 0.0:
                    continue
                dg = (gvals[k] - gz) * (wts[k] * chi)
                one_m = 1.0 - z * np.conj(om)
                if want_grad:
                    gzk = (-np.conj(om) / one_m - 1.0 / diff) / (4.0 * np.pi)
                    acc_z += gzk * dg
                    acc_zb += np.conj(gzk) * dg
                else:
                    acc_v += (np.log(abs(one_m)) - np.log(s)) / (2.0 * np.pi) * dg
            val[i] = acc_v
            dz[i] = acc_z
            dzb[i] = acc_zb
        return val, dz, dzb

    @njit(parallel=True, cache=True)
    def _pairwise_ratio_max_nb(pts, arcpos, total):
        n = pts.shape[0]
        row_best = np.zeros(n)
        for i in prange(n):
            best = 0.0
            for j in range(n):
                chord = abs(pts[i] - pts[j])
                if chord == 0.0:
                    continue
                d = abs(arcpos[i] - arcpos[j])
                if total - d < d:
                    d = total - d
                r = d / chord
                if r > best:
                    best = r
            row_best[i] = best
        return row_best.max()

    @njit(parallel=True, cache=True)
    def _holder_sup_nb(vals, arcpos, alpha):
        n = vals.shape[0]
        row_best = np.zeros(n)
        for i in prange(n):
            best = 0.0
            for j in range(n):
                dt = abs(arcpos[i] - arcpos[j])
                if dt == 0.0:
                    continue
                q = abs(vals[i] - vals[j]) / dt**alpha
                if q > best:
                    best = q
            row_best[i] = best
        return row_best.max()


# ----------------------------------------------------------------------
# public dispatch
# ----------------------------------------------------------------------

def poly_eval(a_exp: np.ndarray, b_exp: np.ndarray, coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Evaluate sum_t coeffs[t] * z^a[t] * conj(z)^b[t] at each point."""
    points = np.ascontiguousarray(points, dtype=np.complex128)
    if coeffs.shape[0] == 0:
        return np.zeros(points.shape, dtype=np.complex128)
    if _HAVE_NUMBA:
        return _poly_eval_nb(a_exp, b_exp, coeffs, points)
    return _poly_eval_numpy(a_exp, b_exp, coeffs, points)


def poisson_extend_batch(samples: np.ndarray, zs: np.ndarray) -> np.ndarray:
    if _HAVE_NUMBA:
        return _poisson_extend_nb(samples, zs)
    return _poisson_extend_numpy(samples, zs)


def green_far_batch(nodes, wts, gvals, zs, gzs, epss, want_grad: bool):
    """Blended far-field quadrature sums of the disk Green kernel.

    Returns (values, d/dz, d/dzbar) arrays; only one side is populated
    depending on ``want_grad``.
    """
    if _HAVE_NUMBA:
        return _green_far_nb(nodes, wts, gvals, zs, gzs, epss, want_grad)
    return _green_far_numpy(nodes, wts, gvals, zs, gzs, epss, want_grad)


def pairwise_ratio_max(pts, arcpos, total) -> float:
    if _HAVE_NUMBA:
        return float(_pairwise_ratio_max_nb(pts, arcpos, total))
    return float(_pairwise_ratio_max_numpy(pts, arcpos, total))


def holder_sup(vals, arcpos, alpha) -> float:
    if _HAVE_NUMBA:
        return float(_holder_sup_nb(vals, arcpos, float(alpha)))
    return float(_holder_sup_numpy(vals, arcpos, float(alpha)))

import io
import math

import numpy as np
import pytest

from qrdisk import (
    SampleGrid,
    WirtingerJet,
    approx_analytic_constant,
    colipschitz_estimate,
    fd_jet,
    grad_stats,
    grid_report_csv,
    jet_at,
    jet_grid,
    laplacian,
    lipschitz_estimate,
    operator_norm_2x2,
    parse,
    pde_inequality_check,
    polar_decomposition_check,
    product_inequality_check,
    rho_harmonic_residual,
)
from qrdisk.calculus import jacobian_matrix, polar_stretch_arrays

from _oracles import ex21_radial, operator_norm_sweep
from conftest import random_points, random_poly

EX21 = parse("2*|z|^4*z^2 - |z|^10*z^2")
EX41 = parse("(3*z - z*|z|^2)/2")
GRID = SampleGrid()  # n_r=200, n_theta=256, margin=1e-3


# ----------------------------------------------------------------------
# jets and stats
# ----------------------------------------------------------------------

def test_jet_shrink_family_origin():
    j = jet_at(EX41, 0.0)
    assert j.w == 0 and j.wzbar == 0 and j.lap == 0
    assert abs(j.wz - 1.5) < 1e-15


def test_jet_identity():
    j = jet_at(parse("z"), 0.3 - 0.7j)
    assert (j.w, j.wz, j.wzbar, j.lap) == (0.3 - 0.7j, 1.0, 0.0, 0.0)


def test_jet_quartic_decic_radial_moduli():
    r = 0.8
    j = jet_at(EX21, r * np.exp(0.9j))
    forms = ex21_radial(np.array(r))
    assert abs(abs(j.wz) - forms["abs_wz"]) < 1e-12
    assert abs(abs(j.wzbar) - forms["abs_wzbar"]) < 1e-12


def test_grad_stats_conformal_point():
    s = grad_stats(WirtingerJet(0.0, 1.0, 0.0, 0.0))
    assert (s.grad_norm, s.l_grad, s.jac) == (1.0, 1.0, 1.0)


def test_grad_stats_shrink_family_radial():
    for r in (0.2, 0.5, 0.9):
        s = grad_stats(jet_at(EX41, r * np.exp(0.3j)))
        assert abs(s.grad_norm - (3 - r**2) / 2) < 1e-12
        assert abs(s.l_grad - 3 * (1 - r**2) / 2) < 1e-12


def test_grad_stats_direct_arithmetic():
    s = grad_stats(WirtingerJet(0.0, 3.0, 4j, 0.0))
    assert (s.grad_norm, s.l_grad, s.jac) == (7.0, 1.0, -7.0)


def test_grad_identity_jac_product(rng):
    # |J| = grad_norm * l_grad, an exact identity of the singular values
    for _ in range(10):
        e = random_poly(rng)
        _, wz, wzb, _ = jet_grid(e, random_points(rng, 50))
        p, q = np.abs(wz), np.abs(wzb)
        jac = p * p - q * q
        prod = (p + q) * np.abs(p - q)
        assert np.all(np.abs(np.abs(jac) - prod) <= 1e-10 * (1.0 + prod))


# ----------------------------------------------------------------------
# operator norm
# ----------------------------------------------------------------------

def test_operator_norm_identity_and_diag():
    assert operator_norm_2x2(np.eye(2)) == (1.0, 1.0)
    assert operator_norm_2x2([[2.0, 0.0], [0.0, 1.0]]) == (2.0, 1.0)


def test_operator_norm_matches_angle_sweep(rng):
    for _ in range(20):
        A = rng.normal(size=(2, 2))
        top, bot = operator_norm_2x2(A)
        top_o, bot_o = operator_norm_sweep(A)
        assert abs(top - top_o) < 1e-8
        assert abs(bot - bot_o) < 1e-8


def test_operator_norm_of_jacobian_equals_stretches(rng):
    for _ in range(10):
        e = random_poly(rng)
        for z in random_points(rng, 5):
            j = jet_at(e, complex(z))
            s = grad_stats(j)
            top, bot = operator_norm_2x2(jacobian_matrix(j.wz, j.wzbar))
            assert abs(top - s.grad_norm) < 1e-9
            assert abs(bot - s.l_grad) < 1e-9


# ----------------------------------------------------------------------
# finite differences
# ----------------------------------------------------------------------

def test_fd_jet_holomorphic_square():
    j = fd_jet(lambda z: z * z, 1 + 1j, 1e-4)
    assert abs(j.wz - (2 + 2j)) < 1e-7
    assert abs(j.wzbar) < 1e-7


def test_fd_jet_antiholomorphic():
    j = fd_jet(lambda z: np.conj(z), 0.2 + 0.1j, 1e-4)
    assert abs(j.wz) < 1e-7
    assert abs(j.wzbar - 1.0) < 1e-7


def test_fd_jet_nonfinite_rejected():
    with pytest.raises(ValueError):
        fd_jet(lambda z: complex(np.inf), 0.1)


def test_fd_vs_symbolic_quartic_decic(rng):
    for z in random_points(rng, 30):
        sym = jet_at(EX21, complex(z))
        num = fd_jet(lambda q: EX21(q), complex(z))
        scale = 1.0 + abs(sym.wz) + abs(sym.wzbar)
        assert abs(sym.wz - num.wz) / scale < 1e-6
        assert abs(sym.wzbar - num.wzbar) / scale < 1e-6


def test_fd_vs_symbolic_random_polys(rng):
    # 30 points x 10 random mappings of degree <= 12
    for _ in range(10):
        e = random_poly(rng)
        for z in random_points(rng, 30):
            sym = jet_at(e, complex(z))
            num = fd_jet(lambda q: e(q), complex(z))
            scale = 1.0 + abs(sym.wz) + abs(sym.wzbar)
            assert abs(sym.wz - num.wz) / scale < 1e-6
            assert abs(sym.wzbar - num.wzbar) / scale < 1e-6


def test_fd_laplacian_consistency(rng):
    for _ in range(10):
        e = random_poly(rng)
        for z in random_points(rng, 3):
            sym = laplacian(e)(complex(z))
            num = fd_jet(lambda q: e(q), complex(z)).lap
            assert abs(sym - num) / max(1.0, abs(sym)) < 1e-5


# ----------------------------------------------------------------------
# grid estimates
# ----------------------------------------------------------------------

def test_lipschitz_quartic_decic_below_12():
    assert lipschitz_estimate(EX21, GRID) < 12.0


def test_shrink_family_lipschitz_and_colip():
    assert lipschitz_estimate(EX41, GRID) <= 1.5 + 1e-12
    vals = [colipschitz_estimate(EX41, SampleGrid(margin=m)) for m in (1e-2, 1e-3, 1e-4)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert all(v < 0.05 for v in vals)


def test_identity_estimates():
    assert abs(lipschitz_estimate(parse("z"), GRID) - 1.0) < 1e-15
    assert abs(colipschitz_estimate(parse("z"), GRID) - 1.0) < 1e-15


# ----------------------------------------------------------------------
# inequality checks
# ----------------------------------------------------------------------

def test_pde_check_offset_76_holds():
    assert pde_inequality_check(EX21, 1.0, 76.0, GRID).holds


@pytest.mark.parametrize("M", [1.0, 10.0, 1e3, 1e6])
def test_pde_check_no_offset_fails(M):
    rep = pde_inequality_check(EX21, M, 0.0, GRID)
    assert not rep.holds
    if M >= 1e3:
        assert abs(rep.witness) < 0.35
    if M >= 1e6:
        assert abs(rep.witness) < 0.1


def test_pde_check_holomorphic_trivial():
    assert pde_inequality_check(parse("z^3 - 2*z"), 0.0, 0.0, GRID).holds


@pytest.mark.parametrize("M", [1.0, 1e3, 1e6])
def test_product_check_quartic_decic_fails(M):
    rep = product_inequality_check(EX21, M, GRID)
    assert not rep.holds
    if M >= 1e6:
        assert abs(rep.witness) < 0.12


def test_product_check_harmonic_holds():
    for M in (0.0, 1.0, 1e6):
        assert product_inequality_check(parse("z^2 + 0.5*conj(z)"), M, GRID).holds


def test_product_check_z_zbar_fails():
    # lap(z conj z) = 4 while |w_z w_zbar| = |z|^2 < 1 on the grid
    rep = product_inequality_check(parse("z*conj(z)"), 1.0, GRID)
    assert not rep.holds
    r_min = GRID.radii()[0]
    assert abs(rep.worst_margin - (4.0 - r_min**2)) < 1e-12


# ----------------------------------------------------------------------
# polar decomposition
# ----------------------------------------------------------------------

def test_polar_identity_tight():
    rep = polar_decomposition_check(parse("z"), 1.0, 0.0, GRID)
    assert rep.holds
    assert rep.n_rejected == 0


def test_polar_quartic_decic_on_annulus():
    grid = SampleGrid(n_r=120, n_theta=128, margin=1e-3, r_min=0.3)
    rep = polar_decomposition_check(EX21, 1.0, 144.0, grid)
    assert rep.holds
    assert rep.n_rejected == 0


def test_polar_square_map():
    rep = polar_decomposition_check(parse("z^2"), 1.0, 0.0, GRID)
    assert rep.holds
    grad_rho, rho_grad_s, keep = polar_stretch_arrays(parse("z^2"), GRID.points())
    r = np.abs(GRID.points())[keep]
    assert np.max(np.abs(grad_rho[keep] - 2 * r)) < 1e-9
    assert np.max(np.abs(rho_grad_s[keep] - 2 * r)) < 1e-9


def test_polar_rejects_vanishing_mapping():
    with pytest.raises(ValueError):
        polar_decomposition_check(parse("0*z"), 1.0, 0.0, GRID)


def test_polar_sandwich_inequalities(rng):
    # l(grad w) <= |grad rho| <= |grad w| wherever w != 0
    for _ in range(5):
        e = random_poly(rng, max_degree=8)
        pts = random_points(rng, 200)
        grad_rho, _, keep = polar_stretch_arrays(e, pts)
        _, wz, wzb, _ = jet_grid(e, pts)
        p, q = np.abs(wz), np.abs(wzb)
        gn, lg = p + q, np.abs(p - q)
        assert np.all(grad_rho[keep] <= gn[keep] + 1e-9)
        assert np.all(grad_rho[keep] >= lg[keep] - 1e-9)


# ----------------------------------------------------------------------
# metric residuals
# ----------------------------------------------------------------------

def test_residual_harmonic_flat_metric():
    assert rho_harmonic_residual(parse("z^2 + conj(z)"), lambda w: 0.0 * w, GRID) == 0.0


def test_residual_identity_any_holomorphic_density():
    # f_z f_zbar = 0 for the identity, so any phi'/2phi coefficient works
    coef = lambda w: 1.0 / (2.0 * (2.0 + w))
    assert rho_harmonic_residual(parse("z"), coef, GRID) == 0.0


def test_residual_manufactured_interpolant():
    from scipy.spatial import cKDTree

    e = parse("z + 0.3*z^2*conj(z)")
    pts = GRID.points()
    w, wz, wzb, lap = jet_grid(e, pts)
    lam = -(lap / 4.0) / (wz * wzb)
    tree = cKDTree(np.stack([w.real, w.imag], axis=1))

    def coef(wq):
        wq = np.atleast_1d(wq)
        _, idx = tree.query(np.stack([wq.real, wq.imag], axis=1))
        return lam[idx]

    assert rho_harmonic_residual(e, coef, GRID) <= 1e-8


# ----------------------------------------------------------------------
# approximate analyticity
# ----------------------------------------------------------------------

def test_approx_analytic_holomorphic():
    assert approx_analytic_constant(parse("2 + z"), GRID) == 0.0


def test_approx_analytic_shifted_modulus():
    v = approx_analytic_constant(parse("2 + z*conj(z)"), GRID)
    r_max = GRID.radii()[-1]
    assert abs(v - r_max / (2 + r_max**2)) < 1e-12
    assert abs(v - 1.0 / 3.0) < 2e-3


def test_approx_analytic_antiholomorphic_annulus():
    grid = SampleGrid(n_r=400, n_theta=16, margin=1e-3, r_min=0.5)
    v = approx_analytic_constant(parse("conj(z)"), grid)
    assert abs(v - 2.0) < 0.01


def test_approx_analytic_rejects_zero_mapping():
    with pytest.raises(ValueError):
        approx_analytic_constant(parse("0*z"), GRID)


# ----------------------------------------------------------------------
# sampling and export
# ----------------------------------------------------------------------

def test_grid_layout():
    g = SampleGrid(n_r=4, n_theta=8, margin=0.1)
    pts = g.points()
    assert pts.size == 32
    assert np.abs(pts).max() <= 1.0 - g.margin
    assert np.abs(pts).min() > 0.0


def test_grid_validation():
    with pytest.raises(ValueError):
        SampleGrid(margin=0.7)
    with pytest.raises(ValueError):
        SampleGrid(n_r=0)


def test_csv_export_roundtrip():
    buf = io.StringIO()
    g = SampleGrid(n_r=3, n_theta=4, margin=0.2)
    grid_report_csv(parse("z"), g, buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "r,theta,grad_norm,l_grad,jac,lap_abs"
    assert len(lines) == 1 + 12
    row = [float(x) for x in lines[1].split(",")]
    assert row[2:] == [1.0, 1.0, 1.0, 0.0]

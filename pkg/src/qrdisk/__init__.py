"""qrdisk: planar-mapping analysis on the unit disk.

Parse mappings written in the z / conj(z) polynomial algebra, take exact
Wirtinger derivatives, profile stretch/Jacobian statistics on polar
grids, classify quasiregularity trade-offs, solve the disk Poisson
problem through its boundary and volume kernels, and evaluate the
explicit Lipschitz/coLipschitz constant chains.
"""

from ._kernels import BACKEND, set_num_threads
from .bounds import (
    BoundSet,
    CurveSamples,
    chord_arc_constant,
    circle_power_integral,
    colipschitz_N,
    holder_seminorm,
    lipschitz_M,
    m2,
    mu,
    normalized_check,
    p_s,
    well_distributed_points,
)
from .calculus import (
    GradStats,
    SampleGrid,
    WirtingerJet,
    approx_analytic_constant,
    colipschitz_estimate,
    fd_jet,
    grad_stats,
    grid_report_csv,
    jet_at,
    jet_grid,
    lipschitz_estimate,
    operator_norm_2x2,
    pde_inequality_check,
    polar_decomposition_check,
    product_inequality_check,
    rho_harmonic_residual,
)
from .expr import MappingExpr, ParseDiagnostic, ParseError, d_z, d_zbar, evaluate, laplacian, parse
from .gallery import example21, example41, verify_case
from .poisson import (
    BoundaryData,
    PoissonSolution,
    QuadratureConvergenceError,
    QuadratureSpec,
    SourceField,
    boundary_energy,
    green_gradient,
    green_potential,
    heinz_check,
    lemma_c_verifier,
    poisson_extend,
    solve,
)
from .qrclass import (
    ParetoFrontier,
    QRProfile,
    k_qr_blowup,
    lemma11_check,
    pareto_frontier,
    profile_of,
    properness_check,
    qr_deficiency,
    sense_preserving_check,
)

__version__ = "0.1.0"

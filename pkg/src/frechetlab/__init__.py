"""Distances between polygonal curves and between probability laws.

Two historical branches under one roof: worst-case monotone matching
of ordered curves (free-space decision and bracketed computation), and
coupling-based distances on laws (quantile transport, extremal
couplings, Gaussian closed forms), with exact brute-force transport
oracles for validation at desk scale.
"""

from .curves import (
    CurveDistanceResult,
    DimensionMismatchError,
    FreeSpaceDiagram,
    OpenCurveError,
    Polyline,
    closed_frechet,
    directed_maxmin,
    discrete_frechet,
    dtw,
    frechet_decision,
    frechet_distance,
    free_space_cell,
    free_space_diagram,
    free_space_svg,
    hausdorff,
    load_polyline_csv,
    shortest_distance,
)
from .divergences import (
    DiscreteLawD,
    KernelSpec,
    SinkhornConfig,
    bhattacharyya_coeff,
    bhattacharyya_distance,
    energy_distance,
    entropic_ot,
    hellinger,
    js,
    kl,
    mmd,
    sequence_metric,
    sinkhorn_divergence,
    total_variation,
)
from .gaussian import (
    GaussianLaw,
    SampleBatch,
    bures,
    estimate_gaussian,
    fid,
    gaussian_w2,
    gelbrich_bound,
    load_batch_csv,
    sym_sqrt,
)
from .laws import (
    CdfGraph,
    Coupling1D,
    Law1D,
    Moments,
    antimonotone_coupling,
    cantor_phi,
    cantor_quantile,
    cdf,
    cdf_graph,
    correlation,
    coupling_cost,
    frechet_1957_distance,
    frechet_hoeffding_bounds,
    from_samples,
    gini_index,
    ky_fan_levy,
    kolmogorov,
    levy_1950_def1,
    levy_1950_def2,
    load_law,
    moments,
    monotone_coupling,
    monotone_map,
    quantile,
    quantile_graph,
    same_reduced_distance,
    w1_cdf_area,
    w_infinity,
    wasserstein_p,
)
from .oracle import (
    OracleError,
    TransportPlan,
    assignment_bruteforce,
    exact_ot,
    rationalize,
    vertex_couplings,
)

__version__ = "0.1.0"

from .counting import (
    CloudCounter,
    DHProfile,
    detect_kinks,
    dh_profile,
    height_invariant,
    locate_focus_focus,
)
from .extrap import circle_distance, hbar_limit, loglog_slope, x_limit
from .jets import (
    FrJet,
    TaylorInvariant,
    recover_S01,
    recover_fr_gradient,
    recover_sigma1,
    twisting_and_privileged,
)
from .polygon import (
    PolygonEstimate,
    hausdorff,
    polygon_recover,
    reference_polygon_slice,
    reference_polygon_vertices,
    sample_polygon_region,
)
from .spacings import A1A2Sample, LabelledSpectrum, spacings_to_a1a2
from .taylor import (
    GMuExpansion,
    cross_derivative_shortcut,
    d_n_from_jet,
    expansion_along_ray,
    fit_log_expansion,
    g_mu_sample,
    mixed_dxdy_from_d1,
    s11_from_c1,
    s11_shortcut,
    solve_jet_order,
    solve_taylor_order,
    taylor_system_determinant,
)

__all__ = [name for name in dir() if not name.startswith("_")]

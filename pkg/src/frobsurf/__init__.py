"""Tangency curves of surfaces in P^3 over finite fields.

Exact finite-field and polynomial arithmetic, brute-force projective
enumeration, local charts and order sequences of space curves, point-count
bounds, and exhaustive surface-family scans.
"""

from .fields import FieldDesc, FieldElement, embed, extension_of, make_field
from .poly import Poly, build_h, divides, evaluate, parse_poly, partial_derivative, serialize
from .geometry import (
    CurveSpec,
    Line,
    ProjectivePoint,
    Surface,
    count_points,
    enumerate_lines,
    enumerate_points,
    estimate_degree,
    is_smooth_point,
    line_contained,
    lines_contained_in,
    tangent_plane,
)
from .localgeom import (
    LocalChart,
    TruncatedSeries,
    evaluate_on_chart,
    frobenius_series,
    hasse_derivative,
    intersection_multiplicity,
    osculating_plane,
    parametrize_curve,
)
from .orders import (
    OrderProfile,
    classify,
    frobenius_orders,
    generic_orders,
    is_degenerate,
    point_orders,
    profile_curve,
    q_deleted_order,
    validate_order_sequence,
)
from .frobsurface import (
    ContainmentVerdict,
    SurfaceReport,
    analyze_surface,
    bound_applicability,
    curve_in_phi,
    is_frobenius_classical,
    phi_curve,
    verify_bound,
)
from .bounds import (
    BoundReport,
    compare,
    figure_csv,
    harris_genus_bound,
    homma_bound,
    main_bound,
    serre_weil_bound,
    stohr_voloch_bound,
    weierstrass_divisor_degree,
)
from .scan import ScanConfig, enumerate_surfaces, export_records, quadric_is_irreducible, scan_conjecture

__version__ = "0.1.0"

"""Planar convex geometry: intrinsic metrics on unit spheres of arbitrary
norms, John ellipses, and executable verification of the distance bounds."""

from .geometry import (GeometryError, Ray, TangentData, angle_between,
                       circle_contact_points, perp, radial_project, ray_between,
                       tangent_points)
from .john import (Ellipse, JohnCertificate, JohnSolveError,
                   euclidean_from_ellipse, facet_normals, inner_john_ellipse,
                   verify_john)
from .metric import (ArcConvergenceError, DistanceResult, OffSphereError,
                     PolylinePath, angle_of, arc_length, distance_ratio,
                     euclidean_intrinsic_oracle, intrinsic_distance,
                     polyline_length)
from .norms import (CustomNormN, EllipseNorm, LpNorm, LpNormN, Norm, NormN,
                    PolygonNorm, SandwichConstants, ScaledNorm, SectionNorm,
                    SpecError, eval_norm, norm_from_json, norm_to_json,
                    normalize_norm, sandwich_constants, section_norm,
                    sphere_point, sphere_points, validate_norm)
from .report import CheckReport, merge_reports
from .verify import (NotNormalizedError, RatioSearchResult,
                     check_estimate_segment, check_euclidean_sphere,
                     check_lemma_angles, check_lemma_tangent_lines,
                     check_main_theorem, check_norm_decreasing,
                     check_schaffer_constant, check_theorem_k_bound,
                     john_normalized, random_ellipse_norm, random_lp_norm,
                     random_norm, random_polygon_norm, ratio_search)

__version__ = "0.1.0"

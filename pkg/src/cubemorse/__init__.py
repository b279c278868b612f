"""Hyperplane combinatorics, boundary metrics, and cross ratios for the
cube complexes of right-angled Artin groups, plus the explicit
counterexample constructions the library exists to certify."""

from .raag import (
    DefiningGraph,
    GroupElement,
    Letter,
    LetterSeq,
    Word,
    bfs_oracle_distance,
    distance,
    invert,
    is_geodesic,
    multiply,
    normal_form,
    parse_word,
)
from .walls import (
    Halfspace,
    Ultrafilter,
    Wall,
    ball,
    crosses,
    crossing_count,
    extend_path,
    gate,
    side,
    strongly_separated,
    wall_distance,
    wall_of_edge,
    walls_between,
    walls_separating_point_from_wall,
)
from .runpaths import (
    QuasiGeodesicReport,
    RunPath,
    certify_quasigeodesic_runs,
    min_pair_distance,
    path_pair_distance,
    walk_wall_count,
)
from .boundary import (
    BoundaryRay,
    ProductValue,
    SeparatedChain,
    bracket_product,
    cross_ratio_bfm,
    cross_ratio_cr,
    fellow_travel_radius,
    find_separated_chain,
    gromov_product,
    hyp_member,
    metric_d,
    ray_walls,
    refine_to_single_wall,
    validate_ray,
)
from .constructions import (
    BasepointRow,
    BetaReport,
    BetaSegment,
    ConfigError,
    ContractionReport,
    CrokeKleiner,
    DichotomyReport,
    Example23,
    Flat,
    GammaPath,
    LabeledGraph,
    Line,
    PreconditionFailed,
    QuasiGeodesicCertificate,
    SegmentCertificate,
    SeparationReport,
    SmallCancellationReport,
    SublinearFn,
    as_gauge,
    basepoint_experiment,
    build_beta,
    build_croke_kleiner,
    build_example23,
    build_gamma,
    certify_quasigeodesic,
    check_contracting,
    check_divergence_dichotomy,
    example23_relators,
    free_alphabet_graph,
    gamma_crosses,
    kappa,
    kappa_prime,
    runpath_prefix,
    small_cancellation_check,
    translate_wall,
    verify_separation,
)

__all__ = [
    "DefiningGraph",
    "GroupElement",
    "Letter",
    "LetterSeq",
    "Word",
    "bfs_oracle_distance",
    "distance",
    "invert",
    "is_geodesic",
    "multiply",
    "normal_form",
    "parse_word",
    "Halfspace",
    "Ultrafilter",
    "Wall",
    "ball",
    "crosses",
    "crossing_count",
    "extend_path",
    "gate",
    "side",
    "strongly_separated",
    "wall_distance",
    "wall_of_edge",
    "walls_between",
    "walls_separating_point_from_wall",
    "QuasiGeodesicReport",
    "RunPath",
    "certify_quasigeodesic_runs",
    "min_pair_distance",
    "path_pair_distance",
    "walk_wall_count",
    "BoundaryRay",
    "ProductValue",
    "SeparatedChain",
    "bracket_product",
    "cross_ratio_bfm",
    "cross_ratio_cr",
    "fellow_travel_radius",
    "find_separated_chain",
    "gromov_product",
    "hyp_member",
    "metric_d",
    "ray_walls",
    "refine_to_single_wall",
    "validate_ray",
    "BasepointRow",
    "BetaReport",
    "BetaSegment",
    "ConfigError",
    "ContractionReport",
    "CrokeKleiner",
    "DichotomyReport",
    "Example23",
    "Flat",
    "GammaPath",
    "LabeledGraph",
    "Line",
    "PreconditionFailed",
    "QuasiGeodesicCertificate",
    "SegmentCertificate",
    "SeparationReport",
    "SmallCancellationReport",
    "SublinearFn",
    "as_gauge",
    "basepoint_experiment",
    "build_beta",
    "build_croke_kleiner",
    "build_example23",
    "build_gamma",
    "certify_quasigeodesic",
    "check_contracting",
    "check_divergence_dichotomy",
    "example23_relators",
    "free_alphabet_graph",
    "gamma_crosses",
    "kappa",
    "kappa_prime",
    "runpath_prefix",
    "small_cancellation_check",
    "translate_wall",
    "verify_separation",
]

__version__ = "0.1.0"

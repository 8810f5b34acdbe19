"""Generalized transitive and distance closures of weighted graphs."""

from .algebra import (
    DualityReport,
    ExtendedOperatorPair,
    GeneratorMap,
    OperatorBundle,
    UnitOperatorPair,
    bundle_from_generator,
    check_duality,
    demorgan_deviation,
    derive_distance_pair,
    dombi_generator,
    dombi_tconorm,
    dombi_tnorm,
    get_bundle,
)
from .analysis import (
    DiffusionTrace,
    LambdaStudy,
    SemiMetricReport,
    asymmetry,
    cluster_directed,
    cv_proximity,
    diffusion_trace,
    distortion,
    find_lambda,
    lambda_study,
    semimetric_edges,
)
from .closure import (
    ClosureReport,
    PowerSequence,
    compose,
    diffusion_power,
    distance_closure,
    generalized_metric_closure,
    metric_closure,
    transitive_closure_alg1,
    transitive_closure_alg2,
    ultrametric_closure,
)
from .datasets import toy_network
from .errors import (
    DistclosureError,
    DomainError,
    NoRootError,
    NumericError,
    ParseError,
    ValidationError,
)
from .graphs import (
    CANONICAL_ISO,
    DistanceGraph,
    IsomorphismMap,
    ProximityGraph,
    from_correlation,
    to_distance,
    to_proximity,
)

__version__ = "0.1.0"

"""Evolution semigroups over reparametrized time.

Growth rates generate semiflows on the line; evolution families ride
them to form a generalized evolution semigroup on decaying functions.
The package certifies growth bounds and exponential dichotomies in
the rate's own distance, solves the inverse-generator problem through
the Green kernel, and verifies everything through integral identities
and residual probes.
"""

from . import envelope, probes, quadrature, rootfind
from .dichotomy import (
    CompatibilityReport,
    DichotomyCertificate,
    DichotomyViolation,
    InferredProjection,
    IntegralEquationReport,
    ProjectionField,
    certify_dichotomy,
    check_compatibility,
    green,
    infer_projection_heuristic,
    rescale_projection,
    solve_green,
    verify_integral_equation,
)
from .errors import (
    BracketFailure,
    ConfigError,
    DegenerateDensity,
    DomainExceeded,
    EmptyGrid,
    EvosemiError,
    HittingTimeUnbounded,
    HypothesisViolation,
    Inconclusive,
    IntegratorFailure,
    NegativeDensity,
    NotNonDegenerate,
    PipelineFailure,
    ProbeInconclusive,
    QuadratureBudgetExceeded,
    RangeExceeded,
    RankMismatch,
    SingularRestriction,
    TimeOrderViolation,
)
from .family import (
    CocycleReport,
    EvolutionFamily,
    GrowthBound,
    GrowthBoundViolation,
    check_cocycle,
    continuity_modulus,
    fit_growth_bound,
    ordered_pairs,
    random_triples,
    rescale_family,
    transition,
)
from .growth import (
    EllProbe,
    GrowthRate,
    classify_ell,
    from_rate_density,
    from_table,
    identity,
    neg_exp,
    odd_power,
    polynomial_log,
)
from .semiflow import (
    AxiomReport,
    OmegaLimitProbe,
    OmegaReport,
    RealSemiflow,
    SemiflowClassification,
    apply,
    check_axioms,
    classify,
    hitting_time,
    omega,
    omega_limit_probe,
    recover_mu,
)
from .semigroup import (
    ContinuityReport,
    GeneratorSweep,
    GridFunction,
    SemigroupContext,
    apply_S_classical,
    apply_T,
    apply_generator_fd,
    check_semigroup_law,
    check_similarity,
    check_strong_continuity,
    generator_sweep,
    rescale_F,
    rescale_Finv,
    richardson_pair,
)

__version__ = "0.1.0"

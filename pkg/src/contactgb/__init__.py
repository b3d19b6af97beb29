"""Groebner-basis density approximations and Monte Carlo simulation for the
one-dimensional contact process."""

from .polyring import (
    LexOrder,
    Monomial,
    NotDivisibleError,
    ParseError,
    Polynomial,
    RATE,
    exact_divide,
    format_polynomial,
    parse,
    reduce,
)
from .identities import (
    ConfigurationPattern,
    EmptyPatternError,
    VariableRegistry,
    canonicalize,
    correlation_identity,
    identities_for,
    identity_system,
)
from .closures import (
    ClosureScheme,
    MEAN_FIELD_1,
    NAIVE_2PRIME,
    PAIR_2,
    THIRD_3,
    build_custom_ideal,
    build_ideal,
    closure_polynomials,
    custom_scheme,
)
from .groebner import (
    BasisSizeExceededError,
    EmptyIdealError,
    GroebnerBasis,
    buchberger,
    is_member,
    normalize_basis,
    s_polynomial,
)
from .solver import (
    AmbiguousRootError,
    ApproximationResult,
    DegenerateSystemError,
    MultipleEliminationElementsError,
    NoEliminationElementError,
    NoPhysicalRootError,
    SITE,
    SolverError,
    approximate,
    branch_value,
    critical_bound,
    density,
    elimination_polynomial,
    strip_trivial,
)
from .simulator import (
    LatticeState,
    ProcessExtinct,
    SimConfig,
    SimulationEstimate,
    density_estimate,
    duality_check,
    extinction_probability,
    next_event,
    transition_weights,
)

__version__ = "0.1.0"

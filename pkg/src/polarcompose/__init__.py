"""polarcompose: forms over finite-field towers, composed down by trace
functionals, with closed-form classification tables checked against
exhaustive oracles."""

from .gf import FiniteField, SquareClass, canonical_field, field_create
from .forms import (
    BudgetExceededError,
    FormType,
    OracleInconsistencyError,
    OrthogonalClass,
    QuadraticForm,
    SesquilinearForm,
    classify_reflexive,
    count_singular,
    decompose_hyperbolic_germ,
    discriminant_class,
    is_degenerate_quadratic,
    is_isometry,
    orthogonal_class,
    orthogonal_report,
    polar_form,
    radical,
    witt_index,
)
from .compose import (
    LinearFunctional,
    RestrictionContext,
    compose_quadratic,
    compose_sesquilinear,
    embed_isometry,
    functional_to_alpha,
    lift_vector,
    restrict_vector,
)
from .predict import (
    BaseKind,
    CompositionDescriptor,
    LSigmaRelation,
    Prediction,
    lsigma_relation,
    predict,
    predict_degeneracy,
    predict_orthogonal_class,
    predict_sesquilinear,
    predict_type,
)

__version__ = "0.1.0"

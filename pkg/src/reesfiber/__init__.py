"""Candidate defining ideals of Rees rings and special fiber rings of
linearly presented height three Gorenstein ideals, verified against
independent Groebner-basis ground truth on random instances."""

from .blowup import (
    AlternatingPresentation,
    BlowupInstance,
    DegenerateInstance,
    InvariantViolation,
    ValidationError,
    be_generators,
    bordered_matrix,
    build_instance,
    candidates,
    content_generators,
    content_ideal,
    f_vector,
    instance_from_presentation,
    instance_to_json,
    jacobian_dual,
    presentation_from_json,
    random_presentation,
    symmetric_ideal,
)
from .groebner import (
    Budget,
    BudgetExceeded,
    HilbertData,
    IdealHandle,
    NonHomogeneous,
    assert_groebner,
    dim_height,
    eliminate,
    groebner_basis,
    hilbert,
    ideal,
    ideal_equal,
    ideal_quotient,
    intersect,
    normal_form,
    radical_membership,
    saturate,
    set_check_mode,
)
# the Pfaffian function itself lives at reesfiber.pfaffian.pfaffian;
# importing it here would shadow the submodule
from .pfaffian import (
    DegenerateEven,
    NotAlternating,
    PolyMatrix,
    delta_J,
    determinant,
    maximal_minors,
    minors,
    signed_submax_pfaffians,
)
from .polyring import (
    GREVLEX,
    LEX,
    Elim,
    Grevlex,
    Lex,
    NotDivisible,
    ParseError,
    Polynomial,
    RingMismatch,
    bidegree_of,
    content_in_T,
    exact_div,
    order_cmp,
    ring,
)
from .verify import (
    AllTrialsDegenerate,
    CheckRecord,
    VerificationReport,
    annihilator_exponent_bound,
    expected_multiplicity,
    fiber_ideal,
    fiber_series_closed_form,
    multiplicity_by_monomial_count,
    rees_by_elimination,
    run_checks,
)

__version__ = "0.1.0"

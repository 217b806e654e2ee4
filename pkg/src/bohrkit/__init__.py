"""bohrkit: weighted Bohr radii, coefficient sums, and desk-scale verification.

The toolkit locates the radius R of six weighted coefficient inequalities
as the minimal positive root of the matching radius equation, evaluates
the weighted sums for analytic, harmonic-pair, and subordination models,
and verifies both the inequalities (on grids below R) and their sharpness
(via extremal families above R).
"""

__version__ = "0.1.0"

from .errors import (
    BohrKitError,
    ContractError,
    DomainError,
    NonConvergent,
    NoRootInRange,
    NoWitness,
)
from .harmonic import (
    HarmonicPair,
    LemmaCCheck,
    construct_pair,
    harmonic_bohr_sum,
    lemma_c_check,
    unit_from_turns,
)
from .radius import (
    Equation,
    RadiusProblem,
    RadiusResult,
    closed_form_or_none,
    closed_form_radius,
    solve_radius,
)
from .series import (
    ClassCheck,
    ClassTag,
    CoefficientSeries,
    ExtremalFamily,
    FamilyKind,
    SeriesTail,
    SumResult,
    bohr_sum,
    bprime_extremal,
    compose,
    disk_automorphism,
    expand_extremal,
    from_json,
    half_plane,
    is_in_class,
    koebe,
    sample_bprime_coeffs,
    schur_sample,
    schur_sample_batch,
    schwarz_sample,
    schwarz_sample_batch,
    to_json,
)
from .subordination import (
    DomainGeometry,
    DomainModel,
    boundary_distance,
    coefficient_bound_check,
    harmonic_subordination_sum,
    model_series,
    subordinate_to_model,
    subordination_bohr_sum,
)
from .verify import (
    Experiment,
    VerificationReport,
    classify,
    inequality_exit_code,
    run_inequality,
    run_sharpness,
)
from .weights import (
    WeightKind,
    WeightSequence,
    from_config,
    phi_sum,
    power_weights,
    psi_sum,
    scaled_power,
    tabulated,
)

__all__ = [name for name in dir() if not name.startswith("_")]

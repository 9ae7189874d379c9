"""Exact point counts on hypersurfaces and their group quotients over finite fields."""
from .congruence import ord_q, verify_congruence
from .errors import BudgetError, ConsistencyError, MirrorCountError, TowerTooSmallError, ValidationError
from .ff import FieldElement, FieldTower, build_tower, kummer_solve
from .groups import (
    GroupAction,
    GroupElement,
    burnside_quotient_count,
    corollary_group,
    lambda_twisted,
    orbit_oracle,
    orbit_oracle_count,
    permutation_group,
    trivial_group,
)
from .hodge import hodge_numbers_hypersurface, hodge_polygon, newton_above_hodge
from .records import CountRecord, CountSequence
from .varieties import (
    Hypersurface,
    ProjectiveSpace,
    count_points,
    diagonal,
    dwork,
    is_smooth_dwork,
    jacobian_singular_oracle,
)
from .zeta import check_root_divisibility, curve_sanity, fit_curve, fit_ratio, newton_polygon

__version__ = "0.1.0"

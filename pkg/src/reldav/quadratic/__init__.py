"""Orders Z[p^a alpha] in quadratic fields: class groups, units and elasticity."""

from .arith import L_function, QuadraticOrderSpec, Splitting, splitting_type
from .engine import (
    TauLadder,
    elasticity_Rn,
    elasticity_Rn_cyclic,
    infer_cyclic,
    monotonicity_check,
    quadratic_pipeline,
    supplied_ladder,
)
from .forms import BQForm, class_group_imaginary, reduce_form
from .units import fundamental_unit, unit_index

"""Finite quantum groups by structure constants.

Represents finite quantum groups (finite-dimensional Hopf *-algebras with
a faithful invariant Haar state), finds and classifies their idempotent
states, builds the associated invariant subalgebras, conditional
expectations, quantum subgroup quotients and the idempotent lattice.
"""

from .cayley import (
    CayleyTable,
    all_subgroups,
    builtin_group,
    builtin_group_names,
    cyclic_group,
    dihedral_group,
    direct_product,
    is_normal_subgroup,
    is_subgroup,
    klein_four_group,
    quaternion_group,
    symmetric_group,
)
from .core import (
    FiniteQuantumGroup,
    GnsData,
    InternalConsistencyError,
    MultUnitary,
    QuantumGroupError,
    StructuralError,
    ValidationReport,
    dual,
    function_algebra,
    gns,
    group_algebra,
    intertwiner_defect,
    multiplicative_unitary,
    validate,
)
from .states import (
    SolveConfig,
    State,
    cesaro_walk,
    convolve,
    epsilon_state,
    haar_state,
    is_idempotent,
    is_state,
    left_slice,
    recover_slice,
    right_slice,
    solve_idempotents,
    subgroup_state_fn,
    subgroup_state_ga,
)

__version__ = "0.1.0"

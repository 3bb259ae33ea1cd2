"""Quantum one-time pad laboratory.

A bipartite key state rho_AB shared by Alice and Bob can carry secret
messages at a rate given by its quantum mutual information.  This package
computes that capacity, builds the marginal-preserving scrambling ensemble
on Alice's side that attains it, and checks the surrounding bounds.
"""

from .bounds import (
    AsymptoticSchedule,
    BoundCheck,
    CapacityReport,
    InsecureBoundResult,
    apply_local_channel,
    asymptotic_schedule,
    capacity_report,
    count_tensor_eigenvalues,
    insecure_bound_check,
)
from .classical import JointPMF, classical_capacity_report, classical_mutual_information, embed_quantum
from .functionals import (
    StateEnsemble,
    average_state,
    coherent_information,
    holevo_chi,
    mutual_information,
    von_neumann_entropy,
)
from .matcore import hermitian_eig, is_unitary, partial_trace, tensor
from .scramble import (
    BlockStructure,
    ScramblingEnsemble,
    averaged_state,
    averaged_state_closed_form,
    block_decompose,
    build_ensemble,
    ensemble_chi,
    enumerate_average,
    verify_privacy,
)
from .states import (
    BipartiteState,
    DensityOperator,
    InvalidStateError,
    bell_state,
    conditional_blocks,
    marginal,
    trace_of_blocks_check,
)

__version__ = "0.1.0"

"""Fields, loops, clusters and currents on finite weighted graphs.

Exact samplers for the Gaussian field, the intensity-1/2 loop ensemble, and
the FK-Ising / random-current couplings; self-interacting inverse engines
that unwind a field into the walk, loops, or current that produced it; and
seeded statistical suites checking every identity against independent
oracles.
"""

from .couplings import (
    DiscreteDistribution,
    ForwardCoupling,
    current_exact,
    current_fk_forward,
    fk_exact,
    fk_from_field,
    forward_rk_coupling,
    interaction_weights,
    ising_exact,
    lupu_lift_loopsoup,
    sign_sample_on_clusters,
)
from .gff import (
    ConditionSpec,
    FieldReal,
    GffMoments,
    condition,
    conditional_moments,
    field_decompose,
    pin,
    sample_gff,
)
from .graph import (
    ClusterPartition,
    Edge,
    Graph,
    GraphError,
    build_graph,
    clusters,
    component_subgraph,
    delete_vertices,
    dirichlet_form,
    green_function,
    harmonic_killing_transform,
    load_graph,
    precision_matrix,
    save_graph,
)
from .inverse import (
    DiscreteInverseRun,
    EnlargedRun,
    InverseRun,
    InverseState,
    forward_enlarged,
    init_inverse_from_counts,
    init_inverse_from_field,
    init_inverse_from_field_and_config,
    invert_current_from_fk,
    invert_loop_soup,
    reconstruct_initial_field,
    run_inverse,
    run_inverse_discrete,
    run_inverse_jump_rates,
)
from .jump import (
    Step,
    Trajectory,
    excursion_split,
    run_conditioned_to_return,
    run_to_inverse_local_time,
)
from .loops import (
    LoopSoupSample,
    PDPartition,
    fields,
    sample_loop_soup,
    sample_loops_at_vertex,
    sample_pd_partition,
)
from .stats import SuiteReport, make_rng
from .suites import ACCEPTANCE, available, run_suite

__version__ = "0.1.0"

__all__ = [
    "ACCEPTANCE",
    "ClusterPartition",
    "ConditionSpec",
    "DiscreteDistribution",
    "DiscreteInverseRun",
    "Edge",
    "EnlargedRun",
    "FieldReal",
    "ForwardCoupling",
    "GffMoments",
    "Graph",
    "GraphError",
    "InverseRun",
    "InverseState",
    "LoopSoupSample",
    "PDPartition",
    "Step",
    "SuiteReport",
    "Trajectory",
    "available",
    "build_graph",
    "clusters",
    "component_subgraph",
    "condition",
    "conditional_moments",
    "current_exact",
    "current_fk_forward",
    "delete_vertices",
    "dirichlet_form",
    "excursion_split",
    "field_decompose",
    "fields",
    "fk_exact",
    "fk_from_field",
    "forward_enlarged",
    "forward_rk_coupling",
    "green_function",
    "harmonic_killing_transform",
    "init_inverse_from_counts",
    "init_inverse_from_field",
    "init_inverse_from_field_and_config",
    "interaction_weights",
    "invert_current_from_fk",
    "invert_loop_soup",
    "ising_exact",
    "load_graph",
    "lupu_lift_loopsoup",
    "make_rng",
    "pin",
    "precision_matrix",
    "reconstruct_initial_field",
    "run_conditioned_to_return",
    "run_inverse",
    "run_inverse_discrete",
    "run_inverse_jump_rates",
    "run_suite",
    "run_to_inverse_local_time",
    "sample_gff",
    "sample_loop_soup",
    "sample_loops_at_vertex",
    "sample_pd_partition",
    "save_graph",
    "sign_sample_on_clusters",
]

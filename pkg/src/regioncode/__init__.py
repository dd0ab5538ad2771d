"""Two-session simple multicast network coding on acyclic networks:
solvability in linear time via region decomposition, linear code
construction, region-graph minimization, and tight encoding-complexity
bounds."""

from .codes import (
    NetworkSolution,
    RegionCode,
    VerificationReport,
    brute_force_solve,
    construct_code,
    expand_solution,
    simulate_link_values,
    solution_from_document,
    solution_to_document,
    solution_to_json,
    verify_solution,
)
from .gf import (
    ALPHA1,
    ALPHA2,
    FieldSpec,
    Kernel,
    field_size_bound,
    in_span,
    make_field,
    projective_points,
    smallest_supported_order,
)
from .instances import (
    GenParams,
    RegionGraphSpec,
    SpecVertex,
    gen_random,
    gen_random_spec,
    gen_tight_encoding,
    gen_tight_field,
    realization_matches,
    realize_network,
    spec_from_document,
    validate_spec,
)
from .labeling import (
    LabeledRegionGraph,
    RegionKind,
    RegionRoles,
    classify,
    classify_network,
    feasibility,
    label,
    solvable,
)
from .minimize import (
    AssociatedGraph,
    AuditItem,
    Coloring,
    MinimalityReport,
    associated_graph,
    bounds_report,
    check_minimal,
    chromatic_number,
    code_from_coloring,
    minimize,
    structural_audit,
)
from .model import (
    Link,
    Network,
    build_network,
    index_links,
    load_network,
    network_from_document,
    normalize_sinks,
    random_link_order,
)
from .regions import (
    Region,
    RegionDecomposition,
    RegionGraph,
    basic_decomposition,
    contract,
    line_graph,
    region_graph,
    trivial_decomposition,
    validate_basic,
)

__version__ = "0.1.0"

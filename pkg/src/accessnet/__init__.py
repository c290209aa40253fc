"""Low-cost, energy-aware design of tree-topology access networks."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    AccessSwitch,
    CableRateTable,
    CoreSwitch,
    DistributionSwitch,
    Link,
    NetworkInstance,
    Profile,
    User,
    link_cost_from_length,
    load_instance,
    validate_instance,
)
from .optimizer import (  # noqa: E402
    DesignSolution,
    brute_force,
    build_ilp,
    check_solution,
    solve_exact,
)
from .heuristic import heuristic_design, partition_by_building, wire_overhead  # noqa: E402

__all__ = [
    "AccessSwitch",
    "CableRateTable",
    "CoreSwitch",
    "DesignSolution",
    "DistributionSwitch",
    "Link",
    "NetworkInstance",
    "Profile",
    "User",
    "brute_force",
    "build_ilp",
    "check_solution",
    "heuristic_design",
    "link_cost_from_length",
    "load_instance",
    "partition_by_building",
    "solve_exact",
    "validate_instance",
    "wire_overhead",
]

"""Information-theoretic analysis of logic gates, netlists, and decision diagrams."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    ParseError,
    SemanticError,
    ToolError,
    VitalityUndefinedError,
)
from .truthtable import TruthTable, parse_pla, to_pla
from .metrics import (
    InputDistribution,
    conditional_entropy,
    entropy,
    function_entropy,
    input_entropy,
    mutual_information,
)
from .gates import (
    Gate,
    GateLibrary,
    GateReport,
    GeometrySpec,
    default_library,
    gate_report,
    geometry_capacity,
    library_max_measure,
    load_library_json,
)
from .netlist import (
    FlowReport,
    Netlist,
    PotentialResult,
    enumerate_implementations,
    flow_report,
    function_of,
    information_potential,
    logical_work,
    network_loss,
    parse_blif,
    simulate_exact,
    vitality,
)
from .diagram import (
    BuildTrace,
    DecisionDiagram,
    Frontier,
    FrontierEntry,
    build_entropy_dd,
    dd_to_truth_table,
    exhaustive_best_ordering,
    partial_conditional_entropy,
    reduce,
    to_dot,
    trace_to_csv,
)

"""Minimum-total-delay broadcast planning for clients with side information.

Workflow: parse or build a DmsiInstance, take optimal_assignment /
closed_form_delay for the plan and its cost, construct_code for a concrete
linear code realizing it, and keep the independent checks close by
(netflow.is_solvable, oracle.brute_force_optimum) when results matter.
"""

from .assignment import (
    AssignmentMatrix,
    DelayReport,
    TransformStep,
    TransformTrace,
    closed_form_delay,
    is_feasible,
    optimal_assignment,
    packet_delay,
    reduce_to_exact_weights,
    total_delay,
    transform_to_optimal,
)
from .coding import (
    ClientView,
    CodeConstructionError,
    CodingMatrix,
    client_view,
    construct_code,
    decodability_check,
    decode,
    default_field_degree,
    encode,
    matrix_rank,
)
from .gf import Field, FieldElement
from .instance import (
    ClientSpec,
    DmsiInstance,
    InstanceError,
    format_rational,
    instance_document,
    parse_instance,
    parse_rational,
    serialize_instance,
)
from .netflow import FlowNetwork, build_network, is_solvable, max_flow, to_dot
from .oracle import (
    BudgetExceededError,
    OracleResult,
    brute_force_optimum,
    check_theorem,
    search_space_size,
)

__all__ = [
    "AssignmentMatrix",
    "BudgetExceededError",
    "ClientSpec",
    "ClientView",
    "CodeConstructionError",
    "CodingMatrix",
    "DelayReport",
    "DmsiInstance",
    "Field",
    "FieldElement",
    "FlowNetwork",
    "InstanceError",
    "OracleResult",
    "TransformStep",
    "TransformTrace",
    "brute_force_optimum",
    "build_network",
    "check_theorem",
    "client_view",
    "closed_form_delay",
    "construct_code",
    "decodability_check",
    "decode",
    "default_field_degree",
    "encode",
    "format_rational",
    "instance_document",
    "is_feasible",
    "is_solvable",
    "matrix_rank",
    "max_flow",
    "optimal_assignment",
    "packet_delay",
    "parse_instance",
    "parse_rational",
    "reduce_to_exact_weights",
    "search_space_size",
    "serialize_instance",
    "to_dot",
    "total_delay",
    "transform_to_optimal",
]

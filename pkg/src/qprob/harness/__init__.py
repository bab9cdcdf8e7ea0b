"""Generators, persistence, the suite runner and the command line."""

from .generators import (
    KINDS,
    REMARK_MATRICES,
    GeneratorSpec,
    generate,
    haar_unitary,
    lambda_sweep,
    random_hermitian,
    remark_example,
    symmetric_spectrum,
    tensor_symmetric_family,
    trace_quantile,
)
from .io import (
    instance_from_dict,
    instance_to_dict,
    load_instance,
    load_report,
    operator_from_dict,
    operator_to_dict,
    save_instance,
    save_report,
)
from .suite import PlanEntry, SuiteReport, default_plan, run_suite, run_verifier, write_suite

__all__ = [
    "KINDS",
    "REMARK_MATRICES",
    "GeneratorSpec",
    "PlanEntry",
    "SuiteReport",
    "default_plan",
    "generate",
    "haar_unitary",
    "instance_from_dict",
    "instance_to_dict",
    "lambda_sweep",
    "load_instance",
    "load_report",
    "operator_from_dict",
    "operator_to_dict",
    "random_hermitian",
    "remark_example",
    "run_suite",
    "run_verifier",
    "save_instance",
    "save_report",
    "symmetric_spectrum",
    "tensor_symmetric_family",
    "trace_quantile",
    "write_suite",
]

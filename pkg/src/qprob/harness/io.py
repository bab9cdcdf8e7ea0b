"""JSON persistence for operators, instances and reports.

Operator schema::

    {"dim": d, "entries": [[[re, im], ...], ...]}

A sequence of summands is ``{"operators": [<operator>, ...]}`` (optionally
with ``"factor_dims"`` when it came from a tensor family).  Classical
instances use ``{"variables": [{"outcomes": [[value, num, den], ...]}, ...]}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..classical_reduction import ClassicalInstance
from ..independence import TensorFamily
from ..maximal_inequalities import SumSequence
from ..operator_core import HermitianOperator, make_hermitian
from ..report import InequalityReport


def operator_to_dict(x: HermitianOperator) -> dict:
    m = x.matrix
    return {
        "dim": x.dim,
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def operator_from_dict(d: dict, tol_herm: float = 1e-9) -> HermitianOperator:
    entries = np.asarray(d["entries"], dtype=float)
    if entries.ndim != 3 or entries.shape[-1] != 2:
        raise ValueError("operator entries must be a d x d array of [re, im] pairs")
    m = entries[..., 0] + 1j * entries[..., 1]
    if "dim" in d and m.shape[0] != int(d["dim"]):
        raise ValueError(f"declared dim {d['dim']} does not match entries of size {m.shape[0]}")
    return make_hermitian(m, tol_herm)


def instance_to_dict(inst) -> dict:
    if isinstance(inst, HermitianOperator):
        return operator_to_dict(inst)
    if isinstance(inst, ClassicalInstance):
        return inst.to_dict()
    if isinstance(inst, TensorFamily):
        return {
            "factor_dims": list(inst.factor_dims),
            "factors": [operator_to_dict(f) for f in inst.factors],
            "operators": [operator_to_dict(m) for m in inst.members],
        }
    if isinstance(inst, SumSequence):
        return {"operators": [operator_to_dict(x) for x in inst.xs]}
    raise TypeError(f"cannot serialize instance of type {type(inst).__name__}")


def instance_from_dict(d: dict, tol_herm: float = 1e-9):
    """Inverse of :func:`instance_to_dict`; tensor families are rebuilt from their factors."""
    if "variables" in d:
        return ClassicalInstance.from_dict(d)
    if "factors" in d:
        from ..independence import tensor_family

        factors = [operator_from_dict(f, tol_herm) for f in d["factors"]]
        return tensor_family(factors, dim_cap=max(256, int(np.prod(d["factor_dims"]))))
    if "operators" in d:
        return SumSequence.from_operators([operator_from_dict(o, tol_herm) for o in d["operators"]])
    if "entries" in d:
        return operator_from_dict(d, tol_herm)
    raise ValueError("unrecognized instance file: expected 'entries', 'operators' or 'variables'")


def dumps(obj: dict) -> str:
    """Stable text form: insertion-ordered keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def save_json(obj: dict, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())


def save_instance(inst, path) -> Path:
    return save_json(instance_to_dict(inst), path)


def load_instance(path, tol_herm: float = 1e-9):
    return instance_from_dict(load_json(path), tol_herm)


def save_report(rep: InequalityReport, path) -> Path:
    return save_json(rep.to_dict(), path)


def load_report(path) -> InequalityReport:
    return InequalityReport.from_dict(load_json(path))

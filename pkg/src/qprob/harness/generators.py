"""Seeded instance generators.

Every generator draws from ``numpy.random.default_rng(seed)`` only, so the
same :class:`GeneratorSpec` always yields bitwise identical operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..classical_reduction import ClassicalInstance, DiscreteVariable
from ..errors import DimOverflow
from ..independence import TensorFamily, tensor_family
from ..maximal_inequalities import SumSequence
from ..operator_core import HermitianOperator, make_hermitian
from ..trace_measure import distribution

KINDS = (
    "random_hermitian",
    "symmetric_spectrum",
    "tensor_symmetric_family",
    "diagonal_classical",
    "remark_example",
)


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate.

    ``dims`` is the matrix size for single operators, the factor dimensions
    for tensor families, and the uniformization denominator of each variable
    for classical instances.  ``options`` carries kind-specific switches
    (``symmetric`` for classical instances).
    """

    kind: str
    dims: tuple = (2,)
    n_vars: int = 1
    seed: int = 0
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if any(d < 1 for d in self.dims):
            raise ValueError("dims must be positive")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "dims": list(self.dims),
            "n_vars": self.n_vars,
            "seed": self.seed,
            "options": dict(self.options),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        return cls(d["kind"], tuple(d.get("dims", (2,))), int(d.get("n_vars", 1)), int(d.get("seed", 0)), dict(d.get("options", {})))


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian with the phases of ``diag(R)`` removed."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_hermitian(d: int, rng: np.random.Generator, scale: float = 1.0) -> HermitianOperator:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return make_hermitian(scale * (g + g.conj().T) / 2, tol_herm=1.0)


def symmetric_spectrum(d: int, rng: np.random.Generator, low: float = 0.25, high: float = 2.0) -> HermitianOperator:
    """``u diag(±mu_1, ..., ±mu_k[, 0]) u*`` for a Haar unitary ``u``.

    The eigenvalues are set exactly, so the spectral distribution is mirror
    symmetric by construction; the eigen-data is attached to the operator.
    """
    mus = rng.uniform(low, high, size=d // 2)
    vals = np.concatenate([-mus, mus, np.zeros(d % 2)])
    vals.sort()
    u = haar_unitary(d, rng)
    m = (u * vals) @ u.conj().T
    m = (m + m.conj().T) / 2
    return HermitianOperator(m, _eig=(vals, u))


def tensor_symmetric_family(dims, rng: np.random.Generator, dim_cap: int = 256) -> TensorFamily:
    total = math.prod(dims)
    if total > dim_cap:
        raise DimOverflow(f"product dimension {total} exceeds cap {dim_cap}")
    return tensor_family([symmetric_spectrum(d, rng) for d in dims], dim_cap)


def _composition(total: int, parts: int, rng) -> list[int]:
    """Random split of ``total`` into ``parts`` positive integers."""
    cuts = np.sort(rng.choice(np.arange(1, total), size=parts - 1, replace=False)) if parts > 1 else []
    bounds = [0, *map(int, cuts), total]
    return [b - a for a, b in zip(bounds[:-1], bounds[1:])]


def random_discrete_variable(den: int, rng, symmetric: bool = False) -> DiscreteVariable:
    """Variable with probabilities in ``(1/den) Z`` and half-integer values.

    Half-integers keep every partial sum exactly representable, so strict and
    non-strict thresholds agree between floating point and exact arithmetic.
    """
    if symmetric:
        pairs = den // 2
        n_atoms = int(rng.integers(1, min(pairs, 4) + 1)) if pairs else 0
        masses = _composition(pairs, n_atoms, rng) if n_atoms else []
        mags = rng.choice(np.arange(1, 9), size=n_atoms, replace=False) / 2 if n_atoms else []
        outs = []
        for m, v in zip(masses, mags):
            outs.append((Fraction(float(v)), Fraction(m, den)))
            outs.append((Fraction(-float(v)), Fraction(m, den)))
        if den % 2:
            outs.append((Fraction(0), Fraction(1, den)))
        return DiscreteVariable(tuple(outs))
    n_atoms = int(rng.integers(1, min(den, 4) + 1))
    masses = _composition(den, n_atoms, rng)
    values = rng.choice(np.arange(-6, 7), size=n_atoms, replace=False) / 2
    return DiscreteVariable(tuple((Fraction(float(v)), Fraction(m, den)) for v, m in zip(values, masses)))


def diagonal_classical(dims, rng, symmetric: bool = False) -> ClassicalInstance:
    return ClassicalInstance(tuple(random_discrete_variable(d, rng, symmetric) for d in dims))


REMARK_MATRICES = (
    [[1, 1 - 1j, 0], [1 + 1j, 3, 1j], [0, -1j, -1]],
    [[0, -1, -1j], [-1, 1, 2j], [1j, -2j, 3]],
    [[3, 2j, 1j + 1], [-2j, -2, 1], [1 - 1j, 1, 2]],
    [[-2, -1j, -1], [1j, 0, -3j - 1], [-1, -1 + 3j, -2]],
)


def remark_example() -> SumSequence:
    """Four non-commuting 3x3 summands whose partial sums all commute with ``s_4 = 2 * 1``."""
    return SumSequence.from_operators([make_hermitian(np.array(m, dtype=complex)) for m in REMARK_MATRICES])


def generate(spec: GeneratorSpec, dim_cap: int = 256):
    """Instance for ``spec``: an operator, a :class:`TensorFamily`, a
    :class:`ClassicalInstance` or a :class:`SumSequence`."""
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "random_hermitian":
        d = spec.dims[0]
        if d > dim_cap:
            raise DimOverflow(f"dimension {d} exceeds cap {dim_cap}")
        return random_hermitian(d, rng, float(spec.options.get("scale", 1.0)))
    if spec.kind == "symmetric_spectrum":
        d = spec.dims[0]
        if d > dim_cap:
            raise DimOverflow(f"dimension {d} exceeds cap {dim_cap}")
        return symmetric_spectrum(d, rng)
    if spec.kind == "tensor_symmetric_family":
        dims = spec.dims if len(spec.dims) > 1 or spec.n_vars == 1 else spec.dims * spec.n_vars
        return tensor_symmetric_family(dims, rng, dim_cap)
    if spec.kind == "diagonal_classical":
        dims = spec.dims if len(spec.dims) > 1 or spec.n_vars == 1 else spec.dims * spec.n_vars
        total = math.prod(dims)
        if total > max(dim_cap, 4096):
            raise DimOverflow(f"embedding dimension {total} exceeds cap")
        return diagonal_classical(dims, rng, bool(spec.options.get("symmetric", False)))
    return remark_example()


def trace_quantile(x, q: float) -> float:
    """Smallest atom ``v`` with ``tau(E((-inf, v])) >= q``."""
    dist = distribution(x)
    acc = 0
    for (value, _), count in zip(dist.atoms, dist.counts):
        acc += count
        if acc >= q * dist.dim:
            return value
    return dist.atoms[-1][0]


def lambda_sweep(x, quantiles=(0.25, 0.5, 0.75), above: float = 1.0) -> list[float]:
    """Thresholds for one instance: trace quantiles of ``x`` plus one above its spectrum.

    Non-positive values are dropped and duplicates removed; the value above
    the spectrum exercises the all-tails-zero (and vacuous) paths.
    """
    lams = [trace_quantile(x, q) for q in quantiles]
    top = float(np.max(np.abs(distribution(x).values)))
    lams.append(top + above)
    out = []
    for lam in lams:
        lam = float(lam)
        if lam > 0 and all(abs(lam - o) > 1e-12 for o in out):
            out.append(lam)
    return out

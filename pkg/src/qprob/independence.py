"""Tensor families, the doubling ``M -> M (x) M``, and independence tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import SuiteConfig
from .errors import DimOverflow, EmptyFamily, NotSymmetric
from .operator_core import (
    HermitianOperator,
    make_hermitian,
    normalized_trace,
    spectral_resolution,
    tensor_embed,
    trace_state,
)
from .report import Bound, HypothesisCheck, InequalityReport
from .trace_measure import distribution, identically_distributed, is_symmetric

DIM_CAP = 256


def _op(x) -> HermitianOperator:
    return x if isinstance(x, HermitianOperator) else make_hermitian(x)


@dataclass(frozen=True, eq=False)
class TensorFamily:
    """Operators ``x_k`` placed on distinct slots of ``M_{d_1} (x) ... (x) M_{d_n}``."""

    factor_dims: tuple
    members: tuple
    factors: tuple
    product_dim: int

    def __len__(self):
        return len(self.members)

    def partial_sums(self) -> list[HermitianOperator]:
        sums, acc = [], None
        for m in self.members:
            acc = m if acc is None else acc + m
            sums.append(acc)
        return sums


def tensor_family(xs: Sequence, dim_cap: int = DIM_CAP) -> TensorFamily:
    xs = [_op(x) for x in xs]
    if not xs:
        raise EmptyFamily("tensor_family needs at least one operator")
    dims = tuple(x.dim for x in xs)
    total = int(np.prod(dims, dtype=np.int64))
    if total > dim_cap:
        raise DimOverflow(f"product dimension {total} exceeds cap {dim_cap}")
    members = tuple(tensor_embed(x, dims, k) for k, x in enumerate(xs))
    return TensorFamily(dims, members, tuple(xs), total)


@dataclass(frozen=True, eq=False)
class DoubledVariable:
    """``bar_x = x (x) 1``, ``bar_x_prime = 1 (x) x`` and ``hat_x = bar_x - bar_x_prime``."""

    x: HermitianOperator
    bar_x: HermitianOperator
    bar_x_prime: HermitianOperator
    hat_x: HermitianOperator

    @property
    def dim(self) -> int:
        return self.bar_x.dim

    def lift(self, y) -> HermitianOperator:
        """Place another operator of the base space in the first factor."""
        return tensor_embed(_op(y), (self.x.dim, self.x.dim), 0)

    def lift_prime(self, y) -> HermitianOperator:
        return tensor_embed(_op(y), (self.x.dim, self.x.dim), 1)


def double(x, dim_cap: int = DIM_CAP) -> DoubledVariable:
    """Symmetrize by doubling the space.

    The eigenvectors of ``hat_x`` are ``v_i (x) v_j`` with eigenvalues
    ``lambda_i - lambda_j``; they are attached directly instead of being
    recomputed.
    """
    x = _op(x)
    d = x.dim
    if d * d > dim_cap:
        raise DimOverflow(f"doubled dimension {d * d} exceeds cap {dim_cap}")
    bar = tensor_embed(x, (d, d), 0)
    bar_p = tensor_embed(x, (d, d), 1)
    w, v = x._eig
    vals = np.subtract.outer(w, w).ravel()
    vecs = np.kron(v, v)
    order = np.argsort(vals, kind="stable")
    hat = HermitianOperator(bar.matrix - bar_p.matrix, _eig=(vals[order], vecs[:, order]))
    return DoubledVariable(x, bar, bar_p, hat)


def swap_operator(d: int) -> np.ndarray:
    """The flip ``a (x) b -> b (x) a`` on ``C^d (x) C^d``."""
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[j * d + i, i * d + j] = 1.0
    return s


def moments_agree(x, y, max_moment: int, tol: float = 1e-9) -> bool:
    mx, my = _op(x).matrix, _op(y).matrix
    px, py = np.eye(len(mx)), np.eye(len(my))
    for _ in range(max_moment):
        px, py = px @ mx, py @ my
        scale = max(1.0, abs(trace_state(px)), abs(trace_state(py)))
        if abs(trace_state(px) - trace_state(py)) > tol * scale:
            return False
    return True


@dataclass
class IndependenceReport:
    max_deviation: float
    split_deviations: list = field(default_factory=list)
    word_length: int = 0
    passed: bool = True
    n_words: int = 0
    tol_indep: float = 1e-8
    note: str = "randomized falsification test: a pass is evidence, not proof"


def factorization_deviation(a: np.ndarray, b: np.ndarray, scale: float | None = None) -> float:
    """``|tau(ab) - tau(a)tau(b)|`` divided by ``scale``.

    Without ``scale`` the tau-2-norms ``||a||_2 ||b||_2`` are used; by
    Cauchy-Schwarz ``|tau(ab)| <= ||a||_2 ||b||_2``, so the ratio is scale free.
    """
    d = a.shape[0]
    tab = np.sum(a * b.T) / d
    ta = np.trace(a) / d
    tb = np.trace(b) / d
    if scale is None:
        na = np.sqrt(np.sum(np.abs(a) ** 2).real / d)
        nb = np.sqrt(np.sum(np.abs(b) ** 2).real / d)
        scale = na * nb
    if scale == 0:
        return 0.0
    return float(abs(tab - ta * tb) / scale)


def _alphabet(ops: Sequence[HermitianOperator]) -> list[tuple[np.ndarray, float]]:
    """Letters with an operator-norm bound each: the operators and their eigenprojections."""
    letters = []
    for op in ops:
        letters.append((op.matrix, max(op.norm, 1e-300)))
        res = spectral_resolution(op)
        if len(res.multiplicities) > 1:
            letters.extend((p.matrix, 1.0) for p in res.projectors)
    return letters


def _random_word(letters, max_len, rng) -> tuple[np.ndarray, float]:
    """Random product of letters and the product of their norms, which bounds its norm.

    The bound, not the word's own norm, normalizes the deviation: a word such as
    a product of orthogonal projections is zero up to rounding, and dividing
    by its own tiny norm would magnify that rounding.
    """
    length = int(rng.integers(1, max_len + 1))
    idx = rng.integers(0, len(letters), size=length)
    w, bound = letters[idx[0]]
    for i in idx[1:]:
        m, nm = letters[i]
        w = w @ m
        bound *= nm
    return w, bound


def weak_full_independence_test(
    family,
    max_word_len: int = 4,
    n_words: int = 64,
    seed: int = 0,
    tol_indep: float = 1e-8,
) -> IndependenceReport:
    """Sample ``|tau(ab) - tau(a)tau(b)|`` over every split of the sequence.

    For each split ``j`` the word ``a`` is a random product of the members
    before ``j`` and their eigenprojections, and ``b`` likewise from the
    members from ``j`` on.  Deviations are relative to the product of the
    letters' operator norms.
    """
    members = list(family.members) if isinstance(family, TensorFamily) else [_op(x) for x in family]
    if len(members) < 2:
        raise EmptyFamily("weak full independence needs at least two members")
    if max_word_len < 1:
        raise ValueError("max_word_len must be >= 1")
    rng = np.random.default_rng(seed)
    alphabets = [_alphabet([m]) for m in members]
    splits = []
    for j in range(1, len(members)):
        left = [l for a in alphabets[:j] for l in a]
        right = [l for a in alphabets[j:] for l in a]
        worst = 0.0
        for _ in range(n_words):
            a, bound_a = _random_word(left, max_word_len, rng)
            b, bound_b = _random_word(right, max_word_len, rng)
            worst = max(worst, factorization_deviation(a, b, bound_a * bound_b))
        splits.append((j, worst))
    max_dev = max(d for _, d in splits)
    return IndependenceReport(
        max_deviation=max_dev,
        split_deviations=splits,
        word_length=max_word_len,
        passed=max_dev < tol_indep,
        n_words=n_words,
        tol_indep=tol_indep,
    )


def sum_symmetry_check(family, max_moment: int = 8, cfg: SuiteConfig | None = None) -> InequalityReport:
    """Check that a sum of independent symmetric variables is symmetric.

    Compares ``tau(s^k)`` with ``tau((-s)^k)`` for ``k <= max_moment`` and
    also tests the full distribution of ``s`` against that of ``-s``.
    """
    cfg = cfg or SuiteConfig()
    members = list(family.members) if isinstance(family, TensorFamily) else [_op(x) for x in family]
    if not members:
        raise EmptyFamily("empty family")
    for k, m in enumerate(members):
        if not is_symmetric(m, cfg.tol_dist):
            raise NotSymmetric(f"member {k} is not symmetric")
    s = members[0]
    for m in members[1:]:
        s = s + m
    scale = max(1.0, s.norm)
    ms = s.matrix
    power = np.eye(s.dim)
    worst = 0.0
    moments = []
    for k in range(1, max_moment + 1):
        power = power @ ms
        t = normalized_trace(power)
        moments.append(t)
        # tau((-s)^k) = (-1)^k tau(s^k)
        worst = max(worst, abs(t - (-1) ** k * t) / scale**k)
    sym = is_symmetric(s, cfg.tol_dist)
    rep = InequalityReport(
        name="sum_symmetry",
        lhs=worst,
        rhs=cfg.tol_check,
        parameters={"max_moment": max_moment},
        hypothesis_checks=[HypothesisCheck("members symmetric", True, 0.0)],
        bounds=[Bound("max_k |tau(s^k) - tau((-s)^k)| / ||s||^k", worst, cfg.tol_check)],
        details={
            "moments": moments,
            "sum_symmetric": sym,
            "distribution": [list(a) for a in distribution(s).atoms],
        },
    )
    rep.finalize(0.0)
    rep.holds = rep.holds and sym
    return rep


def doubled_identically_distributed(dv: DoubledVariable, cfg: SuiteConfig | None = None) -> bool:
    cfg = cfg or SuiteConfig()
    cap = min(2 * dv.dim, cfg.moment_cap)
    return identically_distributed(dv.bar_x, dv.bar_x_prime, cfg.tol_dist) and moments_agree(
        dv.bar_x, dv.bar_x_prime, cap
    )

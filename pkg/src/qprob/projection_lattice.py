"""Meet, join and order on the projection lattice of ``M_d(C)``.

``p ∧ q`` projects onto ``range(p) ∩ range(q)``.  A vector lies in both
ranges exactly when it is annihilated by the positive semidefinite operator
``(1 - p) + (1 - q)``, so the general meet is the projection onto that null
space.  Commuting pairs take the fast path ``p ∧ q = pq``.
"""

from __future__ import annotations

import warnings
from functools import reduce
from typing import Iterable

import numpy as np

from .config import LatticeConfig
from .errors import DegenerateAngleWarning, DimMismatch, EigenFailure, EmptyFamily
from .operator_core import Projection, identity, zero_projection

DEFAULT_LATTICE = LatticeConfig()


def _check_dims(p: Projection, q: Projection) -> None:
    if p.dim != q.dim:
        raise DimMismatch(f"projection dims {p.dim} and {q.dim} differ")


def commutes(p: Projection, q: Projection, cfg: LatticeConfig = DEFAULT_LATTICE) -> bool:
    _check_dims(p, q)
    a, b = p.matrix, q.matrix
    return float(np.max(np.abs(a @ b - b @ a))) < cfg.tol_comm


def _reproject(m: np.ndarray) -> Projection:
    # snap a near-projection to the spectral projection onto eigenvalues > 1/2
    h = (m + m.conj().T) / 2
    w, v = np.linalg.eigh(h)
    keep = v[:, w > 0.5]
    return Projection(keep @ keep.conj().T)


def _meet_nullspace(p: Projection, q: Projection, cfg: LatticeConfig) -> Projection:
    d = p.dim
    s = 2 * np.eye(d) - p.matrix - q.matrix
    s = (s + s.conj().T) / 2
    try:
        w, v = np.linalg.eigh(s)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    band = (w >= cfg.tol_null) & (w < 10 * cfg.tol_null)
    if band.any():
        warnings.warn(
            f"meet: {int(band.sum())} eigenvalue(s) of (1-p)+(1-q) in "
            f"[{cfg.tol_null:g}, {10 * cfg.tol_null:g}); subspace angle is ill-conditioned",
            DegenerateAngleWarning,
            stacklevel=3,
        )
    keep = v[:, w < cfg.tol_null]
    return Projection(keep @ keep.conj().T)


def meet(p: Projection, q: Projection, cfg: LatticeConfig = DEFAULT_LATTICE) -> Projection:
    """Projection onto ``range(p) ∩ range(q)``."""
    _check_dims(p, q)
    a, b = p.matrix, q.matrix
    ab = a @ b
    if float(np.max(np.abs(ab - b @ a))) < cfg.tol_comm:
        dev = float(np.max(np.abs(ab @ ab - ab))) if ab.size else 0.0
        if dev < cfg.tol_comm and float(np.max(np.abs(ab - ab.conj().T))) < cfg.tol_comm:
            return Projection((ab + ab.conj().T) / 2)
        return _reproject(ab)
    return _meet_nullspace(p, q, cfg)


def join(p: Projection, q: Projection, cfg: LatticeConfig = DEFAULT_LATTICE) -> Projection:
    """Projection onto the span of ``range(p)`` and ``range(q)``: ``1 - (p^⊥ ∧ q^⊥)``."""
    _check_dims(p, q)
    return ~meet(~p, ~q, cfg)


def meet_all(ps: Iterable[Projection], cfg: LatticeConfig = DEFAULT_LATTICE) -> Projection:
    """Left fold of :func:`meet`."""
    ps = list(ps)
    if not ps:
        raise EmptyFamily("meet of an empty family")
    return reduce(lambda a, b: meet(a, b, cfg), ps)


def join_all(ps: Iterable[Projection], cfg: LatticeConfig = DEFAULT_LATTICE) -> Projection:
    """Join of a finite family: the range projection of ``sum_i p_i``.

    ``range(sum p_i)`` equals the span of the ranges because each ``p_i`` is
    positive; this takes one decomposition instead of a fold of meets.
    """
    ps = list(ps)
    if not ps:
        raise EmptyFamily("join of an empty family")
    d = ps[0].dim
    for q in ps[1:]:
        _check_dims(ps[0], q)
    if len(ps) == 1:
        return ps[0]
    if all(commutes(a, b, cfg) for i, a in enumerate(ps) for b in ps[i + 1:]):
        return reduce(lambda a, b: join(a, b, cfg), ps)
    s = sum(q.matrix for q in ps)
    s = (s + s.conj().T) / 2
    w, v = np.linalg.eigh(s)
    keep = v[:, w >= cfg.tol_null]
    if keep.shape[1] == 0:
        return zero_projection(d)
    if keep.shape[1] == d:
        return identity(d)
    return Projection(keep @ keep.conj().T)


def is_subprojection(p: Projection, q: Projection, tol: float = 1e-9) -> bool:
    """``p <= q``, tested as ``||qp - p|| < tol``.

    The Frobenius norm is used; it dominates the operator norm, so the test
    never accepts a pair the operator-norm test would reject.
    """
    return subprojection_deviation(p, q) < tol


def subprojection_deviation(p: Projection, q: Projection) -> float:
    _check_dims(p, q)
    diff = q.matrix @ p.matrix - p.matrix
    if not diff.any():
        return 0.0
    return float(np.linalg.norm(diff))


def orthogonality_deviation(p: Projection, q: Projection) -> float:
    """Frobenius norm of ``pq``; zero for orthogonal projections."""
    _check_dims(p, q)
    prod = p.matrix @ q.matrix
    if not prod.any():
        return 0.0
    return float(np.linalg.norm(prod))

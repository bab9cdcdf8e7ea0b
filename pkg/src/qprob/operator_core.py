"""Finite-dimensional quantum probability spaces.

The algebra is the full matrix algebra ``M_d(C)`` with the normalized trace
``tau(x) = tr(x) / d``.  Random variables are :class:`HermitianOperator`
instances; projections are :class:`Projection` instances.  Both are immutable
and cache their eigendecomposition, so repeated spectral queries on the same
operator cost one ``eigh`` call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from numbers import Real
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BadExponent,
    DimMismatch,
    EigenFailure,
    EmptyMatrix,
    NotHermitian,
    NotProjection,
)

TOL_HERM = 1e-9
TOL_PROJ = 1e-9
TOL_SPEC = 1e-9
EPS_BND = 1e-9
REL_TOL_CLUSTER = 1e-9


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, HermitianOperator):
        return x.matrix
    return np.asarray(x, dtype=complex)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


class HermitianOperator:
    """A self-adjoint element of ``M_d(C)``.

    Construct through :func:`make_hermitian` when the input is untrusted.
    Arithmetic with other operators and with real scalars stays Hermitian;
    ``x - c`` with a real ``c`` means ``x - c * 1``.  Matrix products of two
    operators are generally not Hermitian and are returned as arrays via
    ``x @ y``.
    """

    __array_priority__ = 100

    def __init__(self, matrix: np.ndarray, *, _eig=None):
        m = np.asarray(matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimMismatch(f"operator matrix must be square, got shape {m.shape}")
        if m.shape[0] == 0:
            raise EmptyMatrix("operator of dimension 0")
        self._matrix = m if (m.dtype == complex and not m.flags.writeable) else _readonly(m)
        if _eig is not None:
            self.__dict__["_eig"] = _eig

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._matrix
        return self._matrix.astype(dtype)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"

    @cached_property
    def _eig(self):
        m = self._matrix
        off = m - np.diag(np.diag(m))
        if not off.any():
            diag = m.diagonal().real
            order = np.argsort(diag, kind="stable")
            vecs = np.eye(self.dim, dtype=complex)[:, order]
            return diag[order].copy(), vecs
        try:
            w, v = np.linalg.eigh(m)
        except np.linalg.LinAlgError as exc:
            raise EigenFailure(str(exc)) from exc
        if not np.all(np.isfinite(w)):
            raise EigenFailure("eigensolver returned non-finite eigenvalues")
        return w, v

    @cached_property
    def norm(self) -> float:
        """Operator norm (largest absolute eigenvalue)."""
        w, _ = self._eig
        return float(np.max(np.abs(w)))

    def is_diagonal(self) -> bool:
        m = self._matrix
        return not (m - np.diag(np.diag(m))).any()

    def _coerce(self, other):
        if isinstance(other, HermitianOperator):
            if other.dim != self.dim:
                raise DimMismatch(f"dims {self.dim} and {other.dim} differ")
            return other.matrix
        if isinstance(other, Real):
            return float(other) * np.eye(self.dim)
        return NotImplemented

    def _shifted_eig(self, c: float):
        if "_eig" not in self.__dict__:
            return None
        w, v = self._eig
        return (w + c, v)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        eig = self._shifted_eig(float(other)) if isinstance(other, Real) else None
        return HermitianOperator(self._matrix + o, _eig=eig)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        eig = self._shifted_eig(-float(other)) if isinstance(other, Real) else None
        return HermitianOperator(self._matrix - o, _eig=eig)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return HermitianOperator(o - self._matrix)

    def __neg__(self):
        eig = None
        if "_eig" in self.__dict__:
            w, v = self._eig
            eig = (-w[::-1], v[:, ::-1])
        return HermitianOperator(-self._matrix, _eig=eig)

    def __mul__(self, c):
        if not isinstance(c, Real):
            return NotImplemented
        c = float(c)
        eig = None
        if "_eig" in self.__dict__:
            w, v = self._eig
            eig = (c * w, v) if c >= 0 else (c * w[::-1], v[:, ::-1])
        return HermitianOperator(c * self._matrix, _eig=eig)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return self._matrix @ _as_matrix(other)

    def __rmatmul__(self, other):
        return _as_matrix(other) @ self._matrix


class Projection(HermitianOperator):
    """A Hermitian idempotent.  ``~p`` is the complement ``1 - p``."""

    def __invert__(self) -> "Projection":
        return Projection(np.eye(self.dim) - self._matrix)

    @property
    def complement(self) -> "Projection":
        return ~self

    @property
    def rank(self) -> int:
        return int(round(float(np.trace(self._matrix).real)))

    def trace(self) -> float:
        """Normalized trace ``tau(p) = rank / d``, exact rather than a float sum of the diagonal."""
        return self.rank / self.dim

    def is_zero(self, tol: float = TOL_PROJ) -> bool:
        return float(np.max(np.abs(self._matrix))) < tol


def identity(d: int) -> Projection:
    return Projection(np.eye(d))


def zero_projection(d: int) -> Projection:
    return Projection(np.zeros((d, d)))


def make_hermitian(entries, tol_herm: float = TOL_HERM) -> HermitianOperator:
    """Validate a square matrix as a Hermitian operator.

    Small asymmetries (below ``tol_herm`` entrywise) are removed by replacing
    ``A`` with ``(A + A*) / 2``.
    """
    a = np.asarray(entries, dtype=complex)
    if a.size == 0:
        raise EmptyMatrix("empty matrix")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimMismatch(f"entries must be square, got shape {a.shape}")
    dev = float(np.max(np.abs(a - a.conj().T)))
    if dev >= tol_herm:
        raise NotHermitian(f"max |A - A*| = {dev:.3g} exceeds tol_herm = {tol_herm:g}")
    return HermitianOperator((a + a.conj().T) / 2)


def make_projection(entries, tol_proj: float = TOL_PROJ) -> Projection:
    """Validate a matrix as an orthogonal projection (Hermitian and idempotent)."""
    x = make_hermitian(entries, tol_proj)
    m = x.matrix
    dev = float(np.max(np.abs(m @ m - m))) if m.size else 0.0
    if dev >= tol_proj:
        raise NotProjection(f"max |P^2 - P| = {dev:.3g} exceeds tol_proj = {tol_proj:g}")
    return Projection(m)


def normalized_trace(x) -> float:
    """``tau(x) = tr(x)/d`` for a Hermitian argument (real part returned)."""
    m = _as_matrix(x)
    return float(np.trace(m).real) / m.shape[0]


def trace_state(a) -> complex:
    """``tau(a)`` for an arbitrary (not necessarily Hermitian) matrix."""
    m = _as_matrix(a)
    return complex(np.trace(m)) / m.shape[0]


def default_tol_cluster(x) -> float:
    if isinstance(x, HermitianOperator):
        scale = x.norm
    else:
        scale = float(np.max(np.abs(np.asarray(x))))
    return REL_TOL_CLUSTER * max(1.0, scale)


@dataclass(frozen=True, eq=False)
class BorelInterval:
    """Real interval with independently open or closed endpoints.

    Infinite endpoints are always open.
    """

    lo: float = -math.inf
    hi: float = math.inf
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval endpoints must not be NaN")
        if lo > hi:
            raise ValueError(f"empty interval: lo={lo} > hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if math.isinf(lo):
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(hi):
            object.__setattr__(self, "hi_closed", False)

    @classmethod
    def real_line(cls):
        return cls()

    @classmethod
    def above(cls, t: float, closed: bool = False):
        """``(t, inf)``, or ``[t, inf)`` when ``closed``."""
        return cls(t, math.inf, lo_closed=closed)

    @classmethod
    def below(cls, t: float, closed: bool = True):
        """``(-inf, t]``, or ``(-inf, t)`` when not ``closed``."""
        return cls(-math.inf, t, hi_closed=closed)

    @classmethod
    def closed(cls, a: float, b: float):
        return cls(a, b, True, True)

    @classmethod
    def open(cls, a: float, b: float):
        return cls(a, b, False, False)

    def contains(self, values, eps_bnd: float = EPS_BND) -> np.ndarray:
        """Membership mask after snapping values within ``eps_bnd`` onto finite endpoints."""
        v = np.array(values, dtype=float, copy=True, ndmin=1)
        if math.isfinite(self.lo):
            v[np.abs(v - self.lo) <= eps_bnd] = self.lo
        if math.isfinite(self.hi):
            v[np.abs(v - self.hi) <= eps_bnd] = self.hi
        lo_ok = v >= self.lo if self.lo_closed else v > self.lo
        hi_ok = v <= self.hi if self.hi_closed else v < self.hi
        return lo_ok & hi_ok

    def complement(self) -> list["BorelInterval"]:
        parts = []
        if math.isfinite(self.lo) or self.lo_closed:
            parts.append(BorelInterval(-math.inf, self.lo, hi_closed=not self.lo_closed))
        if math.isfinite(self.hi):
            parts.append(BorelInterval(self.hi, math.inf, lo_closed=not self.hi_closed))
        return parts

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


@dataclass(frozen=True, eq=False)
class SpectralResolution:
    """Clustered eigen-decomposition ``x = sum_i eigenvalues[i] * P_i``.

    ``vectors`` holds orthonormal eigenvectors as columns grouped by cluster,
    in ascending eigenvalue order; ``multiplicities[i]`` columns belong to
    cluster ``i``.  Eigenprojections are formed on demand.
    """

    eigenvalues: np.ndarray
    multiplicities: tuple
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def weights(self) -> np.ndarray:
        return np.asarray(self.multiplicities, dtype=float) / self.dim

    @cached_property
    def column_cluster(self) -> np.ndarray:
        return np.repeat(np.arange(len(self.multiplicities)), self.multiplicities)

    def classify(self, interval: BorelInterval, eps_bnd: float = EPS_BND) -> np.ndarray:
        """Boolean mask over clusters whose eigenvalue lies in ``interval``."""
        return interval.contains(self.eigenvalues, eps_bnd)

    def projection_from_mask(self, cluster_mask) -> Projection:
        cols = np.asarray(cluster_mask, dtype=bool)[self.column_cluster]
        v = self.vectors[:, cols]
        return Projection(v @ v.conj().T)

    def projector(self, i: int) -> Projection:
        mask = np.zeros(len(self.multiplicities), dtype=bool)
        mask[i] = True
        return self.projection_from_mask(mask)

    @property
    def projectors(self) -> list[Projection]:
        return [self.projector(i) for i in range(len(self.multiplicities))]

    def reconstruct(self) -> np.ndarray:
        vals = self.eigenvalues[self.column_cluster]
        return (self.vectors * vals) @ self.vectors.conj().T


def _cluster(values: np.ndarray, tol: float):
    starts = [0]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > tol:
            starts.append(i)
    bounds = starts + [len(values)]
    means = np.array([values[a:b].mean() for a, b in zip(bounds[:-1], bounds[1:])])
    mults = tuple(b - a for a, b in zip(bounds[:-1], bounds[1:]))
    return means, mults


def spectral_resolution(x, tol_cluster: float | None = None) -> SpectralResolution:
    """Ascending clustered eigenvalues with their eigenvector groups.

    Eigenvalues closer than ``tol_cluster`` (default ``1e-9 * max(1, ||x||)``)
    are merged into one eigenprojection.
    """
    if not isinstance(x, HermitianOperator):
        x = make_hermitian(x)
    if tol_cluster is None:
        tol_cluster = default_tol_cluster(x)
    cache = x.__dict__.setdefault("_resolutions", {})
    res = cache.get(tol_cluster)
    if res is None:
        w, v = x._eig
        means, mults = _cluster(w, tol_cluster)
        res = SpectralResolution(means, mults, v)
        cache[tol_cluster] = res
    return res


def spectral_projection(
    x,
    interval: BorelInterval,
    eps_bnd: float = EPS_BND,
    tol_cluster: float | None = None,
) -> Projection:
    """``e_B(x)``: the sum of eigenprojections whose eigenvalue lies in ``B``."""
    res = spectral_resolution(x, tol_cluster)
    return res.projection_from_mask(res.classify(interval, eps_bnd))


def spectral_weight(
    x,
    interval: BorelInterval,
    eps_bnd: float = EPS_BND,
    tol_cluster: float | None = None,
) -> float:
    """``tau(e_B(x))`` computed from multiplicities, without forming the projection."""
    res = spectral_resolution(x, tol_cluster)
    mask = res.classify(interval, eps_bnd)
    return float(np.asarray(res.multiplicities)[mask].sum()) / res.dim


def tail_projection(x, t: float, eps_bnd: float = EPS_BND) -> Projection:
    """``e_t^perp(x) = E([t, inf))``."""
    return spectral_projection(x, BorelInterval.above(t, closed=True), eps_bnd)


def functional_calculus(x, f: Callable[[np.ndarray], np.ndarray]) -> HermitianOperator:
    """``f(x) = sum_i f(lambda_i) P_i`` for a vectorized real function ``f``.

    The result reuses the eigenvectors of ``x``, so its own spectral queries
    do not trigger a new eigendecomposition.
    """
    res = spectral_resolution(x)
    try:
        fvals = np.asarray(f(res.eigenvalues), dtype=float)
    except (TypeError, ValueError):
        fvals = None
    if fvals is None or fvals.shape != res.eigenvalues.shape:
        fvals = np.array([float(f(v)) for v in res.eigenvalues])
    col_vals = fvals[res.column_cluster]
    order = np.argsort(col_vals, kind="stable")
    vecs = res.vectors[:, order]
    vals = col_vals[order]
    m = (vecs * vals) @ vecs.conj().T
    m = (m + m.conj().T) / 2
    return HermitianOperator(m, _eig=(vals, vecs))


def absolute(x) -> HermitianOperator:
    """``|x|`` via functional calculus."""
    return functional_calculus(x, np.abs)


def lp_norm(x, p: float) -> float:
    """``||x||_p = tau(|x|^p)^(1/p)`` from the trace distribution of ``x``."""
    if not p >= 1:
        raise BadExponent(f"p must be >= 1, got {p}")
    res = spectral_resolution(x)
    s = float(np.sum(res.weights * np.abs(res.eigenvalues) ** p))
    return s ** (1.0 / p)


def lp_power(x, p: float) -> float:
    """``||x||_p^p``, avoiding the root when only the power is needed."""
    if not p >= 1:
        raise BadExponent(f"p must be >= 1, got {p}")
    res = spectral_resolution(x)
    return float(np.sum(res.weights * np.abs(res.eigenvalues) ** p))


def tensor_embed(x, factor_dims: Sequence[int], position: int) -> HermitianOperator:
    """``1 (x) ... (x) x (x) ... (x) 1`` with ``x`` in slot ``position``."""
    if not isinstance(x, HermitianOperator):
        x = make_hermitian(x)
    dims = [int(d) for d in factor_dims]
    if not 0 <= position < len(dims):
        raise DimMismatch(f"position {position} out of range for {len(dims)} factors")
    if any(d < 1 for d in dims):
        raise DimMismatch("factor dimensions must be positive")
    if dims[position] != x.dim:
        raise DimMismatch(f"operator dim {x.dim} != factor dim {dims[position]}")
    left = int(np.prod(dims[:position], dtype=np.int64))
    right = int(np.prod(dims[position + 1:], dtype=np.int64))
    il, ir = np.eye(left), np.eye(right)
    m = np.kron(il, np.kron(x.matrix, ir))
    w, v = x._eig
    vals = np.kron(np.ones(left), np.kron(w, np.ones(right)))
    vecs = np.kron(il, np.kron(v, ir))
    order = np.argsort(vals, kind="stable")
    return HermitianOperator(m, _eig=(vals[order], vecs[:, order]))


def embed_projection(p: Projection, factor_dims: Sequence[int], position: int) -> Projection:
    dims = [int(d) for d in factor_dims]
    left = int(np.prod(dims[:position], dtype=np.int64))
    right = int(np.prod(dims[position + 1:], dtype=np.int64))
    return Projection(np.kron(np.eye(left), np.kron(p.matrix, np.eye(right))))


def commutator_norm(a, b) -> float:
    """Max-entry norm of ``ab - ba``."""
    ma, mb = _as_matrix(a), _as_matrix(b)
    if ma.shape != mb.shape:
        raise DimMismatch(f"shapes {ma.shape} and {mb.shape} differ")
    return float(np.max(np.abs(ma @ mb - mb @ ma)))

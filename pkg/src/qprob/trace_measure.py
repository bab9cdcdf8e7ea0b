"""Distributions under the trace state, the median, and Chebyshev-type bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import BadExponent, BadThreshold
from .operator_core import (
    BorelInterval,
    HermitianOperator,
    _cluster,
    absolute,
    default_tol_cluster,
    lp_power,
    make_hermitian,
    normalized_trace,
    spectral_resolution,
    spectral_weight,
)
from .report import Bound, InequalityReport

TOL_CHECK = 1e-9


@dataclass(frozen=True)
class TraceDistribution:
    """Atoms ``(value, weight)`` of the spectral measure ``B -> tau(e_B(x))``.

    ``counts`` are the eigenvalue multiplicities and ``dim`` the matrix size,
    so ``weight = count / dim`` exactly.
    """

    atoms: tuple
    counts: tuple
    dim: int

    @property
    def values(self) -> np.ndarray:
        return np.array([a for a, _ in self.atoms])

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms])

    def weight_of(self, interval: BorelInterval, eps_bnd: float = 1e-9) -> float:
        mask = interval.contains(self.values, eps_bnd)
        return float(np.asarray(self.counts)[mask].sum()) / self.dim


def _as_operator(x) -> HermitianOperator:
    return x if isinstance(x, HermitianOperator) else make_hermitian(x)


def distribution(x, tol_cluster: float | None = None) -> TraceDistribution:
    res = spectral_resolution(_as_operator(x), tol_cluster)
    d = res.dim
    atoms = tuple((float(v), m / d) for v, m in zip(res.eigenvalues, res.multiplicities))
    return TraceDistribution(atoms, tuple(res.multiplicities), d)


def distribution_distance(x, y) -> float:
    """Largest atom mismatch (in value or weight) between two trace distributions.

    Both spectra are clustered with the same tolerance before matching, so
    that eigenvalue jitter cannot split an atom on one side only.  Returns
    ``inf`` when the atom counts differ.
    """
    x, y = _as_operator(x), _as_operator(y)
    tol_c = max(default_tol_cluster(x), default_tol_cluster(y))
    vx, mx = _cluster(x._eig[0], tol_c)
    vy, my = _cluster(y._eig[0], tol_c)
    if len(vx) != len(vy):
        return math.inf
    wx = np.asarray(mx) / x.dim
    wy = np.asarray(my) / y.dim
    return float(max(np.max(np.abs(vx - vy)), np.max(np.abs(wx - wy))))


def identically_distributed(x, y, tol: float = 1e-8) -> bool:
    return distribution_distance(x, y) <= tol


def symmetry_deviation(x) -> float:
    x = _as_operator(x)
    return distribution_distance(x, -x)


def is_symmetric(x, tol: float = 1e-8) -> bool:
    """``x`` and ``-x`` are identically distributed."""
    return symmetry_deviation(x) <= tol


def median(x) -> float:
    """The canonical median ``sup{a : tau(E([a, inf))(x)) >= 1/2}``.

    On a finite spectrum this is the largest atom whose upper tail (the atom
    included) carries at least half the weight.  The comparison is done on
    integer multiplicities, so it is exact.
    """
    dist = distribution(x)
    tail = 0
    for (value, _), count in zip(reversed(dist.atoms), reversed(dist.counts)):
        tail += count
        if 2 * tail >= dist.dim:
            return value
    raise AssertionError("unreachable: total weight is 1")


def variance(x) -> float:
    x = _as_operator(x)
    m = x.matrix
    t = normalized_trace(x)
    return float(np.trace(m @ m).real) / x.dim - t * t


@dataclass
class MedianReport:
    median: float
    tail_at_median: float
    cdf_at_median: float
    bound_2p: float
    bound_var: float
    all_pass: bool
    p: float = 1.0
    definition_pass: bool = True
    item_i_pass: bool = True
    item_i_slack: float = math.inf
    item_ii_pass: bool = True
    item_ii_slack: float = math.inf
    item_iii_pass: bool = True
    item_iii_slack: float = math.inf
    alpha_grid: tuple = ()


def chebyshev_check(x, t: float, p: float, tol_check: float = TOL_CHECK) -> InequalityReport:
    """``tau(E([t, inf))(x)) <= t^-p * tau(|x|^p)``."""
    if not p >= 1:
        raise BadExponent(f"p must be >= 1, got {p}")
    if not t > 0:
        raise BadThreshold(f"threshold t must be positive, got {t}")
    x = _as_operator(x)
    lhs = spectral_weight(x, BorelInterval.above(t, closed=True))
    rhs = t ** (-p) * lp_power(x, p)
    rep = InequalityReport(
        name="chebyshev",
        lhs=lhs,
        rhs=rhs,
        parameters={"t": t, "p": p},
        bounds=[Bound("tail <= t^-p ||x||_p^p", lhs, rhs)],
        witness_traces={"tau(e_t_perp(x))": lhs},
    )
    return rep.finalize(tol_check)


def _alpha_grid(abs_values: np.ndarray) -> np.ndarray:
    pos = np.unique(abs_values[abs_values > 0])
    mids = (pos[:-1] + pos[1:]) / 2 if len(pos) > 1 else np.array([])
    top = np.array([pos[-1] + 1.0]) if len(pos) else np.array([1.0])
    first = np.array([pos[0] / 2]) if len(pos) else np.array([])
    return np.unique(np.concatenate([first, pos, mids, top]))


def median_property_check(x, p: float = 2.0, tol: float = 1e-12) -> MedianReport:
    """Check the defining inequalities of the median and the three bounds

    (i)   ``tau(E([a, inf))(|x|)) < 1/2``  implies ``|med(x)| <= a``,
    (ii)  ``|med(x)| <= 2^(1/p) ||x||_p``,
    (iii) ``|med(x) - tau(x)| <= sqrt(2 var(x))``.

    Item (i) is checked on every positive atom of ``|x|``, every midpoint
    between consecutive atoms and one point on either side; the predicate is
    piecewise constant between atoms, so this grid is exhaustive.
    """
    if not p >= 1:
        raise BadExponent(f"p must be >= 1, got {p}")
    x = _as_operator(x)
    m = median(x)
    tail = spectral_weight(x, BorelInterval.above(m, closed=True))
    cdf = spectral_weight(x, BorelInterval.below(m, closed=True))
    definition_pass = tail >= 0.5 - tol and cdf >= 0.5 - tol

    ax = absolute(x)
    grid = _alpha_grid(np.abs(spectral_resolution(x).eigenvalues))
    slack_i = math.inf
    for a in grid:
        if spectral_weight(ax, BorelInterval.above(a, closed=True)) < 0.5:
            slack_i = min(slack_i, a - abs(m))

    bound_2p = 2 ** (1 / p) * lp_power(x, p) ** (1 / p)
    slack_ii = bound_2p - abs(m)
    var = max(variance(x), 0.0)
    bound_var = math.sqrt(2 * var)
    slack_iii = bound_var - abs(m - normalized_trace(x))

    item_i = slack_i >= -tol
    item_ii = slack_ii >= -tol
    item_iii = slack_iii >= -tol
    return MedianReport(
        median=m,
        tail_at_median=tail,
        cdf_at_median=cdf,
        bound_2p=bound_2p,
        bound_var=bound_var,
        all_pass=bool(definition_pass and item_i and item_ii and item_iii),
        p=p,
        definition_pass=bool(definition_pass),
        item_i_pass=bool(item_i),
        item_i_slack=slack_i,
        item_ii_pass=bool(item_ii),
        item_ii_slack=slack_ii,
        item_iii_pass=bool(item_iii),
        item_iii_slack=slack_iii,
        alpha_grid=tuple(float(a) for a in grid),
    )


def median_report(x, p: float = 2.0, tol_check: float = TOL_CHECK) -> InequalityReport:
    """:func:`median_property_check` packaged as an :class:`InequalityReport`."""
    mr = median_property_check(x, p)
    m = mr.median
    rep = InequalityReport(
        name="median",
        parameters={"p": p},
        lhs=abs(m),
        rhs=mr.bound_2p,
        bounds=[
            Bound("1/2 <= tau(E([m,inf)))", 0.5, mr.tail_at_median),
            Bound("1/2 <= tau(E((-inf,m]))", 0.5, mr.cdf_at_median),
            Bound("|med| <= 2^(1/p)||x||_p", abs(m), mr.bound_2p),
            Bound("|med - tau(x)| <= sqrt(2 var)", mr.bound_var - mr.item_iii_slack, mr.bound_var),
        ],
        witness_traces={"tail_at_median": mr.tail_at_median, "cdf_at_median": mr.cdf_at_median},
        details={"median": m, "item_i_slack": mr.item_i_slack, "alpha_grid": list(mr.alpha_grid)},
    )
    if math.isfinite(mr.item_i_slack):
        rep.bounds.append(Bound("(i) |med| <= alpha on grid", abs(m), abs(m) + mr.item_i_slack))
    return rep.finalize(tol_check)


def tail_integral_lp_power(x, p: float) -> float:
    """``||x||_p^p`` from the layer-cake formula ``p * int_0^inf t^(p-1) tau(E([t, inf))(|x|)) dt``.

    The tail function is a step function with jumps at the atoms of ``|x|``;
    each constant piece is integrated numerically with ``scipy.integrate.quad``.
    """
    if not p >= 1:
        raise BadExponent(f"p must be >= 1, got {p}")
    ax = absolute(_as_operator(x))
    dist = distribution(ax)
    knots = [0.0] + [float(v) for v in dist.values if v > 0]
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        w = dist.weight_of(BorelInterval.above(b, closed=True))
        val, _ = integrate.quad(lambda t: p * t ** (p - 1) * w, a, b)
        total += val
    return total

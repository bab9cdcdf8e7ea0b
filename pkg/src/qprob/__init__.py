"""Finite-dimensional quantum probability and noncommutative maximal inequalities.

Random variables are Hermitian matrices under the normalized trace.  The
package builds spectral projections, the projection lattice, tensor
independent families and the doubling construction, and verifies the
Lévy, Ottaviani, Lévy–Skorohod and symmetrization inequalities by
constructing their witness projections explicitly.
"""

from .classical_reduction import (
    ClassicalInstance,
    DiscreteVariable,
    classical_corollary_check,
    diagonal_embedding,
    exact_event_probability,
)
from .config import DEFAULT_CONFIG, LatticeConfig, SuiteConfig
from .errors import *  # noqa: F401,F403
from .independence import (
    DoubledVariable,
    IndependenceReport,
    TensorFamily,
    double,
    sum_symmetry_check,
    tensor_family,
    weak_full_independence_test,
)
from .maximal_inequalities import (
    SumSequence,
    WitnessFamily,
    clarkson_constant,
    levy_skorohod_verify,
    levy_verify,
    lp_symmetrization_verify,
    ottaviani_verify,
    strong_symmetrization_verify,
    weak_symmetrization_verify,
)
from .operator_core import (
    BorelInterval,
    HermitianOperator,
    Projection,
    SpectralResolution,
    absolute,
    functional_calculus,
    identity,
    lp_norm,
    lp_power,
    make_hermitian,
    make_projection,
    normalized_trace,
    spectral_projection,
    spectral_resolution,
    spectral_weight,
    tensor_embed,
)
from .projection_lattice import commutes, is_subprojection, join, join_all, meet, meet_all
from .report import Bound, HypothesisCheck, InequalityReport, InvariantCheck
from .trace_measure import (
    MedianReport,
    TraceDistribution,
    chebyshev_check,
    distribution,
    identically_distributed,
    is_symmetric,
    median,
    median_property_check,
    tail_integral_lp_power,
    variance,
)

__version__ = "0.1.0"

import math

import numpy as np
import pytest

from oracles import interpolation_projection, kron_embed, lp_power_from_eigenvalues
from qprob.errors import BadExponent, DimMismatch, EmptyMatrix, NotHermitian, NotProjection
from qprob.harness.generators import REMARK_MATRICES, random_hermitian
from qprob.operator_core import (
    BorelInterval,
    absolute,
    embed_projection,
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
    trace_state,
)

S4 = 2 * np.eye(3)


class TestMakeHermitian:
    def test_identity_accepted_unchanged(self):
        x = make_hermitian(np.eye(2))
        assert np.array_equal(x.matrix, np.eye(2))

    def test_noncommuting_example_first_matrix_accepted(self):
        x = make_hermitian(REMARK_MATRICES[0])
        assert x.dim == 3
        assert x.matrix[0, 1] == 1 - 1j

    def test_strictly_upper_triangular_rejected(self):
        with pytest.raises(NotHermitian):
            make_hermitian([[0, 1], [0, 0]], tol_herm=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(EmptyMatrix):
            make_hermitian(np.zeros((0, 0)))

    def test_non_square_rejected(self):
        with pytest.raises(DimMismatch):
            make_hermitian(np.zeros((2, 3)))

    def test_tiny_asymmetry_symmetrized(self):
        a = np.array([[1.0, 1.0 + 1e-12], [1.0, 0.0]])
        x = make_hermitian(a)
        assert np.array_equal(x.matrix, x.matrix.conj().T)

    def test_matrix_is_read_only(self):
        x = make_hermitian(np.eye(2))
        with pytest.raises(ValueError):
            x.matrix[0, 0] = 5


class TestProjection:
    def test_accepts_projection(self):
        p = make_projection(np.diag([1.0, 0.0]))
        assert p.trace() == 0.5

    def test_rejects_non_idempotent(self):
        with pytest.raises(NotProjection):
            make_projection(np.diag([1.0, 0.5]))

    def test_complement(self):
        p = make_projection(np.diag([1.0, 0.0, 1.0]))
        assert np.allclose((~p).matrix, np.diag([0, 1, 0]))


class TestNormalizedTrace:
    @pytest.mark.parametrize("d", [1, 2, 5])
    def test_identity(self, d):
        assert normalized_trace(identity(d)) == 1.0

    def test_diag(self):
        assert normalized_trace(make_hermitian(np.diag([0.0, 2.0]))) == 1.0

    def test_noncommuting_example_total(self):
        s4 = sum(make_hermitian(m).matrix for m in REMARK_MATRICES)
        assert np.array_equal(s4, S4)
        assert normalized_trace(make_hermitian(s4)) == 2.0

    def test_tracial(self, rng):
        for _ in range(50):
            x = random_hermitian(5, rng).matrix
            y = random_hermitian(5, rng).matrix
            assert abs(trace_state(x @ y) - trace_state(y @ x)) <= 1e-12


class TestLpNorm:
    def test_examples(self):
        assert lp_norm(make_hermitian(np.diag([0.0, 2.0])), 1) == 1.0
        assert math.isclose(lp_norm(make_hermitian(np.diag([-1.0, 1.0])), 2), 1.0)
        assert lp_norm(make_hermitian(np.zeros((3, 3))), 3) == 0.0

    def test_bad_exponent(self):
        with pytest.raises(BadExponent):
            lp_norm(identity(2), 0.5)

    def test_against_eigenvalues(self, rng):
        for _ in range(20):
            x = random_hermitian(6, rng)
            for p in (1, 2, 3.5):
                assert math.isclose(lp_power(x, p), lp_power_from_eigenvalues(x.matrix, p), rel_tol=1e-10)


class TestSpectralResolution:
    def test_diagonal(self):
        res = spectral_resolution(make_hermitian(np.diag([3.0, 1.0, 2.0])))
        assert list(res.eigenvalues) == [1.0, 2.0, 3.0]
        assert np.allclose(res.projector(0).matrix, np.diag([0, 1, 0]))
        assert np.allclose(res.projector(2).matrix, np.diag([1, 0, 0]))

    def test_scalar_total_single_cluster(self):
        res = spectral_resolution(make_hermitian(S4))
        assert list(res.eigenvalues) == [2.0]
        assert res.multiplicities == (3,)

    def test_swap_matrix(self):
        res = spectral_resolution(make_hermitian([[0, 1], [1, 0]]))
        assert np.allclose(res.eigenvalues, [-1, 1])
        assert np.allclose(res.projector(0).matrix, 0.5 * np.array([[1, -1], [-1, 1]]))
        assert np.allclose(res.projector(1).matrix, 0.5 * np.array([[1, 1], [1, 1]]))

    def test_completeness_and_reconstruction(self, rng):
        for _ in range(500):
            d = int(rng.integers(1, 17))
            x = random_hermitian(d, rng)
            res = spectral_resolution(x)
            total = sum(p.matrix for p in res.projectors)
            assert np.max(np.abs(total - np.eye(d))) <= 1e-9
            assert np.linalg.norm(res.reconstruct() - x.matrix, 2) <= 1e-9 * max(1, x.norm)

    def test_clusters_near_degenerate(self):
        x = make_hermitian(np.diag([1.0, 1.0 + 1e-12, 2.0]))
        assert spectral_resolution(x).multiplicities == (2, 1)


class TestSpectralProjection:
    def test_upper_tail(self):
        p = spectral_projection(make_hermitian(np.diag([0.0, 2.0])), BorelInterval.above(1, closed=True))
        assert np.allclose(p.matrix, np.diag([0, 1]))
        assert p.trace() == 0.5

    def test_full_line(self, rng):
        x = random_hermitian(4, rng)
        assert np.allclose(spectral_projection(x, BorelInterval.real_line()).matrix, np.eye(4))

    def test_open_endpoint_excludes(self):
        p = spectral_projection(make_hermitian(np.diag([-1.0, 1.0])), BorelInterval.above(1))
        assert p.is_zero()

    def test_endpoint_snapping(self):
        x = make_hermitian(np.diag([1.0 + 1e-12, 0.0]))
        assert spectral_weight(x, BorelInterval.above(1.0)) == 0.0
        assert spectral_weight(x, BorelInterval.above(1.0, closed=True)) == 0.5

    def test_complement_sums_to_identity(self, rng):
        for _ in range(50):
            x = random_hermitian(6, rng)
            b = BorelInterval(-0.5, 0.7, True, False)
            total = spectral_projection(x, b).matrix + sum(spectral_projection(x, c).matrix for c in b.complement())
            assert np.max(np.abs(total - np.eye(6))) <= 1e-12

    def test_against_interpolation_oracle(self, rng):
        for _ in range(50):
            x = random_hermitian(5, rng)
            t = float(rng.normal())
            p = spectral_projection(x, BorelInterval.above(t, closed=True))
            q = interpolation_projection(x.matrix, lambda v: v >= t)
            assert np.max(np.abs(p.matrix - q)) <= 1e-6

    def test_weight_equals_projection_trace(self, rng):
        x = random_hermitian(7, rng)
        b = BorelInterval.below(0.1)
        assert math.isclose(spectral_weight(x, b), spectral_projection(x, b).trace(), abs_tol=1e-12)


class TestBorelInterval:
    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            BorelInterval(2.0, 1.0)

    def test_infinite_endpoint_forced_open(self):
        b = BorelInterval(-math.inf, 1.0, lo_closed=True)
        assert not b.lo_closed

    def test_str(self):
        assert str(BorelInterval.above(1.0, closed=True)) == "[1, inf)"


class TestFunctionalCalculus:
    def test_abs_of_symmetry(self):
        assert np.allclose(absolute(make_hermitian(np.diag([-1.0, 1.0]))).matrix, np.eye(2))

    def test_square_of_involution(self):
        y = functional_calculus(make_hermitian([[0, 1], [1, 0]]), lambda v: v**2)
        assert np.allclose(y.matrix, np.eye(2))

    def test_identity_function(self, rng):
        x = random_hermitian(5, rng)
        assert np.allclose(functional_calculus(x, lambda v: v).matrix, x.matrix)

    def test_non_vectorized_function(self):
        y = functional_calculus(make_hermitian(np.diag([1.0, 4.0])), lambda v: math.sqrt(v))
        assert np.allclose(y.matrix, np.diag([1, 2]))

    def test_seeded_eigendata_consistent(self, rng):
        x = random_hermitian(6, rng)
        y = absolute(x)
        w, v = y._eig
        assert np.allclose((v * w) @ v.conj().T, y.matrix)
        assert np.all(np.diff(w) >= 0)


class TestTensorEmbed:
    def test_kronecker(self):
        y = tensor_embed(make_hermitian(np.diag([1.0, -1.0])), (2, 2), 0)
        assert np.allclose(y.matrix, np.diag([1, 1, -1, -1]))

    def test_identity(self):
        assert np.allclose(tensor_embed(identity(3), (2, 3, 2), 1).matrix, np.eye(12))

    def test_trace_preserved(self):
        assert normalized_trace(tensor_embed(make_hermitian(np.diag([0.0, 2.0])), (3, 2), 1)) == 1.0

    def test_against_oracle_and_eigendata(self, rng):
        x = random_hermitian(3, rng)
        y = tensor_embed(x, (2, 3, 2), 1)
        assert np.allclose(y.matrix, kron_embed(x.matrix, (2, 3, 2), 1))
        w, v = y._eig
        assert np.allclose((v * w) @ v.conj().T, y.matrix)

    def test_embed_projection(self):
        p = make_projection(np.diag([1.0, 0.0]))
        assert np.allclose(embed_projection(p, (2, 2), 1).matrix, np.diag([1, 0, 1, 0]))

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            tensor_embed(identity(2), (3, 3), 0)
        with pytest.raises(DimMismatch):
            tensor_embed(identity(2), (2, 2), 2)


class TestArithmetic:
    def test_scalar_shift_seeds_eigendata(self, rng):
        x = random_hermitian(4, rng)
        _ = x._eig
        y = x - 0.3
        assert "_eig" in y.__dict__
        w, v = y._eig
        assert np.allclose((v * w) @ v.conj().T, y.matrix)

    def test_negation_and_scaling(self, rng):
        x = random_hermitian(4, rng)
        _ = x._eig
        for y in (-x, x * -2.0, 3 * x):
            w, v = y._eig
            assert np.all(np.diff(w) >= 0)
            assert np.allclose((v * w) @ v.conj().T, y.matrix)

    def test_sum_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            identity(2) + identity(3)


def test_projection_trace_is_rank_over_dim(rng):
    from qprob.harness.generators import haar_unitary
    from qprob.operator_core import Projection

    u = haar_unitary(7, rng)[:, :3]
    p = Projection(u @ u.conj().T)
    assert p.rank == 3 and p.trace() == 3 / 7
    assert (~p).trace() == 4 / 7

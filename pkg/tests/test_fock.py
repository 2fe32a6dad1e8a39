import math

import numpy as np
import pytest

from hetlab.errors import (BasisMismatchError, BranchCutError,
                           IllConditionedError, SingularMatrixError)
from hetlab.fock import (Mode, OperatorMatrix, ToleranceConfig, TwoModeBasis,
                         annihilator, coherent_state, commutator, embed,
                         floored_count, hermitian_power, identity,
                         log_roundtrip_residual, photon_projector,
                         principal_matrix_function, projected_residual,
                         safe_projector)


class TestBasis:
    def test_index_bijection(self):
        basis = TwoModeBasis(5, 7)
        seen = set()
        for p in range(5):
            for q in range(7):
                i = basis.index_of(p, q)
                assert basis.pair_of(i) == (p, q)
                seen.add(i)
        assert seen == set(range(basis.dim))

    def test_rejects_degenerate(self):
        with pytest.raises(ValueError):
            TwoModeBasis(1, 4)

    def test_out_of_range(self):
        basis = TwoModeBasis(3, 3)
        with pytest.raises(IndexError):
            basis.index_of(3, 0)
        with pytest.raises(IndexError):
            basis.pair_of(9)


class TestOperatorMatrix:
    def test_mismatched_bases_rejected(self):
        x = identity(TwoModeBasis(3, 3))
        y = identity(TwoModeBasis(3, 4))
        with pytest.raises(BasisMismatchError):
            _ = x + y
        with pytest.raises(BasisMismatchError):
            _ = x @ y

    def test_dag_and_norm(self):
        a = annihilator(4)
        assert np.allclose(a.dag().mat, a.mat.conj().T)
        assert a.norm() == pytest.approx(math.sqrt(3))


class TestAnnihilator:
    def test_d1_zero(self):
        assert np.all(annihilator(1).mat == 0)

    def test_d3_superdiagonal(self):
        a = annihilator(3).mat
        assert a[0, 1] == pytest.approx(1.0)
        assert a[1, 2] == pytest.approx(math.sqrt(2))
        assert np.count_nonzero(a) == 2

    def test_commutator_oracle_d3(self):
        # direct matrix-multiplication oracle
        a = annihilator(3)
        c = commutator(a, a.dag()).mat
        assert np.allclose(c, np.diag([1.0, 1.0, -2.0]))


class TestEmbed:
    def test_identity_embeds_to_identity(self):
        basis = TwoModeBasis(3, 4)
        one = OperatorMatrix((3,), np.eye(3, dtype=complex))
        assert np.allclose(embed(one, Mode.SIGNAL, basis).mat, np.eye(12))

    def test_signal_coupling(self):
        basis = TwoModeBasis(2, 2)
        a = embed(annihilator(2), Mode.SIGNAL, basis).mat
        # couples (1,q) -> (0,q)
        assert a[basis.index_of(0, 0), basis.index_of(1, 0)] == pytest.approx(1.0)
        assert a[basis.index_of(0, 1), basis.index_of(1, 1)] == pytest.approx(1.0)
        assert np.count_nonzero(a) == 2

    def test_cross_mode_commutator_vanishes(self):
        basis = TwoModeBasis(4, 4)
        a = embed(annihilator(4), Mode.SIGNAL, basis)
        bdag = embed(annihilator(4), Mode.IMAGE, basis).dag()
        assert commutator(a, bdag).norm() == 0.0

    def test_dimension_mismatch(self):
        basis = TwoModeBasis(3, 4)
        with pytest.raises(BasisMismatchError):
            embed(annihilator(4), Mode.SIGNAL, basis)


class TestProjectors:
    def test_margin_zero_is_identity(self):
        basis = TwoModeBasis(4, 4)
        assert np.allclose(safe_projector(basis, 0).mat, np.eye(16))

    def test_margin_two_rank_four(self):
        basis = TwoModeBasis(4, 4)
        proj = safe_projector(basis, 2)
        assert proj.rank == 4
        kept_pairs = {basis.pair_of(i) for i in proj.kept}
        assert kept_pairs == {(0, 0), (0, 1), (1, 0), (1, 1)}

    def test_nested_projectors_compose(self):
        basis = TwoModeBasis(5, 5)
        p1 = safe_projector(basis, 1).mat
        p2 = safe_projector(basis, 3).mat
        assert np.allclose(p1 @ p2, safe_projector(basis, 3).mat)

    def test_margin_too_large(self):
        with pytest.raises(ValueError):
            safe_projector(TwoModeBasis(4, 4), 4)

    def test_projector_is_idempotent_hermitian(self):
        proj = photon_projector(TwoModeBasis(5, 5), 3)
        assert np.allclose(proj.mat @ proj.mat, proj.mat)
        assert np.allclose(proj.mat, proj.mat.T)


class TestProjectedResidual:
    def test_equal_operators(self):
        basis = TwoModeBasis(4, 4)
        x = identity(basis)
        assert projected_residual(x, x, safe_projector(basis, 1)) == 0.0

    def test_scaled_identity_offset(self):
        basis = TwoModeBasis(4, 4)
        x = identity(basis)
        y = 1.001 * identity(basis)
        proj = safe_projector(basis, 1)
        # ||P(X-Y)P|| = 1e-3, ||PXP|| = 1 -> ratio 1e-3
        assert projected_residual(y, x, proj) == pytest.approx(1e-3 / 1.001)

    def test_edge_defect_excluded(self):
        basis = TwoModeBasis(6, 6)
        a = embed(annihilator(6), Mode.SIGNAL, basis)
        one = identity(basis)
        proj = safe_projector(basis, 1)
        assert projected_residual(commutator(a, a.dag()), one, proj) <= 1e-14


class TestHermitianPower:
    def test_exponent_one_reproduces(self):
        rng = np.random.default_rng(0)
        m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        h = OperatorMatrix((6,), m + m.conj().T)
        back = hermitian_power(h, 1.0)
        assert np.abs(back.mat - h.mat).max() <= 1e-12 * np.abs(h.mat).max()

    def test_diagonal_inverse_sqrt(self):
        h = OperatorMatrix((2,), np.diag([4.0, 9.0]).astype(complex))
        out = hermitian_power(h, -0.5)
        assert np.allclose(out.mat, np.diag([0.5, 1 / 3]))

    def test_pinv_projector_property(self):
        # H^(-1/2) H H^(-1/2) is the projector onto the retained eigenspace
        w = np.array([2.0, 1.0, 0.5, 1e-14])
        rng = np.random.default_rng(1)
        q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
        h = OperatorMatrix((4,), (q * w) @ q.T.astype(complex))
        inv_sqrt = hermitian_power(h, -0.5)
        proj = inv_sqrt @ h @ inv_sqrt
        expected = (q * np.array([1.0, 1.0, 1.0, 0.0])) @ q.T
        assert np.abs(proj.mat - expected).max() <= 1e-10
        assert floored_count(h, 1e-10) == 1

    def test_all_floored_raises(self):
        h = OperatorMatrix((2,), np.zeros((2, 2), dtype=complex))
        with pytest.raises(SingularMatrixError):
            hermitian_power(h, -0.5)

    def test_fractional_power_negative_spectrum(self):
        h = OperatorMatrix((2,), np.diag([1.0, -1.0]).astype(complex))
        with pytest.raises(BranchCutError):
            hermitian_power(h, 0.5)

    def test_sqrt_squares_back(self):
        rng = np.random.default_rng(2)
        m = rng.normal(size=(8, 8))
        h = OperatorMatrix((8,), (m @ m.T).astype(complex))
        root = hermitian_power(h, 0.5)
        assert np.abs((root @ root).mat - h.mat).max() <= 1e-10 * h.norm()


def _well_conditioned(seed, dim=8):
    """Random diagonalizable matrix with spectrum in the right half-plane."""
    rng = np.random.default_rng(seed)
    lam = rng.uniform(0.5, 3.0, dim) + 1j * rng.uniform(-1.0, 1.0, dim)
    q, _ = np.linalg.qr(rng.normal(size=(dim, dim))
                        + 1j * rng.normal(size=(dim, dim)))
    v = q + 0.1 * rng.normal(size=(dim, dim))
    return OperatorMatrix((dim,), (v * lam) @ np.linalg.inv(v))


class TestPrincipalMatrixFunction:
    def test_log_identity(self):
        m = OperatorMatrix((4,), np.eye(4, dtype=complex))
        assert principal_matrix_function(m, "log").norm() <= 1e-12

    def test_log_diagonal(self):
        m = OperatorMatrix((2,), np.diag([math.e, math.e ** 2]).astype(complex))
        out = principal_matrix_function(m, "log")
        assert np.allclose(out.mat, np.diag([1.0, 2.0]))

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_exp_log_roundtrip(self, seed):
        m = _well_conditioned(seed)
        assert log_roundtrip_residual(m) <= 1e-8

    def test_branch_cut_guard(self):
        m = OperatorMatrix((2,), np.diag([1.0, -1.0]).astype(complex))
        with pytest.raises(BranchCutError):
            principal_matrix_function(m, "log")

    def test_singular_guard(self):
        m = OperatorMatrix((2,), np.diag([1.0, 1e-9]).astype(complex))
        with pytest.raises(SingularMatrixError):
            principal_matrix_function(m, "inverse")

    def test_ill_conditioned_guard(self):
        jordan = np.array([[1.0, 1e6], [0.0, 1.0 + 1e-12]], dtype=complex)
        with pytest.raises(IllConditionedError):
            principal_matrix_function(OperatorMatrix((2,), jordan), "log",
                                      cond_limit=1e8)

    def test_exp_unguarded(self):
        m = OperatorMatrix((2,), np.diag([-1.0, 0.0]).astype(complex))
        out = principal_matrix_function(m, "exp")
        assert np.allclose(out.mat, np.diag([math.exp(-1), 1.0]))


class TestCoherentState:
    def test_vacuum(self):
        vec = coherent_state(0.0, 5)
        assert np.allclose(vec, [1, 0, 0, 0, 0])

    def test_mean_annihilation(self):
        # truncated-series oracle: <a> = gamma
        vec = coherent_state(0.5, 20)
        a = annihilator(20).mat
        assert abs(vec.conj() @ a @ vec - 0.5) <= 1e-8

    @pytest.mark.parametrize("gamma", [0.3, 0.7 + 0.2j, 1.0])
    def test_unit_norm(self, gamma):
        vec = coherent_state(gamma, 24)
        assert abs(np.linalg.norm(vec) - 1.0) <= 1e-12

    def test_tail_warning(self):
        with pytest.warns(UserWarning):
            coherent_state(3.0, 5)


class TestToleranceConfig:
    def test_defaults(self):
        tol = ToleranceConfig()
        assert tol.poly_tol == 1e-10 and tol.fn_tol == 1e-3
        assert tol.pinv_rel_tol == 1e-10 and tol.branch_eps == 1e-6

    def test_positivity(self):
        with pytest.raises(ValueError):
            ToleranceConfig(poly_tol=0.0)

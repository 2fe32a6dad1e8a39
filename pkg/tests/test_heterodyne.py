import math

import numpy as np
import pytest

from hetlab.fock import (Mode, ToleranceConfig, TwoModeBasis, annihilator,
                         commutator, embed, identity, photon_projector,
                         projected_residual, safe_projector, zero)
from hetlab.heterodyne import (HeterodyneParams, build_psi, casimir,
                               caves_algebra, quadratures, rotated_modes,
                               su11_generators)
from hetlab.rns import number_diff

BASIS = TwoModeBasis(10, 10)
P2 = safe_projector(BASIS, 2)


def raw_modes(basis=BASIS):
    a = embed(annihilator(basis.d_a), Mode.SIGNAL, basis)
    b = embed(annihilator(basis.d_b), Mode.IMAGE, basis)
    return a, b


class TestParams:
    def test_balanced_iff_mu_one(self):
        p = HeterodyneParams(1.3, 1.3)
        assert p.is_balanced and p.mu == pytest.approx(1.0) and p.k == 0.0
        q = HeterodyneParams(1.2, 0.8)
        assert not q.is_balanced
        assert q.mu == pytest.approx(math.sqrt(0.8 / 1.2))
        assert q.k == pytest.approx(1 - q.mu ** 2)

    def test_frequency_parametrization(self):
        p = HeterodyneParams.from_frequency_ratio(0.1)
        assert (p.A, p.B) == (1.1, 0.9)
        with pytest.raises(ValueError):
            HeterodyneParams.from_frequency_ratio(1.5)

    def test_validation(self):
        with pytest.raises(ValueError):
            HeterodyneParams(0.0, 1.0)
        with pytest.raises(ValueError):
            HeterodyneParams(1.0, -0.1)


class TestRotatedModes:
    def test_zero_angle_is_plain(self):
        at, bt, atd, btd = rotated_modes(HeterodyneParams(1, 1, 0.0, 0.0), BASIS)
        a, b = raw_modes()
        assert (at - a).norm() <= 1e-12
        assert (btd - b.dag()).norm() <= 1e-12

    def test_quarter_turn_is_mode_phase(self):
        at, *_ = rotated_modes(HeterodyneParams(1, 1, math.pi / 2, 0.0), BASIS)
        a, _ = raw_modes()
        assert (at - 1j * a).norm() <= 1e-12

    @pytest.mark.parametrize("alpha,beta", [(0.3, -0.8), (1.2, 2.5)])
    def test_phase_form(self, alpha, beta):
        at, bt, atd, btd = rotated_modes(HeterodyneParams(1, 1, alpha, beta), BASIS)
        a, b = raw_modes()
        assert (at - np.exp(1j * alpha) * a).norm() <= 1e-12
        assert (btd - np.exp(1j * beta) * b.dag()).norm() <= 1e-12

    def test_commutation_rule_on_interior(self):
        params = HeterodyneParams(1.0, 1.0, 0.7, -0.4)
        at, bt, atd, btd = rotated_modes(params, BASIS)
        one = identity(BASIS)
        proj = safe_projector(BASIS, 1)
        assert projected_residual(commutator(at, atd), one, proj) <= 1e-12
        assert projected_residual(commutator(bt, btd), one, proj) <= 1e-12
        assert commutator(at, btd).norm() <= 1e-12
        assert commutator(at, bt).norm() <= 1e-12


class TestBuildPsi:
    def test_balanced_zero_angles_is_sum(self):
        psi, _ = build_psi(HeterodyneParams(1, 1, 0, 0), BASIS)
        a, b = raw_modes()
        assert (psi - (a + b.dag())).norm() <= 1e-12

    @pytest.mark.parametrize("A,B", [(1.5, 0.5), (1.0, 1.0), (2.0, 0.3)])
    def test_commutator_value(self, A, B):
        psi, psid = build_psi(HeterodyneParams(A, B, 0.2, 0.4), BASIS)
        target = (A - B) * identity(BASIS)
        assert projected_residual(commutator(psi, psid), target, P2) <= 1e-10

    def test_frequency_form(self):
        r = 0.1
        psi, _ = build_psi(HeterodyneParams.from_frequency_ratio(r), BASIS)
        a, b = raw_modes()
        direct = math.sqrt(1 + r) * a + math.sqrt(1 - r) * b.dag()
        assert (psi - direct).norm() <= 1e-12


class TestQuadratures:
    def test_hermitian(self):
        psi, _ = build_psi(HeterodyneParams(1.3, 0.6, 0.5, 0.1), BASIS)
        y1, y2 = quadratures(psi)
        assert (y1 - y1.dag()).norm() <= 1e-12
        assert (y2 - y2.dag()).norm() <= 1e-12

    def test_balanced_quadratures_commute(self):
        psi, _ = build_psi(HeterodyneParams(1, 1, 0, 0), BASIS)
        y1, y2 = quadratures(psi)
        assert projected_residual(commutator(y1, y2), zero(BASIS), P2) <= 1e-12

    def test_unbalanced_commutator(self):
        psi, _ = build_psi(HeterodyneParams.from_frequency_ratio(0.1), BASIS)
        y1, y2 = quadratures(psi)
        target = 0.1j * identity(BASIS)
        assert projected_residual(commutator(y1, y2), target, P2) <= 1e-10

    def test_squared_amplitude_balanced(self):
        psi, psid = build_psi(HeterodyneParams(1, 1, 0, 0), BASIS)
        y1, y2 = quadratures(psi)
        assert projected_residual(y1 @ y1 + y2 @ y2, psi @ psid, P2) <= 1e-10


class TestSU11:
    def test_algebra_relations(self):
        g = su11_generators(BASIS)
        assert projected_residual(commutator(g.j0, g.j1), 1j * g.j2, P2) <= 1e-10
        assert projected_residual(commutator(g.j0, g.j2), -1j * g.j1, P2) <= 1e-10
        assert projected_residual(commutator(g.j1, g.j2), -1j * g.j0, P2) <= 1e-10

    def test_parabolic_generator(self):
        g = su11_generators(BASIS)
        assert projected_residual(commutator(g.kplus, g.j2), -1j * g.kplus,
                                  P2) <= 1e-10

    def test_parabolic_realization(self):
        params = HeterodyneParams(1.0, 1.0, 0.0, 0.0)
        psi, psid = build_psi(params, BASIS)
        g = su11_generators(BASIS)
        assert projected_residual(0.5 * (psid @ psi), g.kplus, P2) <= 1e-10

    def test_hermiticity(self):
        g = su11_generators(BASIS)
        for op in (g.j0, g.j1, g.j2, g.n1, g.n2, g.nhat):
            assert (op - op.dag()).norm() <= 1e-12
        assert (g.jplus.dag() - g.jminus).norm() <= 1e-12
        assert (g.lplus.dag() - g.lminus).norm() <= 1e-12
        assert (g.kplus - (g.j0 + g.j1)).norm() <= 1e-12


class TestCasimir:
    def test_against_number_form(self):
        g = su11_generators(BASIS)
        cas = casimir(g)
        target = 0.25 * (g.nhat @ g.nhat - identity(BASIS))
        assert projected_residual(cas, target, safe_projector(BASIS, 3)) <= 1e-10

    def test_vacuum_expectation(self):
        cas = casimir(su11_generators(BASIS))
        vac = np.zeros(BASIS.dim)
        vac[BASIS.index_of(0, 0)] = 1.0
        assert vac @ cas.mat @ vac == pytest.approx(-0.25)

    def test_state_eigenvalue(self):
        cas = casimir(su11_generators(BASIS))
        vec = np.zeros(BASIS.dim)
        vec[BASIS.index_of(3, 1)] = 1.0
        assert (vec @ cas.mat @ vec).real == pytest.approx(0.75)


class TestCavesAlgebra:
    def test_ladder_number_relations(self):
        g = caves_algebra(BASIS)
        assert projected_residual(commutator(g.lplus, g.lminus),
                                  -2.0 * g.n1, P2) <= 1e-10
        assert projected_residual(commutator(g.lplus, g.n1),
                                  -1.0 * g.lplus, P2) <= 1e-10
        assert projected_residual(commutator(g.lminus, g.n1),
                                  g.lminus, P2) <= 1e-10

    def test_maximal_ideal(self):
        g = caves_algebra(BASIS)
        for op in (commutator(g.lplus, g.n2), commutator(g.lminus, g.n2),
                   commutator(g.n1, g.n2)):
            assert projected_residual(op, zero(BASIS), P2) <= 1e-10

    def test_product_expansions(self):
        params = HeterodyneParams(1.3, 0.4, 0.7, -0.3)
        psi, psid = build_psi(params, BASIS)
        g = su11_generators(BASIS, params, rotated=True)
        a_, b_ = params.A, params.B
        root = math.sqrt(a_ * b_)
        one = identity(BASIS)
        rhs_right = (a_ * (g.n1 + g.n2 + one) + b_ * (g.n1 - g.n2 - one)
                     + root * (g.lplus + g.lminus))
        rhs_left = (a_ * (g.n1 + g.n2) + b_ * (g.n1 - g.n2)
                    + root * (g.lplus + g.lminus))
        assert projected_residual(psi @ psid, rhs_right, P2) <= 1e-10
        assert projected_residual(psid @ psi, rhs_left, P2) <= 1e-10
        assert projected_residual(psi @ psid - psid @ psi,
                                  (a_ - b_) * one, P2) <= 1e-10

    def test_balanced_collapse(self):
        params = HeterodyneParams(1.7, 1.7, 0.0, 0.0)
        psi, psid = build_psi(params, BASIS)
        g = su11_generators(BASIS)
        target = params.A * g.kplus
        assert projected_residual(0.5 * (psi @ psid), target, P2) <= 1e-10
        assert projected_residual(0.5 * (psid @ psi), target, P2) <= 1e-10


class TestRandomizedSweep:
    def test_commutator_identity_over_twenty_points(self):
        rng = np.random.default_rng(0)
        one = identity(BASIS)
        for _ in range(20):
            a_ = float(rng.uniform(0.2, 2.5))
            b_ = float(rng.uniform(0.0, 2.5))
            alpha = float(rng.uniform(-math.pi, math.pi))
            beta = float(rng.uniform(-math.pi, math.pi))
            psi, psid = build_psi(HeterodyneParams(a_, b_, alpha, beta), BASIS)
            target = (a_ - b_) * one
            assert projected_residual(commutator(psi, psid), target, P2) <= 1e-10

    def test_rotation_invariance_of_residuals(self):
        base = None
        for alpha, beta in [(0.0, 0.0), (0.5, 0.0), (0.0, 1.1), (2.0, -2.0)]:
            params = HeterodyneParams(1.2, 0.7, alpha, beta)
            g = su11_generators(BASIS, params, rotated=True)
            res = projected_residual(commutator(g.j0, g.j1), 1j * g.j2, P2)
            if base is None:
                base = res
            assert abs(res - base) <= 1e-10

    def test_rotated_and_unrotated_generators_agree(self):
        params = HeterodyneParams(1.0, 1.0, 0.9, 0.3)
        plain = su11_generators(BASIS)
        rot = su11_generators(BASIS, params, rotated=True)
        res_plain = projected_residual(commutator(plain.j1, plain.j2),
                                       -1j * plain.j0, P2)
        res_rot = projected_residual(commutator(rot.j1, rot.j2),
                                     -1j * rot.j0, P2)
        assert abs(res_plain - res_rot) <= 1e-10


def test_number_difference_via_generators():
    g = su11_generators(BASIS)
    assert (g.nhat - number_diff(BASIS)).norm() <= 1e-12

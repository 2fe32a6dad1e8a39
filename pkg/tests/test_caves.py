import math

import numpy as np
import pytest

from hetlab import calibration
from hetlab.caves import (build_tz, c0_s0, half_shift_symbol, k_expansion,
                          s_operator, sn_commutator, unitarity_products)
from hetlab.fock import (ToleranceConfig, TwoModeBasis, commutator, identity,
                         photon_projector, projected_residual, safe_projector,
                         zero)
from hetlab.heterodyne import HeterodyneParams, build_psi
from hetlab.rns import number_diff, r_operator, trig_operators

TOL = ToleranceConfig()


def caves_params(k):
    return HeterodyneParams.from_frequency_ratio(k / (2 - k))


class TestHalfShiftSymbol:
    def test_functional_equation(self):
        x = np.linspace(0.3, 50.0, 400)
        for k in (0.01, 0.1, 0.3):
            lhs = half_shift_symbol(x, k) * half_shift_symbol(x + k, k)
            rhs = 0.5 * (1 / x + 1 / (x + k))
            assert np.max(np.abs(lhs - rhs)) <= 1e-12

    def test_commuting_limit(self):
        x = np.linspace(0.5, 20.0, 100)
        assert np.max(np.abs(half_shift_symbol(x, 1e-12) - x ** -0.5)) <= 1e-6
        assert np.allclose(half_shift_symbol(x, 0.0), x ** -0.5)


class TestBuildTZ:
    def test_balanced_commute(self):
        basis = TwoModeBasis(10, 10)
        t, z = build_tz(HeterodyneParams(1.0, 1.0), basis)
        proj = safe_projector(basis, 2)
        assert projected_residual(commutator(t, z), zero(basis), proj) <= 1e-10

    def test_unbalanced_value(self):
        basis = TwoModeBasis(10, 10)
        params = HeterodyneParams(1.2, 0.8)
        assert params.k == pytest.approx(1 / 3)
        t, z = build_tz(params, basis)
        proj = safe_projector(basis, 2)
        target = (1 / 3) * identity(basis)
        assert projected_residual(commutator(t, z), target, proj) <= 1e-10
        assert (z - t.dag()).norm() <= 1e-12

    def test_psi_scaling(self):
        basis = TwoModeBasis(8, 8)
        params = HeterodyneParams(1.44, 0.81, 0.3, -0.2)
        t, z = build_tz(params, basis)
        psi, psid = build_psi(params, basis)
        assert (psi - 1.2 * t).norm() <= 1e-12
        assert (psid - 1.2 * z).norm() <= 1e-12


class TestSOperator:
    def test_balanced_reproduces_polar(self):
        basis = TwoModeBasis(12, 12)
        params = HeterodyneParams(1.0, 1.0)
        ops = s_operator(params, basis, TOL)
        psi, _ = build_psi(params, basis)
        r = r_operator(psi, TOL)
        proj = photon_projector(basis, 4)
        assert projected_residual(ops.s, r, proj) <= 1e-10

    def test_square_matches_argument(self):
        basis = TwoModeBasis(12, 12)
        ops = s_operator(caves_params(0.1), basis, TOL)
        x = 0.5 * (ops.t @ ops.z + (ops.t @ ops.z).dag())
        from hetlab.fock import hermitian_power
        pz = hermitian_power(x, -1.0, TOL.pinv_rel_tol) @ ops.t
        arg = 0.5 * (ops.t @ pz + pz @ ops.t)
        proj = photon_projector(basis, 4)
        assert projected_residual(ops.s @ ops.s, arg, proj) <= 5e-3

    def test_not_unitary_off_balance(self):
        basis = TwoModeBasis(12, 12)
        ops = s_operator(caves_params(0.1), basis, TOL)
        proj = photon_projector(basis, 4)
        one = identity(basis)
        assert np.linalg.norm(proj.compress(ops.s @ ops.sdag - one), 2) > 0.0

    def test_forms_agree(self):
        basis = TwoModeBasis(12, 12)
        for k in (0.0, 0.1):
            ops = s_operator(caves_params(k) if k else HeterodyneParams(1, 1),
                             basis, TOL)
            proj = photon_projector(basis, 4)
            regime = "sw" if k == 0.0 else "caves"
            assert projected_residual(ops.s_psi_form, ops.s, proj) <= 1e-10
            lim = calibration.SLACK * calibration.FN_EXPECTED["C1-vs-C17"][regime][12]
            assert projected_residual(ops.s_expanded_form, ops.s, proj) <= lim

    def test_pinv_commutator_identities(self):
        basis = TwoModeBasis(12, 12)
        ops = s_operator(caves_params(0.1), basis, TOL)
        from hetlab.fock import hermitian_power
        x = 0.5 * (ops.t @ ops.z + (ops.t @ ops.z).dag())
        pz = hermitian_power(x, -1.0, TOL.pinv_rel_tol) @ ops.t
        proj = photon_projector(basis, 4)
        k = ops.k
        res = projected_residual(commutator(pz, ops.t), k * (pz @ pz), proj)
        assert res <= calibration.SLACK * calibration.FN_EXPECTED["C11"]["caves"][12]


class TestUnitarityProducts:
    def test_balanced_closed_forms_are_identity(self):
        basis = TwoModeBasis(10, 10)
        ops = s_operator(HeterodyneParams(1.0, 1.0), basis, TOL)
        proj = photon_projector(basis, 4)
        rep = unitarity_products(ops, TOL, proj)
        one = identity(basis)
        assert (rep.ss_dag_closed - one).norm() <= 1e-12
        assert (rep.sdag_s_closed - one).norm() <= 1e-12

    def test_direct_vs_closed(self):
        basis = TwoModeBasis(12, 12)
        ops = s_operator(caves_params(0.1), basis, TOL)
        proj = photon_projector(basis, 4)
        rep = unitarity_products(ops, TOL, proj)
        assert rep.res_ss_dag <= calibration.SLACK * \
            calibration.FN_EXPECTED["C9-direct-vs-closed"]["caves"][12]
        assert rep.res_sdag_s <= calibration.SLACK * \
            calibration.FN_EXPECTED["C10-direct-vs-closed"]["caves"][12]

    def test_symbol_deficit_is_second_order(self):
        # the closed form predicts SS+ = 1 + k^2/(8x(x+k)) + O(k^3) on the
        # retained spectrum, so halving k quarters the deficit
        x = np.linspace(1.0, 9.0, 200)
        deficits = []
        for k in (0.02, 0.04):
            vals = x * half_shift_symbol(x, k) ** 2
            deficits.append(np.max(np.abs(vals - 1.0)))
        ratio = deficits[1] / deficits[0]
        assert 3.5 <= ratio <= 4.5


class TestC0S0:
    def test_balanced_properties(self):
        basis = TwoModeBasis(12, 12)
        ops = s_operator(HeterodyneParams(1.0, 1.0), basis, TOL)
        proj = photon_projector(basis, 4)
        rep = c0_s0(ops, TOL, proj)
        assert rep.commutator_residual <= calibration.SLACK * \
            calibration.FN_EXPECTED["C21"]["sw"][12]
        assert rep.pythagoras_residual <= calibration.SLACK * \
            calibration.FN_EXPECTED["C22"]["sw"][12]

    def test_unbalanced_closed_forms(self):
        basis = TwoModeBasis(12, 12)
        ops = s_operator(caves_params(0.1), basis, TOL)
        proj = photon_projector(basis, 4)
        rep = c0_s0(ops, TOL, proj)
        assert rep.commutator_residual <= calibration.SLACK * \
            calibration.FN_EXPECTED["C23"]["caves"][12]
        assert rep.pythagoras_residual <= calibration.SLACK * \
            calibration.FN_EXPECTED["C24"]["caves"][12]

    def test_balanced_collapse_to_trig(self):
        basis = TwoModeBasis(12, 12)
        params = HeterodyneParams(1.0, 1.0)
        ops = s_operator(params, basis, TOL)
        psi, _ = build_psi(params, basis)
        c, s = trig_operators(r_operator(psi, TOL))
        proj = photon_projector(basis, 4)
        assert projected_residual(ops.c0, c, proj) <= 1e-10
        assert projected_residual(ops.s0, s, proj) <= 1e-10


class TestShiftNumberCommutator:
    def test_balanced_limit(self):
        basis = TwoModeBasis(12, 12)
        ops = s_operator(HeterodyneParams(1.0, 1.0), basis, TOL)
        proj = photon_projector(basis, 4)
        rep = sn_commutator(ops, number_diff(basis), TOL, proj)
        assert rep.vs_s <= 1e-3

    def test_grading_makes_commutator_exact(self):
        basis = TwoModeBasis(12, 12)
        for k in (0.02, 0.1, 0.2):
            ops = s_operator(caves_params(k), basis, TOL)
            proj = photon_projector(basis, 4)
            rep = sn_commutator(ops, number_diff(basis), TOL, proj)
            assert rep.vs_s <= 1e-10

    def test_printed_form_mismatch_reported(self):
        # the published closed form mixes grades; the residual is O(1)
        basis = TwoModeBasis(12, 12)
        ops = s_operator(caves_params(0.1), basis, TOL)
        proj = photon_projector(basis, 4)
        rep = sn_commutator(ops, number_diff(basis), TOL, proj)
        assert math.isfinite(rep.vs_printed_rhs)
        assert rep.vs_printed_rhs > 0.5


class TestSwDeparture:
    def test_linear_scaling_ratio(self):
        basis = TwoModeBasis(12, 12)
        proj = photon_projector(basis, 4)
        psi_sw, _ = build_psi(HeterodyneParams(1, 1), basis)
        r = r_operator(psi_sw, TOL)
        norms = {}
        for k in (0.02, 0.04):
            ops = s_operator(caves_params(k), basis, TOL)
            norms[k] = np.linalg.norm(proj.compress(ops.s - r), 2)
        ratio = norms[0.04] / norms[0.02]
        assert 1.5 <= ratio <= 2.5


class TestKExpansion:
    def test_small_ratio_values(self):
        exact, first = k_expansion(0.01)
        assert exact == pytest.approx(0.019801980198019802)
        assert first == pytest.approx(0.0198)

    def test_remainder_bound_grid(self):
        for r in (0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3):
            exact, first = k_expansion(r)
            assert abs(exact - first) <= 2 * r ** 3

    def test_vanishing_limit(self):
        exact, first = k_expansion(1e-9)
        assert exact <= 3e-9 and first <= 3e-9

    def test_domain(self):
        with pytest.raises(ValueError):
            k_expansion(0.0)
        with pytest.raises(ValueError):
            k_expansion(1.0)

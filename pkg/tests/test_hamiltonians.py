import math

import numpy as np
import pytest
from scipy.special import jv

from pmcomb import symplectic as sp
from pmcomb.exceptions import InvalidSpecError
from pmcomb.hamiltonians import (
    CombSpec,
    Scheme,
    ToneSpec,
    build_state,
    combined_generator,
    evolution,
    pm_generator,
    pm_symplectic_bessel_reference,
    tms_generator,
)


class TestSpecs:
    @pytest.mark.parametrize("N", [0, 3, 15, -2, 2.5])
    def test_bad_N(self, N):
        with pytest.raises(InvalidSpecError):
            CombSpec(N, 1.0)

    def test_negative_r(self):
        with pytest.raises(InvalidSpecError):
            CombSpec(4, -0.1)

    def test_pairing_is_perfect_matching(self):
        comb = CombSpec(12, 1.0)
        assert comb.p == 13
        seen = [m for pair in comb.epr_pairs() for m in pair]
        assert sorted(seen) == list(range(1, 13))
        assert all(a != b for a, b in comb.epr_pairs())

    def test_tone_defaults(self):
        t = ToneSpec(3, 0.2)
        assert t.phi == pytest.approx(math.pi / 2)
        assert t.alpha == pytest.approx(0.1)

    @pytest.mark.parametrize("kw", [dict(omega=0, m=0.1), dict(omega=1, m=-0.1), dict(omega=1.5, m=0.1)])
    def test_bad_tone(self, kw):
        with pytest.raises(InvalidSpecError):
            ToneSpec(**kw)

    def test_tone_too_wide(self):
        with pytest.raises(InvalidSpecError):
            pm_generator(16, [ToneSpec(16, 0.1)])


class TestTMS:
    def test_zero_gain(self):
        assert not tms_generator(CombSpec(6, 0.0)).any()

    def test_two_mode_variances(self):
        sigma = build_state(CombSpec(2, 1.0), [], Scheme.EXTRINSIC)
        q_diff = np.array([1, -1, 0, 0]) / math.sqrt(2)
        p_sum = np.array([0, 0, 1, 1]) / math.sqrt(2)
        assert q_diff @ sigma @ q_diff == pytest.approx(math.exp(-2) / 2, rel=1e-12)
        assert p_sum @ sigma @ p_sum == pytest.approx(math.exp(-2) / 2, rel=1e-12)

    def test_pairs_decouple(self):
        G = tms_generator(CombSpec(4, 0.7))
        coupled = {(i % 4, j % 4) for i, j in zip(*np.nonzero(G))}
        assert coupled == {(0, 3), (3, 0), (1, 2), (2, 1)}

    def test_equations_of_motion(self):
        G = tms_generator(CombSpec(4, 0.7))
        # dQ_1/dt = r Q_4, dP_1/dt = -r P_4
        assert G[0, 3] == 0.7 and G[4, 7] == -0.7


class TestPM:
    def test_zero_index(self):
        assert not pm_generator(10, [ToneSpec(1, 0.0)]).any()

    def test_single_tone_orthogonal_and_symplectic(self):
        S = sp.expm(pm_generator(40, [ToneSpec(1, 0.5)]))
        np.testing.assert_allclose(S @ S.T, np.eye(80), atol=1e-13)
        assert sp.is_symplectic(S)[0]

    def test_linear_in_tones(self):
        a, b = ToneSpec(1, 0.2), ToneSpec(10, 0.2)
        np.testing.assert_array_equal(pm_generator(30, [a, b]), pm_generator(30, [a]) + pm_generator(30, [b]))

    def test_quarter_phase_equations(self):
        G = pm_generator(6, [ToneSpec(2, 0.4)])
        # dQ_j/dt = alpha (Q_{j+2} - Q_{j-2}), alpha = 0.2
        assert G[2, 4] == pytest.approx(0.2) and G[2, 0] == pytest.approx(-0.2)
        assert G[8, 10] == pytest.approx(0.2)
        A, B, C, D = sp.blocks(G)
        assert not B.any() and not C.any()

    def test_quarter_phase_evolution_block_diagonal(self):
        S = sp.expm(pm_generator(12, [ToneSpec(1, 0.7), ToneSpec(3, 0.7)]))
        A, B, C, D = sp.blocks(S)
        assert np.abs(B).max() < 1e-15 and np.abs(C).max() < 1e-15
        np.testing.assert_allclose(A, D, atol=1e-15)

    def test_general_phase_couples_quadratures(self):
        G = pm_generator(8, [ToneSpec(1, 0.4, phi=0.0)])
        assert np.abs(sp.blocks(G)[1]).max() > 0
        assert sp.is_hamiltonian(G)[0]

    def test_general_phase_matches_mode_operator_flow(self):
        # complex oracle: da/dt = C a with C from the Heisenberg equation of H_PM
        N, W, m, phi = 7, 2, 0.6, 0.9
        alpha = m / 2
        C = np.zeros((N, N), complex)
        for k in range(N):
            if k - W >= 0:
                C[k, k - W] = -1j * alpha * np.exp(-1j * phi)
            if k + W < N:
                C[k, k + W] = -1j * alpha * np.exp(1j * phi)
        Ua = np.array(__import__("scipy.linalg").linalg.expm(C))
        expected = np.block([[Ua.real, -Ua.imag], [Ua.imag, Ua.real]])
        S = sp.expm(pm_generator(N, [ToneSpec(W, m, phi)]))
        np.testing.assert_allclose(S, expected, atol=1e-14)

    @pytest.mark.parametrize("phi", [0.0, 0.3, math.pi / 2, 2.0, math.pi])
    def test_hamiltonian_condition(self, phi):
        comb = CombSpec(10, 0.8)
        for G in (tms_generator(comb), pm_generator(10, [ToneSpec(1, 0.3, phi), ToneSpec(4, 0.1)]),
                  combined_generator(comb, [ToneSpec(2, 0.5, phi)])):
            ok, residual = sp.is_hamiltonian(G, tol=1e-12)
            assert ok, residual

    def test_passive_preserves_photon_number(self):
        sigma = build_state(CombSpec(12, 1.0), [], "extrinsic")
        S = sp.expm(pm_generator(12, [ToneSpec(1, 0.6), ToneSpec(5, 0.6)]))
        assert np.trace(sp.apply_symplectic(sigma, S)) == pytest.approx(np.trace(sigma), abs=1e-9)


class TestCombined:
    def test_no_tones(self):
        comb = CombSpec(6, 0.5)
        np.testing.assert_array_equal(combined_generator(comb, []), tms_generator(comb))

    def test_no_squeezing(self):
        tones = [ToneSpec(1, 0.3)]
        np.testing.assert_array_equal(combined_generator(CombSpec(6, 0.0), tones), pm_generator(6, tones))

    def test_symplectic(self):
        S = sp.expm(combined_generator(CombSpec(8, 0.4), [ToneSpec(1, 0.1)]))
        assert sp.is_symplectic(S, tol=1e-9)[0]


class TestBuildState:
    def test_schemes_agree_without_modulation(self):
        comb = CombSpec(10, 1.3)
        ext = build_state(comb, [ToneSpec(1, 0.0)], Scheme.EXTRINSIC)
        intr = build_state(comb, [ToneSpec(1, 0.0)], Scheme.INTRINSIC)
        np.testing.assert_allclose(ext, intr, atol=1e-12)

    @pytest.mark.parametrize("scheme", ["extrinsic", "intrinsic"])
    def test_unsqueezed_is_vacuum(self, scheme):
        sigma = build_state(CombSpec(10, 0.0), [ToneSpec(1, 0.9), ToneSpec(3, 0.4)], scheme)
        np.testing.assert_allclose(sigma, 0.5 * np.eye(20), atol=1e-14)

    def test_tone_order_irrelevant(self):
        comb = CombSpec(20, 1.0)
        a = build_state(comb, [ToneSpec(1, 0.1), ToneSpec(4, 0.2)], "extrinsic")
        b = build_state(comb, [ToneSpec(4, 0.2), ToneSpec(1, 0.1)], "extrinsic")
        np.testing.assert_allclose(a, b, atol=1e-13)

    @pytest.mark.parametrize("scheme", ["extrinsic", "intrinsic"])
    def test_pure(self, scheme):
        sigma = build_state(CombSpec(16, 2.3), [ToneSpec(1, 0.1), ToneSpec(5, 0.1)], scheme)
        sp.check_covariance(sigma, pure=True)

    def test_extrinsic_is_pm_after_tms(self):
        comb, tones = CombSpec(8, 0.9), [ToneSpec(1, 0.3)]
        S = evolution(comb, tones, "extrinsic")
        expected = sp.expm(pm_generator(8, tones)) @ sp.expm(tms_generator(comb))
        np.testing.assert_allclose(S, expected, atol=1e-14)


class TestBesselReference:
    def test_identity_at_zero_index(self):
        np.testing.assert_array_equal(pm_symplectic_bessel_reference(0.0, 12), np.eye(12))

    def test_deep_interior_is_classical_spectrum(self):
        N, m = 200, 0.5
        M = pm_symplectic_bessel_reference(m, N)
        j = np.arange(1, N + 1)[:, None]
        k = np.arange(1, N + 1)[None, :]
        interior = slice(50, 150)
        np.testing.assert_allclose(M[interior], jv(k - j, m)[interior], atol=1e-8)

    @pytest.mark.parametrize("m", [0.1, 0.5, 1.0])
    def test_half_line_matches_lower_half_of_truncated_comb(self, m):
        N = 200
        A = sp.blocks(sp.expm(pm_generator(N, [ToneSpec(1, m)])))[0]
        M = pm_symplectic_bessel_reference(m, N, "half_line")
        assert np.abs(A - M)[: N // 2].max() < 1e-12
        # the single-wall formula ignores the upper comb edge
        assert np.abs(A - M)[-5:].max() > 1e-4

    @pytest.mark.parametrize("N,m", [(12, 0.5), (40, 3.0), (200, 0.5)])
    def test_box_images_exact(self, N, m):
        A = sp.blocks(sp.expm(pm_generator(N, [ToneSpec(1, m)])))[0]
        np.testing.assert_allclose(pm_symplectic_bessel_reference(m, N, "box"), A, atol=1e-12)

    def test_bad_boundary(self):
        with pytest.raises(InvalidSpecError):
            pm_symplectic_bessel_reference(0.1, 4, "periodic")

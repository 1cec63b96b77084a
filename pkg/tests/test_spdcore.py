import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrstress import errors
from corrstress.spdcore import (
    SpdMatrix,
    TangentDirection,
    congruence,
    cov_to_corr,
    eigh_desc,
    equalizing_basis,
    spd_inv_sqrt,
    spd_log,
    spd_sqrt,
    sym_exp,
    validate_spd,
)

from conftest import UNIT, random_spd, random_traceless, rel_fro

seeds = st.integers(0, 2**32 - 1)


class TestValidate:
    def test_identity(self):
        s = validate_spd(np.eye(2))
        assert isinstance(s, SpdMatrix)
        np.testing.assert_allclose(s.spectrum, [1.0, 1.0])

    def test_bond_equity_spectrum(self):
        s = validate_spd(UNIT * np.diag([144.0, 36.0]))
        np.testing.assert_allclose(s.spectrum, [0.0144, 0.0036], rtol=1e-14)

    def test_indefinite(self):
        # char. polynomial (1 - l)^2 - 4 has roots 3 and -1
        with pytest.raises(errors.NotPositiveDefinite, match="-1"):
            validate_spd([[1.0, 2.0], [2.0, 1.0]])

    def test_not_square(self):
        with pytest.raises(errors.NotSquare):
            validate_spd(np.ones((2, 3)))

    def test_not_symmetric(self):
        with pytest.raises(errors.NotSymmetric):
            validate_spd([[1.0, 0.5], [0.0, 1.0]])

    def test_tiny_asymmetry_is_symmetrized(self):
        s = validate_spd([[1.0, 0.5 + 1e-12], [0.5, 1.0]])
        assert s.entries[0, 1] == s.entries[1, 0]

    def test_conditioning_guard(self):
        with pytest.raises(errors.NotPositiveDefinite):
            validate_spd(np.diag([1.0, 1e-13]))
        validate_spd(np.diag([1.0, 1e-13]), rel_tol=1e-14)

    def test_non_finite(self):
        with pytest.raises(errors.NotPositiveDefinite):
            validate_spd([[np.nan, 0.0], [0.0, 1.0]])

    def test_read_only(self):
        s = validate_spd(np.eye(3))
        with pytest.raises(ValueError):
            s.entries[0, 0] = 2.0

    def test_errors_are_value_errors(self):
        assert issubclass(errors.NotPositiveDefinite, ValueError)
        assert issubclass(errors.NotPositiveDefinite, errors.CorrStressError)

    def test_eigh_desc_sign_convention(self, rng):
        w, v = eigh_desc(random_spd(rng, 5))
        assert np.all(np.diff(w) <= 0)
        big = v[np.argmax(np.abs(v), axis=0), np.arange(5)]
        assert np.all(big > 0)


class TestTangentDirection:
    def test_trace_rejected(self):
        with pytest.raises(errors.NotTraceless):
            TangentDirection(np.diag([1.0, 0.0]))

    def test_allow_trace(self):
        x = TangentDirection(np.diag([1.0, 0.0]), allow_trace=True)
        assert not x.is_traceless

    def test_projected(self):
        x = TangentDirection.projected(np.diag([3.0, 1.0]))
        np.testing.assert_allclose(x.entries, np.diag([1.0, -1.0]))
        assert x.is_traceless


class TestSqrt:
    def test_identity(self):
        np.testing.assert_array_equal(spd_sqrt(np.eye(3)).entries, np.eye(3))

    def test_vols(self):
        r = spd_sqrt(np.diag([0.0144, 0.0036]))
        np.testing.assert_allclose(r.entries, np.diag([0.12, 0.06]), rtol=1e-14, atol=1e-17)

    def test_two_by_two(self):
        # eigenvalues 3, 1 on (1, 1)/sqrt2 and (1, -1)/sqrt2
        r3 = np.sqrt(3.0)
        expected = 0.5 * np.array([[r3 + 1, r3 - 1], [r3 - 1, r3 + 1]])
        r = spd_sqrt([[2.0, 1.0], [1.0, 2.0]]).entries
        np.testing.assert_allclose(r, expected, rtol=1e-14)
        np.testing.assert_allclose(r @ r, [[2.0, 1.0], [1.0, 2.0]], rtol=1e-14)

    def test_inv_sqrt(self):
        np.testing.assert_array_equal(spd_inv_sqrt(np.eye(2)).entries, np.eye(2))
        np.testing.assert_allclose(spd_inv_sqrt(np.diag([4.0, 1.0])).entries, np.diag([0.5, 1.0]))
        s = np.array([[2.0, 1.0], [1.0, 2.0]])
        r = spd_inv_sqrt(s).entries
        np.testing.assert_allclose(r @ s @ r, np.eye(2), atol=1e-14)

    def test_inv_sqrt_spectrum_descending(self, rng):
        r = spd_inv_sqrt(random_spd(rng, 4, 100.0))
        assert np.all(np.diff(r.spectrum) <= 0)
        np.testing.assert_allclose(r.basis * r.spectrum @ r.basis.T, r.entries, atol=1e-12)


class TestExpLog:
    def test_exp_zero(self):
        np.testing.assert_array_equal(sym_exp(np.zeros((3, 3))).entries, np.eye(3))

    def test_exp_pair_block(self):
        e = sym_exp(0.1 * np.array([[0.0, 1.0], [1.0, 0.0]])).entries
        c, s = np.cosh(0.1), np.sinh(0.1)
        np.testing.assert_allclose(e, [[c, s], [s, c]], rtol=1e-14)

    def test_exp_printed_direction_unit_det(self, x_printed):
        x = TangentDirection.projected(x_printed)
        assert abs(sym_exp(x).det - 1.0) < 1e-10

    def test_log_identity(self):
        np.testing.assert_allclose(spd_log(np.eye(3)).entries, 0.0, atol=0)

    def test_log_diagonal(self):
        np.testing.assert_allclose(
            spd_log(np.diag([np.e, 1 / np.e])).entries, np.diag([1.0, -1.0]), atol=1e-15
        )

    def test_log_of_exp(self, rng):
        x = random_traceless(rng, 4)
        np.testing.assert_allclose(spd_log(sym_exp(0.5 * x)).entries, 0.5 * x, atol=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds, n=st.integers(2, 20), logcond=st.floats(0.0, 6.0))
    def test_round_trip_property(self, seed, n, logcond):
        rng = np.random.default_rng(seed)
        s = random_spd(rng, n, 10.0**logcond)
        back = sym_exp(spd_log(s)).entries
        assert rel_fro(back, s) < 1e-9

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds, n=st.integers(2, 10))
    def test_sqrt_squares_back(self, seed, n):
        s = random_spd(np.random.default_rng(seed), n, 1e4)
        r = spd_sqrt(s).entries
        assert rel_fro(r @ r, s) < 1e-12


class TestCongruence:
    V = np.array([[0.6, 1.0], [0.4, -1.0]])

    def test_identity_basis(self, rng):
        s = random_spd(rng, 3)
        np.testing.assert_allclose(congruence(s, np.eye(3)).entries, s, rtol=1e-15)

    def test_balanced_spread(self):
        out = congruence(UNIT * np.diag([144.0, 36.0]), self.V).entries
        expected = UNIT * np.array([[57.6, 72.0], [72.0, 180.0]])
        assert rel_fro(out, expected) < 1e-12

    def test_balanced_spread_stressed(self):
        s = UNIT * np.array([[144.0, 7.2], [7.2, 36.0]])
        out = congruence(s, self.V).entries
        expected = UNIT * np.array([[61.056, 70.56], [70.56, 165.60]])
        assert rel_fro(out, expected) < 1e-12

    def test_singular(self):
        with pytest.raises(errors.SingularBasis):
            congruence(np.eye(2), [[1.0, 1.0], [1.0, 1.0]])

    def test_shape(self):
        with pytest.raises(errors.DimensionMismatch):
            congruence(np.eye(2), np.eye(3))

    @settings(max_examples=30, deadline=None)
    @given(seed=seeds, n=st.integers(2, 6))
    def test_det_scales_by_det_v_squared(self, seed, n):
        rng = np.random.default_rng(seed)
        s = random_spd(rng, n)
        v = rng.standard_normal((n, n)) + 2 * np.eye(n)
        out = congruence(s, v)
        expected = np.linalg.det(s) * np.linalg.det(v) ** 2
        assert abs(out.det - expected) <= 1e-9 * abs(expected)


class TestEqualizingBasis:
    def test_identity(self):
        np.testing.assert_allclose(equalizing_basis(np.eye(2), np.eye(2)), np.eye(2))

    def test_diagonal(self):
        np.testing.assert_allclose(
            equalizing_basis(np.eye(2), np.diag([4.0, 1.0])), np.diag([0.5, 1.0])
        )

    @pytest.mark.parametrize("seed", range(5))
    def test_post_condition(self, seed):
        rng = np.random.default_rng(seed)
        s1, s2 = random_spd(rng, 4), random_spd(rng, 4)
        v = equalizing_basis(s1, s2)
        assert rel_fro(congruence(s2, v).entries, s1) < 1e-12


class TestCorrelation:
    def test_diagonal(self):
        corr, vols = cov_to_corr(np.diag([4.0, 9.0]))
        np.testing.assert_array_equal(corr, np.eye(2))
        np.testing.assert_allclose(vols, [2.0, 3.0])

    def test_bond_equity(self):
        corr, _ = cov_to_corr(UNIT * np.array([[144.0, 7.2], [7.2, 36.0]]))
        assert abs(corr[0, 1] - 0.1) < 1e-14

    def test_printed_target(self, target_printed):
        corr, vols = cov_to_corr(target_printed)
        assert round(corr[0, 1], 2) == 0.1
        assert round(corr[0, 2], 2) == 0.08
        assert round(corr[1, 2], 2) == 0.16
        assert abs(100 * vols[2] - 25.49) < 0.005

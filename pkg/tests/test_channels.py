import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memcorr import qmat
from memcorr.channels import (
    ChannelKind,
    DampingParameter,
    KrausSet,
    MemoryChannel,
    apply_memory_channel,
    closed_form_elements,
    correlated_kraus,
    damping_probability,
    memory_completeness_error,
    single_qubit_kraus,
    uncorrelated_kraus,
)
from memcorr.errors import ChannelIntegrityError, UsageError
from memcorr.measures import _X_MASK
from memcorr.states import BellDiagonalBlend, make_initial

from conftest import random_density, random_x_state

KINDS = list(ChannelKind)
GRID21 = np.linspace(0, 1, 21)
unit = st.floats(0.0, 1.0)


def _apply_local(rho, ops, qubit):
    """Apply a single-qubit Kraus set to one qubit by tensor contraction."""
    # t[a, b, c, d] = <a b| rho |c d>
    t = rho.reshape(2, 2, 2, 2)
    subs = "ia,abcd,jc->ibjd" if qubit == 0 else "ib,abcd,jd->aicj"
    return sum(np.einsum(subs, k, t, k.conj()) for k in ops).reshape(4, 4)


def _independent_local_noise(rho, ops):
    return _apply_local(_apply_local(rho, ops, 0), ops, 1)


def _direct(kind, p, mu, rho):
    return apply_memory_channel(rho, MemoryChannel(kind, mu), DampingParameter.direct(kind, p))


class TestDampingParameter:
    def test_parametrizations(self):
        assert damping_probability("ad", 1.0) == pytest.approx(1 - math.exp(-1))
        assert damping_probability("pd", 1.0) == pytest.approx(0.5 * (1 - math.exp(-1)))
        assert damping_probability("dp", 1.0) == pytest.approx(0.5 * (1 - math.exp(-1)))

    def test_from_gamma_t(self):
        d = DampingParameter.from_gamma_t("pd", 5.0)
        assert d.p == pytest.approx(0.4966310265)
        assert d.gamma_t == 5.0
        assert DampingParameter.from_gamma_t("ad", 5.0).p == pytest.approx(0.993262053)

    def test_inconsistent_pair_rejected(self):
        with pytest.raises(UsageError):
            DampingParameter("pd", 0.9, 1.0)

    @pytest.mark.parametrize("p", [-0.1, 1.5])
    def test_range(self, p):
        with pytest.raises(UsageError):
            DampingParameter.direct("ad", p)

    def test_negative_time(self):
        with pytest.raises(UsageError):
            DampingParameter.from_gamma_t("ad", -1.0)

    def test_kind_mismatch(self):
        with pytest.raises(UsageError):
            apply_memory_channel(np.eye(4) / 4, MemoryChannel("ad", 0.5), DampingParameter.direct("pd", 0.1))


class TestKrausSets:
    def test_ad_identity_at_zero(self):
        ks = uncorrelated_kraus("ad", 0.0)
        assert len(ks) == 4
        np.testing.assert_array_equal(ks.operators[0], np.eye(4))
        for op in ks.operators[1:]:
            assert not np.any(op)

    def test_pd_half_weights(self):
        ks = uncorrelated_kraus("pd", 0.5)
        assert len(ks) == 4
        # ||sqrt(w) sigma_i (x) sigma_j||_F^2 = 4 w
        weights = [np.sum(np.abs(op) ** 2).real / 4 for op in ks.operators]
        np.testing.assert_allclose(weights, [0.25] * 4)
        paulis = [qmat.kron(qmat.PAULIS[i], qmat.PAULIS[j]) for i in (0, 3) for j in (0, 3)]
        for op, pauli in zip(ks.operators, paulis):
            np.testing.assert_allclose(op, 0.5 * pauli)

    def test_depolarizing_sixteen(self):
        ks = uncorrelated_kraus("dp", 0.3)
        assert len(ks) == 16
        assert ks.completeness_error() <= 1e-14

    def test_ad_correlated_matrices(self):
        p = 0.37
        e00, e11 = correlated_kraus("ad", p).operators
        np.testing.assert_array_equal(e00, np.diag([math.sqrt(1 - p), 1, 1, 1]))
        expected = np.zeros((4, 4))
        expected[3, 0] = math.sqrt(p)
        np.testing.assert_array_equal(e11, expected)
        np.testing.assert_array_equal(qmat.dagger(e00) @ e00 + qmat.dagger(e11) @ e11, np.eye(4))

    def test_pd_correlated_full(self):
        first, second = correlated_kraus("pd", 1.0).operators
        assert not np.any(first)
        np.testing.assert_array_equal(second, qmat.kron(qmat.SIGMA_Z, qmat.SIGMA_Z))

    def test_dp_correlated_zero(self):
        ops = correlated_kraus("dp", 0.0).operators
        nonzero = [op for op in ops if np.any(op)]
        assert len(nonzero) == 1
        np.testing.assert_array_equal(nonzero[0], np.eye(4))

    @pytest.mark.parametrize("kind", KINDS)
    def test_single_qubit_complete(self, kind):
        for p in GRID21:
            assert single_qubit_kraus(kind, p).completeness_error() <= 1e-15

    def test_operators_are_read_only(self):
        ks = correlated_kraus("ad", 0.2)
        with pytest.raises(ValueError):
            ks.operators[0][0, 0] = 3

    def test_mixed_dims_rejected(self):
        with pytest.raises(UsageError):
            KrausSet((np.eye(2), np.eye(4)))

    @pytest.mark.parametrize("p", [-1e-3, 1.001])
    def test_p_range(self, p):
        with pytest.raises(UsageError):
            uncorrelated_kraus("ad", p)
        with pytest.raises(UsageError):
            correlated_kraus("dp", p)


@pytest.mark.parametrize("kind", KINDS)
def test_memory_map_completeness_grid(kind):
    worst = max(memory_completeness_error(kind, p, mu) for p in GRID21 for mu in GRID21)
    assert worst <= 1e-12


class TestApplyMemoryChannel:
    @pytest.mark.parametrize("kind", KINDS)
    def test_zero_damping_is_identity(self, kind, rng):
        rho = random_density(rng)
        for mu in (0.0, 0.4, 1.0):
            np.testing.assert_allclose(_direct(kind, 0.0, mu, rho), rho, atol=1e-15)

    def test_memoryless_ad_is_local(self):
        rho = make_initial(BellDiagonalBlend(0.5, 0.3))
        ops = single_qubit_kraus("ad", 0.5).operators
        np.testing.assert_allclose(_direct("ad", 0.5, 0.0, rho), _independent_local_noise(rho, ops), atol=1e-15)

    @pytest.mark.parametrize("kind", KINDS)
    def test_memoryless_is_local_random(self, kind, rng):
        for _ in range(10):
            rho = random_density(rng)
            p = rng.uniform()
            ops = single_qubit_kraus(kind, p).operators
            np.testing.assert_allclose(_direct(kind, p, 0.0, rho), _independent_local_noise(rho, ops), atol=1e-14)

    @pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 1.0])
    def test_pd_perfect_memory_freezes_family(self, p):
        rho = make_initial(BellDiagonalBlend(0.5, 0.5))
        np.testing.assert_allclose(_direct("pd", p, 1.0, rho), rho, atol=1e-15)

    @pytest.mark.parametrize("kind", KINDS)
    def test_trace_and_hermiticity(self, kind, rng):
        for _ in range(1000 // len(KINDS) + 1):
            rho = random_density(rng)
            out = _direct(kind, rng.uniform(), rng.uniform(), rho)
            assert abs(np.trace(out) - 1) <= 1e-12
            assert qmat.hermiticity_error(out) <= 1e-12

    @pytest.mark.parametrize("kind", KINDS)
    def test_output_is_a_state(self, kind, rng):
        for _ in range(30):
            out = _direct(kind, rng.uniform(), rng.uniform(), random_density(rng))
            qmat.validate_density(out)

    @pytest.mark.parametrize("kind", KINDS)
    def test_mu_affine(self, kind, rng):
        for _ in range(100):
            rho = random_density(rng)
            p, mu = rng.uniform(), rng.uniform()
            mixed = (1 - mu) * _direct(kind, p, 0.0, rho) + mu * _direct(kind, p, 1.0, rho)
            assert np.max(np.abs(_direct(kind, p, mu, rho) - mixed)) <= 1e-12

    @settings(max_examples=60, deadline=None)
    @given(kind=st.sampled_from(KINDS), p=unit, mu=unit, seed=st.integers(0, 2**32 - 1))
    def test_x_shape_preserved(self, kind, p, mu, seed):
        rho = random_x_state(np.random.default_rng(seed))
        out = _direct(kind, p, mu, rho)
        assert np.max(np.abs(out[~_X_MASK])) <= 1e-12

    def test_trace_drift_detected(self, monkeypatch):
        import memcorr.channels as ch

        broken = KrausSet((2 * np.eye(4),), "broken")
        monkeypatch.setattr(ch, "correlated_kraus", lambda kind, p: broken)
        with pytest.raises(ChannelIntegrityError):
            _direct("ad", 0.2, 0.5, np.eye(4) / 4)


ALPHAS = np.linspace(0, 1, 5)
RS = np.linspace(0, 1, 5)
MUS = np.linspace(0, 1, 5)


def _grid():
    return itertools.product(ALPHAS, RS, GRID21, MUS)


class TestClosedForms:
    def test_ad_initial_state(self):
        for mu in (0.0, 0.5, 1.0):
            np.testing.assert_allclose(
                closed_form_elements("ad", 0.5, 0.3, 0.0, mu), make_initial(BellDiagonalBlend(0.5, 0.3)), atol=1e-15
            )

    def test_pd_full_dephasing(self):
        rho = closed_form_elements("pd", 0.5, 0.5, 1.0, 0.0)
        assert rho[1, 2] == 0
        np.testing.assert_allclose(np.diag(rho), np.diag(make_initial(BellDiagonalBlend(0.5, 0.5))))

    def test_ad_full_decay_perfect_memory(self):
        rho = closed_form_elements("ad", 0.5, 0.3, 1.0, 1.0)
        assert rho[1, 2].real == pytest.approx(0.3 * 0.25 * math.sqrt(3), abs=1e-12)
        assert rho[1, 2].real == pytest.approx(0.12990, abs=1e-5)
        assert rho[0, 0] == 0

    def test_ad_matches_kraus_path(self):
        worst = max(
            np.max(np.abs(closed_form_elements("ad", a, r, p, mu) - _direct("ad", p, mu, make_initial(BellDiagonalBlend(a, r)))))
            for a, r, p, mu in _grid()
        )
        assert worst <= 1e-10

    def test_pd_diagonal_matches_kraus_path(self):
        for a, r, p, mu in _grid():
            kraus = _direct("pd", p, mu, make_initial(BellDiagonalBlend(a, r)))
            printed = closed_form_elements("pd", a, r, p, mu)
            np.testing.assert_allclose(np.diag(printed), np.diag(kraus), atol=1e-12)

    def test_pd_printed_coherence_uses_wrong_decay_factor(self):
        # Kraus path coherence factor is (1-2p)^2 (1-mu) + mu; the printed one has (1-p)^2
        for a, r, p, mu in _grid():
            kraus = _direct("pd", p, mu, make_initial(BellDiagonalBlend(a, r)))
            coh = r * a * math.sqrt(1 - a * a)
            assert kraus[1, 2].real == pytest.approx(coh * ((1 - 2 * p) ** 2 * (1 - mu) + mu), abs=1e-12)
            printed = closed_form_elements("pd", a, r, p, mu)
            assert printed[1, 2].real == pytest.approx(coh * ((1 - p) ** 2 * (1 - mu) + mu), abs=1e-15)

    def test_dp_erratum_confined_to_outer_populations(self):
        for a, r, p, mu in _grid():
            kraus = _direct("dp", p, mu, make_initial(BellDiagonalBlend(a, r)))
            printed = closed_form_elements("dp", a, r, p, mu)
            # rho22, rho33 and the coherence agree
            for idx in ((1, 1), (2, 2), (1, 2)):
                assert printed[idx] == pytest.approx(kraus[idx], abs=1e-10)
            # printed rho11 = rho44 repeats the rho33 expression
            assert printed[0, 0] == pytest.approx(printed[2, 2], abs=1e-15)
            # so the Kraus rho11 follows from unit trace instead
            assert kraus[0, 0].real == pytest.approx((1 - kraus[1, 1].real - kraus[2, 2].real) / 2, abs=1e-12)

    def test_dp_erratum_is_systematic(self):
        kraus = _direct("dp", 0.0, 0.0, make_initial(BellDiagonalBlend(1.0, 1.0)))
        printed = closed_form_elements("dp", 1.0, 1.0, 0.0, 0.0)
        assert kraus[0, 0] == pytest.approx(0.0)
        assert printed[0, 0] == pytest.approx(1.0)

    def test_range_check(self):
        with pytest.raises(UsageError):
            closed_form_elements("ad", 1.5, 0.3, 0.1, 0.1)

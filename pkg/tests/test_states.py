import math

import numpy as np
import pytest

from memcorr import qmat
from memcorr.errors import UsageError
from memcorr.measures import concurrence
from memcorr.states import BellDiagonalBlend, is_initially_entangled, make_initial


def test_bell_state():
    rho = make_initial(BellDiagonalBlend(1 / math.sqrt(2), 1.0))
    psi = np.array([0, 1, 1, 0]) / math.sqrt(2)
    np.testing.assert_allclose(rho, np.outer(psi, psi), atol=1e-15)
    assert concurrence(rho) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 0.3, 1.0])
def test_zero_purity_is_maximally_mixed(alpha):
    np.testing.assert_allclose(make_initial(BellDiagonalBlend(alpha, 0.0)), np.eye(4) / 4)


def test_entangled_reference_state():
    rho = make_initial(BellDiagonalBlend(0.5, 0.5))
    assert rho[1, 2].real == pytest.approx(0.21651, abs=1e-5)
    assert concurrence(rho) == pytest.approx(0.18, abs=5e-3)
    assert is_initially_entangled(BellDiagonalBlend(0.5, 0.5))


@pytest.mark.parametrize(
    "alpha,r,expected", [(0.5, 0.3, False), (0.5, 0.5, True), (0.0, 1.0, False), (1 / math.sqrt(2), 1.0, True)]
)
def test_classifier(alpha, r, expected):
    assert is_initially_entangled(BellDiagonalBlend(alpha, r)) is expected


def test_elements():
    alpha, r = 0.3, 0.7
    rho = make_initial(BellDiagonalBlend(alpha, r))
    q = (1 - r) / 4
    np.testing.assert_allclose(np.diag(rho).real, [q, q + r * (1 - alpha**2), q + r * alpha**2, q])
    assert rho[1, 2].real == pytest.approx(r * alpha * math.sqrt(1 - alpha**2))


def test_werner_threshold():
    alpha = 1 / math.sqrt(2)
    for r in np.linspace(0, 1, 301):
        if abs(r - 1 / 3) < 1e-9:
            continue
        qe = concurrence(make_initial(BellDiagonalBlend(alpha, r)))
        if r <= 1 / 3:
            assert qe <= 1e-12
        else:
            assert qe > 1e-12
    assert not is_initially_entangled(BellDiagonalBlend(alpha, 1 / 3))


def test_classifier_tracks_general_boundary():
    # entangled iff 2 r alpha sqrt(1 - alpha^2) > (1 - r) / 2
    for alpha in np.linspace(0, 1, 41):
        for r in np.linspace(0, 1, 41):
            margin = 2 * r * alpha * math.sqrt(1 - alpha**2) - (1 - r) / 2
            if abs(margin) < 1e-9:
                continue
            assert is_initially_entangled(BellDiagonalBlend(alpha, r)) is bool(margin > 0)


def test_grid_states_valid():
    for alpha in np.linspace(0, 1, 101):
        for r in np.linspace(0, 1, 101):
            rho = make_initial(BellDiagonalBlend(alpha, r))
            assert qmat.hermiticity_error(rho) <= 1e-12
            assert abs(np.trace(rho) - 1) <= 1e-12
            # X form: eigenvalues are the outer populations and the inner 2x2 block's
            d = np.diag(rho).real
            inner = np.linalg.eigvalsh(rho[1:3, 1:3])
            assert min(d[0], d[3], inner.min()) >= -1e-10


def test_grid_states_pass_full_validation():
    for alpha in np.linspace(0, 1, 11):
        for r in np.linspace(0, 1, 11):
            qmat.validate_density(make_initial(BellDiagonalBlend(alpha, r)))


@pytest.mark.parametrize("alpha,r", [(-0.1, 0.5), (0.5, 1.2)])
def test_out_of_range(alpha, r):
    with pytest.raises(UsageError):
        BellDiagonalBlend(alpha, r)

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from belltest import (
    ConsistencyError,
    EntangledPairState,
    ValidationError,
    coincidence_probability,
    joint_outcome_distribution,
    singles_probability_alice,
    singles_probability_bob,
)
from belltest.quantum import joint_outcome_components

R = 0.297


def _pol(deg):
    t = np.radians(deg)
    return np.array([np.cos(t), np.sin(t)])


def _oracle(r, alpha, beta):
    """Projector expectations on the explicit two-photon state vector (basis H=0, V=1)."""
    H, V = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    psi = (np.kron(H, V) + r * np.kron(V, H)) / np.sqrt(1 + r * r)
    pa, pb = np.outer(_pol(alpha), _pol(alpha)), np.outer(_pol(beta), _pol(beta))
    eye = np.eye(2)
    return (
        psi @ np.kron(pa, pb) @ psi,
        psi @ np.kron(pa, eye) @ psi,
        psi @ np.kron(eye, pb) @ psi,
    )


def test_state_rejects_negative_r():
    with pytest.raises(ValidationError):
        EntangledPairState(-0.1)


def test_state_normalization():
    s = EntangledPairState(R)
    assert s.norm + R * R * s.norm == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "r, alpha, beta, expected, tol",
    [
        (0.297, 0.0, 0.0, 0.0, 1e-15),
        (1.0, 0.0, 90.0, 0.5, 1e-15),
        # mpmath, 30 digits
        (0.297, 85.6, -5.4, 0.07600408438001738, 1e-12),
        (0.297, 118.0, 25.9, 8.734380858858961e-4, 1e-12),
    ],
)
def test_coincidence_probability(r, alpha, beta, expected, tol):
    assert coincidence_probability(EntangledPairState(r), alpha, beta) == pytest.approx(expected, abs=tol)


def test_coincidence_matches_table_cell(state):
    # QM cell 1066e3 over N eta_a eta_b
    assert coincidence_probability(state, 85.6, -5.4) == pytest.approx(1066e3 / 1.40302e7, abs=1e-4)
    assert coincidence_probability(state, 118.0, 25.9) == pytest.approx(8.74e-4, abs=1e-6)


def test_singles_examples(state):
    norm = 1 / (1 + R * R)
    assert singles_probability_alice(state, 0.0) == pytest.approx(norm, abs=1e-12)
    assert singles_probability_alice(state, 90.0) == pytest.approx(R * R * norm, abs=1e-12)
    assert singles_probability_alice(state, 85.6) == pytest.approx(0.08599, abs=1e-4)
    assert singles_probability_bob(state, 90.0) == pytest.approx(norm, abs=1e-12)
    assert singles_probability_bob(state, 0.0) == pytest.approx(R * R * norm, abs=1e-12)
    assert singles_probability_bob(state, -5.4) == pytest.approx(0.088480, abs=1e-4)
    # mpmath reference values
    assert singles_probability_alice(state, 85.6) == pytest.approx(0.08599049256735892, abs=1e-12)
    assert singles_probability_bob(state, -5.4) == pytest.approx(0.08847947653935881, abs=1e-12)


@given(
    r=st.floats(0, 3),
    alpha=st.floats(-360, 360),
    beta=st.floats(-360, 360),
)
def test_closed_forms_match_state_vector(r, alpha, beta):
    pab, pa, pb = _oracle(r, alpha, beta)
    s = EntangledPairState(r)
    assert coincidence_probability(s, alpha, beta) == pytest.approx(pab, abs=1e-12)
    assert singles_probability_alice(s, alpha) == pytest.approx(pa, abs=1e-12)
    assert singles_probability_bob(s, beta) == pytest.approx(pb, abs=1e-12)


@given(r=st.floats(0, 2), alpha=st.floats(-180, 180), beta=st.floats(-180, 180))
def test_half_turn_symmetry(r, alpha, beta):
    s = EntangledPairState(r)
    assert coincidence_probability(s, alpha, beta) == pytest.approx(
        coincidence_probability(s, alpha + 180.0, beta + 180.0), abs=1e-12
    )


@given(alpha=st.floats(-180, 180), beta=st.floats(-180, 180))
def test_exchange_symmetry_at_r1(alpha, beta):
    s = EntangledPairState(1.0)
    assert coincidence_probability(s, alpha, beta) == pytest.approx(coincidence_probability(s, beta, alpha), abs=1e-12)


def test_joint_distribution_examples(state):
    d = joint_outcome_distribution(state, 1.0, 1.0, 0.0, 0.0)
    norm = 1 / (1 + R * R)
    np.testing.assert_allclose(d.as_array(), [0.0, norm, 1 - norm, 0.0], atol=1e-12)

    dead = joint_outcome_distribution(state, 0.0, 0.8, 30.0, 70.0)
    assert dead.p_both == 0.0 and dead.p_a_only == 0.0

    # mpmath reference; differs from the rounded figures (0.188819, 0.615150) by ~1.5e-5
    d = joint_outcome_distribution(state, 0.7377, 0.7859, 118.0, 25.9)
    np.testing.assert_allclose(
        d.as_array(),
        [0.000506383093375412, 0.195523447394336, 0.188835232616802, 0.615134936895486],
        atol=1e-12,
    )
    assert d.p_both == pytest.approx(0.000507, abs=1e-5)
    assert d.p_a_only == pytest.approx(0.195524, abs=1e-5)


def test_joint_distribution_rejects_bad_efficiency(state):
    with pytest.raises(ValidationError):
        joint_outcome_distribution(state, 1.2, 0.5, 0.0, 0.0)


def test_consistency_error_on_impossible_probabilities(monkeypatch, state):
    import belltest.quantum as q

    monkeypatch.setattr(q, "coincidence_probability", lambda s, a, b: 2.0)
    with pytest.raises(ConsistencyError):
        q.joint_outcome_components(state, 1.0, 1.0, 10.0, 20.0)


@hsettings(max_examples=300)
@given(
    r=st.floats(0, 2),
    alpha=st.floats(-180, 180),
    beta=st.floats(-180, 180),
    eta_a=st.floats(0, 1),
    eta_b=st.floats(0, 1),
)
def test_joint_distribution_normalized(r, alpha, beta, eta_a, eta_b):
    p = joint_outcome_components(EntangledPairState(r), eta_a, eta_b, alpha, beta)
    assert abs(p.sum() - 1.0) <= 1e-12
    assert np.all(p >= -1e-12) and np.all(p <= 1.0)
    s = EntangledPairState(r)
    pab = coincidence_probability(s, alpha, beta)
    assert pab <= singles_probability_alice(s, alpha) + 1e-12
    assert pab <= singles_probability_bob(s, beta) + 1e-12

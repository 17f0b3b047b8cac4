import numpy as np
import pytest

from sic4.numerics import (
    GroupElement,
    apply,
    canonical_key,
    canonical_phase,
    compose,
    conjugate,
    eig_hermitian,
    inverse,
    is_unitary,
    matrix_from_json,
    matrix_to_json,
    proj_equal,
    projective_order,
    projective_set_equal,
)

RNG = np.random.default_rng(7)


def random_unitary(d):
    q, r = np.linalg.qr(RNG.normal(size=(d, d)) + 1j * RNG.normal(size=(d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_group_element_rejects_nonunitary():
    with pytest.raises(ValueError):
        GroupElement(np.ones((4, 4)))


def test_compose_antiunitary_flags():
    u = GroupElement(random_unitary(4))
    a = GroupElement(random_unitary(4), antiunitary=True)
    assert compose(u, u).antiunitary is False
    assert compose(a, u).antiunitary is True
    assert compose(a, a).antiunitary is False


def test_compose_acts_like_application():
    a = GroupElement(random_unitary(4), antiunitary=True)
    b = GroupElement(random_unitary(4))
    v = RNG.normal(size=4) + 1j * RNG.normal(size=4)
    assert np.allclose(apply(compose(a, b), v), apply(a, apply(b, v)))


def test_inverse_both_kinds():
    for anti in (False, True):
        g = GroupElement(random_unitary(4), antiunitary=anti)
        v = RNG.normal(size=4) + 1j * RNG.normal(size=4)
        assert np.allclose(apply(inverse(g), apply(g, v)), v)


def test_conjugate_preserves_hermiticity():
    g = GroupElement(random_unitary(4), antiunitary=True)
    h = RNG.normal(size=(4, 4))
    h = h + h.T
    m = conjugate(g, h)
    assert np.allclose(m, m.conj().T)


def test_proj_equal_phases():
    u = random_unitary(4)
    assert proj_equal(u, np.exp(0.321j) * u)
    assert not proj_equal(u, random_unitary(4))


def test_proj_equal_projectors():
    v = RNG.normal(size=4) + 1j * RNG.normal(size=4)
    v /= np.linalg.norm(v)
    p = np.outer(v, v.conj())
    assert proj_equal(p, np.outer(1j * v, (1j * v).conj()))


def test_projective_order_of_phase():
    g = GroupElement(np.exp(2j * np.pi / 3) * np.eye(4))
    assert projective_order(g) == 1
    x = np.roll(np.eye(4), 1, axis=0)
    assert projective_order(GroupElement(x)) == 4


def test_eig_hermitian_gauge():
    h = RNG.normal(size=(4, 4)) + 1j * RNG.normal(size=(4, 4))
    h = h + h.conj().T
    w, v = eig_hermitian(h)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(v @ np.diag(w) @ v.conj().T, h)
    for k in range(4):
        i = np.argmax(np.abs(v[:, k]))
        assert abs(v[i, k].imag) < 1e-12 and v[i, k].real > 0


def test_eig_hermitian_rejects_nonhermitian():
    with pytest.raises(ValueError):
        eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


def test_canonical_phase_and_key():
    u = random_unitary(4)
    k1 = canonical_key(u)
    k2 = canonical_key(np.exp(1.234j) * u)
    assert k1 == k2
    c = canonical_phase(u)
    flat = c.ravel()
    first = flat[np.argmax(np.abs(flat) > 1e-6)]
    assert abs(first.imag) < 1e-12 and first.real > 0


def test_projective_set_equal():
    mats = np.stack([random_unitary(4) for _ in range(6)])
    shuffled = mats[RNG.permutation(6)] * np.exp(
        1j * RNG.uniform(0, 2 * np.pi, size=6)
    ).reshape(6, 1, 1)
    assert projective_set_equal(mats, shuffled)
    other = mats.copy()
    other[0] = random_unitary(4)
    assert not projective_set_equal(mats, other)


def test_matrix_json_round_trip():
    u = random_unitary(4)
    assert np.allclose(matrix_from_json(matrix_to_json(u)), u)
    assert matrix_to_json(u)["dim"] == 4
    assert is_unitary(u)


def test_matrix_from_json_length_check():
    with pytest.raises(ValueError):
        matrix_from_json({"dim": 3, "entries": [[1.0, 0.0]] * 4})

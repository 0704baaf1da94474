import numpy as np
import pytest

from helpers import random_invertible
from reflrigid import (Subspace, build_rep, cross_ratio, diagonal_embed,
                       expected_dimension_diagonal, projective_order,
                       reflection, symmetric_power_embed, xi)
from reflrigid.errors import NotInvertible, SignatureMismatch
from reflrigid.symplectic import form_defect


def random_line(rng):
    return Subspace(rng.standard_normal(2))


def rotation(t):
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])


def test_diagonal_embed_examples(rng):
    np.testing.assert_array_equal(diagonal_embed(np.eye(2), 3), np.eye(6))
    np.testing.assert_array_equal(diagonal_embed(np.diag([1.0, -1.0]), 2),
                                  np.diag([1.0, -1.0, 1.0, -1.0]))
    A, B = random_invertible(rng, 2), random_invertible(rng, 2)
    np.testing.assert_allclose(diagonal_embed(A @ B, 3),
                               diagonal_embed(A, 3) @ diagonal_embed(B, 3),
                               atol=1e-12)
    with pytest.raises(NotInvertible):
        diagonal_embed(np.ones((2, 2)), 2)


def test_reflection_lemma(rng):
    for _ in range(20):
        l1, l2 = random_line(rng), random_line(rng)
        for n in (2, 3):
            lifted = diagonal_embed(reflection(l1, l2), n)
            np.testing.assert_allclose(
                lifted, reflection(xi(l1, n), xi(l2, n)),
                atol=1e-10 * max(1.0, np.linalg.norm(lifted)))


def test_xi_examples(rng):
    assert xi([1.0, 0.0], 2).equals(Subspace(np.eye(4)[:, [0, 2]]))
    for _ in range(100):
        A = random_invertible(rng, 2)
        l = rng.standard_normal(2)
        n = int(rng.integers(1, 5))
        assert xi(A @ l, n).equals(xi(l, n).transform(diagonal_embed(A, n)))


def test_cross_ratio_scalar_lemma(rng):
    lines = [[1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 3.0]]
    c = cross_ratio(*(xi(l, 2) for l in lines))
    np.testing.assert_allclose(c.endo, 3 * np.eye(2), atol=1e-14)
    for _ in range(50):
        ls = [random_line(rng) for _ in range(4)]
        c0 = cross_ratio(*ls).endo[0, 0]
        n = int(rng.integers(2, 5))
        endo = cross_ratio(*(xi(l, n) for l in ls)).endo
        np.testing.assert_allclose(endo, c0 * np.eye(n),
                                   atol=1e-10 * max(1.0, abs(c0)))


def test_symmetric_power_examples(rng):
    np.testing.assert_allclose(symmetric_power_embed(np.eye(2), 3), np.eye(6))
    a = 1.7
    np.testing.assert_allclose(
        symmetric_power_embed(np.diag([a, 1 / a]), 2),
        np.diag([a ** 3, a, 1 / a, a ** -3]), rtol=1e-14)
    t = 0.37
    ev = np.linalg.eigvals(symmetric_power_embed(rotation(t), 2))
    expected = np.exp(1j * t * np.array([3, -3, 1, -1]))
    for e in expected:
        assert np.min(np.abs(ev - e)) < 1e-12
    A, B = random_invertible(rng, 2), random_invertible(rng, 2)
    for n in (1, 2, 3):
        lhs = symmetric_power_embed(A @ B, n)
        rhs = symmetric_power_embed(A, n) @ symmetric_power_embed(B, n)
        np.testing.assert_allclose(lhs, rhs,
                                   atol=1e-10 * np.linalg.norm(lhs))


@pytest.mark.parametrize("k", [2, 3, 5, 7])
def test_symmetric_power_rotation_order(k):
    W = symmetric_power_embed(rotation(np.pi / k), 3)
    assert projective_order(W, 3 * k) == k


def test_build_rep_diagonal():
    rep = build_rep("diagonal", (2, 3, 7), 2)
    assert rep.ambient_dim == 4
    lam = rep.params.lambdas
    for c, l in zip(rep.cross_ratios(), lam):
        np.testing.assert_allclose(c.endo, l * np.eye(2), atol=1e-9)
    geom = build_rep("diagonal", (2, 3, 7), 1)
    for (_, w2), (_, w4) in zip(geom.products(), rep.products()):
        assert projective_order(w2, 14) == projective_order(w4, 14)


def test_build_rep_symplectic():
    rep = build_rep("symplectic", (3, 4, 5), 2, signature=(2, 0))
    assert rep.group == "PSp+-" and rep.signature == (2, 0)
    for r in rep.generators:
        assert form_defect(r, rep.omega, sign=-1) < 1e-12
    with pytest.raises(SignatureMismatch):
        build_rep("symplectic", (3, 4, 5), 2, signature=(2, 1))


def test_build_rep_sympower_is_not_scalar():
    rep = build_rep("sympower", (2, 3, 7), 2)
    assert rep.ambient_dim == 4
    scalars = [c.scalar_value() for c in rep.cross_ratios()]
    assert any(s is None for s in scalars)


def test_build_rep_rejects_bad_input():
    with pytest.raises(ValueError):
        build_rep("bogus", (2, 3, 7), 2)
    with pytest.raises(ValueError):
        build_rep("diagonal", (2, 3, 7), 0)


def test_expected_dimension():
    assert [expected_dimension_diagonal(n) for n in (1, 2, 3)] == [0, -3, -8]

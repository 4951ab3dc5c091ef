import random
from fractions import Fraction

import pytest

from infalex.free_lie import (LieElement, ad_matrix, bracket, lyndon_words,
                              standard_factorization, tensor_expansion,
                              witt_dims)


def brute_force_lyndon(n, q):
    """Independent enumeration: keep the words strictly below every rotation."""
    out = []
    def rec(prefix):
        if len(prefix) == q:
            w = tuple(prefix)
            if all(w < w[i:] + w[:i] for i in range(1, q)):
                out.append(w)
            return
        for a in range(n):
            rec(prefix + [a])
    rec([])
    return out


def test_lyndon_small_cases():
    assert lyndon_words(2, 1) == [(0,), (1,)]
    assert lyndon_words(2, 2) == [(0, 1)]
    assert lyndon_words(2, 3) == [(0, 0, 1), (0, 1, 1)]


@pytest.mark.parametrize("n,q", [(2, 4), (2, 5), (3, 3), (3, 4), (4, 3)])
def test_lyndon_against_brute_force(n, q):
    assert lyndon_words(n, q) == brute_force_lyndon(n, q)


def test_witt_values():
    assert witt_dims(2, 4).dims == (2, 1, 2, 3)
    assert witt_dims(3, 3).dims == (3, 3, 8)
    assert witt_dims(1, 5).dims == (1, 0, 0, 0, 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_witt_matches_enumeration(n):
    for q in range(1, 9):
        assert witt_dims(n, q)[q] == len(lyndon_words(n, q))


def test_standard_factorization_convention():
    # w = uv with v the longest proper Lyndon suffix
    assert standard_factorization((0, 1)) == ((0,), (1,))
    assert standard_factorization((0, 1, 1)) == ((0, 1), (1,))
    assert standard_factorization((0, 0, 1)) == ((0,), (0, 1))


def test_tensor_expansion_triangular():
    for n, q in [(2, 3), (2, 5), (3, 4)]:
        for w in lyndon_words(n, q):
            exp = tensor_expansion(w)
            assert exp[w] == 1
            assert min(exp) == w


def test_bracket_basics():
    e0, e1 = LieElement.generator(0), LieElement.generator(1)
    assert bracket(e0, e0).is_zero()
    assert bracket(e0, e1).as_dict() == {(0, 1): Fraction(1)}
    assert bracket(bracket(e0, e1), e1).as_dict() == {(0, 1, 1): Fraction(1)}
    # antisymmetry of the mixed bracket
    assert (bracket(e0, e1) + bracket(e1, e0)).is_zero()


def _random_element(rng, n, degree):
    words = lyndon_words(n, degree)
    return LieElement.make(degree, {w: rng.randint(-3, 3) for w in words})


@pytest.mark.parametrize("degrees", [(1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2), (1, 2, 3)])
def test_jacobi_random(degrees):
    rng = random.Random(sum(degrees))
    for n in (2, 3):
        for _ in range(4):
            x, y, z = (_random_element(rng, n, d) for d in degrees)
            jac = (bracket(bracket(x, y), z) + bracket(bracket(y, z), x)
                   + bracket(bracket(z, x), y))
            assert jac.is_zero()


def test_antisymmetry_random():
    rng = random.Random(9)
    for n in (2, 3):
        for dx, dy in [(1, 2), (2, 3), (2, 2)]:
            x, y = _random_element(rng, n, dx), _random_element(rng, n, dy)
            assert (bracket(x, y) + bracket(y, x)).is_zero()


def test_wedge2_to_degree2_isomorphism():
    # a ^ b |-> [a, b] sends the pair basis bijectively onto the Lyndon basis
    for n in (2, 3, 4):
        images = []
        for i in range(n):
            for j in range(i + 1, n):
                img = bracket(LieElement.generator(i), LieElement.generator(j))
                assert img.as_dict() == {(i, j): Fraction(1)}
                images.append(img)
        assert len(images) == len(lyndon_words(n, 2))


def test_ad_matrix_zero_vector():
    assert ad_matrix([0, 0], 2).is_zero()


def test_ad_matrix_generator_degree1():
    m = ad_matrix([1, 0], 1)
    # e1 |-> [e0, e1], e0 |-> 0
    assert m.rank() == 1
    assert m.entries == {(0, 1): Fraction(1)}


def test_ad_matrix_degree2():
    m = ad_matrix([1, 0], 2)
    assert (m.rows, m.cols) == (2, 1)
    assert m.rank() == 1


def test_ad_matrix_matches_bracket():
    rng = random.Random(3)
    for n, q in [(2, 2), (3, 2), (2, 3)]:
        v = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
        m = ad_matrix(v, q)
        v_elt = LieElement.make(1, {(i,): c for i, c in enumerate(v)})
        for col, w in enumerate(lyndon_words(n, q)):
            expected = bracket(v_elt, LieElement.make(q, {w: 1}))
            assert m.matvec({col: Fraction(1)}) == expected.to_vec(n)

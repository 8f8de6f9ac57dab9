import random
from fractions import Fraction as Q

import pytest

from addtheo.errors import AddTheoError
from addtheo.factor import factor, factor_univariate_q, is_irreducible
from addtheo.poly import MPoly

RING = ("x", "y", "z")


def xyz():
    return (MPoly.var(RING, n) for n in RING)


def test_univariate_basics():
    # x^2 + x - 2 = (x - 1)(x + 2)
    fs = factor_univariate_q([Q(-2), Q(1), Q(1)])
    assert sorted(fs) == [[-1, 1], [2, 1]]
    # x^2 + 1 stays whole
    assert factor_univariate_q([Q(1), Q(0), Q(1)]) == [[1, 0, 1]]
    # 6x^2 + 7x + 2 = (2x + 1)(3x + 2)
    fs = factor_univariate_q([Q(2), Q(7), Q(6)])
    assert sorted(fs) == [[1, 2], [2, 3]]


def test_univariate_cyclotomic_split():
    # x^6 - 1 = (x-1)(x+1)(x^2+x+1)(x^2-x+1)
    fs = factor_univariate_q([Q(-1)] + [Q(0)] * 5 + [Q(1)])
    assert sorted(fs) == [[-1, 1], [1, -1, 1], [1, 1], [1, 1, 1]]


def test_difference_of_squares():
    x, y, z = xyz()
    fs = factor(x**2 - y**2)
    assert sorted(f.to_text() for f, _ in fs) == ["y + x", "y - x"]


def test_two_factor_split():
    x, y, z = xyz()
    fs = factor((z - x * y) * (z + x * y))
    assert sorted(f.to_text() for f, _ in fs) == ["x*y + z", "x*y - z"]


def test_cosine_law_is_irreducible():
    x, y, z = xyz()
    g = x**2 + y**2 + z**2 - 2 * x * y * z - 1
    fs = factor(g)
    assert len(fs) == 1 and fs[0][1] == 1
    assert fs[0][0] == g.canonicalize()
    assert is_irreducible(g)


def test_multiplicities_and_reconstruction():
    x, y, z = xyz()
    p = (2 * x * y * z - z**2 - y**2 - x**2 + 1) * (x - y) ** 3 * (x + y - z) ** 2
    fs = factor(p)
    prod = MPoly.const(RING, 1)
    for f, m in fs:
        prod = prod * f**m
    assert prod.canonicalize() == p.canonicalize()
    assert sorted(m for _, m in fs) == [1, 2, 3]


def test_constant_rejected():
    with pytest.raises(AddTheoError):
        factor(MPoly.const(RING, 5))


def test_random_products_reconstruct():
    rng = random.Random(123)
    x, y, z = MPoly.var(RING, "x"), MPoly.var(RING, "y"), MPoly.var(RING, "z")
    gens = [x + y, x - z, y * z - 1, x * y - z, x + 1, z - 2, x * x - y]
    for trial in range(6):
        parts = rng.sample(gens, rng.randint(2, 3))
        p = MPoly.const(RING, rng.randint(1, 3))
        for part in parts:
            p = p * part ** rng.randint(1, 2)
        fs = factor(p)
        prod = MPoly.const(RING, 1)
        for f, m in fs:
            prod = prod * f**m
        assert prod.canonicalize() == p.canonicalize()
        for f, _ in fs:
            assert is_irreducible(f)


def test_quadrivariate():
    ring = ("x1", "x2", "x3", "x4")
    a, b, c, d = (MPoly.var(ring, n) for n in ring)
    fs = factor((a * b - c * d) * (a * b + c * d - 1))
    assert len(fs) == 2
    prod = MPoly.const(ring, 1)
    for f, m in fs:
        prod = prod * f**m
    assert prod.canonicalize() == ((a * b - c * d) * (a * b + c * d - 1)).canonicalize()

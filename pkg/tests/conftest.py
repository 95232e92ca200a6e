from fractions import Fraction

import pytest

from sftdga import AlgebraSignature, OrbitRecord, TFormRecord
from sftdga.corpus import toy_overtwisted, toy_tight


@pytest.fixture
def sig_mixed():
    # n = 4 so hbar has degree 2; orbit/t-form parities are deliberately mixed
    # (|q_a| = 2, |q_b| = 3, |q_c| = 0, |q_d| = 5, |t_u| = -1, |t_v| = 0)
    return AlgebraSignature(
        n=4, h2rank=1, c1=(2,),
        orbits=(
            OrbitRecord("a", 1, 1, Fraction(1)),
            OrbitRecord("b", 2, 2, Fraction(3, 2)),
            OrbitRecord("c", -1, 3, Fraction(2)),
            OrbitRecord("d", 4, 1, Fraction(5)),
        ),
        tforms=(TFormRecord("u", 1), TFormRecord("v", 2)))


@pytest.fixture
def toy():
    return toy_overtwisted()


@pytest.fixture
def tight():
    return toy_tight()

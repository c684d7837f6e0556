import math

import mpmath as mp
import pytest

from kerrblowup.special import gamma

# independent high-precision reference values
ORACLE = {
    1 / 3: 2.678938534707747633,
    7 / 6: 0.9277193336300392,
    0.5: math.sqrt(math.pi),
}


@pytest.mark.parametrize("x,expected", ORACLE.items())
def test_pinned_values(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("x", [0.05, 0.2, 0.9, 1.0, 1.5, 2.0, 3.7, 8.25, 20.5, -0.5, -1.7, -3.2])
def test_against_mpmath(x):
    assert gamma(x) == pytest.approx(float(mp.gamma(x)), rel=1e-13)


def test_integers_are_factorials():
    for n in range(1, 15):
        assert gamma(n) == pytest.approx(math.factorial(n - 1), rel=1e-14)


@pytest.mark.parametrize("x", [0, -1, -4])
def test_poles(x):
    with pytest.raises(ValueError):
        gamma(x)

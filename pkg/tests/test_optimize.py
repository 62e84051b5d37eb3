import math

import pytest

from dkc.errors import BracketError
from dkc.numerics import find_root, minimize_scalar


def test_golden_section_finds_cosine_minimum():
    x, g = minimize_scalar(math.cos, (2.0, 4.5))
    assert abs(x - math.pi) < 1e-8 and g == pytest.approx(-1.0)


def test_minimum_at_bracket_edge():
    x, _ = minimize_scalar(lambda x: x, (1.0, 2.0))
    assert x == pytest.approx(1.0, abs=1e-7)


def test_flat_function_terminates():
    x, g = minimize_scalar(lambda x: 5.0, (0.0, 1.0))
    assert 0.0 <= x <= 1.0 and g == 5.0


def test_bisection_root():
    assert abs(find_root(lambda x: x * x - 2.0, (0.0, 2.0)) - math.sqrt(2.0)) < 1e-10


def test_bisection_exact_endpoint_root():
    assert find_root(lambda x: x - 1.0, (1.0, 3.0)) == 1.0


def test_bisection_requires_sign_change():
    with pytest.raises(BracketError):
        find_root(lambda x: x * x + 1.0, (-1.0, 1.0))

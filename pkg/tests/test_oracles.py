import pytest
from sympy import Poly, expand, symbols

from hassett_chow.errors import NegativeCoefficient
from hassett_chow.oracles import (
    CountPolynomial,
    betti_from_point_count,
    eulerian_numbers,
    format_polynomial,
    open_config_count,
    point_count_polynomial,
)
from hassett_chow.strata import enumerate_strata
from hassett_chow.weights import parse_weights

q = symbols("q")


def test_open_config_count_matches_sympy():
    for k in range(3, 9):
        expected = Poly(expand(eval("*".join(["1"] + [f"(q-{2 + i})" for i in range(k - 3)]))), q)
        assert open_config_count(k) == [int(c) for c in reversed(expected.all_coeffs())]


def test_point_count_examples():
    for ws in ["1,1,1,1", "1,1,1/4,1/4", "1,1/2,1/2,1/2"]:
        assert point_count_polynomial(enumerate_strata(parse_weights(ws))).coefficients == (1, 1)
    # (q-2)(q-3) + 10(q-2) + 15
    hand = Poly(expand((q - 2) * (q - 3) + 10 * (q - 2) + 15), q).all_coeffs()
    c5 = point_count_polynomial(enumerate_strata(parse_weights("1,1,1,1,1")))
    assert list(c5.coefficients) == [int(c) for c in reversed(hand)] == [1, 5, 1]
    c6 = point_count_polynomial(enumerate_strata(parse_weights("1,1,1,1,1,1")))
    assert c6.coefficients == (1, 16, 16, 1)


def test_eulerian_numbers():
    assert eulerian_numbers(1) == [1]
    assert eulerian_numbers(2) == [1, 1]
    assert eulerian_numbers(3) == [1, 4, 1]
    assert eulerian_numbers(4) == [1, 11, 11, 1]
    assert eulerian_numbers(5) == [1, 26, 66, 26, 1]
    with pytest.raises(ValueError):
        eulerian_numbers(0)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_losev_manin_point_count_is_eulerian(n):
    ws = ",".join(["1", "1"] + [f"1/{n - 2}"] * (n - 2))
    C = point_count_polynomial(enumerate_strata(parse_weights(ws)))
    assert betti_from_point_count(C) == eulerian_numbers(n - 2)


def test_betti_from_point_count():
    assert betti_from_point_count(CountPolynomial((1, 1))) == [1, 1]
    assert betti_from_point_count(CountPolynomial((1, 16, 16, 1))) == [1, 16, 16, 1]
    with pytest.raises(NegativeCoefficient):
        betti_from_point_count(CountPolynomial((1, -2, 1)))


def test_count_polynomial_eval_and_format():
    C = CountPolynomial((1, 5, 1))
    assert C(1) == 7 and C(2) == 15
    assert str(C) == "1+5*q+q^2"
    assert format_polynomial([1, 0, 5, 0, 1]) == "1+5*t^2+t^4"

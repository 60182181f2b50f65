from fractions import Fraction

import pytest

from tilinglab.qlaurent import (
    NotAPerfectSquare,
    QPoly,
    QRat,
    delta_11,
    delta_11_xyk,
    delta_12,
    delta_21,
    delta_22,
    eval_at,
    hyper,
    hyper_q,
    label_sqrt_ratio,
    q_fact,
    q_int,
    q_plus,
    sqrt_perfect,
    xy_plus,
)

q = QPoly.monomial(1)
qi = QPoly.monomial(-1)
X = QPoly.monomial(0, 1, 0)
Y = QPoly.monomial(0, 0, 1)


def test_q_int_values():
    assert q_int(0) == 0
    assert q_int(1) == 1
    assert q_int(3) == q**2 + 1 + qi**2
    assert q_int(-3) == -q_int(3)


def test_q_fact_values():
    assert q_fact(0) == 1
    assert q_fact(2) == q + qi
    assert q_fact(3) == q**3 + 2 * q + 2 * qi + qi**3
    with pytest.raises(ValueError):
        q_fact(-1)


def test_q_plus_values():
    assert q_plus(0) == 1
    assert q_plus(1) == (q + qi) * Fraction(1, 2)
    assert q_plus(2) == (q**2 + qi**2) * Fraction(1, 2)
    assert q_plus(-2) == q_plus(2)


def test_hyperfactorial():
    assert hyper_q(0) == 1
    assert hyper_q(2) == 1
    assert hyper_q(3) == q + qi
    assert [hyper(n) for n in range(5)] == [1, 1, 1, 2, 12]


def test_delta_11_examples():
    assert delta_11([]) == 1
    assert delta_11([-1, 1]) == 1
    assert delta_11([0, 2]) == q_plus(1)
    with pytest.raises(ValueError):
        delta_11([0, 1])


def test_delta_21_and_cross_products():
    assert delta_21([2]) == 1
    assert delta_21([2, 4]) == q_int(6) * q_int(2) * Fraction(1, 4)
    assert delta_12([0], [2]) == q_plus(1)
    assert delta_12([], [2, 4]) == 1
    assert delta_22([2], [4]) == q_int(6) * q_int(2) * Fraction(1, 4)
    with pytest.raises(ValueError):
        delta_21([0, 2])
    with pytest.raises(ValueError):
        delta_12([2], [2])


def test_delta_11_xyk_examples():
    assert delta_11_xyk([3], 1, 2, 5) == 1
    assert delta_11_xyk([1, 2], 1, 1, 0) == (X + Y) * Fraction(1, 2)
    # X = Y = 1, k = 0 and shifted positions give the plain product
    W = [1, 3, 4]
    x, y = 2, 3
    Z = [2 * w - (x + y + 1) for w in W]
    assert delta_11_xyk(W, x, y, 0).subs(1, 1) == delta_11(Z)


def test_sqrt_perfect():
    assert sqrt_perfect(QRat(QPoly.const(1))) == 1
    half_sum = (q + qi) * Fraction(1, 2)
    assert sqrt_perfect(QRat(half_sum * half_sum)) == half_sum
    with pytest.raises(NotAPerfectSquare):
        sqrt_perfect(QRat(q_int(2)))


def test_label_sqrt_ratio_cancels_pairs():
    L1 = [-4, -2, 2, 4]
    L2 = [-6, -2, 2, 6]
    assert label_sqrt_ratio(L2, L1, 4) == QRat(q_int(6), q_int(4))


def test_eval_at_examples():
    assert eval_at(q_int(2), 1) == 2
    assert eval_at(q_int(3), 2) == Fraction(21, 4)
    assert eval_at(q_plus(1), 3) == Fraction(5, 3)
    assert eval_at(xy_plus(1), 2, 3, 5) == Fraction(3 * 2 + Fraction(5, 2), 2)
    assert eval_at(QRat(q_int(4), q_int(2)), 2) == eval_at(q_int(4), 2) / eval_at(q_int(2), 2)
    with pytest.raises(ZeroDivisionError):
        eval_at(q, 0)


def test_qrat_equality_is_cross_multiplication():
    a = QRat(q_int(4), q_int(2))
    b = QRat(q**2 + qi**2 + 0, QPoly.const(1))
    assert a == b
    assert a != QRat(q_int(3))


def test_qrat_as_poly_and_inexact_division():
    assert QRat(q_int(6), q_int(3)).as_poly() == q**3 + qi**3
    with pytest.raises(ValueError):
        QRat(q_int(3), q_int(2)).as_poly()


def test_serialization_roundtrip():
    p = q_plus(3) * q_int(2) - X * Y * Fraction(2, 7)
    assert QPoly.from_list(p.to_list()) == p
    assert QPoly().to_list() == []
    # sorted by exponent, highest first
    assert (q + qi).to_list() == [[1, 0, 0, "1"], [-1, 0, 0, "1"]]

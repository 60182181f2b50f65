"""Closed-form product formulas for the tiling generating functions.

Every function returns exact :class:`QPoly` / :class:`QRat` values.  Label
arguments are doubled integers, as everywhere in the package.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb

from .qlaurent import (
    QPoly,
    QRat,
    delta_11,
    delta_11_xyk,
    delta_21,
    hyper,
    hyper_q,
    label_sqrt_ratio,
    prod,
    q_fact,
    q_int,
    q_plus,
    xy_plus,
)
from .regions import HSpec


def macmahon(a: int, b: int, c: int) -> int:
    return hyper(a) * hyper(b) * hyper(c) * hyper(a + b + c) // (hyper(a + b) * hyper(b + c) * hyper(c + a))


def hexagon_tgf(a: int, b: int, c: int, k: int = 0, xy: bool = False) -> QRat:
    """Weighted hexagon a,b,c with the weight axis at i = k."""
    w = xy_plus if xy else q_plus
    front = prod(w(k + i - j) for i in range(1, b + 1) for j in range(1, c + 1))
    num = hyper_q(a) * hyper_q(b) * hyper_q(c) * hyper_q(a + b + c)
    den = hyper_q(a + b) * hyper_q(b + c) * hyper_q(c + a)
    return QRat(front * num, den)


def _fact_prod(values) -> QPoly:
    return prod(q_fact(v) for v in values)


def trapezoid_tgf(x: int, y: int, Z) -> QRat:
    Z = list(Z)
    if len(Z) != y:
        return QRat(QPoly())
    return QRat(delta_11(Z), _fact_prod(range(1, y)))


def trapezoid_xy_tgf(x: int, y: int, W, k: int) -> QRat:
    """Dents at positions W (1..x+y from the bottom), X/Y weights, axis at i = k."""
    W = list(W)
    if len(W) != y:
        return QRat(QPoly())
    return QRat(delta_11_xyk(W, x, y, k), _fact_prod(range(1, y)))


def quartered_tgf(x: int, width: int, Z) -> QRat:
    y, odd = divmod(width, 2)
    Z = list(Z)
    if odd:
        if len(Z) != y + 1:
            return QRat(QPoly())
        return QRat(delta_21(Z), _fact_prod(2 * i - 2 for i in range(1, y + 2)))
    if len(Z) != y:
        return QRat(QPoly())
    front = prod(q_int(z) * Fraction(1, 2) for z in Z)
    return QRat(delta_21(Z) * front, _fact_prod(2 * i - 1 for i in range(1, y + 1)))


# shuffling ratios for the dented hexagons


def _delta_ratio(L1, R1, L2, R2) -> QRat:
    return QRat(delta_11(L2) * delta_11(R2), delta_11(L1) * delta_11(R1))


def _check_flip(spec: HSpec, L2, R2):
    L1, R1 = set(spec.L), set(spec.R)
    L2, R2 = set(L2), set(R2)
    lflip, rflip = L1 - L2, R1 - R2
    if L1 & L2 != L1 - lflip or (L1 - lflip) | rflip != L2 or (R1 - rflip) | lflip != R2:
        raise ValueError("second pair is not a flip of the first")
    if len(lflip) != 2 * spec.m or len(rflip) != 2 * spec.n:
        raise ValueError("flip sets must have sizes 2m and 2n")
    for s in (lflip, rflip):
        if s != {-v for v in s}:
            raise ValueError("flip sets must be symmetric")
    return lflip, rflip


def thm31_rhs(spec: HSpec, L2, R2) -> QRat:
    """M(H_{n,m}(L2,R2)) / M(H_{m,n}(L1,R1)) for the odd diagonal."""
    if spec.even:
        raise ValueError("odd-diagonal formula applied to an even-diagonal hexagon")
    _check_flip(spec, L2, R2)
    m, n, a, b = spec.m, spec.n, spec.a, spec.b
    odd_fact = lambda k: _fact_prod(2 * i - 1 for i in range(1, k + 1))  # noqa: E731
    r = QRat(odd_fact(m + a) ** 2, odd_fact(n + a) ** 2)
    r = r * QRat(_fact_prod(range(1, 2 * n + b)), _fact_prod(range(1, 2 * m + b)))
    r = r * label_sqrt_ratio(L2, spec.L, 4)
    return r * _delta_ratio(spec.L, spec.R, L2, R2)


def thm32_rhs(spec: HSpec, L2, R2) -> QRat:
    """Same ratio for the even diagonal (half-integer labels)."""
    if not spec.even:
        raise ValueError("even-diagonal formula applied to an odd-diagonal hexagon")
    _check_flip(spec, L2, R2)
    m, n, a, b = spec.m, spec.n, spec.a, spec.b
    even_fact = lambda k: _fact_prod(2 * i - 2 for i in range(1, k + 1))  # noqa: E731
    r = QRat(even_fact(m + a + 1) ** 2, even_fact(n + a + 1) ** 2)
    r = r * QRat(_fact_prod(range(1, 2 * n + b)), _fact_prod(range(1, 2 * m + b)))
    r = r * label_sqrt_ratio(spec.L, L2, 1)
    return r * _delta_ratio(spec.L, spec.R, L2, R2)


def shuffle_rhs(spec: HSpec, other: HSpec) -> QRat:
    if (spec.a, spec.b, spec.c, spec.even) != (other.a, other.b, other.c, other.even):
        raise ValueError("hexagons differ in shape")
    if (other.m, other.n) != (spec.n, spec.m):
        raise ValueError("m and n must be exchanged")
    f = thm32_rhs if spec.even else thm31_rhs
    return f(spec, other.L, other.R)


# decomposition along the diagonal


def diagonal_split_tgf(spec: HSpec, max_subsets: int | None = None) -> QPoly:
    """Sum over the labels of horizontal lozenges crossing the diagonal of the
    product of the three piece formulas."""
    from .engine import CapExceeded, caps

    cap = caps()["split_subsets"] if max_subsets is None else max_subsets
    m, a, b, c = spec.m, spec.a, spec.b, spec.c
    n = spec.n
    Lset, Rset, Bset = set(spec.L), set(spec.R), set(spec.B)
    if spec.even:
        need = 2 * m + 2 * a + 2 - len(Lset)
        left_w = 2 * m + 2 * a + 1
        sx = 2 * m + 2 * a + 2 * c - b + 2
    else:
        need = 2 * m + 2 * a - len(Lset)
        left_w = 2 * m + 2 * a
        sx = 2 * m + 2 * a + 2 * c - b + 1
    sy = 2 * n + b
    free = [z for z in spec.labels() if z not in Lset | Rset | Bset and z != 0]
    if need < 0 or need > len(free):
        return QPoly()
    if comb(len(free), need) > cap:
        raise CapExceeded(f"{comb(len(free), need)} crossing sets exceed the cap {cap}")
    xq = n + c
    total = QRat(QPoly())
    for C in combinations(free, need):
        Cs = set(C)
        pos = sorted(v for v in Lset | Cs if v > 0)
        neg = sorted(-v for v in Lset | Cs if v < 0)
        top = quartered_tgf(xq, left_w, pos)
        if top.is_zero():
            continue
        bot = quartered_tgf(xq, left_w, neg)
        if bot.is_zero():
            continue
        right = trapezoid_tgf(sx, sy, sorted(Rset | Cs))
        if right.is_zero():
            continue
        w = prod(q_plus(v) for v in C)
        total = total + QRat(w) * top * bot * right
    return total.as_poly()


# fern families


def fern_ratio_factor(fs) -> QRat:
    from .regions import FernSpec, fern_weight

    col = fs.collapsed()
    return QRat(fern_weight(fs.fern()), fern_weight(FernSpec((col.core(),))))


def thm34_lhs(fs) -> QRat:
    """Family region over its collapsed region, times the fern weight ratio."""
    from .engine import tgf_dp
    from .regions import family_collapsed, family_region

    bottom = tgf_dp(family_collapsed(fs))
    if bottom.is_zero():
        raise ZeroDivisionError("collapsed region has no tiling")
    return QRat(tgf_dp(family_region(fs)), bottom) * fern_ratio_factor(fs)


def thm34_rhs(fs, variant: str = "statement", d_y: str = "corrected") -> QRat:
    """Ratio of the two dented hexagons paired with the family region."""
    from .regions import thm34_instance

    inst = thm34_instance(fs, variant, d_y)
    # shuffle_rhs gives M(denominator) / M(numerator)
    return 1 / shuffle_rhs(inst.numerator, inst.denominator)


# polynomial forms of the closed formulas


def divide_exact(r: QRat) -> QPoly:
    """``r`` as a polynomial when its univariate denominator divides every
    X/Y slice of the numerator."""
    if r.num.is_univariate():
        return r.as_poly()
    if not r.den.is_univariate():
        raise ValueError("denominator involves X or Y")
    slices: dict[tuple[int, int], dict] = {}
    for (eq, ex, ey), c in r.num.terms.items():
        slices.setdefault((ex, ey), {})[eq] = c
    out = QPoly()
    for (ex, ey), coeffs in slices.items():
        part = QRat(QPoly.from_q_coeffs(coeffs), r.den).as_poly()
        out = out + part * QPoly.monomial(0, ex, ey)
    return out


def lemma41_S(x: int, y: int, Z) -> QPoly:
    return trapezoid_tgf(x, y, Z).as_poly()


def lemma42_R_even(x: int, y: int, Z) -> QPoly:
    return quartered_tgf(x, 2 * y, Z).as_poly()


def lemma42_R_odd(x: int, y: int, Z) -> QPoly:
    return quartered_tgf(x, 2 * y + 1, Z).as_poly()


def thmA1_S(x: int, y: int, W, k: int) -> QPoly:
    return divide_exact(trapezoid_xy_tgf(x, y, W, k))


def corA3_hex(a: int, b: int, c: int, k: int) -> QPoly:
    return divide_exact(hexagon_tgf(a, b, c, k, True))

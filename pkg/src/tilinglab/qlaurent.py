"""Exact Laurent polynomials in q (optionally also in X and Y) and the
q-analogues built from them.

Coefficients are Python ints or :class:`fractions.Fraction`.  Univariate
products of large operands go through Kronecker substitution, which turns a
polynomial product into a single big-integer product.

Labels passed to the product helpers are *doubled* (``Label2``): a label
``z`` is stored as the integer ``2*z``, so half-integers stay exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

Exp = tuple[int, int, int]  # (e_q, e_X, e_Y)

_KRON_THRESHOLD = 400


class NotAPerfectSquare(ValueError):
    pass


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _as_coeff(c):
    if isinstance(c, (int, Fraction)):
        return _norm(c)
    if isinstance(c, str):
        return _norm(Fraction(c))
    raise TypeError(f"unsupported coefficient {c!r}")


def _pack(coeffs: Mapping[int, int], lo: int, bits: int) -> int:
    width = bits // 8
    # nonnegative fast path via bytes, signed fallback via summation
    if all(v >= 0 for v in coeffs.values()):
        hi = max(coeffs)
        buf = bytearray(width * (hi - lo + 1))
        for e, v in coeffs.items():
            off = (e - lo) * width
            buf[off:off + width] = v.to_bytes(width, "little")
        return int.from_bytes(buf, "little")
    total = 0
    for e, v in coeffs.items():
        total += v << (bits * (e - lo))
    return total


def _unpack_signed(value: int, ndigits: int, bits: int) -> list[int]:
    width = bits // 8
    half = 1 << (bits - 1)
    bias = int.from_bytes((b"\x00" * (width - 1) + b"\x80") * ndigits, "little")
    raw = (value + bias).to_bytes(width * ndigits + 1, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") - half
            for i in range(ndigits)]


def kron_mul(a: Mapping[int, int], b: Mapping[int, int]) -> dict[int, int]:
    """Multiply two univariate integer Laurent polynomials given as
    exponent->coefficient maps, via one big-integer product."""
    if not a or not b:
        return {}
    alo, ahi = min(a), max(a)
    blo, bhi = min(b), max(b)
    amax = max(abs(v) for v in a.values())
    bsum = sum(abs(v) for v in b.values())
    bound = amax * bsum
    bits = -(-(bound.bit_length() + 2) // 8) * 8
    prod = _pack(a, alo, bits) * _pack(b, blo, bits)
    n = (ahi - alo) + (bhi - blo) + 1
    digits = _unpack_signed(prod, n, bits)
    base = alo + blo
    return {base + i: d for i, d in enumerate(digits) if d}


class QPoly:
    """Sparse Laurent polynomial in q, X, Y with exact rational coefficients."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[Exp, object] | None = None):
        t = {}
        if terms:
            for e, c in terms.items():
                c = _as_coeff(c)
                if c:
                    t[tuple(e)] = c
        self._t: dict[Exp, object] = t
        self._hash = None

    @classmethod
    def _raw(cls, t: dict) -> "QPoly":
        p = cls.__new__(cls)
        p._t = t
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "QPoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(cls, eq: int = 0, ex: int = 0, ey: int = 0, c=1) -> "QPoly":
        return cls({(eq, ex, ey): c})

    @classmethod
    def q(cls, k: int = 1) -> "QPoly":
        return cls.monomial(k)

    @classmethod
    def from_q_coeffs(cls, coeffs: Mapping[int, object]) -> "QPoly":
        return cls({(e, 0, 0): c for e, c in coeffs.items()})

    # basic accessors

    @property
    def terms(self) -> dict[Exp, object]:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_univariate(self) -> bool:
        return all(e[1] == 0 and e[2] == 0 for e in self._t)

    def q_coeffs(self) -> dict[int, object]:
        if not self.is_univariate():
            raise ValueError("polynomial involves X or Y")
        return {e[0]: c for e, c in self._t.items()}

    def q_degree_range(self) -> tuple[int, int]:
        if not self._t:
            raise ValueError("zero polynomial has no degree")
        es = [e[0] for e in self._t]
        return min(es), max(es)

    def leading(self) -> tuple[Exp, object]:
        """Largest exponent in (e_q, e_X, e_Y) lexicographic order."""
        if not self._t:
            raise ValueError("zero polynomial")
        e = max(self._t)
        return e, self._t[e]

    def __len__(self):
        return len(self._t)

    # arithmetic

    @staticmethod
    def _coerce(other) -> "QPoly":
        if isinstance(other, QPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return QPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self._t)
        for e, c in other._t.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = _norm(v)
            else:
                t.pop(e, None)
        return QPoly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return QPoly._raw({e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return QPoly()
            return QPoly._raw({e: _norm(c * other) for e, c in self._t.items()})
        if not isinstance(other, QPoly):
            return NotImplemented
        a, b = self._t, other._t
        if not a or not b:
            return QPoly()
        if len(a) * len(b) > _KRON_THRESHOLD and self.is_univariate() and other.is_univariate():
            return _univariate_mul(self, other)
        t: dict[Exp, object] = {}
        for (e1, e2, e3), c in a.items():
            for (f1, f2, f3), d in b.items():
                k = (e1 + f1, e2 + f2, e3 + f3)
                t[k] = t.get(k, 0) + c * d
        return QPoly._raw({e: _norm(c) for e, c in t.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        if isinstance(other, QPoly):
            return QRat(self, other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial; use QRat")
        result = QPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, eq: int = 0, ex: int = 0, ey: int = 0) -> "QPoly":
        """Multiply by the monomial q^eq X^ex Y^ey."""
        return QPoly._raw({(e[0] + eq, e[1] + ex, e[2] + ey): c for e, c in self._t.items()})

    def subs(self, X=None, Y=None) -> "QPoly":
        """Substitute numbers for X and/or Y."""
        t: dict[Exp, object] = {}
        for (eq, ex, ey), c in self._t.items():
            if X is not None:
                c = c * Fraction(X) ** ex
                ex = 0
            if Y is not None:
                c = c * Fraction(Y) ** ey
                ey = 0
            k = (eq, ex, ey)
            t[k] = t.get(k, 0) + c
        return QPoly({e: c for e, c in t.items() if c})

    def eval_at(self, q, X=1, Y=1) -> Fraction:
        q, X, Y = Fraction(q), Fraction(X), Fraction(Y)
        if q == 0:
            raise ZeroDivisionError("q must be nonzero")
        if not self._t:
            return Fraction(0)
        if q.denominator == 1 and self.is_univariate():
            # Horner over integers, then one division
            coeffs, den = _integerize(self.q_coeffs())
            lo, hi = min(coeffs), max(coeffs)
            qi = q.numerator
            acc = 0
            for e in range(hi, lo - 1, -1):
                acc = acc * qi + coeffs.get(e, 0)
            return Fraction(acc, den) * q ** lo
        total = Fraction(0)
        for (eq, ex, ey), c in self._t.items():
            total += c * q ** eq * X ** ex * Y ** ey
        return total

    # comparison and printing

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPoly.const(other)
        if isinstance(other, QRat):
            return other == self
        if not isinstance(other, QPoly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __repr__(self):
        return f"QPoly({self})"

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for e in sorted(self._t, reverse=True):
            c = self._t[e]
            mono = []
            for name, k in zip(("q", "X", "Y"), e):
                if k == 1:
                    mono.append(name)
                elif k:
                    mono.append(f"{name}^{k}")
            m = "*".join(mono)
            if not m:
                parts.append(str(c))
            elif c == 1:
                parts.append(m)
            elif c == -1:
                parts.append("-" + m)
            else:
                parts.append(f"{c}*{m}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_list(self) -> list:
        """Sparse form ``[[e_q, e_X, e_Y, "num/den"], ...]`` sorted by exponent."""
        out = []
        for e in sorted(self._t, reverse=True):
            c = Fraction(self._t[e])
            s = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
            out.append([e[0], e[1], e[2], s])
        return out

    @classmethod
    def from_list(cls, items: Iterable) -> "QPoly":
        t: dict[Exp, object] = {}
        for eq, ex, ey, c in items:
            k = (int(eq), int(ex), int(ey))
            t[k] = t.get(k, 0) + Fraction(c)
        return cls(t)


def _univariate_mul(a: QPoly, b: QPoly) -> QPoly:
    ca, da = _integerize(a.q_coeffs())
    cb, db = _integerize(b.q_coeffs())
    prod = kron_mul(ca, cb)
    den = da * db
    if den == 1:
        return QPoly._raw({(e, 0, 0): c for e, c in prod.items()})
    return QPoly._raw({(e, 0, 0): _norm(Fraction(c, den)) for e, c in prod.items()})


def _integerize(coeffs: Mapping[int, object]) -> tuple[dict[int, int], int]:
    den = 1
    for c in coeffs.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    if den == 1:
        return dict(coeffs), 1
    return {e: int(c * den) for e, c in coeffs.items()}, den


class QRat:
    """Quotient of two :class:`QPoly` values.

    No gcd reduction is attempted in general; equality is decided by
    cross-multiplication.  The denominator is normalised to a positive
    leading coefficient.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = QPoly._coerce(num) if not isinstance(num, QPoly) else num
        if den is None:
            den = QPoly.const(1)
        elif not isinstance(den, QPoly):
            den = QPoly._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        # fold a constant denominator into the numerator
        if len(den) == 1:
            (e, c), = den._t.items()
            inv = Fraction(1) / c
            num = num.shift(-e[0], -e[1], -e[2]) * inv
            den = QPoly.const(1)
        elif den.leading()[1] < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    @staticmethod
    def _coerce(other):
        if isinstance(other, QRat):
            return other
        if isinstance(other, (QPoly, int, Fraction)):
            return QRat(other)
        return NotImplemented

    def is_zero(self):
        return self.num.is_zero()

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return QRat(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return QRat(self.num + other.num, self.den)
        return QRat(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return QRat(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __pow__(self, n: int):
        if n >= 0:
            return QRat(self.num ** n, self.den ** n)
        return QRat(self.den ** -n, self.num ** -n)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def eval_at(self, q, X=1, Y=1) -> Fraction:
        return self.num.eval_at(q, X, Y) / self.den.eval_at(q, X, Y)

    def as_poly(self) -> QPoly:
        """Exact quotient when the denominator divides the numerator."""
        if self.den == QPoly.const(1):
            return self.num
        quo, rem = q_divmod(self.num, self.den)
        if not rem.is_zero():
            raise ValueError("not a Laurent polynomial")
        return quo

    def __repr__(self):
        return f"QRat(({self.num}) / ({self.den}))"


# univariate division, gcd and square roots


def q_divmod(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly]:
    """Long division of univariate Laurent polynomials, normalised so the
    remainder has q-degree below that of ``b`` after aligning low ends."""
    ca, cb = a.q_coeffs(), b.q_coeffs()
    if not cb:
        raise ZeroDivisionError
    blo, bhi = min(cb), max(cb)
    lead = Fraction(cb[bhi])
    rem = {e: Fraction(c) for e, c in ca.items()}
    quo: dict[int, Fraction] = {}
    alo = min(rem) if rem else 0
    # shift so that the remainder's low end can't drop below alo
    while rem and max(rem) - bhi >= alo - blo:
        top = max(rem)
        f = rem[top] / lead
        s = top - bhi
        quo[s] = quo.get(s, 0) + f
        for e, c in cb.items():
            v = rem.get(e + s, 0) - f * c
            if v:
                rem[e + s] = v
            else:
                rem.pop(e + s, None)
    return QPoly.from_q_coeffs(quo), QPoly.from_q_coeffs(rem)


def q_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Monic gcd of two univariate Laurent polynomials, as an ordinary
    polynomial with nonzero constant term."""

    def poly(p):
        c = p.q_coeffs()
        lo = min(c)
        return [Fraction(c.get(lo + i, 0)) for i in range(max(c) - lo + 1)]

    def strip(u):
        while u and u[-1] == 0:
            u.pop()
        return u

    u, v = poly(a), poly(b)
    while v:
        # remainder of u by v (coefficient lists, low degree first)
        u = u[:]
        while len(u) >= len(v) and u:
            f = u[-1] / v[-1]
            k = len(u) - len(v)
            for i, c in enumerate(v):
                u[k + i] -= f * c
            strip(u)
        u, v = v, u
    lead = u[-1]
    return QPoly.from_q_coeffs({i: c / lead for i, c in enumerate(u) if c})


def _rational_sqrt(c) -> Fraction:
    c = Fraction(c)
    if c < 0:
        raise NotAPerfectSquare(f"negative coefficient {c}")
    n, d = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if n * n != c.numerator or d * d != c.denominator:
        raise NotAPerfectSquare(f"{c} is not a rational square")
    return Fraction(n, d)


def poly_sqrt(p: QPoly) -> QPoly:
    """Square root of a univariate Laurent polynomial with positive leading
    coefficient; raises :class:`NotAPerfectSquare` otherwise."""
    if p.is_zero():
        return QPoly()
    c = {e: Fraction(v) for e, v in p.q_coeffs().items()}
    lo, hi = min(c), max(c)
    if (hi - lo) % 2 or hi % 2:
        raise NotAPerfectSquare("odd degree span")
    top = hi // 2
    s: dict[int, Fraction] = {top: _rational_sqrt(c[hi])}
    two_lead = 2 * s[top]
    rem = dict(c)
    # subtract square of the leading term then peel terms from the top
    rem[hi] -= s[top] ** 2
    for k in range(top - 1, lo // 2 - 1, -1):
        # coefficient of q^(top+k) in rem determines s_k
        e = top + k
        v = rem.get(e, 0)
        sk = v / two_lead
        if sk:
            for j, sj in list(s.items()):
                rem[j + k] = rem.get(j + k, 0) - 2 * sj * sk
            rem[2 * k] = rem.get(2 * k, 0) - sk * sk
            s[k] = sk
    if any(rem.values()):
        raise NotAPerfectSquare("nonzero remainder")
    return QPoly.from_q_coeffs(s)


def sqrt_perfect(r: QRat | QPoly) -> QRat:
    """Exact square root of a ratio of univariate Laurent polynomials.

    Numerator and denominator are tried separately first; if that fails the
    common univariate gcd is cancelled and the attempt repeated.  The sign is
    fixed so both parts have a positive leading coefficient.
    """
    if isinstance(r, QPoly):
        r = QRat(r)
    num, den = r.num, r.den
    if num.is_zero():
        return QRat(QPoly())
    if num.leading()[1] < 0:
        num, den = -num, -den
    try:
        return QRat(poly_sqrt(num), poly_sqrt(den))
    except NotAPerfectSquare:
        pass
    g = q_gcd(num, den)
    n2, rn = q_divmod(num, g)
    d2, rd = q_divmod(den, g)
    if not (rn.is_zero() and rd.is_zero()):
        raise NotAPerfectSquare("gcd cancellation failed")
    if d2.leading()[1] < 0:
        n2, d2 = -n2, -d2
    # the gcd is only defined up to a power of q; move it onto one side
    ln, ld = n2.q_degree_range()[0], d2.q_degree_range()[0]
    if (ln - ld) % 2:
        raise NotAPerfectSquare("odd monomial factor")
    root = QRat(poly_sqrt(n2.shift(-ln)), poly_sqrt(d2.shift(-ld)))
    return QRat(root.num.shift((ln - ld) // 2), root.den)


# q-analogues


@lru_cache(maxsize=None)
def q_int(n: int) -> QPoly:
    """(q^n - q^-n)/(q - q^-1); odd in n."""
    if n < 0:
        return -q_int(-n)
    return QPoly.from_q_coeffs({n - 1 - 2 * j: 1 for j in range(n)})


@lru_cache(maxsize=None)
def q_plus(n: int) -> QPoly:
    """(q^n + q^-n)/2."""
    if n == 0:
        return QPoly.const(1)
    h = Fraction(1, 2)
    return QPoly.from_q_coeffs({n: h, -n: h})


def xy_plus(n: int) -> QPoly:
    """(X q^n + Y q^-n)/2, the horizontal-lozenge weight in the X/Y frame."""
    h = Fraction(1, 2)
    return QPoly({(n, 1, 0): h, (-n, 0, 1): h})


@lru_cache(maxsize=None)
def q_fact(n: int) -> QPoly:
    if n < 0:
        raise ValueError("factorial of a negative integer")
    r = QPoly.const(1)
    for i in range(1, n + 1):
        r = r * q_int(i)
    return r


@lru_cache(maxsize=None)
def hyper_q(n: int) -> QPoly:
    """prod_{i=0}^{n-1} q_fact(i)."""
    r = QPoly.const(1)
    for i in range(n):
        r = r * q_fact(i)
    return r


def hyper(n: int) -> int:
    r = 1
    for i in range(n):
        r *= math.factorial(i)
    return r


def prod(factors: Iterable[QPoly]) -> QPoly:
    # univariate factors are multiplied with integer coefficients and a
    # single rational scale, which avoids Fraction arithmetic per term
    acc: dict[int, int] = {0: 1}
    scale = Fraction(1)
    rest = QPoly.const(1)
    for f in factors:
        if isinstance(f, (int, Fraction)):
            scale *= f
        elif f.is_univariate():
            c, d = _integerize(f.q_coeffs())
            acc = kron_mul(acc, c) if len(acc) * len(c) > 4 else _small_mul(acc, c)
            scale /= d
        else:
            rest = rest * f
        if not acc:
            return QPoly()
    r = QPoly._raw({(e, 0, 0): _norm(c * scale) for e, c in acc.items() if c})
    return r * rest if rest != QPoly.const(1) else r


def _small_mul(a: Mapping[int, int], b: Mapping[int, int]) -> dict[int, int]:
    t: dict[int, int] = {}
    for e, c in a.items():
        for f, d in b.items():
            t[e + f] = t.get(e + f, 0) + c * d
    return {e: c for e, c in t.items() if c}


# label products; all labels are doubled


def _check_parity(labels: list[int]) -> None:
    if labels and len({v % 2 for v in labels}) > 1:
        raise ValueError("labels mix integers and half-integers")


def _check_disjoint(s: list[int], t: list[int]) -> None:
    if set(s) & set(t):
        raise ValueError("label sets overlap")


def delta_11(S: Iterable[int]) -> QPoly:
    s = sorted(S)
    _check_parity(s)
    if len(set(s)) != len(s):
        raise ValueError("repeated label")
    return prod(f for a, b in combinations(s, 2) for f in (q_plus((a + b) // 2), q_int((b - a) // 2)))


def delta_21(T: Iterable[int]) -> QPoly:
    t = sorted(T)
    if any(v <= 0 for v in t):
        raise ValueError("labels must be positive")
    _check_parity(t)
    half = Fraction(1, 4)
    return prod(f for a, b in combinations(t, 2) for f in (q_int(b + a), q_int(b - a), half))


def delta_12(S: Iterable[int], T: Iterable[int]) -> QPoly:
    s, t = list(S), list(T)
    _check_disjoint(s, t)
    _check_parity(s + t)
    return prod(f for a in s for b in t for f in (q_plus((a + b) // 2), q_int(abs(a - b) // 2)))


def delta_22(S: Iterable[int], T: Iterable[int]) -> QPoly:
    s, t = list(S), list(T)
    _check_disjoint(s, t)
    _check_parity(s + t)
    half = Fraction(1, 4)
    return prod(f for a in s for b in t for f in (q_int(a + b), q_int(abs(a - b)), half))


def delta_11_xyk(W: Iterable[int], x: int, y: int, k: int) -> QPoly:
    """Product over w1 < w2 in W (plain integers in 1..x+y) of
    (X q^n + Y q^-n)/2 * <w2-w1> with n = w1 + w2 + k - (x+y+1)."""
    w = sorted(W)
    return prod(xy_plus(a + b + k - (x + y + 1)) * q_int(b - a) for a, b in combinations(w, 2))


def label_sqrt_ratio(num_labels: Iterable[int], den_labels: Iterable[int], scale) -> QRat:
    """Square root of prod_{z in num}(<|z2|>/scale) / prod_{z in den}(<|z2|>/scale)
    where z2 ranges over doubled labels.

    Shared labels cancel; what is left must pair up by absolute value, which
    is the case when both sets differ by sets symmetric about zero.
    """
    from collections import Counter

    cn = Counter(abs(v) for v in num_labels)
    cd = Counter(abs(v) for v in den_labels)
    common = cn & cd
    cn -= common
    cd -= common
    if 0 in cn or 0 in cd:
        raise ValueError("label 0 makes the radicand vanish")
    for c in (cn, cd):
        if any(m % 2 for m in c.values()):
            raise NotAPerfectSquare("unpaired label in radicand")
    scale = Fraction(scale)
    num = prod(q_int(v) * (1 / scale) for v, m in cn.items() for _ in range(m // 2))
    den = prod(q_int(v) * (1 / scale) for v, m in cd.items() for _ in range(m // 2))
    return QRat(num, den)


def eval_at(p: QPoly | QRat, q0, X0=1, Y0=1) -> Fraction:
    """Exact value of ``p`` at q = q0, X = X0, Y = Y0."""
    return p.eval_at(q0, X0, Y0)

"""Constructors for the regions studied here.

All labels are doubled integers.  A label on a vertical lattice line sits
at ``Y = axis2 + label2``, so the doubled label of a unit segment equals the
vertical offset of its midpoint from the weight axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .lattice import (
    LEFT,
    RIGHT,
    Region,
    Tri,
    WeightFrame,
    L,
    R,
    horizontal_lozenges_inside,
    path_vertices,
    polygon_tris,
    vertical_edge,
    zigzag,
)
from .qlaurent import QPoly, prod, q_plus


def hexagon_outline(sides: tuple[int, ...]) -> tuple[set[Tri], int]:
    """Triangles of the hexagon with the given sides, clockwise from the
    left (N, NE, SE, S, SW, NW), with the bottom-left corner at the origin.

    Returns the triangles and the Y of the left side's midpoint."""
    s1, s2, s3, s4, s5, s6 = sides
    if min(sides) < 0:
        raise ValueError(f"negative side in {sides}")
    if s2 + s3 != s5 + s6 or 2 * s1 + s2 - s3 - 2 * s4 - s5 + s6 != 0:
        raise ValueError(f"sides {sides} do not close up")
    poly = path_vertices((0, 0), [("N", s1), ("NE", s2), ("SE", s3), ("S", s4), ("SW", s5), ("NW", s6)])
    return polygon_tris(poly), s1


def intrusion(length: int, axis2: int) -> list[Tri]:
    """Left-aligned row of ``length`` unit triangles on the line ``Y = axis2``
    starting at column 0; requires ``axis2`` even."""
    if axis2 % 2:
        raise ValueError("intrusion row needs an even axis")
    out = []
    for i in range(length):
        c = 2 * (i // 2) + 1
        out.append(L(c, axis2) if i % 2 == 0 else R(c, axis2))
    return out


def hexagon(a: int, b: int, c: int, k: int = 0, xy: bool = False) -> Region:
    """Hexagon with sides a, b, c, a, b, c; the weight axis is the
    perpendicular bisector of the left side shifted so it sits at i = k."""
    tris, mid = hexagon_outline((a, b, c, a, b, c))
    return Region(frozenset(tris), frame=WeightFrame(mid - k, xy), name=f"hexagon({a},{b},{c})")


# trapezoids and quartered hexagons


def trapezoid(x: int, y: int, Z: Iterable[int] = (), k: int = 0, xy: bool = False) -> Region:
    """Trapezoid with sides x, y, x+y, y and left-pointing dents on the right
    side at doubled labels ``Z`` (odd when x+y is even and vice versa)."""
    if x < 0 or y < 0:
        raise ValueError("negative side")
    poly = path_vertices((0, 0), [("N", x), ("NE", y), ("S", x + y), ("NW", y)])
    tris = polygon_tris(poly)
    Z = list(Z)
    top = x + y - 1
    for z in Z:
        if abs(z) > top or (z - top) % 2:
            raise ValueError(f"label {z}/2 is not on the right side of S({x},{y})")
    if len(set(Z)) != len(Z):
        raise ValueError("repeated label")
    dents = [L(y, x + z) for z in Z]
    if any(t not in tris for t in dents):
        raise ValueError(f"S({x},{y}) has no right side to dent")
    base = Region(frozenset(tris), frame=WeightFrame(x - k, xy), name=f"S({x},{y})")
    return base.without(dents)


def trapezoid_w(x: int, y: int, W: Iterable[int], k: int = 0, xy: bool = True) -> Region:
    """Same trapezoid with dents given as positions 1..x+y from the bottom."""
    return trapezoid(x, y, [2 * w - (x + y + 1) for w in W], k, xy)


def quartered(x: int, width: int, Z: Iterable[int]) -> Region:
    """Quartered hexagon: north x, north-east ``width``, south down to the
    zigzag, then back west along a zigzag whose lowest vertices carry the
    weight axis.  Dents are left-pointing triangles on the right side at
    doubled labels ``Z`` (labels 1..x+y bottom to top when width = 2y,
    1/2..x+y+1/2 when width = 2y+1)."""
    y, odd = divmod(width, 2)
    if odd:
        moves = [("N", x), ("NE", width), ("S", x + y + 1)] + zigzag(width, "NW", "SW")
        nseg = x + y + 1
    else:
        moves = [("N", x), ("NE", width), ("S", x + y)] + zigzag(width, "SW", "NW")
        nseg = x + y
    poly = path_vertices((0, 0), moves)
    if poly[-1] != (0, 0):
        raise AssertionError("quartered hexagon outline does not close")
    tris = polygon_tris(poly)
    Z = list(Z)
    allowed = {2 * j - odd for j in range(1, nseg + 1)}
    for z in Z:
        if z not in allowed:
            raise ValueError(f"label {z}/2 is not on the right side")
    if len(set(Z)) != len(Z):
        raise ValueError("repeated label")
    axis = -1
    base = Region(frozenset(tris), frame=WeightFrame(axis), name=f"R({x},{width})")
    return base.without(L(width, axis + z) for z in Z)


trapezoid_S = trapezoid


def quarter_R_even(x: int, y: int, Z: Iterable[int]) -> Region:
    return quartered(x, 2 * y, Z)


def quarter_R_odd(x: int, y: int, Z: Iterable[int]) -> Region:
    return quartered(x, 2 * y + 1, Z)


# hexagons with an intrusion and a dented diagonal


@dataclass(frozen=True)
class HSpec:
    """Hexagon with an intrusion on its horizontal symmetry axis and dents or
    barriers on the vertical diagonal.

    ``even=False`` is the odd-diagonal family (integer labels, the intrusion
    ends in a left-pointing triangle at label 0); ``even=True`` is the
    even-diagonal family with half-integer labels.
    """

    m: int
    n: int
    a: int
    b: int
    c: int
    L: tuple = ()
    R: tuple = ()
    B: tuple = ()
    even: bool = False

    def __post_init__(self):
        for name in ("L", "R", "B"):
            object.__setattr__(self, name, tuple(sorted(set(getattr(self, name)))))
        if min(self.m, self.n, self.a, self.b, self.c) < 0:
            raise ValueError("parameters must be nonnegative")
        extra = 2 if self.even else 1
        if 2 * self.a + 2 * self.c + extra < self.b:
            raise ValueError("b is too large for the hexagon to close")
        top = self.top_label2
        par = 1 if self.even else 0
        for name in ("L", "R", "B"):
            for z in getattr(self, name):
                if abs(z) > top or z % 2 != par:
                    raise ValueError(f"label {z}/2 in {name} is not on the diagonal")
        if not self.even and 0 in self.L:
            raise ValueError("label 0 on the left is part of the intrusion")
        if set(self.B) & (set(self.L) | set(self.R)):
            raise ValueError("barrier on a removed triangle")

    @property
    def kind(self) -> str:
        return "H'" if self.even else "H"

    @property
    def N(self) -> int:
        return self.m + self.n + self.a + self.c

    @property
    def top_label2(self) -> int:
        return 2 * self.N + (1 if self.even else 0)

    def labels(self) -> list[int]:
        t = self.top_label2
        return list(range(-t, t + 1, 2))

    @property
    def diagonal(self) -> int:
        return 2 * self.m + 2 * self.a + (2 if self.even else 1)

    def sides(self) -> tuple[int, ...]:
        n, b, c = self.n, self.b, self.c
        d = self.diagonal
        return (2 * n + 2 * c, d, 2 * n + b, d + 2 * c - b, 2 * n + b, d)

    def flip(self, lflip: Iterable[int], rflip: Iterable[int]) -> "HSpec":
        """Move the left dents in ``lflip`` to the right and the right dents
        in ``rflip`` to the left; m and n swap."""
        lf, rf = set(lflip), set(rflip)
        if not lf <= set(self.L) - set(self.R) or not rf <= set(self.R) - set(self.L):
            raise ValueError("flip sets must be unshared dents")
        if lf != {-v for v in lf} or rf != {-v for v in rf}:
            raise ValueError("flip sets must be symmetric")
        if len(lf) != 2 * self.m or len(rf) != 2 * self.n:
            raise ValueError("flip sets must have sizes 2m and 2n")
        return HSpec(
            self.n, self.m, self.a, self.b, self.c,
            tuple((set(self.L) - lf) | rf), tuple((set(self.R) - rf) | lf), self.B, self.even,
        )

    def to_json(self) -> dict:
        return {
            "type": self.kind, "m": self.m, "n": self.n, "a": self.a, "b": self.b, "c": self.c,
            "L1": list(self.L), "R1": list(self.R), "B": list(self.B),
        }

    @classmethod
    def from_json(cls, d: dict) -> "HSpec":
        kind = d.get("type", "H")
        if kind not in ("H", "H'"):
            raise ValueError(f"unknown hexagon type {kind!r}")
        return cls(
            int(d["m"]), int(d["n"]), int(d["a"]), int(d["b"]), int(d["c"]),
            tuple(int(v) for v in d.get("L1", d.get("L", ()))),
            tuple(int(v) for v in d.get("R1", d.get("R", ()))),
            tuple(int(v) for v in d.get("B", ())),
            kind == "H'",
        )


def hex_intrusion(spec: HSpec) -> Region:
    tris, mid = hexagon_outline(spec.sides())
    d = spec.diagonal
    gone = intrusion(d, mid)
    gone += [L(d, mid + z) for z in spec.L]
    gone += [R(d, mid + z) for z in spec.R]
    missing = [t for t in gone[len(gone) - len(spec.L) - len(spec.R):] if t not in tris]
    if missing:
        t = missing[0]
        raise ValueError(f"dent at label {t.pos - mid}/2 is outside the hexagon")
    base = Region(frozenset(tris), frame=WeightFrame(mid), name=spec.kind)
    return base.without(gone, [vertical_edge(d, mid + z) for z in spec.B])


# ferns


@dataclass(frozen=True)
class FernSpec:
    """A symmetric fern with triangle sizes ``arms`` from the core outwards.

    The core points left unless ``flipped``.  Odd positions (1, 3, ...) share
    the core's orientation."""

    arms: tuple
    flipped: bool = False

    def __post_init__(self):
        object.__setattr__(self, "arms", tuple(int(v) for v in self.arms))
        a = self.arms
        if len(a) % 2 == 0:
            raise ValueError("a fern needs an odd number of arms")
        if any(v <= 0 for v in a[:-1]) or a[-1] < 0:
            raise ValueError("inner arms must be positive, the last nonnegative")

    def pieces(self) -> list[tuple[int, int, bool]]:
        """(size, lowest Y of the vertical side, is_odd_arm) for every triangle,
        with the fern centred on Y = 0."""
        a = self.arms
        out = [(a[0], -a[0], True)]
        edge = a[0]
        for i, s in enumerate(a[1:], start=2):
            if s == 0:
                continue
            out.append((s, edge, i % 2 == 1))
            out.append((s, -edge - 2 * s, i % 2 == 1))
            edge += 2 * s
        return out

    def points(self, odd: bool) -> list[int]:
        out = []
        for size, lo, is_odd in self.pieces():
            if is_odd == odd:
                out += [lo + 1 + 2 * j for j in range(size)]
        return sorted(out)

    @property
    def P_o(self) -> list[int]:
        return self.points(True)

    @property
    def P_e(self) -> list[int]:
        return self.points(False)

    @property
    def Q_o(self) -> list[int]:
        # doubled labels coincide with P
        return self.P_o

    @property
    def Q_e(self) -> list[int]:
        return self.P_e


def lattice_triangle(col: int, lo: int, size: int, orient: str) -> set[Tri]:
    """Unit triangles of a size-``size`` triangle whose vertical side lies in
    column ``col`` from ``Y = lo`` to ``lo + 2*size``, pointing ``orient``."""
    out = set()
    step = -1 if orient == LEFT else 1
    for k in range(size):
        # column line at distance k from the vertical side
        c = col + step * k
        span_lo, span_hi = lo + k, lo + 2 * size - k
        for p in range(span_lo + 1, span_hi, 2):
            out.add(Tri(c, p, orient))
        # the opposite-pointing triangles between this line and the next
        if k < size - 1:
            for p in range(span_lo + 2, span_hi - 1, 2):
                out.add(Tri(c + step, p, RIGHT if orient == LEFT else LEFT))
    return out


def fern_region(f: FernSpec, col: int, mid: int) -> set[Tri]:
    """Triangles of the fern with its axis on column ``col``, centred at ``Y = mid``."""
    out = set()
    core_orient = RIGHT if f.flipped else LEFT
    other = LEFT if f.flipped else RIGHT
    for size, lo, odd in f.pieces():
        out |= lattice_triangle(col, mid + lo, size, core_orient if odd else other)
    return out


def fern_weight(f: FernSpec) -> QPoly:
    tris = fern_region(f, f.arms[0] % 2, 0)
    return prod(q_plus(p) for p in horizontal_lozenges_inside(tris))


def triangle_weight(col: int, lo: int, size: int, orient: str, axis2: int = 0) -> QPoly:
    tris = lattice_triangle(col, lo, size, orient)
    return prod(q_plus(p - axis2) for p in horizontal_lozenges_inside(tris))


# regions with a fern removed

FAMILIES = ("A", "B", "C", "D", "E")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    x: int
    y: int
    z: int
    w: int
    arms: tuple = field(default=(1,))

    def __post_init__(self):
        object.__setattr__(self, "arms", tuple(int(v) for v in self.arms))
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if min(self.x, self.y, self.z, self.w) < 0:
            raise ValueError("x, y, z, w must be nonnegative")
        if self.z < self.w:
            raise ValueError("need z >= w")
        FernSpec(self.arms)  # arm validation
        if self.arms[0] <= 0:
            raise ValueError("the core must be nonempty")
        for s in self.sides():
            if s < 0:
                raise ValueError(f"sides {self.sides()} are not all nonnegative")

    @property
    def a_o(self) -> int:
        return sum(self.arms[0::2])

    @property
    def a_e(self) -> int:
        return sum(self.arms[1::2])

    @property
    def a(self) -> int:
        return self.a_o + self.a_e

    @property
    def case(self) -> int:
        """1 if y < w, 2 if w <= y <= z, 3 if z < y."""
        if self.y < self.w:
            return 1
        return 2 if self.y <= self.z else 3

    def core(self) -> int:
        return 2 * self.arms[0] - (1 if self.family in "BCE" else 0)

    def fern(self) -> FernSpec:
        return FernSpec((self.core(),) + self.arms[1:], self.family in "DE")

    def collapsed(self) -> "FamilySpec":
        fam = {"D": "A", "E": "C"}.get(self.family, self.family)
        return FamilySpec(fam, self.x, self.y, self.z, self.w, (self.a,))

    def sides(self) -> tuple[int, ...]:
        x, y, z, w, ao, ae = self.x, self.y, self.z, self.w, self.a_o, self.a_e
        return {
            "A": (2 * ae + 2 * x, 2 * ao + y + w, 2 * ae + y + z, 2 * ao + 2 * x, 2 * ae + y + w, 2 * ao + y + z),
            "B": (2 * ae + 2 * x, 2 * ao + y + w - 1, 2 * ae + y + z, 2 * ao + 2 * x - 1, 2 * ae + y + w,
                  2 * ao + y + z - 1),
            "C": (2 * ae + 2 * x, 2 * ao + y + w - 1, 2 * ae + y + z + 1, 2 * ao + 2 * x - 2, 2 * ae + y + w + 1,
                  2 * ao + y + z - 1),
            "D": (2 * ao + 2 * x, 2 * ae + y + w, 2 * ao + y + z, 2 * ae + 2 * x, 2 * ao + y + w, 2 * ae + y + z),
            "E": (2 * ao + 2 * x - 2, 2 * ae + y + w + 1, 2 * ao + y + z - 1, 2 * ae + 2 * x, 2 * ao + y + w - 1,
                  2 * ae + y + z + 1),
        }[self.family]

    def intrusion_length(self) -> int:
        if self.family in "ABC":
            return 2 * (self.a_o - self.arms[0]) + 2 * self.y
        return 2 * self.a_e + 2 * self.y + (1 if self.family == "E" else 0)

    def fern_axis(self) -> int:
        n = self.intrusion_length()
        return n + self.core() if self.family in "ABC" else n

    def to_json(self) -> dict:
        return {"family": self.family, "x": self.x, "y": self.y, "z": self.z, "w": self.w,
                "arms": list(self.arms)}

    @classmethod
    def from_json(cls, d: dict) -> "FamilySpec":
        return cls(d["family"], int(d["x"]), int(d["y"]), int(d["z"]), int(d["w"]),
                   tuple(int(v) for v in d.get("arms", (1,))))


def family_region(fs: FamilySpec) -> Region:
    tris, mid = hexagon_outline(fs.sides())
    col = fs.fern_axis()
    gone = set(intrusion(fs.intrusion_length(), mid))
    gone |= fern_region(fs.fern(), col, mid)
    if fs.family == "C":
        gone.add(R(col, mid))
    stray = gone - tris
    if stray:
        raise ValueError(f"fern or intrusion leaves the hexagon: {sorted(stray)[:3]}")
    name = f"{fs.family}({fs.x},{fs.y},{fs.z},{fs.w};{','.join(map(str, fs.arms))})"
    return Region(frozenset(tris), frame=WeightFrame(mid), name=name).without(gone)


def family_collapsed(fs: FamilySpec) -> Region:
    return family_region(fs.collapsed())


# the hexagons with dented diagonals that the fern regions correspond to


def _interval(lo: int, hi: int, shift2: int) -> list[int]:
    """Doubled labels of {lo+1, ..., hi} shifted down by shift2/2."""
    return [2 * j - shift2 for j in range(lo + 1, hi + 1)]


@dataclass(frozen=True)
class Thm34Instance:
    numerator: HSpec
    denominator: HSpec
    X: tuple
    Y: tuple
    barriers: tuple
    flipped: tuple

    def with_barriers(self) -> tuple[HSpec, HSpec]:
        def add(h):
            return HSpec(h.m, h.n, h.a, h.b, h.c, h.L, h.R, self.barriers, h.even)

        return add(self.numerator), add(self.denominator)


def thm34_instance(fs: FamilySpec, variant: str = "statement", d_y: str = "corrected") -> Thm34Instance:
    """The pair of dented hexagons whose ratio matches the fern region's ratio.

    ``variant='proof'`` exchanges the odd and even arm groups (both the label
    sets and their sums in the subscripts).  ``d_y='printed'`` uses z+2 in
    place of z+w for the lower end of Y in the second case of family D.
    """
    if variant not in ("statement", "proof"):
        raise ValueError(f"unknown variant {variant!r}")
    if d_y not in ("corrected", "printed"):
        raise ValueError(f"unknown d_y {d_y!r}")
    x, y, z, w, a = fs.x, fs.y, fs.z, fs.w, fs.a
    fam, case = fs.family, fs.case
    f = fs.fern()
    Qo, Qe = set(f.Q_o), set(f.Q_e)
    if fam in "ABC":
        ql, qr, al, ar = Qo, Qe, fs.a_o, fs.a_e
    else:
        ql, qr, al, ar = Qe, Qo, fs.a_e, fs.a_o
    if variant == "proof":
        ql, qr, al, ar = qr, ql, ar, al
    even = fam in "AD"
    if fam == "E":
        n, a_par = ar - 1, al + y
    else:
        n, a_par = ar, al + y - 1
    b_par = z + w + (1 if fam in "CE" else 0)
    c_par = x - y + z if case < 3 else x

    bump = 0 if even else 1
    h = z if case < 3 else y
    shift = 2 * a + 2 * x + 2 * h + (1 if even else 0)
    top = 2 * a + 2 * x + 2 * h - bump
    X = _interval(0, abs(z - y) if case < 3 else y - z, shift)
    lo_w = 2 if (fam == "D" and case == 2 and d_y == "printed") else w
    base = 2 * a + 2 * x - bump
    if case == 1:
        lo, hi = base + y + z, base + z + w
    elif case == 2:
        lo, hi = base + z + lo_w, base + y + z
    else:
        lo, hi = base + y + w, base + 2 * y
    Y = _interval(lo, hi, shift)
    barriers = _interval(max(hi, lo), top, shift)

    X, Y = set(X), set(Y)
    if case == 1:
        num_l, num_r = set(ql), qr | X | Y
    elif case == 2:
        num_l, num_r = ql | Y, qr | X
    else:
        num_l, num_r = ql | X | Y, set(qr)
    if fam == "C":
        num_r = num_r | {0}
    if not even:
        # on the odd diagonal the left triangle at 0 belongs to the intrusion
        num_l.discard(0)
    rflip = qr - {0}
    num = HSpec(0, n, a_par, b_par, c_par, tuple(num_l), tuple(num_r), (), even)
    den = num.flip((), rflip)
    barriers = sorted(set(barriers) - num_l - num_r)
    return Thm34Instance(num, den, tuple(sorted(X)), tuple(sorted(Y)), tuple(barriers), tuple(sorted(rflip)))

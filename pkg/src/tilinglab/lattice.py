"""Triangular lattice with vertical lattice lines.

Vertices are ``(col, Y)`` with ``Y`` twice the height, so a unit vertical
edge spans two ``Y`` units and vertices in column ``c`` have ``Y = c mod 2``.

A unit triangle is named by its vertical edge: ``Tri(col, pos, 'L')`` has
that edge in column ``col`` centred at ``Y = pos`` and its apex at
``(col-1, pos)``; ``Tri(col, pos, 'R')`` has its apex at ``(col+1, pos)``.
``L(c, p)`` and ``R(c, p)`` form a horizontal lozenge; ``L(c, p)`` and
``R(c-1, p +- 1)`` form the two slanted lozenges.

The weight of a horizontal lozenge depends on ``n = pos - frame.axis2``,
the vertical offset of its centre from the weight axis measured in half
unit sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from .qlaurent import QPoly, q_plus, xy_plus

LEFT, RIGHT = "L", "R"

MOVES = {
    "N": (0, 2),
    "S": (0, -2),
    "NE": (1, 1),
    "SE": (1, -1),
    "NW": (-1, 1),
    "SW": (-1, -1),
}


class Tri(NamedTuple):
    col: int
    pos: int
    orient: str

    def partners(self) -> list[tuple["Tri", str]]:
        """Neighbouring unit triangles with the kind of lozenge they make."""
        c, p = self.col, self.pos
        if self.orient == LEFT:
            return [(Tri(c, p, RIGHT), "h"), (Tri(c - 1, p + 1, RIGHT), "u"), (Tri(c - 1, p - 1, RIGHT), "d")]
        return [(Tri(c, p, LEFT), "h"), (Tri(c + 1, p - 1, LEFT), "u"), (Tri(c + 1, p + 1, LEFT), "d")]

    def vertices(self) -> list[tuple[int, int]]:
        c, p = self.col, self.pos
        apex = c - 1 if self.orient == LEFT else c + 1
        return [(c, p - 1), (c, p + 1), (apex, p)]


def L(c: int, p: int) -> Tri:
    return Tri(c, p, LEFT)


def R(c: int, p: int) -> Tri:
    return Tri(c, p, RIGHT)


def horizontal_partner(t: Tri) -> Tri:
    """The opposite triangle across ``t``'s vertical edge."""
    return Tri(t.col, t.pos, RIGHT if t.orient == LEFT else LEFT)


def lozenge_weight(a: Tri, b: Tri, frame: WeightFrame) -> QPoly:
    """Weight of the lozenge made of two adjacent triangles."""
    e = edge_between(a, b)
    return frame.weight(e.left.pos) if e.kind == "h" else QPoly.const(1)


def balance(region: "Region") -> int:
    """Left-pointing minus right-pointing triangles; nonzero means no tiling."""
    nl, nr = region.counts()
    return nl - nr


def check_tri(t: Tri) -> None:
    if (t.pos - t.col) % 2 != 1 or t.orient not in (LEFT, RIGHT):
        raise ValueError(f"not a lattice triangle: {t}")


class Edge(NamedTuple):
    """Shared edge of a left-pointing triangle and one of its partners.

    ``kind`` is ``'h'`` for the vertical edge ``L(c,p)|R(c,p)``, ``'u'`` for
    the edge towards ``R(c-1,p+1)`` and ``'d'`` towards ``R(c-1,p-1)``.
    """

    left: Tri
    kind: str

    def other(self) -> Tri:
        c, p = self.left.col, self.left.pos
        return {"h": R(c, p), "u": R(c - 1, p + 1), "d": R(c - 1, p - 1)}[self.kind]


def edge_between(a: Tri, b: Tri) -> Edge:
    lt, rt = (a, b) if a.orient == LEFT else (b, a)
    for t, kind in lt.partners():
        if t == rt:
            return Edge(lt, kind)
    raise ValueError(f"{a} and {b} are not adjacent")


def vertical_edge(col: int, pos: int) -> Edge:
    """The unit vertical edge in column ``col`` centred at ``pos``."""
    return Edge(L(col, pos), "h")


@dataclass(frozen=True)
class WeightFrame:
    """Where the weight axis sits and which weight family is used.

    ``xy=False`` gives horizontal lozenges the weight (q^n + q^-n)/2,
    ``xy=True`` gives (X q^n + Y q^-n)/2.  All other lozenges weigh 1.
    """

    axis2: int = 0
    xy: bool = False

    def weight(self, pos: int) -> QPoly:
        n = pos - self.axis2
        return xy_plus(n) if self.xy else q_plus(n)

    def offset(self, pos: int) -> int:
        return pos - self.axis2

    def shifted(self, dy: int) -> "WeightFrame":
        return WeightFrame(self.axis2 + dy, self.xy)


def path_vertices(start: tuple[int, int], moves: Iterable[tuple[str, int]]) -> list[tuple[int, int]]:
    """Boundary polygon from a start vertex and (direction, length) steps."""
    c, y = start
    if (y - c) % 2:
        raise ValueError("start is not a lattice vertex")
    pts = [(c, y)]
    for d, n in moves:
        if n < 0:
            raise ValueError("negative side length")
        dc, dy = MOVES[d]
        for _ in range(n):
            c, y = c + dc, y + dy
            pts.append((c, y))
    return pts


def zigzag(n: int, first: str, second: str) -> list[tuple[str, int]]:
    return [(first if i % 2 == 0 else second, 1) for i in range(n)]


def _inside(poly: list[tuple[int, int]], x3: int, y: int) -> bool:
    # crossing test on 3x-scaled abscissae; centroids never sit on lattice lines
    inside = False
    n = len(poly)
    for i in range(n):
        c1, y1 = poly[i]
        c2, y2 = poly[(i + 1) % n]
        if (y1 > y) == (y2 > y):
            continue
        # x at height y along the edge, compared with x3 / 3
        # x = c1 + (y - y1) * (c2 - c1) / (y2 - y1)
        num = 3 * c1 * (y2 - y1) + 3 * (y - y1) * (c2 - c1)
        den = y2 - y1
        if den > 0:
            if x3 * den < num:
                inside = not inside
        elif x3 * den > num:
            inside = not inside
    return inside


def polygon_tris(poly: list[tuple[int, int]]) -> set[Tri]:
    """All unit triangles whose centroid lies inside the closed polygon."""
    if len(poly) > 1 and poly[0] == poly[-1]:
        poly = poly[:-1]
    if len(poly) < 3:
        return set()
    cs = [v[0] for v in poly]
    ys = [v[1] for v in poly]
    out = set()
    for c in range(min(cs), max(cs) + 1):
        for p in range(min(ys) + 1, max(ys)):
            if (p - c) % 2 != 1:
                continue
            if c > min(cs) and _inside(poly, 3 * c - 1, p):
                out.add(L(c, p))
            if c < max(cs) and _inside(poly, 3 * c + 1, p):
                out.add(R(c, p))
    return out


@dataclass(frozen=True)
class Region:
    """A finite set of unit triangles with barred edges and a weight frame.

    ``removed`` records triangles cut out of the outline (dents, intrusions,
    ferns) for rendering only; it does not take part in equality.
    """

    tris: frozenset
    barriers: frozenset = frozenset()
    frame: WeightFrame = WeightFrame()
    removed: frozenset = field(default=frozenset(), compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        for t in self.tris:
            check_tri(t)

    def __len__(self):
        return len(self.tris)

    def counts(self) -> tuple[int, int]:
        nl = sum(1 for t in self.tris if t.orient == LEFT)
        return nl, len(self.tris) - nl

    def is_balanced(self) -> bool:
        nl, nr = self.counts()
        return nl == nr

    def allowed(self, a: Tri, b: Tri) -> bool:
        return a in self.tris and b in self.tris and edge_between(a, b) not in self.barriers

    def partners(self, t: Tri) -> list[Tri]:
        return [u for u, _ in t.partners() if u in self.tris and edge_between(t, u) not in self.barriers]

    def lozenge_weight(self, a: Tri, b: Tri) -> QPoly:
        return lozenge_weight(a, b, self.frame)

    def without(self, tris: Iterable[Tri], barriers: Iterable[Edge] = ()) -> "Region":
        gone = frozenset(tris)
        return Region(
            self.tris - gone,
            self.barriers | frozenset(barriers),
            self.frame,
            self.removed | (gone & self.tris),
            self.name,
        )

    def with_frame(self, frame: WeightFrame) -> "Region":
        return Region(self.tris, self.barriers, frame, self.removed, self.name)

    def translate(self, dc: int, dy: int) -> "Region":
        if (dc - dy) % 2:
            raise ValueError("translation must preserve vertex parity")

        def mv(t):
            return Tri(t.col + dc, t.pos + dy, t.orient)

        return Region(
            frozenset(map(mv, self.tris)),
            frozenset(Edge(mv(e.left), e.kind) for e in self.barriers),
            self.frame.shifted(dy),
            frozenset(map(mv, self.removed)),
            self.name,
        )

    def normalized(self) -> "Region":
        """Translate so the leftmost column is 0 and the lowest centre is 0 or 1."""
        if not self.tris:
            return self
        c0 = min(t.col for t in self.tris)
        r = self.translate(-c0, -c0)
        p0 = min(t.pos for t in r.tris)
        return r.translate(0, -(p0 - p0 % 2))

    def same_shape(self, other: "Region") -> bool:
        """Equal triangles, effective barriers and weights up to translation."""
        if not self.tris and not other.tris:
            return True
        a, b = self.normalized(), other.normalized()
        return a.tris == b.tris and a.useful_barriers() == b.useful_barriers() and a.frame == b.frame

    def useful_barriers(self) -> frozenset:
        return frozenset(e for e in self.barriers if e.left in self.tris and e.other() in self.tris)

    # serialisation

    def to_json(self) -> dict:
        return {
            "tris": sorted([t.col, t.pos, t.orient] for t in self.tris),
            "barriers": sorted([e.left.col, e.left.pos, e.kind] for e in self.barriers),
            "axis2": self.frame.axis2,
            "xy": self.frame.xy,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Region":
        return cls(
            frozenset(Tri(c, p, o) for c, p, o in d["tris"]),
            frozenset(Edge(L(c, p), k) for c, p, k in d.get("barriers", [])),
            WeightFrame(int(d.get("axis2", 0)), bool(d.get("xy", False))),
        )


def horizontal_lozenges_inside(tris: set[Tri] | frozenset) -> list[int]:
    """Positions of the horizontal lozenges whose two triangles both lie in ``tris``."""
    return [t.pos for t in tris if t.orient == LEFT and R(t.col, t.pos) in tris]


# rendering


def render_ascii(region: Region) -> str:
    """One character per strip and row: ``<`` / ``>`` for present triangles,
    ``.`` for removed ones, ``=`` marks the weight-axis row."""
    cells = {t: "<" if t.orient == LEFT else ">" for t in region.tris}
    for t in region.removed:
        cells.setdefault(t, ".")
    if not cells:
        return ""
    strips = [t.col - 1 if t.orient == LEFT else t.col for t in cells]
    s0, s1 = min(strips), max(strips)
    ps = [t.pos for t in cells]
    lines = []
    for p in range(max(ps), min(ps) - 1, -1):
        row = []
        for s in range(s0, s1 + 1):
            t = R(s, p) if (p - s) % 2 == 1 else L(s + 1, p)
            row.append(cells.get(t, " "))
        mark = "=" if p == region.frame.axis2 else " "
        lines.append(f"{mark}{''.join(row).rstrip()}")
    return "\n".join(lines)


def render_svg(region: Region, scale: float = 20.0) -> str:
    h = 3 ** 0.5 / 2

    def xy(v):
        return v[0] * h * scale, -v[1] / 2 * scale

    everything = list(region.tris) + list(region.removed)
    if not everything:
        return '<svg xmlns="http://www.w3.org/2000/svg"/>'
    pts = [xy(v) for t in everything for v in t.vertices()]
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    pad = scale
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0 - pad:.2f} {y0 - pad:.2f} '
        f'{x1 - x0 + 2 * pad:.2f} {y1 - y0 + 2 * pad:.2f}">'
    ]

    def poly(t, style):
        s = " ".join(f"{a:.2f},{b:.2f}" for a, b in map(xy, t.vertices()))
        out.append(f'<polygon points="{s}" {style}/>')

    for t in sorted(region.tris):
        poly(t, 'fill="#fdfdf5" stroke="#bbb" stroke-width="0.5"')
    for t in sorted(region.removed):
        poly(t, 'fill="#444" stroke="#444" stroke-width="0.5"')
    for e in sorted(region.barriers):
        a, b = e.left.vertices()[:2] if e.kind == "h" else _shared(e.left, e.other())
        (ax, ay), (bx, by) = xy(a), xy(b)
        out.append(f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" '
                   'stroke="#c00" stroke-width="3"/>')
    ya = -region.frame.axis2 / 2 * scale
    out.append(f'<line x1="{x0 - pad:.2f}" y1="{ya:.2f}" x2="{x1 + pad:.2f}" y2="{ya:.2f}" '
               'stroke="#06c" stroke-dasharray="4 3" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out)


def _shared(a: Tri, b: Tri):
    va, vb = set(a.vertices()), set(b.vertices())
    return sorted(va & vb)


def fraction_label(label2: int) -> Fraction:
    return Fraction(label2, 2)

"""Tiling generating functions.

Two independent routes compute the same weighted sum over lozenge tilings:

* :func:`tgf_dfs` is a memoised backtracking search that multiplies
  :class:`QPoly` weights directly.  It is slow and only meant as an oracle.
* :func:`tgf_dp` sweeps the region strip by strip.  Its state is the set of
  horizontal lozenges crossing the current lattice line.  Polynomial values
  are Kronecker-packed into Python integers so each weight multiplication
  becomes two shifts and an add; a first pass at q = 1 sizes the packing.

Every tiling of a region has the same number of horizontal lozenges across
each lattice line, which is what makes the packing offsets uniform.
"""

from __future__ import annotations

import json
import os
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache

from .lattice import LEFT, RIGHT, Edge, Region, Tri, L, R
from .qlaurent import QPoly

DEFAULT_CAPS = {"dfs_triangles": 60, "dp_width": 24, "split_subsets": 200000}


class CapExceeded(RuntimeError):
    pass


def caps() -> dict:
    """Default caps, overridden by the JSON object in ``TILINGLAB_CAPS``."""
    out = dict(DEFAULT_CAPS)
    raw = os.environ.get("TILINGLAB_CAPS")
    if raw:
        try:
            extra = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValueError(f"TILINGLAB_CAPS is not JSON: {exc}") from None
        for k, v in extra.items():
            if k not in out:
                raise ValueError(f"unknown cap {k!r}")
            out[k] = int(v)
    return out


# backtracking oracle


def tgf_dfs(region: Region, cap: int | None = None) -> QPoly:
    cap = caps()["dfs_triangles"] if cap is None else cap
    tris = sorted(region.tris)
    if len(tris) > cap:
        raise CapExceeded(f"{len(tris)} triangles exceeds the search cap {cap}")
    if not region.is_balanced():
        return QPoly()
    index = {t: i for i, t in enumerate(tris)}
    adj: list[list[tuple[int, QPoly]]] = []
    for t in tris:
        adj.append([(index[u], region.lozenge_weight(t, u)) for u in region.partners(t)])
    full = (1 << len(tris)) - 1

    @lru_cache(maxsize=None)
    def rec(mask: int) -> QPoly:
        if mask == full:
            return QPoly.const(1)
        best, best_opts = -1, None
        for i in range(len(tris)):
            if mask >> i & 1:
                continue
            opts = [(j, w) for j, w in adj[i] if not mask >> j & 1]
            if best_opts is None or len(opts) < len(best_opts):
                best, best_opts = i, opts
                if len(opts) <= 1:
                    break
        total = QPoly()
        for j, w in best_opts:
            sub = rec(mask | 1 << best | 1 << j)
            if not sub.is_zero():
                total = total + w * sub
        return total

    return rec(0)


# strip sweep


class _Layout:
    """Per-strip view of a region.  Strip ``s`` holds ``R(s, .)`` and
    ``L(s+1, .)``; line ``c`` is the lattice line at column ``c``."""

    def __init__(self, region: Region):
        self.region = region
        strips: dict[int, dict[int, Tri]] = defaultdict(dict)
        for t in region.tris:
            s = t.col if t.orient == RIGHT else t.col - 1
            strips[s][t.pos] = t
        self.strips = dict(strips)
        ps = [t.pos for t in region.tris] or [0]
        self.p0 = min(ps)
        self.smin = min(self.strips) if self.strips else 0
        self.smax = max(self.strips) if self.strips else -1
        # horizontal lozenges crossing each line
        self.h: dict[int, int] = {}
        self.ok = True
        h = 0
        for s in range(self.smin, self.smax + 1):
            el = self.strips.get(s, {})
            nr = sum(1 for t in el.values() if t.orient == RIGHT)
            nl = len(el) - nr
            h = h + nl - nr
            self.h[s + 1] = h
            if h < 0:
                self.ok = False
        if h != 0:
            self.ok = False
        # positions where a horizontal lozenge may cross each line
        self.hpos: dict[int, list[int]] = defaultdict(list)
        for t in region.tris:
            if t.orient == LEFT and R(t.col, t.pos) in region.tris and Edge(t, "h") not in region.barriers:
                self.hpos[t.col].append(t.pos)

    def width(self) -> int:
        return max((-(-len(el) // 2) for el in self.strips.values()), default=0)

    def offset_n(self, line: int) -> int:
        frame = self.region.frame
        return max((abs(frame.offset(p)) for p in self.hpos.get(line, [])), default=0)


def _sweep(lay: _Layout, mulw, track_max: bool = False):
    region = lay.region
    tris = region.tris
    bars = region.barriers
    p0 = lay.p0
    states: dict[int, int] = {0: 1}
    peak = 1
    for s in range(lay.smin, lay.smax + 1):
        el = lay.strips.get(s)
        if not el:
            continue
        lo, hi = min(el), max(el)
        line = s + 1
        for p in range(lo, hi + 1):
            t = el.get(p)
            bit = 1 << (p - p0)
            new: dict[int, int] = defaultdict(int)
            if t is None:
                for key, v in states.items():
                    if not key & 1:
                        new[key] += v
            elif t.orient == RIGHT:
                down_ok = Edge(L(s + 1, p - 1), "u") not in bars
                up_ok = L(s + 1, p + 1) in tris and Edge(L(s + 1, p + 1), "d") not in bars
                for key, v in states.items():
                    op = key & 1
                    mask = key >> 1
                    if mask & bit:
                        if not op:
                            new[(mask ^ bit) << 1] += v
                    elif op:
                        if down_ok:
                            new[mask << 1] += v
                    elif up_ok:
                        new[(mask << 1) | 1] += v
            else:
                right_ok = R(s + 1, p) in tris and Edge(t, "h") not in bars
                up_tri = R(s, p + 1) in tris and Edge(t, "u") not in bars
                down_ok = Edge(t, "d") not in bars
                for key, v in states.items():
                    op = key & 1
                    mask = key >> 1
                    if op:
                        if down_ok:
                            new[mask << 1] += v
                        continue
                    if right_ok:
                        new[(mask | bit) << 1] += mulw(v, line, p)
                    if up_tri and not mask & (bit << 1):
                        new[(mask << 1) | 1] += v
            states = new
            if track_max and states:
                peak = max(peak, max(states.values()))
            if not states:
                return 0, peak
        # nothing may stay open across a strip boundary
        states = {k: v for k, v in states.items() if not k & 1}
    return states.get(0, 0), peak


def _check_width(lay: _Layout, width_cap: int | None):
    cap = caps()["dp_width"] if width_cap is None else width_cap
    w = lay.width()
    if w > cap:
        raise CapExceeded(f"strip height {w} exceeds the sweep cap {cap}")


def count_tilings(region: Region, width_cap: int | None = None) -> int:
    lay = _Layout(region)
    _check_width(lay, width_cap)
    if not lay.ok:
        return 0
    return _sweep(lay, lambda v, line, p: v)[0]


def tgf_dp(region: Region, width_cap: int | None = None) -> QPoly:
    lay = _Layout(region)
    _check_width(lay, width_cap)
    if not lay.ok:
        return QPoly()
    total, peak = _sweep(lay, lambda v, line, p: 2 * v, track_max=True)
    if total == 0:
        return QPoly()
    bits = -(-(peak.bit_length() + 1) // 8) * 8
    frame = region.frame
    nline = {line: lay.offset_n(line) for line in lay.h}
    offset = sum(nline[line] * h for line, h in lay.h.items())
    hsum = sum(lay.h.values())
    stride = 2 * offset + 1
    shifts: dict[tuple[int, int], tuple[int, int]] = {}
    for line, plist in lay.hpos.items():
        big = nline.get(line, 0)
        for p in plist:
            n = frame.offset(p)
            a = big + n + (stride if frame.xy else 0)
            shifts[line, p] = (bits * a, bits * (big - n))

    def mulw(v, line, p):
        a, b = shifts[line, p]
        return (v << a) + (v << b)

    packed, _ = _sweep(lay, mulw)
    width = bits // 8
    top = (stride * (hsum + 1) if frame.xy else stride) + 1
    raw = packed.to_bytes(width * top, "little")
    den = 1 << hsum
    terms = {}
    for e in range(top):
        c = int.from_bytes(raw[e * width:(e + 1) * width], "little")
        if not c:
            continue
        if frame.xy:
            ex, r = divmod(e, stride)
            key = (r - offset, ex, hsum - ex)
        else:
            key = (e - offset, 0, 0)
        terms[key] = Fraction(c, den)
    return QPoly(terms)


def tgf_points(region: Region, q0, X0=1, Y0=1, width_cap: int | None = None) -> Fraction:
    """Exact value of the generating function at q = q0 (and X0, Y0)."""
    lay = _Layout(region)
    _check_width(lay, width_cap)
    if not lay.ok:
        return Fraction(0)
    q0 = Fraction(q0)
    if q0 == 0:
        raise ZeroDivisionError("q must be nonzero")
    a, b = q0.numerator, q0.denominator
    frame = region.frame
    X0, Y0 = Fraction(X0), Fraction(Y0)
    if not frame.xy:
        X0 = Y0 = Fraction(1)
    nline = {line: lay.offset_n(line) for line in lay.h}
    weights = {}
    for line, plist in lay.hpos.items():
        big = nline.get(line, 0)
        for p in plist:
            n = frame.offset(p)
            w = X0 * a ** (big + n) * b ** (big - n) + Y0 * a ** (big - n) * b ** (big + n)
            weights[line, p] = w.numerator if w.denominator == 1 else w
    packed, _ = _sweep(lay, lambda v, line, p: v * weights[line, p])
    den = Fraction(1)
    for line, h in lay.h.items():
        den *= (2 * abs(a) ** nline[line] * b ** nline[line]) ** h
        if a < 0 and nline[line] * h % 2:
            den = -den
    return Fraction(packed) / den


def tgf(region: Region, engine: str = "dp", dfs_cap: int | None = None, width_cap: int | None = None) -> QPoly:
    if engine == "dp":
        return tgf_dp(region, width_cap)
    if engine == "dfs":
        return tgf_dfs(region, dfs_cap)
    if engine == "both":
        a = tgf_dp(region, width_cap)
        b = tgf_dfs(region, dfs_cap)
        if a != b:
            raise AssertionError("search and sweep disagree")
        return a
    raise ValueError(f"unknown engine {engine!r}")


def degree_bound(region: Region) -> int:
    """Upper bound on |e_q| over the terms of the generating function."""
    lay = _Layout(region)
    if not lay.ok:
        return 0
    total = 0
    for line, h in lay.h.items():
        offs = sorted((abs(region.frame.offset(p)) for p in lay.hpos.get(line, [])), reverse=True)
        total += sum(offs[:h])
    return total


# forced lozenges


def peel_forced(region: Region) -> tuple[Region, QPoly]:
    """Repeatedly place lozenges on triangles with a single possible partner.

    Returns the remaining region and the product of the placed weights; the
    product is zero if some triangle is left with no partner at all.
    """
    tris = set(region.tris)
    factor = QPoly.const(1)
    placed: set[Tri] = set()

    def live_partners(t):
        return [u for u, _ in t.partners() if u in tris and _edge_ok(region, t, u)]

    queue = sorted(tris)
    while queue:
        nxt = set()
        for t in queue:
            if t not in tris:
                continue
            opts = live_partners(t)
            if not opts:
                return _rest(region, tris, placed), QPoly()
            if len(opts) == 1:
                u = opts[0]
                factor = factor * region.lozenge_weight(t, u)
                tris -= {t, u}
                placed |= {t, u}
                for w in (t, u):
                    for v, _ in w.partners():
                        if v in tris:
                            nxt.add(v)
        queue = sorted(nxt)
    return _rest(region, tris, placed), factor


def _edge_ok(region: Region, a: Tri, b: Tri) -> bool:
    from .lattice import edge_between

    return edge_between(a, b) not in region.barriers


def _rest(region: Region, tris, placed) -> Region:
    return Region(frozenset(tris), region.barriers, region.frame, region.removed | frozenset(placed), region.name)

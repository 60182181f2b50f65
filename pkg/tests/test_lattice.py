import xml.etree.ElementTree as ET

import pytest

from tilinglab.lattice import (
    Edge,
    L,
    R,
    Region,
    Tri,
    WeightFrame,
    balance,
    edge_between,
    horizontal_lozenges_inside,
    horizontal_partner,
    lozenge_weight,
    render_ascii,
    render_svg,
    vertical_edge,
)
from tilinglab.qlaurent import q_plus, xy_plus
from tilinglab.regions import hexagon, lattice_triangle, trapezoid


def test_horizontal_partner_is_an_involution_on_the_shared_edge():
    t = L(3, 4)
    u = horizontal_partner(t)
    assert u == R(3, 4)
    assert horizontal_partner(u) == t
    assert edge_between(t, u) == vertical_edge(3, 4)


def test_invalid_lattice_triangle_rejected():
    with pytest.raises(ValueError):
        Region(frozenset({Tri(0, 0, "L")}))


def test_lozenge_weights():
    frame = WeightFrame(0)
    assert lozenge_weight(L(1, 0), R(1, 0), frame) == 1
    assert lozenge_weight(L(1, 2), R(1, 2), frame) == q_plus(2)
    assert lozenge_weight(L(1, -2), R(1, -2), frame) == q_plus(2)
    # positive and negative lozenges weigh 1
    assert lozenge_weight(L(1, 0), R(0, 1), frame) == 1
    assert lozenge_weight(L(1, 0), R(0, -1), frame) == 1
    assert lozenge_weight(L(1, 2), R(1, 2), WeightFrame(0, True)) == xy_plus(2)
    with pytest.raises(ValueError):
        lozenge_weight(L(1, 0), R(5, 0), frame)


def test_balance():
    assert balance(hexagon(1, 1, 1)) == 0
    for x, y in [(0, 1), (2, 3), (4, 0)]:
        assert balance(trapezoid(x, y)) == y
    big = frozenset(lattice_triangle(0, 0, 3, "L"))
    assert abs(balance(Region(big))) == 3


def test_triangle_holds_triangular_number_of_horizontal_lozenges():
    for m in range(1, 7):
        for orient in "LR":
            inside = horizontal_lozenges_inside(lattice_triangle(0, 0, m, orient))
            assert len(inside) == m * (m - 1) // 2


def test_translation_and_shape():
    r = hexagon(2, 1, 2)
    moved = r.translate(4, 6)
    assert moved != r
    assert moved.same_shape(r)
    assert not hexagon(2, 2, 1).same_shape(r)
    assert Region(frozenset()).same_shape(Region(frozenset(), frame=WeightFrame(7)))


def test_region_json_roundtrip():
    r = hexagon(2, 2, 1, k=1, xy=True).without([L(1, 1)], [Edge(L(3, 1), "u")])
    assert Region.from_json(r.to_json()) == r


def test_render_ascii_marks_axis_and_removed():
    r = hexagon(1, 1, 1).without([L(1, 0)])
    text = render_ascii(r)
    assert "." in text
    assert any(line.startswith("=") for line in text.splitlines())


def test_render_svg_is_valid_and_shows_barriers():
    r = hexagon(2, 2, 2).without([], [vertical_edge(2, 3)])
    root = ET.fromstring(render_svg(r))
    assert root.tag.endswith("svg")
    lines = [el for el in root if el.tag.endswith("line")]
    assert any(el.get("stroke") == "#c00" for el in lines)
    assert len([el for el in root if el.tag.endswith("polygon")]) == len(r.tris)

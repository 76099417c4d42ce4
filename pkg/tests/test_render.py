import xml.etree.ElementTree as ET

import pytest

from crossmetric.errors import DimensionUnsupported
from crossmetric.geometry import Instance, generate_instance
from crossmetric.mst_exact import mst_bruteforce
from crossmetric.render import clip_line, render_svg

NS = "{http://www.w3.org/2000/svg}"


def elements(svg, cls):
    root = ET.fromstring(svg.encode())
    return [el for el in root.iter() if el.get("class") == cls]


def test_empty_instance_draws_frame_only():
    svg = render_svg(Instance(2, (), ()))
    assert len(elements(svg, "frame")) == 1
    for cls in ("hyperplane", "point", "edge"):
        assert elements(svg, cls) == []


def test_one_line_two_points_one_edge():
    inst = Instance(2, ((0, 0), (4, 0)), (((1, 0), -2),))
    svg = render_svg(inst, mst_bruteforce(inst))
    lines, dots, edges = (elements(svg, c) for c in ("hyperplane", "point", "edge"))
    assert len(lines) == 1 and lines[0].get("stroke") == "gray"
    assert len(dots) == 2 and all(d.get("fill") == "black" for d in dots)
    assert len(edges) == 1 and edges[0].get("stroke") == "red"
    assert "2 faces" in elements(svg, "legend")[0].text


def test_render_is_deterministic():
    inst = generate_instance(2, 20, 15, 1000, 0)
    forest = mst_bruteforce(inst)
    assert render_svg(inst, forest) == render_svg(inst, forest)


def test_render_rejects_higher_dims():
    with pytest.raises(DimensionUnsupported):
        render_svg(generate_instance(3, 2, 2, 10, 0))


def test_clip_line():
    box = (0, 0, 10, 10)
    assert clip_line(1, 0, -5, box) == ((5.0, 0), (5.0, 10))
    assert clip_line(1, -1, 0, box) == ((0, 0.0), (10, 10.0))
    assert clip_line(0, 1, -20, box) is None

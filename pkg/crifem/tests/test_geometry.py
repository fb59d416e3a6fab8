# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

import numpy as np
import pytest

from ..geometry import (Point, Polygon, as_point, polygon_area, fan_triangulate,
    clip_triangle_by_segment, triangle_areas)
from ..errors import InvalidInputError, DegenerateCutError

REF = [(0, 0), (1, 0), (0, 1)]

def test_polygon_area_unit_triangle():
    assert polygon_area(REF) == pytest.approx(0.5)

def test_polygon_area_unit_square():
    assert polygon_area(Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])) == pytest.approx(1.0)

def test_polygon_area_quadrilateral():
    quad = Polygon([(0, 0), (1, 0), (1, 1), (0, 2)])
    assert polygon_area(quad) == pytest.approx(1.5)
    assert triangle_areas(fan_triangulate(quad)).sum() == pytest.approx(1.5)

def test_polygon_area_too_few_vertices():
    with pytest.raises(InvalidInputError):
        polygon_area([(0, 0), (1, 0)])

def test_polygon_rejects_clockwise():
    with pytest.raises(InvalidInputError):
        Polygon([(0, 0), (0, 1), (1, 0)])

def test_polygon_is_read_only():
    p = Polygon(REF)
    with pytest.raises(ValueError):
        p.vertices[0, 0] = 5

def test_point_rejects_nan():
    with pytest.raises(InvalidInputError):
        as_point((np.nan, 0))
    assert as_point((1, 2)) == Point(1.0, 2.0)

def test_polygon_centroid():
    c = Polygon([(0, 0), (2, 0), (2, 2), (0, 2)]).centroid
    assert c.x == pytest.approx(1.0)
    assert c.y == pytest.approx(1.0)

def test_fan_triangulate_triangle():
    tris = fan_triangulate(Polygon(REF))
    assert tris.shape == (1, 3, 2)
    assert np.array_equal(tris[0], np.array(REF, dtype=float))

def test_fan_triangulate_quadrilateral():
    assert fan_triangulate(Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])).shape == (2, 3, 2)

def test_fan_triangulate_pentagon():
    angles = 2*np.pi*np.arange(5)/5
    penta = Polygon(np.stack([np.cos(angles), np.sin(angles)], axis=1))
    tris = fan_triangulate(penta)
    assert tris.shape == (3, 3, 2)
    areas = triangle_areas(tris)
    assert np.all(areas > 0)
    assert areas.sum() == pytest.approx(penta.area, rel=1e-14)

def test_clip_corner():
    plus, minus = clip_triangle_by_segment(REF, (0.5, 0), (0, 0.5))
    assert plus.area == pytest.approx(1/8)
    assert minus.area == pytest.approx(3/8)
    assert len(plus) == 3
    assert len(minus) == 4

def test_clip_through_hypotenuse():
    plus, minus = clip_triangle_by_segment(REF, (0.5, 0), (0.5, 0.5))
    assert sorted([plus.area, minus.area]) == pytest.approx([1/8, 3/8])
    assert plus.area + minus.area == pytest.approx(0.5, rel=1e-14)

def test_clip_through_vertex():
    plus, minus = clip_triangle_by_segment(REF, (1, 0), (0, 0.5))
    assert len(plus) == 3 and len(minus) == 3
    assert plus.area == pytest.approx(0.25)
    assert minus.area == pytest.approx(0.25)

def test_clip_snaps_to_vertex():
    plus, minus = clip_triangle_by_segment(REF, (1 - 1e-15, 0), (0, 0.5))
    assert len(plus) == 3 and len(minus) == 3
    assert plus.area + minus.area == pytest.approx(0.5, rel=1e-14)

def test_clip_orientation():
    # plus lies to the left of d -> e
    plus, minus = clip_triangle_by_segment(REF, (0, 0.5), (0.5, 0))
    assert plus.area == pytest.approx(3/8)
    assert minus.area == pytest.approx(1/8)

def test_clip_same_edge():
    with pytest.raises(DegenerateCutError):
        clip_triangle_by_segment(REF, (0.2, 0), (0.7, 0))

def test_clip_along_edge():
    with pytest.raises(DegenerateCutError):
        clip_triangle_by_segment(REF, (0, 0), (0.5, 0))
    with pytest.raises(DegenerateCutError):
        clip_triangle_by_segment(REF, (1, 0), (0, 1))

def test_clip_not_on_boundary():
    with pytest.raises(InvalidInputError):
        clip_triangle_by_segment(REF, (0.2, 0.2), (0, 0.5))

def test_clip_random_area_sum():
    rng = np.random.default_rng(1)
    tri = np.array(REF, dtype=float)
    for _ in range(200):
        s, t = rng.uniform(0.01, 0.99, 2)
        d = tri[0] + s*(tri[1] - tri[0])
        e = tri[1] + t*(tri[2] - tri[1])
        plus, minus = clip_triangle_by_segment(tri, d, e)
        assert plus.area + minus.area == pytest.approx(0.5, rel=1e-13)

# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

from math import factorial

import numpy as np
import pytest

from ..quadrature import triangle_rule, segment_rule, map_triangle_rule, map_segment_rule
from ..errors import InvalidInputError

def exact_monomial(p, q):
    """int_T x^p y^q over the reference triangle."""
    return factorial(p)*factorial(q)/factorial(p + q + 2)

@pytest.mark.parametrize("degree", [1, 2, 4, 6])
def test_triangle_rule_exactness(degree):
    rule = triangle_rule(degree)
    assert np.all(rule.weights > 0)
    assert rule.weights.sum() == pytest.approx(0.5, rel=1e-15)
    x, y = rule.points.T
    for p in range(degree + 1):
        for q in range(degree + 1 - p):
            value = np.sum(rule.weights*x**p*y**q)
            assert value == pytest.approx(exact_monomial(p, q), rel=1e-13)

def test_triangle_rule_random_polynomials():
    rng = np.random.default_rng(0)
    rule = triangle_rule(4)
    x, y = rule.points.T
    for _ in range(20):
        coef = rng.normal(size=(5, 5))
        value = sum(coef[p, q]*np.sum(rule.weights*x**p*y**q)
            for p in range(5) for q in range(5 - p))
        exact = sum(coef[p, q]*exact_monomial(p, q) for p in range(5) for q in range(5 - p))
        assert value == pytest.approx(exact, rel=1e-13, abs=1e-15)

def test_triangle_centroid_rule():
    rule = triangle_rule(1)
    assert rule.points.tolist() == [[pytest.approx(1/3), pytest.approx(1/3)]]
    assert rule.weights.tolist() == [0.5]

def test_triangle_degree_4_x2y2():
    rule = triangle_rule(4)
    x, y = rule.points.T
    assert abs(np.sum(rule.weights*x**2*y**2) - 1/180) < 1e-15

def test_segment_two_point_gauss():
    rule = segment_rule(3)
    assert rule.points == pytest.approx([(1 - 1/np.sqrt(3))/2, (1 + 1/np.sqrt(3))/2])
    assert rule.weights == pytest.approx([0.5, 0.5])

@pytest.mark.parametrize("degree", [1, 3, 5])
def test_segment_rule_exactness(degree):
    rule = segment_rule(degree)
    for p in range(degree + 1):
        assert np.sum(rule.weights*rule.points**p) == pytest.approx(1/(p + 1), rel=1e-14)

def test_unsupported_degree():
    with pytest.raises(InvalidInputError):
        triangle_rule(3)
    with pytest.raises(InvalidInputError):
        segment_rule(2)

def test_map_triangle_rule():
    tris = np.array([[[0, 0], [2, 0], [0, 2]], [[1, 1], [1, 2], [0, 1]]], dtype=float)
    points, weights = map_triangle_rule(triangle_rule(2), tris)
    assert points.shape == (2, 3, 2)
    assert weights.sum(axis=1) == pytest.approx([2.0, 0.5])
    # int_T x over the first triangle is 4/3
    assert np.sum(weights[0]*points[0, :, 0]) == pytest.approx(4/3)

def test_map_segment_rule():
    points, weights = map_segment_rule(segment_rule(3), np.array([[0.0, 0.0]]), np.array([[3.0, 4.0]]))
    assert weights.sum() == pytest.approx(5.0)
    assert np.sum(weights[0]*points[0, :, 0]**2) == pytest.approx(5.0*3.0)

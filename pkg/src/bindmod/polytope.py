"""Exact face lattices and triangulations of small rational polytopes.

Polytopes are given as a list of points (the convex hull of all of them);
faces are reported as frozensets of indices of the points lying on them.
The algorithms enumerate candidate hyperplanes through subsets of points,
which is fine for the dozen-point polytopes this package deals with.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import exactlin as el


def affine_coordinates(points, idx):
    """Coordinates of ``points[i]`` (``i in idx``) in a basis of their affine hull.

    Returns ``(coords, dim)`` with ``coords`` a dict ``i -> tuple``.
    """
    idx = sorted(idx)
    base = [Fraction(x) for x in points[idx[0]]]
    diffs = [tuple(Fraction(x) - b for x, b in zip(points[i], base)) for i in idx]
    nonzero = [v for v in diffs if any(v)]
    if not nonzero:
        return {i: () for i in idx}, 0
    R, piv = el.rref(nonzero)
    basis = R[: len(piv)]
    coords = {}
    for i, v in zip(idx, diffs):
        # basis is in RREF, so the coordinate along row k is the entry at pivot k
        coords[i] = tuple(v[p] for p in piv)
        assert all(sum(c * row[j] for c, row in zip(coords[i], basis)) == v[j] for j in range(len(v)))
    return coords, len(piv)


def facets(points, idx=None):
    """Facets of ``conv(points[idx])`` within its affine hull.

    Returns a list of ``(face, normal, offset)`` with ``normal . y <= offset``
    valid on the polytope (in the affine-hull coordinates of
    :func:`affine_coordinates`) and equality exactly on ``face``.
    """
    idx = sorted(range(len(points)) if idx is None else idx)
    coords, m = affine_coordinates(points, idx)
    if m == 0:
        return []
    out = {}
    for S in itertools.combinations(idx, m):
        rows = [list(coords[i]) + [Fraction(-1)] for i in S]
        ker = el.nullspace(rows)
        if len(ker) != 1:
            continue
        c, delta = ker[0][:m], ker[0][m]
        if not any(c):
            continue
        vals = {i: el.dot(c, coords[i]) - delta for i in idx}
        if all(v <= 0 for v in vals.values()):
            sign = 1
        elif all(v >= 0 for v in vals.values()):
            sign = -1
        else:
            continue
        face = frozenset(i for i, v in vals.items() if v == 0)
        if face not in out:
            out[face] = (tuple(sign * x for x in c), sign * delta)
    return [(f, c, d) for f, (c, d) in out.items()]


def faces(points, idx=None):
    """All nonempty faces of ``conv(points[idx])``, the polytope itself included."""
    idx = frozenset(range(len(points)) if idx is None else idx)
    fs = [f for f, _, _ in facets(points, idx)]
    result = {idx} | set(fs)
    frontier = set(fs)
    while frontier:
        new = set()
        for a in frontier:
            for b in fs:
                c = a & b
                if c and c not in result:
                    new.add(c)
        result |= new
        frontier = new
    return result


def dimension(points, idx) -> int:
    return affine_coordinates(points, idx)[1]


def vertices(points, idx=None):
    """Indices of points that are vertices (0-dimensional faces); coincident points are grouped."""
    return [f for f in faces(points, idx) if dimension(points, f) == 0]


def pulling_triangulation(points, idx=None, start=None):
    """Triangulate ``conv(points[idx])`` by pulling a vertex.

    Returns a list of simplices (tuples of point indices, ``dim + 1`` each).
    ``start`` picks the pulled vertex (an index); by default the lowest
    index that is a vertex.
    """
    idx = frozenset(range(len(points)) if idx is None else idx)
    m = dimension(points, idx)
    if m == 0:
        return [(min(idx),)]
    verts = sorted(min(f) for f in vertices(points, idx))
    v = start if start is not None and start in verts else verts[0]
    simplices = []
    for face, _, _ in facets(points, idx):
        if any(_same(points[v], points[i]) for i in face):
            continue
        for s in pulling_triangulation(points, face, start=start):
            simplices.append((v,) + s)
    return simplices


def _same(p, q):
    return all(a == b for a, b in zip(p, q))


def simplex_volume(points, simplex):
    """Normalized volume ``|det(p_1 - p_0, ..., p_k - p_0)|`` of a full-dimensional simplex."""
    p0 = points[simplex[0]]
    M = [[Fraction(a) - b for a, b in zip(points[i], p0)] for i in simplex[1:]]
    return abs(el.det(M))

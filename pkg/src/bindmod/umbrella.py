"""Umbrellas of a column configuration and the slopes where they jump.

For a weight ``L_r`` (``v_j = r`` on the coordinates in ``K``, ``1``
elsewhere) the umbrella is the set of faces of ``conv{0, a_j / v_j}`` that
avoid the origin.  Everything is done in intrinsic coordinates of the lattice
spanned by the columns, so rank-deficient configurations are handled the
same way as full-rank ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import exactlin as el
from . import polytope
from .model import Problem
from .stratify import relevant_components


@dataclass(frozen=True)
class WeightL:
    """``L_r = F + (r - 1) V`` along the coordinates ``K`` (0-based)."""

    K: frozenset
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "K", frozenset(self.K))
        object.__setattr__(self, "r", Fraction(self.r))
        if self.r < 1:
            raise ValueError("r must be >= 1")

    def v(self, j) -> Fraction:
        return self.r if j in self.K else Fraction(1)

    def u(self, j) -> Fraction:
        return -(self.r - 1) if j in self.K else Fraction(0)


@dataclass(frozen=True)
class Umbrella:
    """Faces avoiding 0, as frozensets of column labels, each with a supporting functional.

    ``functionals[face]`` is a covector ``h`` in intrinsic coordinates with
    ``h . a_j^L = 1`` on the face and ``< 1`` off it; the empty face maps to
    the zero covector.
    """

    faces: frozenset
    functionals: dict

    def __contains__(self, tau) -> bool:
        return frozenset(tau) in self.faces

    def __iter__(self):
        return iter(sorted(self.faces, key=lambda f: (len(f), sorted(f))))

    def __len__(self):
        return len(self.faces)

    def maximal(self):
        return [f for f in self.faces if not any(f < g for g in self.faces)]


def intrinsic_points(cols):
    """Integer coordinates of the columns in a basis of the lattice they span."""
    if any(not any(c) for c in cols):
        from .errors import DegenerateInput
        raise DegenerateInput("zero column")
    _, coords = el.column_lattice(cols)
    return [tuple(Fraction(x) for x in c) for c in coords]


def compute_umbrella(cols, weight: WeightL, labels=None) -> Umbrella:
    """Umbrella of the columns ``cols`` under ``weight``.

    ``labels[j]`` is the column index of ``cols[j]`` in the ambient matrix
    (this is what ``weight.K`` refers to and what faces are reported in).
    """
    labels = list(range(len(cols))) if labels is None else list(labels)
    pts = intrinsic_points(cols)
    k = len(pts[0])
    scaled = [tuple(x / weight.v(lab) for x in p) for p, lab in zip(pts, labels)]
    allpts = [(Fraction(0),) * k] + scaled  # index 0 is the origin
    facet_data = polytope.facets(allpts)
    faces = {frozenset()}
    functionals = {frozenset(): (Fraction(0),) * k}
    # the polytope is full-dimensional (it contains 0 and spans), so the
    # affine coordinates of facets() are the ambient ones shifted by point 0
    for F in polytope.faces(allpts):
        if 0 in F or len(F) == len(allpts):
            continue
        containing = [(c, d) for f, c, d in facet_data if F <= f]
        c = [sum(x[i] for x, _ in containing) for i in range(k)]
        delta = sum(d for _, d in containing)
        h = tuple(x / delta for x in c)
        key = frozenset(labels[i - 1] for i in F)
        faces.add(key)
        functionals[key] = h
    _check_functionals(scaled, labels, faces, functionals)
    return Umbrella(frozenset(faces), functionals)


def _check_functionals(points, labels, faces, functionals):
    for tau in faces:
        if not tau:
            continue
        h = functionals[tau]
        for p, lab in zip(points, labels):
            val = el.dot(h, p)
            if (val == 1) != (lab in tau) or val > 1:
                raise AssertionError(f"bad supporting functional for face {sorted(tau)}")


def candidate_slopes(cols, K, labels=None):
    """Rational ``r > 1`` where some hyperplane through scaled columns can move.

    For each subset of ``rank + 1`` columns mixing ``K`` and non-``K`` columns,
    solve ``h . a_j = 1`` (j outside K), ``h . a_j = r`` (j in K) for ``(h, r)``.
    """
    labels = list(range(len(cols))) if labels is None else list(labels)
    K = frozenset(K)
    if not any(lab in K for lab in labels):
        return []
    pts = intrinsic_points(cols)
    k = len(pts[0])
    out = set()
    for S in itertools.combinations(range(len(pts)), k + 1):
        inK = [labels[j] in K for j in S]
        if all(inK) or not any(inK):
            continue
        M = [list(pts[j]) + [Fraction(-1) if kk else Fraction(0)] for j, kk in zip(S, inK)]
        b = [Fraction(0) if kk else Fraction(1) for kk in inK]
        sol = el.solve_rational(M, b)
        if sol is None or sol.kernel:
            continue
        r = sol.particular[k]
        if r > 1:
            out.add(r)
    return sorted(out)


def umbrella_jumps(cols, K, labels=None):
    """Verified jumps: ``[(s, umbrella just below s, umbrella just above s)]``."""
    labels = list(range(len(cols))) if labels is None else list(labels)
    cands = candidate_slopes(cols, K, labels)
    probes = [Fraction(1)] + cands
    mids = [(a + b) / 2 for a, b in zip(probes, probes[1:])] + [probes[-1] + 1]
    umbs = [compute_umbrella(cols, WeightL(K, m), labels) for m in mids]
    out = []
    for i, s in enumerate(cands):
        below, above = umbs[i], umbs[i + 1]
        if below.faces != above.faces:
            out.append((s, below, above))
    return out


def critical_slopes(cols, K, labels=None):
    """Sorted slopes ``s > 1`` at which the umbrella actually changes."""
    return [s for s, _, _ in umbrella_jumps(cols, K, labels)]


def stable_umbrella(cols, K, s, labels=None) -> Umbrella:
    """The umbrella on the open interval just above ``s`` (up to the next candidate)."""
    labels = list(range(len(cols))) if labels is None else list(labels)
    s = Fraction(s)
    nxt = [c for c in candidate_slopes(cols, K, labels) if c > s]
    r = (s + nxt[0]) / 2 if nxt else s + 1
    return compute_umbrella(cols, WeightL(K, r), labels)


@dataclass(frozen=True)
class SlopeResult:
    subspace: frozenset
    slopes: tuple
    provenance: dict  # slope -> tuple of component labels

    def to_json(self):
        return {
            "subspace": sorted(j + 1 for j in self.subspace),
            "slopes": [el.fraction_str(s) for s in self.slopes],
            "provenance": {el.fraction_str(s): list(self.provenance[s]) for s in self.slopes},
        }


def component_slopes(c, A, K):
    """Slopes of the prime of ``c`` along ``K`` (coordinates outside J are ignored)."""
    J = sorted(c.J)
    KJ = frozenset(K) & c.J
    if not KJ:
        return []
    return critical_slopes(A.columns(J), KJ, J)


def slopes_of_module(p: Problem, K) -> SlopeResult:
    """Slopes of the module along ``{x_k = 0 : k in K}`` with the components producing them."""
    K = frozenset(K)
    prov = {}
    for c in relevant_components(p):
        for s in component_slopes(c, p.A, K):
            prov.setdefault(s, []).append(c.label)
    slopes = tuple(sorted(prov))
    return SlopeResult(K, slopes, {s: tuple(prov[s]) for s in slopes})

"""Toral/Andean classification, quasidegree arrangements and parameter strata.

All affine subspaces here are rational: an offset in Q^d plus the rational
span of some integer columns.  Membership of ``-beta`` is decided by exact
linear solves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import exactlin as el
from . import groebner as gb
from .errors import NotHolonomic
from .model import GENERIC, MatrixA, PrimaryComponent, Problem, is_standard_homogeneous_prime


# --- affine translates ------------------------------------------------------


def _span_basis(vectors, d):
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return ()
    R, piv = el.rref(vectors)
    return tuple(tuple(r) for r in R[: len(piv)])


@dataclass(frozen=True)
class AffineTranslate:
    """``offset + Q-span(span)`` in canonical form.

    ``span`` is the reduced row echelon basis of the direction space and
    ``offset`` has been reduced so its pivot coordinates vanish; two
    translates are equal iff these fields are.
    """

    offset: tuple
    span: tuple
    d: int

    @classmethod
    def make(cls, offset, directions):
        offset = tuple(Fraction(x) for x in offset)
        d = len(offset)
        span = _span_basis([tuple(Fraction(x) for x in v) for v in directions], d)
        off = list(offset)
        for row in span:
            p = next(i for i, x in enumerate(row) if x)
            c = off[p]
            if c:
                off = [a - c * b for a, b in zip(off, row)]
        return cls(tuple(off), span, d)

    @classmethod
    def whole(cls, d):
        return cls.make([0] * d, el.identity(d))

    @property
    def dim(self) -> int:
        return len(self.span)

    @property
    def is_whole_space(self) -> bool:
        return self.dim == self.d

    def contains_point(self, p) -> bool:
        diff = [Fraction(a) - b for a, b in zip(p, self.offset)]
        if not self.span:
            return not any(diff)
        return el.solve_rational(el.transpose(self.span), diff) is not None

    def contains(self, other: "AffineTranslate") -> bool:
        if other.dim > self.dim or not self.contains_point(other.offset):
            return False
        return all(self._contains_direction(v) for v in other.span)

    def _contains_direction(self, v):
        if not self.span:
            return not any(v)
        return el.solve_rational(el.transpose(self.span), v) is not None

    def intersect(self, other: "AffineTranslate") -> Optional["AffineTranslate"]:
        """Intersection, or ``None`` when empty."""
        k1, k2 = self.dim, other.dim
        # offset1 + S1 s = offset2 + S2 t
        M = [[self.span[i][r] for i in range(k1)] + [-other.span[i][r] for i in range(k2)]
             for r in range(self.d)]
        rhs = [b - a for a, b in zip(self.offset, other.offset)]
        if k1 + k2 == 0:
            return self if not any(rhs) else None
        sol = el.solve_rational(M, rhs)
        if sol is None:
            return None
        point = [o + sum(sol.particular[i] * self.span[i][r] for i in range(k1))
                 for r, o in enumerate(self.offset)]
        dirs = [[sum(kv[i] * self.span[i][r] for i in range(k1)) for r in range(self.d)]
                for kv in sol.kernel]
        return AffineTranslate.make(point, dirs)

    def point(self, coeffs):
        return tuple(o + sum(c * row[r] for c, row in zip(coeffs, self.span))
                     for r, o in enumerate(self.offset))

    def to_json(self):
        return {
            "offset": [el.fraction_str(x) for x in self.offset],
            "span": [[el.fraction_str(x) for x in row] for row in self.span],
            "dim": self.dim,
        }

    def __str__(self):
        off = "(" + ",".join(el.fraction_str(x) for x in self.offset) + ")"
        if not self.span:
            return off
        if self.is_whole_space:
            return f"Q^{self.d}"
        dirs = ", ".join("(" + ",".join(el.fraction_str(x) for x in r) + ")" for r in self.span)
        return f"{off} + span{{{dirs}}}"


@dataclass
class AffineArrangement:
    """Deduplicated union of translates, each tagged with the components that produced it."""

    d: int
    translates: list = field(default_factory=list)
    provenance: list = field(default_factory=list)

    def add(self, t: AffineTranslate, source: str):
        for i, s in enumerate(self.translates):
            if s.contains(t):
                if source not in self.provenance[i]:
                    self.provenance[i].append(source)
                return
        keep_t, keep_p = [], []
        absorbed = [source]
        for s, p in zip(self.translates, self.provenance):
            if t.contains(s):
                absorbed.extend(x for x in p if x not in absorbed)
            else:
                keep_t.append(s)
                keep_p.append(p)
        self.translates = keep_t + [t]
        self.provenance = keep_p + [absorbed]

    def extend(self, other: "AffineArrangement"):
        for t, p in zip(other.translates, other.provenance):
            for src in p:
                self.add(t, src)

    def __len__(self):
        return len(self.translates)

    def __iter__(self):
        return iter(self.translates)

    @property
    def is_empty(self) -> bool:
        return not self.translates

    def canonical(self):
        return frozenset(self.translates)

    def contains_point(self, p) -> bool:
        return any(t.contains_point(p) for t in self.translates)

    def contains_parameter(self, beta) -> bool:
        """Is ``-beta`` in the arrangement?  For GENERIC, only the whole space counts."""
        if beta == GENERIC:
            return any(t.is_whole_space for t in self.translates)
        return self.contains_point([-Fraction(b) for b in beta])

    @property
    def dim(self) -> int:
        return max((t.dim for t in self.translates), default=-1)

    def to_json(self):
        return [dict(t.to_json(), components=sorted(p)) for t, p in zip(self.translates, self.provenance)]


# --- classification ---------------------------------------------------------


@dataclass(frozen=True)
class ComponentClass:
    kind: str  # "toral" | "Andean"
    krull_dim: int
    rank_AJ: int

    @property
    def toral(self) -> bool:
        return self.kind == "toral"


def classify(c: PrimaryComponent, A: MatrixA) -> ComponentClass:
    kd = c.krull_dim()
    r = A.rank_of(c.J)
    return ComponentClass("toral" if kd == r else "Andean", kd, r)


def qdeg_component(c: PrimaryComponent, A: MatrixA, order=gb.GREVLEX, **caps) -> AffineArrangement:
    """Quasidegrees of ``R/C`` as a union of translates of ``Q A_sigma``.

    Standard monomials of the initial ideal form a basis of ``R/C`` by
    A-homogeneous elements; a standard pair ``(u, sigma)`` contributes
    degrees ``-A u - N A_sigma`` whose Zariski closure is ``-A u + C A_sigma``.
    """
    G = c.groebner_basis(order, **caps)
    arr = AffineArrangement(A.d)
    for pair in gb.standard_pairs(G.leading_monomials(), A.n):
        off = [-x for x in A.degree(pair.root)]
        arr.add(AffineTranslate.make(off, A.columns(pair.free)), c.label)
    return arr


def _qdeg_cached(c, A):
    cache = c.__dict__.setdefault("_qdeg_cache", {})
    if "grevlex" not in cache:
        cache["grevlex"] = qdeg_component(c, A)
    return cache["grevlex"]


def andean_arrangement(p: Problem) -> AffineArrangement:
    arr = AffineArrangement(p.A.d)
    for c in p.components:
        if not classify(c, p.A).toral:
            arr.extend(_qdeg_cached(c, p.A))
    return arr


def is_holonomic(p: Problem) -> bool:
    return not andean_arrangement(p).contains_parameter(p.beta)


def in_qdeg(c: PrimaryComponent, p: Problem) -> bool:
    return _qdeg_cached(c, p.A).contains_parameter(p.beta)


def relevant_components(p: Problem) -> list:
    """Components ``C`` with ``-beta`` in ``qdeg(R/C)``; these determine the module."""
    if not is_holonomic(p):
        raise NotHolonomic("-beta lies on the Andean arrangement")
    return [c for c in p.components if in_qdeg(c, p)]


@dataclass(frozen=True)
class RegularityVerdict:
    verdict: str  # "regular" | "irregular" | "not_holonomic"
    witnesses: tuple = ()

    def to_json(self):
        return {"verdict": self.verdict, "witnesses": list(self.witnesses)}


def is_regular(p: Problem) -> RegularityVerdict:
    if not is_holonomic(p):
        return RegularityVerdict("not_holonomic")
    bad = tuple(c.label for c in relevant_components(p) if not is_standard_homogeneous_prime(c))
    return RegularityVerdict("irregular" if bad else "regular", bad)


def nonregular_arrangement(p: Problem) -> AffineArrangement:
    arr = andean_arrangement(p)
    for c in p.components:
        if not is_standard_homogeneous_prime(c):
            arr.extend(_qdeg_cached(c, p.A))
    return arr


# --- strata -------------------------------------------------------------------


@dataclass(frozen=True)
class Stratum:
    """Points ``-beta`` of ``flat`` lying on exactly the translates in ``pattern``."""

    flat: AffineTranslate
    pattern: tuple
    minus_beta: tuple
    relevant: tuple

    @property
    def dim(self) -> int:
        return self.flat.dim

    @property
    def beta(self):
        return tuple(-x for x in self.minus_beta)

    def to_json(self):
        return {
            "dim": self.dim,
            "flat": str(self.flat),
            "translates": list(self.pattern),
            "sample_beta": [el.fraction_str(x) for x in self.beta],
            "relevant": list(self.relevant),
        }


def all_translates(p: Problem):
    """Distinct translates over all components' quasidegree sets, with their components."""
    out, owners = [], []
    for c in p.components:
        for t in _qdeg_cached(c, p.A):
            if t in out:
                owners[out.index(t)].append(c.label)
            else:
                out.append(t)
                owners.append([c.label])
    return out, owners


def _sample(flat, inside, outside, max_radius=64):
    k = flat.dim
    for radius in range(max_radius + 1):
        rng = range(-radius, radius + 1)
        for coeffs in itertools.product(rng, repeat=k):
            if k and max(abs(x) for x in coeffs) != radius:
                continue
            pt = flat.point(coeffs)
            if all(t.contains_point(pt) for t in inside) and not any(t.contains_point(pt) for t in outside):
                return pt
        if k == 0:
            break
    raise AssertionError("no sample point found for a feasible stratum")


def stratify_parameters(p: Problem) -> list:
    """Strata of the parameter space by which quasidegree translates contain ``-beta``.

    Every stratum is a flat of the intersection lattice of the translates minus
    the translates not containing it; over an infinite field that set is never
    empty, so flats and realizable membership patterns correspond one to one.
    """
    d = p.A.d
    trans, _ = all_translates(p)
    whole = AffineTranslate.whole(d)
    flats = [whole]
    frontier = [whole]
    while frontier:
        nxt = []
        for X in frontier:
            for T in trans:
                Y = X.intersect(T)
                if Y is not None and Y not in flats:
                    flats.append(Y)
                    nxt.append(Y)
        frontier = nxt
    strata = []
    for X in flats:
        pattern = tuple(i for i, T in enumerate(trans) if T.contains(X))
        inside = [trans[i] for i in pattern]
        outside = [T for i, T in enumerate(trans) if i not in pattern]
        pt = _sample(X, inside, outside)
        rel = tuple(c.label for c in p.components if _qdeg_cached(c, p.A).contains_point(pt))
        strata.append(Stratum(X, pattern, pt, rel))
    order = {c.label: i for i, c in enumerate(p.components)}
    strata.sort(key=lambda s: (-s.dim, len(s.relevant), [order[x] for x in s.relevant]))
    return strata

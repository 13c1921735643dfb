"""A small Buchberger engine over Q.

Polynomials are dicts ``{exponent tuple: Fraction}``.  The engine is meant
for the tiny binomial ideals that show up in A-graded problems; it has
hard caps on the number of processed pairs and on the degree of
S-polynomials so a runaway computation stops with ``ResourceLimit``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import ResourceLimit

DEFAULT_MAX_PAIRS = 20000
DEFAULT_MAX_DEGREE = 200


# --- term orders ----------------------------------------------------------


@dataclass(frozen=True)
class TermOrder:
    """Monomial order.  ``kind`` is ``"lex"``, ``"grevlex"`` or ``"weight"``.

    A ``"weight"`` order compares by ``weight . exponent`` first and breaks
    ties with ``tiebreak`` (grevlex by default).
    """

    kind: str = "grevlex"
    weight: Optional[tuple] = None
    tiebreak: str = "grevlex"

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "weight"):
            raise ValueError(f"unknown term order {self.kind!r}")
        if self.kind == "weight":
            if self.weight is None:
                raise ValueError("weight order needs a weight vector")
            if any(Fraction(w) < 0 for w in self.weight):
                raise ValueError("weights must be nonnegative to give a well-order")

    def key(self, e):
        if self.kind == "lex":
            return e
        if self.kind == "grevlex":
            return _grevlex_key(e)
        w = sum(Fraction(a) * b for a, b in zip(self.weight, e))
        tb = e if self.tiebreak == "lex" else _grevlex_key(e)
        return (w, tb)


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")


# --- polynomial helpers ---------------------------------------------------


def poly(terms) -> dict:
    """Build a polynomial from ``(exponent, coefficient)`` pairs, dropping zeros."""
    out = {}
    for e, c in terms:
        e = tuple(e)
        c = Fraction(c)
        out[e] = out.get(e, Fraction(0)) + c
    return {e: c for e, c in out.items() if c != 0}


def monomial(e, c=1):
    return {tuple(e): Fraction(c)}


def lead(p, order: TermOrder):
    e = max(p, key=order.key)
    return e, p[e]


def degree(p) -> int:
    return max((sum(e) for e in p), default=0)


def add(p, q, c=1):
    """``p + c*q``."""
    out = dict(p)
    for e, a in q.items():
        v = out.get(e, 0) + c * a
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def mul_term(p, e, c=1):
    return {tuple(a + b for a, b in zip(x, e)): c * a_ for x, a_ in p.items()}


def divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm_exp(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def sub_exp(a, b):
    return tuple(x - y for x, y in zip(a, b))


def make_monic(p, order):
    _, c = lead(p, order)
    return {e: a / c for e, a in p.items()}


# --- reduction ------------------------------------------------------------


def normal_form(p, gb) -> dict:
    """Fully reduced remainder of ``p`` modulo the basis ``gb``.

    ``gb`` is a :class:`GroebnerBasis` or a ``(polys, order)`` pair.
    """
    polys, order = (gb.polys, gb.order) if isinstance(gb, GroebnerBasis) else gb
    leads = [lead(g, order) for g in polys]
    p = dict(p)
    rem = {}
    while p:
        e, c = lead(p, order)
        for g, (ge, gc) in zip(polys, leads):
            if divides(ge, e):
                p = add(p, mul_term(g, sub_exp(e, ge)), -c / gc)
                break
        else:
            rem[e] = c
            del p[e]
    return rem


def s_polynomial(f, g, order):
    fe, fc = lead(f, order)
    ge, gc = lead(g, order)
    m = lcm_exp(fe, ge)
    return add(mul_term(f, sub_exp(m, fe), 1 / fc), mul_term(g, sub_exp(m, ge), 1 / gc), -1)


@dataclass
class GroebnerBasis:
    polys: list
    order: TermOrder
    pairs_processed: int = 0

    def leading_monomials(self):
        return [lead(g, self.order)[0] for g in self.polys]

    def reduce(self, p):
        return normal_form(p, self)

    def contains(self, p) -> bool:
        return not normal_form(p, self)


def buchberger(gens, order: TermOrder = GREVLEX, max_pairs=DEFAULT_MAX_PAIRS,
               max_degree=DEFAULT_MAX_DEGREE) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``."""
    G = []
    for g in gens:
        g = {tuple(e): Fraction(c) for e, c in g.items() if c}
        if g:
            G.append(make_monic(g, order))
    if not G:
        return GroebnerBasis([], order)
    nvars = len(next(iter(G[0])))
    if any(not any(e) for g in G for e in g if len(g) == 1):
        return GroebnerBasis([{(0,) * nvars: Fraction(1)}], order)

    leads = [lead(g, order)[0] for g in G]
    pairs = set(itertools.combinations(range(len(G)), 2))
    processed = 0
    while pairs:
        i, j = min(pairs, key=lambda ij: (sum(lcm_exp(leads[ij[0]], leads[ij[1]])), ij))
        pairs.discard((i, j))
        li, lj = leads[i], leads[j]
        m = lcm_exp(li, lj)
        # product criterion
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        # chain criterion
        if any(k not in (i, j) and divides(leads[k], m)
               and (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs
               for k in range(len(G))):
            continue
        processed += 1
        if processed > max_pairs:
            raise ResourceLimit(f"more than {max_pairs} S-pairs processed", cap="max_pairs", value=max_pairs)
        if sum(m) > max_degree:
            raise ResourceLimit(f"S-polynomial degree {sum(m)} exceeds {max_degree}",
                                cap="max_degree", value=max_degree)
        h = normal_form(s_polynomial(G[i], G[j], order), (G, order))
        if not h:
            continue
        h = make_monic(h, order)
        G.append(h)
        leads.append(lead(h, order)[0])
        if not any(leads[-1]):
            return GroebnerBasis([{(0,) * nvars: Fraction(1)}], order, processed)
        k = len(G) - 1
        pairs.update((a, k) for a in range(k))
    return GroebnerBasis(_reduce_basis(G, order), order, processed)


def _reduce_basis(G, order):
    leads = [lead(g, order)[0] for g in G]
    keep = []
    for i, li in enumerate(leads):
        redundant = any(
            divides(lj, li) and (lj != li or j < i)
            for j, lj in enumerate(leads) if j != i
        )
        if not redundant:
            keep.append(G[i])
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        e, c = lead(g, order)
        tail = {x: a for x, a in g.items() if x != e}
        r = normal_form(tail, (others, order)) if others else tail
        r[e] = c
        out.append(make_monic(r, order))
    out.sort(key=lambda g: order.key(lead(g, order)[0]))
    return out


def is_groebner(polys, order) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    return all(
        not normal_form(s_polynomial(f, g, order), (polys, order))
        for f, g in itertools.combinations(polys, 2)
    )


# --- saturation / elimination ---------------------------------------------


def saturate_by_monomial(gens, variables, nvars, order=GREVLEX, **caps):
    """``(I : (prod_{j in variables} x_j)^inf)`` via an auxiliary variable."""
    if not variables:
        return buchberger(gens, order, **caps)
    ext = [{e + (0,): c for e, c in g.items()} for g in gens]
    m = [0] * (nvars + 1)
    for j in variables:
        m[j] = 1
    m[nvars] = 1
    ext.append(poly([(m, 1), ([0] * (nvars + 1), -1)]))
    elim = TermOrder("weight", weight=(0,) * nvars + (1,), tiebreak="grevlex")
    gb = buchberger(ext, elim, **caps)
    kept = [{e[:-1]: c for e, c in g.items()} for g in gb.polys
            if all(e[-1] == 0 for e in g)]
    return buchberger(kept, order, **caps)


def contains_power_of(gens, j, nvars, **caps) -> bool:
    """Does the ideal contain some power of ``x_j``?  Decided exactly: ``x_j`` is nilpotent
    modulo the ideal iff adding ``w x_j - 1`` gives the unit ideal."""
    ext = [{e + (0,): c for e, c in g.items()} for g in gens]
    m = [0] * (nvars + 1)
    m[j] = 1
    m[nvars] = 1
    ext.append(poly([(m, 1), ([0] * (nvars + 1), -1)]))
    G = buchberger(ext, GREVLEX, **caps)
    return any(len(g) == 1 and not any(next(iter(g))) for g in G.polys)


# --- monomial ideals ------------------------------------------------------


@dataclass(frozen=True)
class StandardPair:
    """``root + N^free`` is a set of standard monomials (``free`` is 0-based)."""

    root: tuple
    free: frozenset

    def contains(self, e) -> bool:
        return all(a == b for j, (a, b) in enumerate(zip(self.root, e)) if j not in self.free) and \
            all(e[j] >= self.root[j] for j in self.free)


def minimal_generators(mons):
    mons = sorted({tuple(m) for m in mons}, key=sum)
    out = []
    for m in mons:
        if not any(divides(g, m) for g in out):
            out.append(m)
    return out


def standard_pairs(mons, nvars) -> list:
    """Cover the standard monomials of a monomial ideal by cones.

    Each :class:`StandardPair` is a cone ``root + N^free`` of monomials outside
    the ideal, and the union of the cones is exactly the set of standard
    monomials.  Cones with empty ``free`` are pairwise distinct points, so for
    an Artinian ideal ``len(pairs)`` is the colength.
    """
    mons = minimal_generators(mons)
    out = []
    _pairs(mons, list(range(nvars)), [0] * nvars, frozenset(), out)
    return out


def _pairs(gens, variables, root, free, out):
    if any(not any(g[v] for v in variables) for g in gens):
        return  # 1 is in the ideal
    if not gens:
        free = free | frozenset(variables)
        # lowering a free exponent keeps a monomial standard (divisor of a standard one)
        out.append(StandardPair(tuple(0 if j in free else a for j, a in enumerate(root)), free))
        return
    x = next(v for v in variables if any(g[v] for g in gens))
    rest = [v for v in variables if v != x]
    top = max(g[x] for g in gens)
    for e in range(top + 1):
        # monomials with x-exponent exactly e (or >= top when e == top)
        sub = []
        for g in gens:
            if g[x] <= e:
                h = list(g)
                h[x] = 0
                sub.append(tuple(h))
        sub = minimal_generators(sub)
        r = list(root)
        r[x] = e
        if e < top:
            _pairs(sub, rest, r, free, out)
        else:
            _pairs(sub, rest, r, free | {x}, out)


def count_standard_monomials(mons, nvars):
    """Number of standard monomials, or ``math.inf``."""
    pairs = standard_pairs(mons, nvars)
    if any(p.free for p in pairs):
        return math.inf
    return len(pairs)


def artinian_colength(gens, nvars=None, order: TermOrder = GREVLEX, **caps):
    """Dimension of ``Q[x]/I`` for ``I = <gens>``; ``math.inf`` if not Artinian."""
    gens = [g for g in gens if g]
    if nvars is None:
        nvars = len(next(iter(gens[0])))
    if not gens:
        return math.inf if nvars else 1
    gb = buchberger(gens, order, **caps)
    return count_standard_monomials(gb.leading_monomials(), nvars)

"""Normalized volumes, multiplicities, holonomic rank and irregularity dimensions."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import exactlin as el
from . import groebner as gb
from . import polytope
from .errors import AssumptionViolated, NotArtinian, SpecializationUnstable, ValidationError
from .model import GENERIC, MatrixA, PrimaryComponent, Problem
from .stratify import classify, relevant_components
from .umbrella import intrinsic_points, stable_umbrella


# --- volumes ----------------------------------------------------------------


@dataclass(frozen=True)
class VolumeResult:
    face: frozenset
    lattice: el.Lattice
    value: int


def normalized_volume(cols, tau=None, start=None) -> int:
    """Volume of ``conv({0} ∪ {cols[j] : j in tau})`` normalized to the lattice ``Z{cols}``.

    The unit simplex of that lattice has volume 1.  Returns 0 when the hull
    is not full-dimensional in the span of ``cols``.  ``start`` chooses the
    pulled vertex of the triangulation (used to cross-check triangulations).
    """
    pts = intrinsic_points(cols)
    tau = range(len(cols)) if tau is None else tau
    k = len(pts[0])
    sub = [(Fraction(0),) * k] + [pts[j] for j in tau]
    if polytope.dimension(sub, range(len(sub))) < k:
        return 0
    total = sum(polytope.simplex_volume(sub, s) for s in polytope.pulling_triangulation(sub, start=start))
    assert total.denominator == 1
    return int(total)


def volume_result(A: MatrixA, J, tau) -> VolumeResult:
    J = sorted(J)
    pos = {j: i for i, j in enumerate(J)}
    L, _ = el.column_lattice(A.columns(J))
    return VolumeResult(frozenset(tau), L, normalized_volume(A.columns(J), [pos[j] for j in tau]))


# --- multiplicities ---------------------------------------------------------


@dataclass(frozen=True)
class Multiplicity:
    component: str
    mu: int
    method: str  # "specialization" or "input-hint"
    points: tuple = ()

    def to_json(self):
        return {
            "component": self.component,
            "mu": self.mu,
            "method": self.method,
            "points": [[el.fraction_str(x) for x in p] for p in self.points],
        }


def _random_unit(rng):
    num = rng.randint(2, 97) * rng.choice((1, -1))
    return Fraction(num, rng.randint(1, 97))


def torus_point(c: PrimaryComponent, rng):
    """A random point of ``V(I_ρ)`` with nonzero J-coordinates (as a dict ``j -> value``)."""
    J = sorted(c.J)
    r = c.lattice.rank
    if r == 0:
        return {j: _random_unit(rng) for j in J}
    Lrows = [[u[j] for j in J] for u in c.lattice.basis]
    S, _, V = el.smith_normal_form(Lrows)
    if any(S[i][i] != 1 for i in range(r)):
        raise ValidationError("LatticeNotSaturated", f"component {c.label}: lattice is not saturated")
    # rows of W = V^-1 span Z^J and the first r of them span the lattice, so
    # prescribing p^{w_i} gives p_j = prod_i c_i^{V[j][i]}
    Winv = V
    W = _int_inverse(V)
    targets = []
    for i in range(len(J)):
        if i < r:
            w = [0] * c.n
            for jj, j in enumerate(J):
                w[j] = W[i][jj]
            targets.append(c.character(tuple(w)))
        else:
            targets.append(_random_unit(rng))
    point = {}
    for jj, j in enumerate(J):
        val = Fraction(1)
        for i, t in enumerate(targets):
            val *= t ** Winv[jj][i]
        point[j] = val
    for b in c.basis_binomials():
        if _eval_at(b.to_poly(), point):
            raise AssertionError("torus point does not lie on the lattice ideal")
    return point


def _int_inverse(M):
    n = len(M)
    aug = [list(r) + list(e) for r, e in zip(M, el.identity(n))]
    R, _ = el.rref(aug)
    inv = [[x for x in row[n:]] for row in R]
    assert all(x.denominator == 1 for row in inv for x in row)
    return [[int(x) for x in row] for row in inv]


def _eval_at(p, point):
    total = Fraction(0)
    for e, coef in p.items():
        term = coef
        for j, a in enumerate(e):
            if a:
                term *= point[j] ** a
        total += term
    return total


def _specialize(p, point, keep):
    out = {}
    for e, coef in p.items():
        term = coef
        for j, v in point.items():
            if e[j]:
                term *= v ** e[j]
        key = tuple(e[j] for j in keep)
        out[key] = out.get(key, 0) + term
    return {e: v for e, v in out.items() if v}


def specialized_colength(c: PrimaryComponent, point, **caps):
    keep = sorted(c.Jbar)
    gens = [_specialize(b.to_poly(), point, keep) for b in c.B]
    gens = [g for g in gens if g]
    if not keep:
        return 0 if any(gens) else 1
    if not gens:
        return math.inf
    return gb.artinian_colength(gens, len(keep), **caps)


def multiplicity(c: PrimaryComponent, A: MatrixA, seed=0, retries=3, **caps) -> Multiplicity:
    """Length of ``R/C`` localized at its associated prime.

    Computed as the colength of ``C`` after substituting a random torus point
    of ``V(I_ρ)`` for the J-variables; two independent points must agree.
    """
    if not classify(c, A).toral:
        raise AssumptionViolated(f"component {c.label} is Andean; its multiplicity is not used")
    rng = random.Random(seed)
    for _ in range(retries):
        pts = (torus_point(c, rng), torus_point(c, rng))
        vals = [specialized_colength(c, p, **caps) for p in pts]
        if vals[0] == vals[1]:
            break
    else:
        raise SpecializationUnstable(f"component {c.label}: specializations disagree", values=vals)
    mu = vals[0]
    if mu == math.inf:
        raise NotArtinian(f"component {c.label}: B does not contain a power of m_J", component=c.label)
    if mu == 0:
        raise ValidationError("ComponentIsUnit", f"component {c.label} becomes the unit ideal on its torus")
    if c.mu_hint is not None and c.mu_hint != mu:
        raise ValidationError("MultiplicityMismatch",
                              f"component {c.label}: computed multiplicity {mu}, input says {c.mu_hint}",
                              computed=mu, hint=c.mu_hint)
    J = sorted(c.J)
    used = tuple(tuple(p[j] for j in J) for p in pts)
    return Multiplicity(c.label, mu, "specialization", used)


# --- rank and irregularity ----------------------------------------------------


def top_components(p: Problem):
    """Relevant components for generic β; each must be toral of Krull dimension d."""
    comps = relevant_components(p.with_beta(GENERIC))
    for c in comps:
        cl = classify(c, p.A)
        if cl.krull_dim != p.A.d:
            raise AssumptionViolated(
                f"component {c.label} has Krull dimension {cl.krull_dim} < {p.A.d}", component=c.label)
    return comps


def holonomic_rank_generic(p: Problem, seed=0) -> int:
    total = 0
    for c in top_components(p):
        total += multiplicity(c, p.A, seed).mu * normalized_volume(p.A.columns(sorted(c.J)))
    return total


@dataclass(frozen=True)
class IrregularityResult:
    coordinate: int  # 0-based
    s: Fraction
    per_component: dict  # label -> dim
    faces: dict  # label -> list of new faces (1-based column lists) with volumes

    @property
    def total(self) -> int:
        return sum(self.per_component.values())

    def to_json(self):
        return {
            "coordinate": self.coordinate + 1,
            "s": el.fraction_str(self.s),
            "per_component": dict(sorted(self.per_component.items())),
            "faces": {k: v for k, v in sorted(self.faces.items())},
            "total": self.total,
        }


def component_irregularity(c: PrimaryComponent, A: MatrixA, i: int, s, mu: int):
    """``mu * sum vol(A_tau)`` over faces in ``Φ^s \\ Φ^1`` avoiding column ``i``."""
    if i not in c.J:
        return 0, []
    J = sorted(c.J)
    cols = A.columns(J)
    K = {i}
    high = stable_umbrella(cols, K, s, J)
    low = stable_umbrella(cols, K, 1, J)
    pos = {j: k for k, j in enumerate(J)}
    total, new = 0, []
    for tau in high:
        if not tau or tau in low or i in tau:
            continue
        vol = normalized_volume(cols, [pos[j] for j in tau])
        total += vol
        new.append({"face": sorted(j + 1 for j in tau), "volume": vol})
    return mu * total, new


def dim_irr_stalk(p: Problem, i: int, s, seed=0) -> IrregularityResult:
    """Dimension of the irregularity stalk of index ``s`` along ``x_i = 0`` (``i`` 0-based)."""
    s = Fraction(s)
    if s <= 1:
        raise ValueError("s must be > 1")
    per, faces = {}, {}
    for c in top_components(p):
        mu = multiplicity(c, p.A, seed).mu if i in c.J else 0
        per[c.label], faces[c.label] = component_irregularity(c, p.A, i, s, mu)
    return IrregularityResult(i, s, per, faces)

"""Problem data: the matrix A, binomials, partial characters and primary components.

Column indices are 0-based inside the package and 1-based in every
document, report and error message.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

from . import exactlin as el
from . import groebner as gb
from .errors import ParseError, ValidationError

GENERIC = "generic"


# --- the grading matrix ---------------------------------------------------


def cone_is_pointed(cols) -> bool:
    """True iff some rational functional is positive on every column.

    By Gordan's alternative this fails exactly when a nonzero nonnegative
    combination of the columns vanishes.  Such a relation exists iff one
    exists with minimal support, i.e. a circuit of the columns with all
    coefficients of one sign, and circuits live on at most ``rank + 1``
    columns.
    """
    cols = [tuple(c) for c in cols]
    if any(not any(c) for c in cols):
        return False
    n = len(cols)
    r = el.rank(el.from_columns(cols, len(cols[0])))
    for size in range(2, min(n, r + 1) + 1):
        for S in itertools.combinations(range(n), size):
            M = el.from_columns([cols[j] for j in S], len(cols[0]))
            ker = el.nullspace(M)
            if len(ker) != 1:
                continue
            v = ker[0]
            if all(x > 0 for x in v) or all(x < 0 for x in v):
                return False
    return True


@dataclass(frozen=True)
class MatrixA:
    data: tuple

    def __post_init__(self):
        if not self.data or not self.data[0]:
            raise ValidationError("EmptyMatrix", "A must have at least one row and column")

    @property
    def d(self) -> int:
        return len(self.data)

    @property
    def n(self) -> int:
        return len(self.data[0])

    def column(self, j):
        return tuple(row[j] for row in self.data)

    def columns(self, J=None):
        J = range(self.n) if J is None else sorted(J)
        return [self.column(j) for j in J]

    def sub(self, J):
        """Submatrix ``A_J`` (columns in increasing index order)."""
        return el.from_columns(self.columns(J), self.d)

    def degree(self, e):
        """``A e``; the A-degree of ``∂^e`` is its negative."""
        return el.matvec(self.data, e)

    def rank_of(self, J) -> int:
        J = sorted(J)
        return el.rank(self.sub(J)) if J else 0

    @cached_property
    def spans_lattice(self) -> bool:
        S, _, _ = el.smith_normal_form(self.data)
        diag = [S[i][i] for i in range(min(self.d, self.n))]
        return len(diag) == self.d and all(x == 1 for x in diag)

    def is_homogeneous(self, J=None) -> bool:
        """True iff ``(1,...,1)`` lies in the rational row span of ``A_J``."""
        J = range(self.n) if J is None else sorted(J)
        if not J:
            return True
        M = el.transpose(self.sub(J))
        return el.solve_rational(M, [1] * len(J)) is not None


# --- binomials ------------------------------------------------------------


@dataclass(frozen=True)
class Binomial:
    """``lead_coeff ∂^lead_exp + trail_coeff ∂^trail_exp`` (trail may be absent)."""

    lead_exp: tuple
    lead_coeff: Fraction = Fraction(1)
    trail_exp: Optional[tuple] = None
    trail_coeff: Fraction = Fraction(0)

    def __post_init__(self):
        if self.lead_coeff == 0:
            raise ValidationError("ZeroCoefficient", "leading coefficient must be nonzero")
        if self.trail_exp is None and self.trail_coeff != 0:
            raise ValidationError("MalformedBinomial", "trailing coefficient without a monomial")
        if self.trail_exp is not None:
            if self.trail_coeff == 0:
                raise ValidationError("MalformedBinomial", "trailing monomial with zero coefficient")
            if tuple(self.trail_exp) == tuple(self.lead_exp):
                raise ValidationError("MalformedBinomial", "both terms have the same exponent")
        for e in (self.lead_exp,) + ((self.trail_exp,) if self.trail_exp else ()):
            if any(x < 0 for x in e):
                raise ValidationError("MalformedBinomial", f"negative exponent in {list(e)}")

    @classmethod
    def of(cls, plus, minus=None, c=1):
        """``∂^plus - c ∂^minus`` (or the monomial ``∂^plus``)."""
        if minus is None:
            return cls(tuple(plus))
        return cls(tuple(plus), Fraction(1), tuple(minus), -Fraction(c))

    @property
    def is_monomial(self) -> bool:
        return self.trail_exp is None

    def exponents(self):
        return [self.lead_exp] + ([self.trail_exp] if self.trail_exp is not None else [])

    def to_poly(self):
        terms = [(self.lead_exp, self.lead_coeff)]
        if self.trail_exp is not None:
            terms.append((self.trail_exp, self.trail_coeff))
        return gb.poly(terms)

    def degree(self):
        return max(sum(e) for e in self.exponents())

    def to_json(self):
        out = {"plus": {"coeff": el.fraction_str(self.lead_coeff), "exp": list(self.lead_exp)}}
        if self.trail_exp is not None:
            out["minus"] = {"coeff": el.fraction_str(-self.trail_coeff), "exp": list(self.trail_exp)}
        return out

    def __str__(self):
        return poly_str(self.to_poly())


def poly_str(p, names=None):
    if not p:
        return "0"
    parts = []
    for e in sorted(p, key=gb.GREVLEX.key, reverse=True):
        c = p[e]
        mono = "*".join(
            (names[j] if names else f"d{j + 1}") + (f"^{x}" if x > 1 else "")
            for j, x in enumerate(e) if x
        )
        if not mono:
            parts.append(el.fraction_str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{el.fraction_str(c)}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


# --- characters and components --------------------------------------------


@dataclass(frozen=True)
class PartialCharacter:
    """A character ``Λ -> Q*`` stored on the canonical basis of ``Λ``."""

    lattice: el.Lattice
    values: tuple

    @classmethod
    def from_basis(cls, gens, values, dim):
        gens = [tuple(g) for g in gens]
        values = [Fraction(v) for v in values]
        if len(gens) != len(values):
            raise ValidationError("CharacterMismatch",
                                  "one character value is needed per lattice basis vector")
        if any(v == 0 for v in values):
            raise ValidationError("CharacterNotInvertible", "character values must be nonzero")
        if gens and el.rank(gens) != len(gens):
            raise ValidationError("LatticeBasisDependent", "lattice generators must be independent")
        L = el.Lattice.from_generators(gens, dim)
        canon = []
        for b in L.basis:
            coords = el.solve_rational(el.transpose(gens), b).particular
            val = Fraction(1)
            for c, v in zip(coords, values):
                val *= v ** int(c)
            canon.append(val)
        return cls(L, tuple(canon))

    @classmethod
    def trivial(cls, lattice):
        return cls(lattice, tuple(Fraction(1) for _ in lattice.basis))

    def __call__(self, u) -> Fraction:
        coords = self.lattice.coordinates(u)
        if coords is None:
            raise ValueError(f"{u} is not in the domain of the character")
        val = Fraction(1)
        for c, v in zip(coords, self.values):
            val *= v ** c
        return val

    @property
    def is_trivial(self) -> bool:
        return all(v == 1 for v in self.values)

    def binomial(self, u) -> Binomial:
        """``∂^{u+} - ρ(u) ∂^{u-}``."""
        plus = tuple(max(x, 0) for x in u)
        minus = tuple(max(-x, 0) for x in u)
        return Binomial.of(plus, minus, self(u))


@dataclass(frozen=True)
class PrimaryComponent:
    """``C = I_ρ + B`` with ``I_ρ`` the lattice ideal of ``ρ`` on ``Z^J``."""

    J: frozenset
    character: PartialCharacter
    B: tuple
    mu_hint: Optional[int] = None
    label: str = ""

    @property
    def lattice(self):
        return self.character.lattice

    @property
    def n(self):
        return self.character.lattice.dim

    @property
    def Jbar(self):
        return frozenset(range(self.n)) - self.J

    @property
    def J1(self):
        """1-based sorted J for display."""
        return [j + 1 for j in sorted(self.J)]

    def krull_dim(self) -> int:
        return len(self.J) - self.lattice.rank

    def basis_binomials(self):
        return [self.character.binomial(u) for u in self.lattice.basis]

    def lattice_ideal_gb(self, order=gb.GREVLEX, **caps):
        """Gröbner basis of ``I_ρ`` (the saturation of the lattice-basis ideal)."""
        gens = [b.to_poly() for b in self.basis_binomials()]
        if self.lattice.rank <= 1:
            return gb.buchberger(gens, order, **caps)
        return gb.saturate_by_monomial(gens, sorted(self.J), self.n, order, **caps)

    def groebner_basis(self, order=gb.GREVLEX, **caps):
        """Gröbner basis of the component ``I_ρ + B``."""
        key = (order, tuple(sorted(caps.items())))
        cache = self.__dict__.setdefault("_gb_cache", {})
        if key not in cache:
            lat = self.lattice_ideal_gb(order, **caps)
            cache[key] = gb.buchberger(lat.polys + [b.to_poly() for b in self.B], order, **caps)
        return cache[key]

    def prime_gb(self, order=gb.GREVLEX, **caps):
        """Gröbner basis of the associated prime ``I_ρ + m_J``."""
        lat = self.lattice_ideal_gb(order, **caps)
        m = [gb.monomial(tuple(int(i == j) for i in range(self.n))) for j in sorted(self.Jbar)]
        return gb.buchberger(lat.polys + m, order, **caps)

    def to_json(self):
        out = {
            "J": self.J1,
            "lattice": [list(u) for u in self.lattice.basis],
            "character": [el.fraction_str(v) for v in self.character.values],
            "B": [b.to_json() for b in self.B],
        }
        if self.mu_hint is not None:
            out["mu"] = self.mu_hint
        if self.label:
            out["label"] = self.label
        return out


@dataclass(frozen=True)
class Prime:
    """Canonical representation of ``I_{ρ,J} = I_ρ + m_J``."""

    J: frozenset
    lattice: el.Lattice
    values: tuple

    def generators(self, n):
        ch = PartialCharacter(self.lattice, self.values)
        gens = [ch.binomial(u) for u in self.lattice.basis]
        gens += [Binomial(tuple(int(i == j) for i in range(n))) for j in range(n) if j not in self.J]
        return gens


def prime_of(c: PrimaryComponent) -> Prime:
    if not c.lattice.is_saturated():
        raise ValidationError("LatticeNotSaturated",
                              f"component {c.label or ''} must present the saturated lattice of its prime")
    return Prime(c.J, c.lattice, c.character.values)


def is_standard_homogeneous_prime(c: PrimaryComponent) -> bool:
    """True iff the associated prime is homogeneous for the standard Z-grading."""
    return all(sum(u) == 0 for u in el.saturate(c.lattice).basis)


@dataclass(frozen=True)
class Problem:
    A: MatrixA
    ideal_gens: tuple
    components: tuple
    beta: object  # tuple of Fraction, or GENERIC
    warnings: tuple = ()

    @property
    def generic(self) -> bool:
        return self.beta == GENERIC

    def with_beta(self, beta) -> "Problem":
        if beta != GENERIC:
            beta = tuple(Fraction(b) for b in beta)
            if len(beta) != self.A.d:
                raise ValidationError("BetaDimension", f"beta needs {self.A.d} entries")
        return Problem(self.A, self.ideal_gens, self.components, beta, self.warnings)

    def to_json(self):
        return {
            "A": [list(r) for r in self.A.data],
            "ideal": [b.to_json() for b in self.ideal_gens],
            "components": [c.to_json() for c in self.components],
            "beta": GENERIC if self.generic else [el.fraction_str(b) for b in self.beta],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


# --- parsing and validation -----------------------------------------------


def _need(cond, reason, msg, **details):
    if not cond:
        raise ValidationError(reason, msg, **details)


def _parse_term(obj, n, where):
    if not isinstance(obj, dict) or "exp" not in obj:
        raise ParseError(f"{where}: term needs an 'exp' array")
    exp = obj["exp"]
    if not isinstance(exp, list) or len(exp) != n or not all(isinstance(x, int) and not isinstance(x, bool) for x in exp):
        raise ParseError(f"{where}: 'exp' must be {n} integers")
    try:
        c = el.parse_fraction(obj.get("coeff", "1"))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: bad coefficient ({exc})") from None
    return tuple(exp), c


def parse_binomial(obj, n, where="binomial") -> Binomial:
    if not isinstance(obj, dict) or "plus" not in obj:
        raise ParseError(f"{where}: binomial needs a 'plus' term")
    pe, pc = _parse_term(obj["plus"], n, where)
    if obj.get("minus") is None:
        return Binomial(pe, pc)
    me, mc = _parse_term(obj["minus"], n, where)
    if mc == 0:
        return Binomial(pe, pc)
    if pc == 0:
        return Binomial(me, -mc)
    return Binomial(pe, pc, me, -mc)


def check_graded(A: MatrixA, b: Binomial, where):
    if b.trail_exp is not None:
        _need(A.degree(b.lead_exp) == A.degree(b.trail_exp), "NotAGraded",
              f"{where}: {b} is not A-homogeneous", binomial=str(b))


def parse_problem(text, strict_span=False, check_containment=True, **caps) -> Problem:
    """Parse and validate a problem document (JSON text, bytes or an already-decoded dict)."""
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    else:
        doc = text
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    for key in ("A", "components", "beta"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}")

    rows = doc["A"]
    if (not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows)
            or not all(isinstance(x, int) and not isinstance(x, bool) for r in rows for x in r)):
        raise ParseError("'A' must be a nonempty array of integer arrays")
    try:
        A = MatrixA(el.as_matrix(rows))
    except ValueError:
        raise ParseError("'A' is ragged") from None
    n, d = A.n, A.d
    warnings = []

    cols = A.columns()
    zero = [j + 1 for j, c in enumerate(cols) if not any(c)]
    _need(not zero, "ZeroColumn", f"columns {zero} of A are zero", columns=zero)
    _need(cone_is_pointed(cols), "ConeNotPointed", "the cone spanned by the columns of A contains a line")
    if not A.spans_lattice:
        if strict_span:
            raise ValidationError("ColumnsDoNotSpan", "the columns of A do not span Z^d")
        warnings.append("ColumnsDoNotSpan: the columns of A generate a proper sublattice of Z^d")

    ideal = []
    for i, obj in enumerate(doc.get("ideal", [])):
        b = parse_binomial(obj, n, f"ideal[{i}]")
        check_graded(A, b, f"ideal[{i}]")
        ideal.append(b)

    comps = []
    if not isinstance(doc["components"], list) or not doc["components"]:
        raise ParseError("'components' must be a nonempty array")
    for i, obj in enumerate(doc["components"]):
        comps.append(_parse_component(obj, A, i))

    beta = doc["beta"]
    if isinstance(beta, str) and beta.strip().lower() == GENERIC:
        beta = GENERIC
    elif isinstance(beta, list):
        try:
            beta = tuple(el.parse_fraction(b) for b in beta)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad beta entry ({exc})") from None
        if len(beta) != d:
            raise ParseError(f"beta must have {d} entries")
    else:
        raise ParseError("'beta' must be an array of rationals or the string 'generic'")

    if check_containment:
        for c in comps:
            G = c.groebner_basis(**caps)
            for i, b in enumerate(ideal):
                _need(G.contains(b.to_poly()), "ComponentDoesNotContainIdeal",
                      f"generator {b} of I is not in component {c.label}",
                      component=c.label, generator=str(b))
    for c in comps:
        gens = c.groebner_basis(**caps).polys
        for j in sorted(c.Jbar):
            if not gb.contains_power_of(gens, j, n, **caps):
                raise ValidationError("NotArtinian",
                                      f"component {c.label}: no power of d{j + 1} lies in it, so B "
                                      f"does not contain a power of m_J", component=c.label, variable=j + 1)
    warnings.append("DecompositionTrusted: the intersection of the components is not checked against I")
    return Problem(A, tuple(ideal), tuple(comps), beta, tuple(warnings))


def _parse_component(obj, A: MatrixA, i) -> PrimaryComponent:
    n = A.n
    where = f"components[{i}]"
    if not isinstance(obj, dict) or "J" not in obj:
        raise ParseError(f"{where}: needs 'J'")
    Jraw = obj["J"]
    if not isinstance(Jraw, list) or not all(isinstance(j, int) and 1 <= j <= n for j in Jraw):
        raise ParseError(f"{where}: 'J' must list column indices in 1..{n}")
    J = frozenset(j - 1 for j in Jraw)
    label = obj.get("label") or f"C{i + 1}"

    gens = obj.get("lattice", [])
    if not isinstance(gens, list) or not all(
            isinstance(u, list) and len(u) == n and all(isinstance(x, int) for x in u) for u in gens):
        raise ParseError(f"{where}: 'lattice' must be integer vectors of length {n}")
    for u in gens:
        off = [j + 1 for j, x in enumerate(u) if x and j not in J]
        _need(not off, "LatticeNotInKernel",
              f"{where}: lattice vector {u} is not supported on J", vector=u)
        _need(not any(A.degree(u)), "LatticeNotInKernel",
              f"{where}: lattice vector {u} is not in ker A_J", vector=u)
    values = obj.get("character")
    if values is None:
        values = ["1"] * len(gens)
    try:
        values = [el.parse_fraction(v) for v in values]
    except (ValueError, ZeroDivisionError):
        raise ValidationError("CharacterNotRational",
                              f"{where}: character values must be rationals 'p/q'") from None
    ch = PartialCharacter.from_basis(gens, values, n)
    _need(ch.lattice.is_saturated(), "LatticeNotSaturated",
          f"{where}: the lattice must be saturated (it is the lattice of the associated prime)")

    B = []
    for k, bobj in enumerate(obj.get("B", [])):
        b = parse_binomial(bobj, n, f"{where}.B[{k}]")
        check_graded(A, b, f"{where}.B[{k}]")
        for e in b.exponents():
            _need(any(e[j] for j in range(n) if j not in J), "BNotInMJ",
                  f"{where}: term of {b} is not divisible by a variable outside J", binomial=str(b))
        B.append(b)
    mu = obj.get("mu")
    if mu is not None and (not isinstance(mu, int) or mu < 1):
        raise ParseError(f"{where}: 'mu' must be a positive integer")
    return PrimaryComponent(J, ch, tuple(B), mu, label)


def load_problem(path, **kw) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_problem(text, **kw)

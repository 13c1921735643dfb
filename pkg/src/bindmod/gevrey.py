"""Truncated Gevrey series solutions of a primary component.

A solution of ``M_A(C, β)`` along ``x_i = 0`` is sought as

    f = sum_{γ, k} λ_{γ,k} x_{J̄}^γ φ_{v_k(γ)},

where ``x^γ`` runs over the standard monomials of a monomial ideal
``n ⊆ C`` with radical ``m_J`` and ``φ_v`` is the hypergeometric series of
the lattice ideal with base exponent ``v``.  Applying the remaining
generators of ``C`` gives linear conditions on the λ's.  Series are
truncated to lattice points ``u`` with ``|u|_∞ ≤ N`` (in lattice
coordinates); only coefficients that cannot see the truncation are used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import exactlin as el
from . import groebner as gb
from .errors import CapExceeded, PochhammerPole, TruncationTooSmall, UnsupportedRank, ValidationError
from .model import GENERIC, MatrixA, PrimaryComponent
from .stratify import classify
from .umbrella import intrinsic_points, stable_umbrella, umbrella_jumps

DEFAULT_SOCLE_CAP = 64


def generic_beta(d):
    """A fixed rational parameter standing in for a very generic β."""
    primes = (101, 103, 107, 109, 113, 127)
    return tuple(Fraction(2 * i + 7, primes[i % len(primes)]) for i in range(d))


def falling(w, k):
    """Falling Pochhammer ``w (w-1) ... (w-k+1)``."""
    out = Fraction(1)
    for i in range(k):
        out *= w - i
    return out


# --- monomial socle -----------------------------------------------------------


@dataclass(frozen=True)
class MonomialSocle:
    powers: dict  # j (0-based, outside J) -> p_j
    staircase: tuple  # exponent tuples (length n, zero on J)

    def generators(self, n):
        return [tuple(p if i == j else 0 for i in range(n)) for j, p in sorted(self.powers.items())]

    def to_json(self):
        return {"powers": {str(j + 1): p for j, p in sorted(self.powers.items())},
                "staircase_size": len(self.staircase)}


def monomial_socle(c: PrimaryComponent, cap=DEFAULT_SOCLE_CAP, **caps) -> MonomialSocle:
    """Smallest ``p_j`` with ``∂_j^{p_j} in C`` for every ``j`` outside J."""
    G = c.groebner_basis(**caps)
    powers = {}
    for j in sorted(c.Jbar):
        for p in range(1, cap + 1):
            e = tuple(p if i == j else 0 for i in range(c.n))
            if G.contains(gb.monomial(e)):
                powers[j] = p
                break
        else:
            raise CapExceeded(f"no power of d{j + 1} up to {cap} lies in the component", cap=cap, variable=j + 1)
    Jbar = sorted(powers)
    stair = []
    for exps in itertools.product(*[range(powers[j]) for j in Jbar]):
        e = [0] * c.n
        for j, x in zip(Jbar, exps):
            e[j] = x
        stair.append(tuple(e))
    return MonomialSocle(powers, tuple(stair))


# --- phi series ---------------------------------------------------------------


@dataclass(frozen=True)
class PhiSeries:
    """Truncation of ``φ_v`` on the columns ``J`` (exponents in ambient coordinates)."""

    v: tuple  # length n, zero outside J
    N: int
    terms: dict  # exponent (length n) -> coefficient

    def coefficient(self, u):
        return self.terms.get(tuple(a + b for a, b in zip(self.v, u)), Fraction(0))


def lattice_points(lattice: el.Lattice, N):
    """Points of the lattice with basis coordinates in ``[-N, N]``, with their coordinates."""
    for m in itertools.product(range(-N, N + 1), repeat=lattice.rank):
        u = tuple(sum(mi * b[j] for mi, b in zip(m, lattice.basis)) for j in range(lattice.dim))
        yield m, u


def phi_coefficient(character, v, u):
    num = Fraction(1)
    den = Fraction(1)
    for vj, uj in zip(v, u):
        if uj < 0:
            num *= falling(vj, -uj)
        elif uj > 0:
            den *= falling(vj + uj, uj)
    if den == 0:
        raise PochhammerPole(f"Pochhammer denominator vanishes at u={list(u)}",
                             v=[el.fraction_str(x) for x in v], u=list(u))
    return character(u) * num / den


def phi_series(character, v, N) -> PhiSeries:
    """``φ_v = sum_u ρ(u) (v)_{u-} / (v+u)_{u+} x^{v+u}`` for ``|u| ≤ N``."""
    v = tuple(Fraction(x) for x in v)
    terms = {}
    for _, u in lattice_points(character.lattice, N):
        coef = phi_coefficient(character, v, u)
        if coef:
            terms[tuple(a + b for a, b in zip(v, u))] = coef
    return PhiSeries(v, N, terms)


# --- exponents ----------------------------------------------------------------


@dataclass(frozen=True)
class Exponent:
    v: tuple  # ambient length n
    face: frozenset  # τ (0-based column labels)
    slope: Fraction  # the Gevrey index at which τ enters the umbrella


def face_slopes(cols, K, labels):
    """For each face present just above some jump, the first jump where it appears."""
    first = {}
    for s, _, above in umbrella_jumps(cols, K, labels):
        for tau in above:
            first.setdefault(tau, s)
    return first


def exponent_candidates(cols, beta_prime, direction, labels=None, s=None, n=None):
    """Base exponents for Gevrey series along ``x_direction = 0``.

    For every face ``τ`` of the umbrella just above ``s`` that is new
    compared with ``s = 1`` and avoids ``direction``, the exponents are
    ``v`` with ``v_j`` a nonnegative integer off ``τ`` and
    ``A_τ v_τ = β' - A_{J∖τ} v_{J∖τ}``, one for each class modulo the kernel
    lattice.  ``s`` defaults to the largest slope.  Automatic mode needs
    rank ≤ 2 and simplicial faces.
    """
    labels = list(range(len(cols))) if labels is None else list(labels)
    n = max(labels) + 1 if n is None else n
    beta_prime = tuple(Fraction(x) for x in beta_prime)
    pts = intrinsic_points(cols)
    k = len(pts[0])
    if k > 2:
        raise UnsupportedRank(f"automatic exponents need rank <= 2 (got {k}); pass v explicitly", rank=k)
    K = {direction}
    firsts = face_slopes(cols, K, labels)
    if not firsts:
        return []
    s = max(firsts.values()) if s is None else Fraction(s)
    high = stable_umbrella(cols, K, s, labels)
    low = stable_umbrella(cols, K, 1, labels)
    pos = {lab: i for i, lab in enumerate(labels)}
    kernel = el.kernel_lattice(el.from_columns([tuple(c) for c in cols], len(cols[0])))
    out = []
    for tau in high:
        if not tau or tau in low or direction in tau:
            continue
        if len(tau) != k:
            raise UnsupportedRank(f"face {sorted(j + 1 for j in tau)} is not a simplex; pass v explicitly")
        out.extend(_face_exponents(cols, labels, pos, kernel, tau, beta_prime, n, firsts.get(tau, s)))
    return out


def _face_exponents(cols, labels, pos, kernel, tau, beta_prime, n, slope):
    tau_idx = [pos[j] for j in sorted(tau)]
    rest = [i for i in range(len(cols)) if i not in tau_idx]
    Atau = el.from_columns([cols[i] for i in tau_idx], len(cols[0]))
    Jcols, Acols = len(cols), el.from_columns([tuple(c) for c in cols], len(cols[0]))
    # number of classes = index of Z A_tau in Z A_J
    full, _ = el.column_lattice(cols)
    sub = el.Lattice.from_generators([cols[i] for i in tau_idx], len(cols[0]))
    count = el.lattice_index(sub, full)
    found = []
    radius = 0
    while len(found) < count:
        for ks in itertools.product(range(radius + 1), repeat=len(rest)):
            if rest and max(ks) != radius:
                continue
            rhs = [b - sum(kk * cols[i][r] for kk, i in zip(ks, rest)) for r, b in enumerate(beta_prime)]
            sol = el.solve_rational(Atau, rhs)
            if sol is None or sol.kernel:
                continue
            vJ = [Fraction(0)] * Jcols
            for i, x in zip(tau_idx, sol.particular):
                vJ[i] = x
            for kk, i in zip(ks, rest):
                vJ[i] = Fraction(kk)
            if any(_congruent(vJ, w, kernel) for w in found):
                continue
            assert el.matvec(Acols, vJ) == tuple(beta_prime)
            found.append(vJ)
        radius += 1
        if radius > 64:
            raise AssertionError("exponent search did not close up")
    out = []
    for vJ in found:
        v = [Fraction(0)] * n
        for i, lab in enumerate(labels):
            v[lab] = vJ[i]
        out.append(Exponent(tuple(v), frozenset(tau), slope))
    return out


def _congruent(v, w, kernel):
    diff = [a - b for a, b in zip(v, w)]
    if any(x.denominator != 1 for x in diff):
        return False
    return tuple(int(x) for x in diff) in kernel


# --- the ansatz ---------------------------------------------------------------


@dataclass(frozen=True)
class Branch:
    """One ansatz term ``x^γ φ_v`` and its label ``(γ restricted to J̄, k)``."""

    gamma: tuple  # length n, zero on J
    k: int
    exponent: Exponent
    series: dict  # exponent -> coefficient of x^γ φ_v

    def label(self, Jbar):
        return (tuple(self.gamma[j] for j in Jbar), self.k)


def _apply_term(series, a, coef):
    out = {}
    for E, c in series.items():
        f = coef * c
        for Ej, aj in zip(E, a):
            if aj:
                f *= falling(Ej, aj)
                if not f:
                    break
        if f:
            F = tuple(Ej - aj for Ej, aj in zip(E, a))
            out[F] = out.get(F, 0) + f
    return out


def apply_operator(poly, series):
    """Apply a constant-coefficient operator ``sum c_a ∂^a`` to a series."""
    out = {}
    for a, c in poly.items():
        for E, f in _apply_term(series, a, c).items():
            out[E] = out.get(E, 0) + f
    return {E: f for E, f in out.items() if f}


@dataclass
class Truncation:
    """Which exponents of the truncated ansatz are exact."""

    J: tuple
    lattice: el.Lattice
    N: int
    branches: list

    def source_missing(self, E, a) -> bool:
        F = tuple(Ej + aj for Ej, aj in zip(E, a))
        for b in self.branches:
            if any(F[j] != b.gamma[j] for j in range(len(F)) if j not in self.J):
                continue
            u = [F[j] - b.exponent.v[j] if j in self.J else 0 for j in range(len(F))]
            if any(x.denominator != 1 for x in u):
                continue
            m = self.lattice.coordinates(tuple(int(x) for x in u))
            if m is not None and max((abs(x) for x in m), default=0) > self.N:
                return True
        return False

    def interior(self, E, operators) -> bool:
        return not any(self.source_missing(E, a) for P in operators for a in P)


@dataclass
class GevreyBasis:
    direction: int
    beta: tuple
    N: int
    socle: MonomialSocle
    branches: list
    unknowns: list  # branch labels
    relations: list  # (pivot index, {free index: coefficient})
    free: list  # indices of free unknowns
    equations: int
    solutions: list = field(default_factory=list)  # λ vectors spanning the solution space
    rejected: list = field(default_factory=list)
    slopes: tuple = ()

    @property
    def dimension(self) -> int:
        return len(self.free)

    def forced_zero(self, label) -> bool:
        i = self.unknowns.index(label)
        return all(sol[i] == 0 for sol in self.solutions)

    def ratio(self, label_a, label_b):
        """``λ_a / λ_b`` when it is constant on the solution space, else ``None``."""
        ia, ib = self.unknowns.index(label_a), self.unknowns.index(label_b)
        r = None
        for sol in self.solutions:
            if sol[ib] == 0:
                if sol[ia] != 0:
                    return None
                continue
            q = sol[ia] / sol[ib]
            if r is not None and q != r:
                return None
            r = q
        return r

    def series(self, lam):
        out = {}
        for c, b in zip(lam, self.branches):
            if c:
                for E, f in b.series.items():
                    out[E] = out.get(E, 0) + c * f
        return {E: f for E, f in out.items() if f}

    def solution_series(self):
        return [self.series(sol) for sol in self.solutions]

    def to_json(self, Jbar):
        def name(i):
            g, k = self.unknowns[i]
            return f"lambda[({','.join(map(str, g))}),{k}]"
        return {
            "direction": self.direction + 1,
            "beta": [el.fraction_str(x) for x in self.beta],
            "order": self.N,
            "socle": self.socle.to_json(),
            "unknowns": len(self.unknowns),
            "equations": self.equations,
            "dimension": self.dimension,
            "slopes": [el.fraction_str(s) for s in self.slopes],
            "exponents": [
                {"gamma": list(b.label(Jbar)[0]), "k": b.k,
                 "v": [el.fraction_str(x) for x in b.exponent.v],
                 "face": sorted(j + 1 for j in b.exponent.face),
                 "slope": el.fraction_str(b.exponent.slope)}
                for b in self.branches
            ],
            "relations": [
                {"unknown": name(p), "equals": {name(f): el.fraction_str(c) for f, c in sorted(rel.items())}}
                for p, rel in self.relations
            ],
            "free": [name(i) for i in self.free],
            "rejected": self.rejected,
        }


def _resolve_beta(beta, d):
    if beta == GENERIC or beta is None:
        return generic_beta(d)
    return tuple(Fraction(x) for x in beta)


def gevrey_basis(c: PrimaryComponent, A: MatrixA, beta, direction: int, N: int, s=None,
                 v=None, socle_cap=DEFAULT_SOCLE_CAP, **caps) -> GevreyBasis:
    """Solve the Gevrey ansatz along ``x_direction = 0`` (0-based) up to order ``N``.

    ``v`` optionally gives base exponents explicitly; this is only allowed
    when the staircase is ``{1}`` (so no shift by ``A_{J̄} γ`` is needed).
    """
    if not classify(c, A).toral:
        raise ValidationError("ComponentNotToral", f"component {c.label} is Andean")
    beta = _resolve_beta(beta, A.d)
    socle = monomial_socle(c, socle_cap, **caps)
    J = sorted(c.J)
    Jbar = sorted(c.Jbar)
    cols = A.columns(J)
    n = A.n
    nset = {e for e in socle.generators(n)}
    ops = [b.to_poly() for b in c.B if not _in_monomial_ideal(b, nset)]
    D = max((gb.degree(P) for P in ops), default=0)
    if N < 2 * D:
        raise TruncationTooSmall(f"order {N} is below twice the operator degree {D}", order=N, needed=2 * D)
    if v is not None and len(socle.staircase) > 1:
        raise ValidationError("ExplicitExponentsNeedPrime",
                              "explicit exponents are only accepted when the staircase is {1}")
    branches, rejected = [], []
    for gamma in socle.staircase:
        bp = tuple(b - x for b, x in zip(beta, A.degree(gamma)))
        if v is not None:
            exps = [Exponent(tuple(Fraction(x) for x in vv), frozenset(), Fraction(0)) for vv in v]
            for e in exps:
                if A.degree(e.v) != bp:
                    raise ValidationError("ExponentNotHomogeneous", "A v must equal beta")
        else:
            exps = exponent_candidates(cols, bp, direction, J, s, n)
        for k, e in enumerate(exps):
            try:
                phi = phi_series(c.character, e.v, N)
            except PochhammerPole as err:
                rejected.append({"gamma": [gamma[j] for j in Jbar], "k": k, "reason": err.to_dict()})
                continue
            ser = {tuple(g + x for g, x in zip(gamma, E)): f for E, f in phi.terms.items()}
            branches.append(Branch(gamma, k, e, ser))
    trunc = Truncation(tuple(J), c.lattice, N, branches)
    applied = [[apply_operator(P, b.series) for b in branches] for P in ops]
    rows = []
    for P, outs in zip(ops, applied):
        exps = sorted({E for o in outs for E in o})
        for E in exps:
            if not trunc.interior(E, [P]):
                continue
            row = [o.get(E, Fraction(0)) for o in outs]
            if any(row):
                rows.append(row)
    if ops and not rows and branches:
        raise TruncationTooSmall(f"no exact coefficients at order {N}", order=N)
    m = len(branches)
    if rows:
        R, piv = el.rref(rows)
    else:
        R, piv = [], []
    free = [i for i in range(m) if i not in piv]
    relations = []
    for row, p in zip(R, piv):
        relations.append((p, {f: -row[f] for f in free if row[f]}))
    sols = el.nullspace(R) if rows else [tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m)]
    slopes = tuple(sorted({b.exponent.slope for b in branches}))
    return GevreyBasis(direction, beta, N, socle, branches, [b.label(Jbar) for b in branches],
                       relations, free, len(rows), list(sols), rejected, slopes)


def _in_monomial_ideal(b, gens):
    return all(any(gb.divides(g, e) for g in gens) for e in b.exponents())


# --- verification ---------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    euler_exact: bool
    interior_residual: Fraction  # max |coefficient| over interior exponents
    interior_checked: int
    boundary_terms: int

    @property
    def ok(self) -> bool:
        return self.euler_exact and self.interior_residual == 0

    def to_json(self):
        return {"euler_exact": self.euler_exact, "interior_residual": el.fraction_str(self.interior_residual),
                "interior_checked": self.interior_checked, "boundary_terms": self.boundary_terms, "ok": self.ok}


def euler_residual(series, A: MatrixA, beta):
    """Terms of ``(E_i - β_i) f`` for every row ``i``; empty iff exactly annihilated."""
    beta = tuple(Fraction(x) for x in beta)
    bad = {}
    for E, f in series.items():
        deg = A.degree(E)
        for i in range(A.d):
            if deg[i] != beta[i]:
                bad[(i, E)] = (deg[i] - beta[i]) * f
    return bad


def verify_solution(series, c: PrimaryComponent, A: MatrixA, beta, basis: GevreyBasis = None):
    """Check a truncated series against the Euler operators and the generators of ``C``.

    Interior exponents come from ``basis`` (the ansatz that produced the
    series); without it every exponent is treated as interior.
    """
    beta = _resolve_beta(beta, A.d)
    euler = not euler_residual(series, A, beta)
    ops = [b.to_poly() for b in c.basis_binomials()] + [b.to_poly() for b in c.B]
    worst, checked, boundary = Fraction(0), 0, 0
    trunc = Truncation(tuple(sorted(c.J)), c.lattice, basis.N, basis.branches) if basis else None
    for P in ops:
        out = apply_operator(P, series)
        targets = {tuple(x - y for x, y in zip(E, a)) for E in series for a in P}
        for E in sorted(targets):
            if trunc is not None and not trunc.interior(E, [P]):
                boundary += 1
                continue
            checked += 1
            worst = max(worst, abs(out.get(E, 0)))
    return VerificationReport(euler, worst, checked, boundary)

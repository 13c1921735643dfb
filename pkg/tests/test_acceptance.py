"""Acceptance criteria 1 to 7, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` (lines are printed live)
or ``python tests/test_acceptance.py`` for just the summary lines.
"""

import json
import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import oracles  # noqa: E402
from conftest import fixture_path  # noqa: E402
from randgen import random_matrix, random_toral_component  # noqa: E402
from bindmod import groebner as gb  # noqa: E402
from bindmod.cli import run  # noqa: E402
from bindmod.errors import ValidationError  # noqa: E402
from bindmod.gevrey import euler_residual, gevrey_basis  # noqa: E402
from bindmod.irregularity import dim_irr_stalk, multiplicity, normalized_volume  # noqa: E402
from bindmod.model import GENERIC, load_problem, parse_problem  # noqa: E402
from bindmod.stratify import is_regular, qdeg_component  # noqa: E402
from bindmod.umbrella import critical_slopes  # noqa: E402

TIME_LIMIT = 10.0


def load(name):
    return load_problem(fixture_path(name))


def analyze(name, beta=None):
    args = ["analyze", str(fixture_path(name))] + (["--beta", beta] if beta else [])
    code, text = run(args)
    assert code == 0, text
    return json.loads(text)["result"]


def c1():
    """counterexample1: regularity verdicts, arrangement, slope 2 along x2."""
    checks = []
    r = analyze("counterexample1", "1,0")
    checks.append(("beta=(1,0) regular", r["regularity"]["verdict"] == "regular"))
    r = analyze("counterexample1", "1,1")
    checks.append(("beta=(1,1) irregular via I_2", r["regularity"] == {"verdict": "irregular", "witnesses": ["I_2"]}))
    arr = [(t["offset"], t["span"]) for t in r["nonregular_arrangement"]]
    checks.append(("arrangement is C(1,1)", arr == [(["0", "0"], [["1", "1"]])]))
    checks.append(("slope 2 along x2 from I_2",
                   r["slopes"] == {"2": {"subspace": [2], "slopes": ["2"], "provenance": {"2": ["I_2"]}}}))
    return checks


def c2():
    """counterexample2: regular for several betas, prime homogeneous."""
    checks = []
    for beta in ("0", "1", "7/3", None):
        r = analyze("counterexample2", beta)
        checks.append((f"beta={beta or 'generic'} regular", r["regularity"]["verdict"] == "regular"))
    checks.append(("prime homogeneous", r["classification"][0]["homogeneous_prime"] is True))
    return checks


def c3():
    """big-example-1 slopes along x5 with provenance."""
    p = load("big_example_1")
    J = {c.label: c.J1 for c in p.components}
    checks = []
    code, text = run(["slopes", str(fixture_path("big_example_1")), "--subspace", "5"])
    checks.append(("generic: {6}", json.loads(text)["result"]["slopes"] == ["6"]))
    code, text = run(["slopes", str(fixture_path("big_example_1")), "--subspace", "5", "--beta", "1,1"])
    res = json.loads(text)["result"]
    checks.append(("beta=(1,1): {3/2,3,6}", res["slopes"] == ["3/2", "3", "6"]))
    want = {"3/2": [4, 5], "3": [3, 5], "6": [1, 2, 5]}
    got = {s: [J[lab] for lab in labs] for s, labs in res["provenance"].items()}
    checks.append(("provenance by J", got == {s: [j] for s, j in want.items()}))
    return checks


def c4():
    """big-example-2 strata and slope table."""
    r = analyze("big_example_2")
    strata = r["strata"]
    want_rel = [{1}, {1, 2, 3}, {1, 5, 6}, {1, 4, 5, 6}, {1, 2, 3, 5, 6}, {1, 2, 3, 4, 5, 6}]
    want_slopes = [
        {"6": ["6"]},
        {"6": ["6"], "4": ["2"]},
        {"6": ["4", "6"]},
        {"6": ["2", "4", "6"]},
        {"6": ["4", "6"], "4": ["2"]},
        {"6": ["2", "4", "6"], "4": ["2"]},
    ]
    got_rel = [{int(lab.split("_")[1]) for lab in s["relevant"]} for s in strata]
    checks = [("six strata", len(strata) == 6)]
    checks.append(("relevant sets", sorted(map(sorted, got_rel)) == sorted(map(sorted, want_rel))))
    table = {frozenset(rel): s["slopes"] for rel, s in zip(got_rel, strata)}
    checks.append(("slope table", all(table.get(frozenset(rel)) == sl for rel, sl in zip(want_rel, want_slopes))))
    return checks


def c5():
    """Worked example: multiplicity, irregularity, Gevrey basis, slope."""
    p = load("gevrey_example")
    c = p.components[0]
    checks = [("multiplicity 4", multiplicity(c, p.A).mu == 4)]
    checks.append(("dim Irr(y, 3/2) = 8", dim_irr_stalk(p, 1, F(3, 2)).total == 8))
    bases = {N: gevrey_basis(c, p.A, p.beta, 1, N) for N in (4, 8)}
    B = bases[4]
    checks.append(("basis dimension 8", B.dimension == 8))
    zeros = all(B.forced_zero(((g, 1), k)) for g in (2, 3) for k in (0, 1))
    checks.append(("lambda_(2,1),k = lambda_(3,1),k = 0", zeros))
    checks.append(("only slope 3/2 along y", critical_slopes(p.A.columns([0, 1]), {1}, [0, 1]) == [F(3, 2)]
                   and B.slopes == (F(3, 2),)))
    checks.append(("invariant under N -> 2N", bases[8].dimension == 8 and bases[8].relations == B.relations))
    return checks


def c6():
    """Property suite (a)-(f)."""
    checks = []
    # (a) slopes vs grid oracle, 50 random matrices
    rng = random.Random(2024)
    bad = 0
    for _ in range(50):
        cols = random_matrix(rng, d_max=3, n_max=6, entry_max=4, n_min=1)
        K = {rng.randrange(len(cols))}
        ours = critical_slopes(cols, K)
        iv = oracles.slope_intervals(cols, K)
        if len(ours) != len(iv) or any(not lo - 1e-6 <= float(s) <= hi + 1e-6 for s, (lo, hi) in zip(ours, iv)):
            bad += 1
    checks.append(("(a) slopes vs hull oracle on 50 matrices", bad == 0))
    # (b) volumes vs Qhull, and across triangulations
    rng = random.Random(7)
    good = True
    for _ in range(20):
        cols = random_matrix(rng, d_max=3, n_max=6, entry_max=4)
        d = len(cols[0])
        vols = {normalized_volume(cols, start=s) for s in range(len(cols) + 1)}
        good &= len(vols) == 1
        full = oracles.span_coordinates(cols)[1] == d
        if full and d >= 2:
            import math
            ref = math.factorial(d) * oracles.hull_volume([(0,) * d] + cols) / oracles.lattice_index_full_rank(cols)
            good &= abs(vols.pop() - ref) < 1e-6
    checks.append(("(b) volumes triangulation independent and match Qhull", good))
    # (c) multiplicities from independent specializations
    rng = random.Random(99)
    good = True
    for i in range(25):
        A, c, _ = random_toral_component(rng)
        good &= multiplicity(c, A, seed=i).mu == multiplicity(c, A, seed=1000 + i).mu
    checks.append(("(c) multiplicity stable on 25 components", good))
    # (d) Euler exactness of every emitted series
    good = True
    for name, direction, beta in (("gevrey_example", 1, GENERIC), ("gevrey_example", 1, (F(-5, 3),)),
                                  ("cusp_prime", 1, GENERIC), ("cusp_prime", 1, (F(4, 7),))):
        p = load(name)
        c = p.components[0]
        B = gevrey_basis(c, p.A, beta, direction, 6)
        for f in [b.series for b in B.branches] + B.solution_series():
            good &= not euler_residual(f, p.A, B.beta)
    checks.append(("(d) Euler operators annihilate all series", good))
    # (e) homogeneous configurations have no slopes
    rng = random.Random(5)
    good = True
    for _ in range(30):
        d, deg = rng.randint(1, 3), rng.randint(1, 4)
        cols = set()
        for _ in range(rng.randint(1, 5)):
            v = [0] * d
            for _ in range(deg):
                v[rng.randrange(d)] += 1
            cols.add(tuple(v))
        cols = sorted(cols)
        for k in range(len(cols)):
            good &= critical_slopes(cols, {k}) == []
    checks.append(("(e) homogeneous A_J gives no slopes", good))
    # (f) qdeg under two term orders
    good = True
    for name in ("big_example_1", "big_example_2", "counterexample1", "counterexample2", "gevrey_example"):
        p = load(name)
        for c in p.components:
            good &= qdeg_component(c, p.A, gb.GREVLEX).canonical() == qdeg_component(c, p.A, gb.LEX).canonical()
    rng = random.Random(3)
    for _ in range(10):
        A, c, _ = random_toral_component(rng)
        good &= qdeg_component(c, A, gb.GREVLEX).canonical() == qdeg_component(c, A, gb.LEX).canonical()
    checks.append(("(f) qdeg independent of term order", good))
    return checks


def _reason(doc):
    try:
        parse_problem(doc)
    except ValidationError as e:
        return e.reason
    return None


def c7():
    """Negative controls produce structured errors."""
    base = json.loads(fixture_path("gevrey_example").read_text())
    checks = []
    d = json.loads(json.dumps(base))
    d["ideal"].append({"plus": {"coeff": "1", "exp": [1, 0, 0, 0]}, "minus": {"coeff": "1", "exp": [0, 1, 0, 0]}})
    checks.append(("non-graded generator -> NotAGraded", _reason(d) == "NotAGraded"))
    d = json.loads(json.dumps(base))
    d["components"][0]["lattice"] = [[1, -1, 0, 0]]
    checks.append(("lattice outside ker A_J -> LatticeNotInKernel", _reason(d) == "LatticeNotInKernel"))
    d = json.loads(json.dumps(base))
    d["ideal"] = [base["ideal"][0]]
    d["components"][0]["B"] = [{"plus": {"coeff": "1", "exp": [0, 0, 1, 0]}}]
    d["components"][0].pop("mu", None)
    checks.append(("B without a power of m_J -> NotArtinian", _reason(d) == "NotArtinian"))
    code, text = run(["rank", "/dev/null/nothing.json"])
    checks.append(("missing file is a structured error", code == 2 and "error" in json.loads(text)))
    return checks


CRITERIA = [c1, c2, c3, c4, c5, c6, c7]


def evaluate(fn):
    t0 = time.perf_counter()
    checks = fn()
    dt = time.perf_counter() - t0
    failed = [name for name, ok in checks if not ok]
    if dt > TIME_LIMIT:
        failed.append(f"took {dt:.1f}s > {TIME_LIMIT:.0f}s")
    n = CRITERIA.index(fn) + 1
    status = "PASS" if not failed else "FAIL"
    detail = "; ".join(failed) if failed else f"{len(checks)} checks"
    return not failed, f"CRITERION {n}: {status} ({dt:.2f}s, exact) {fn.__doc__.strip()} [{detail}]"


@pytest.mark.parametrize("fn", CRITERIA, ids=[f"criterion_{i + 1}" for i in range(len(CRITERIA))])
def test_criterion(fn, capsys):
    ok, line = evaluate(fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(fn) for fn in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)

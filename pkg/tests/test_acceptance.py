"""Acceptance criteria, one test per criterion.

Every test records a one-line PASS/FAIL verdict; the lines are printed at the
end of the pytest session and when this file is run as a script.
"""

import cmath
import functools
import itertools
import sys
import time

import numpy as np

from fusionkit import fixtures
from fusionkit.canonical import canonical_form, canonical_key
from fusionkit.classifier import LABEL_36, LABEL_E, DimensionProfile, classify, enumerate_types
from fusionkit.cli import run
from fusionkit.doubles import double_modular_data
from fusionkit.fusion_core import (SubBasis, adjoint_subbasis, fp_dimensions, is_subbasis,
                                   validate_fusion_ring)
from fusionkit.grading import PointedCochain, graded_twist
from fusionkit.modular_data import (ModularData, abelian_group_types, centralizer,
                                    fusion_subcategory_lattice, group_theoretical_certificate,
                                    metric_group_data, random_metric_group, twist_equation_check,
                                    verify_modular, verlinde_fusion)
from fusionkit.ring_search import SearchSpec, complete_fusion_rings

from conftest import (bundled_groups, bundled_rings, modular_fixtures,
                      random_permutation_fixing_unit)
from test_classifier import naive_types

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str, str]] = {}


def criterion(number, title):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper():
            t0 = time.perf_counter()
            try:
                detail = fn()
            except BaseException as exc:
                msg = (str(exc).strip().splitlines() or [type(exc).__name__])[0]
                ACCEPTANCE_RESULTS[number] = (False, title, msg[:160])
                raise
            ACCEPTANCE_RESULTS[number] = (True, title,
                                          f"{detail}; {time.perf_counter() - t0:.2f} s")
        return wrapper
    return deco


def acceptance_lines():
    out = []
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, title, detail = ACCEPTANCE_RESULTS[n]
        out.append(f"criterion {n} {'PASS' if ok else 'FAIL'}: {title} ({detail})")
    return out


def printed_data():
    return ModularData.from_dict(fixtures.load_json("printed36.json"))


def search_classes():
    """Canonical keys of the search output, named by which rule set they realize."""
    res = complete_fusion_rings(SearchSpec.load(fixtures.data_path("spec36.json")))
    names = {canonical_key(fixtures.ring36("i")): "i", canonical_key(fixtures.ring36("ii")): "ii"}
    return res, {k: names.get(k) for k in res.keys}


def closed_subsets(ring):
    """Every sub-basis, by testing all subsets that contain the unit."""
    n = ring.rank
    found = []
    for r in range(n):
        for rest in itertools.combinations(range(1, n), r):
            if is_subbasis(ring, (0, *rest)):
                found.append(SubBasis((0, *rest)))
    return found


def centralizer_mask(md, sub):
    d = md.S[0].real
    idx = list(sub)
    return np.all(np.abs(md.S[:, idx] - np.outer(d, d[idx])) < 1e-8, axis=1)


@criterion(1, "printed rank-10 data verifies")
def test_criterion_1_printed_data():
    t0 = time.perf_counter()
    md = printed_data()
    rep = verify_modular(md.with_tolerance(1e-9))
    elapsed = time.perf_counter() - t0
    assert rep.valid, [c.name for c in rep.failures()]
    worst = max(c.residual for c in rep.checks if c.residual is not None)
    assert worst < 1e-9
    assert abs(rep.global_dim - 36) < 1e-9
    assert rep.t_order == 6
    # oracle: direct summation over the printed dimensions and twists
    q = cmath.exp(1j * cmath.pi / 3)
    theta = [1, 1, 1, -1, q ** 2, q ** 2, 1, 1, q ** -2, q ** -2]
    dims = [1, 1, 1, 3, 2, 2, 2, 2, 2, 2]
    p_plus = sum(complex(t) * d * d for t, d in zip(theta, dims))
    p_minus = sum(complex(t).conjugate() * d * d for t, d in zip(theta, dims))
    assert abs(p_plus + 6) < 1e-12 and abs(p_minus + 6) < 1e-12
    assert abs(rep.gauss.p_plus - p_plus) < 1e-9 and abs(rep.gauss.p_minus - p_minus) < 1e-9
    assert abs(p_plus * p_minus - 36) < 1e-9
    assert elapsed < 1.0
    return f"max residual {worst:.1e}, D=36, ord(T)=6, p+=p-=-6"


@criterion(2, "Verlinde round trip")
def test_criterion_2_verlinde_round_trip():
    md = printed_data()
    ring = verlinde_fusion(md)
    assert ring.rank == 10
    assert validate_fusion_ring(ring).valid
    assert fp_dimensions(ring).integral
    res, names = search_classes()
    key = canonical_key(ring)
    hits = [k for k in res.keys if k == key]
    assert len(hits) == 1
    which = names[hits[0]]
    assert which is not None
    resid = twist_equation_check(md, ring)
    assert resid < 1e-9
    code, report, _ = run(["modular", "printed36"])
    assert code == 0
    assert report.data["verlinde_ring"]["matches_bundled"] == [f"ring36_{which}.json"]
    return f"matches search class ({which}); twist residual {resid:.1e}"


@criterion(3, "search reproduces the two rank-10 rings")
def test_criterion_3_search():
    t0 = time.perf_counter()
    res, names = search_classes()
    elapsed = time.perf_counter() - t0
    assert len(res.raw) == 3
    assert len(res.rings) == 2
    assert sorted(names.values()) == ["i", "ii"]
    spec = SearchSpec.load(fixtures.data_path("spec36.json"))
    X = spec.labels.index("X")
    for k in (spec.labels.index(s) for s in ("X*", "gX*", "g2X*")):
        assert len(complete_fusion_rings(spec.with_fixed({(X, X, k): 2})).raw) == 0
    assert res.stats.associativity_failures >= 1
    assert elapsed < 60
    return (f"3 raw, 2 classes (i, ii); multiplicity-2 branch empty; "
            f"{res.stats.associativity_failures} associativity prunes")


@criterion(4, "graded twist turns rules (i) into rules (ii)")
def test_criterion_4_twist():
    t0 = time.perf_counter()
    ring = fixtures.ring36("i")
    chi = PointedCochain(3, {(1, 1): 2, (1, 2): 2, (2, 1): 2})
    out = graded_twist(ring, chi)
    key = canonical_key(out)
    elapsed = time.perf_counter() - t0
    assert key == canonical_key(fixtures.ring36("ii"))
    X = out.labels.index("X")
    assert out.labels[out.dual[X]] == "gX*"
    assert elapsed < 1.0
    return "key equals rules (ii); dual(X) = gX*"


@criterion(5, "classifier verdicts on the prime grid")
def test_criterion_5_classifier():
    primes = (2, 3, 5, 7, 11, 13)
    t0 = time.perf_counter()
    reports = {(p, q, shape): classify(DimensionProfile(p, q, shape))
               for p, q in itertools.permutations(primes, 2) for shape in ("pq4", "p2q2")}
    elapsed = time.perf_counter() - t0
    for (p, q, shape), rep in reports.items():
        assert all(c.verdict.witness for c in rep.cases)
        if shape == "pq4":
            assert rep.overall == "group-theoretical" and not rep.surviving, (p, q)
            continue
        lo, hi = sorted((p, q))
        want = {}
        if lo == 2:
            want[2] = LABEL_E
        if (lo, hi) == (2, 3):
            want[3] = LABEL_36
        assert {c.pt_dim: c.verdict.label for c in rep.surviving} == want, (p, q)
    w = reports[(2, 5, "p2q2")].case(5).verdict.witness
    assert "(2-1)(2+1) = 3 is unsolvable" in w
    assert elapsed < 1.0
    return f"{len(reports)} profiles, survivors only at p=2"


@criterion(6, "group-theoretical certificates")
def test_criterion_6_certificates():
    # printed data: no certificate, checked against an independent exhaustive scan
    md = printed_data()
    t0 = time.perf_counter()
    res = group_theoretical_certificate(md)
    assert time.perf_counter() - t0 < 5
    assert not res.found
    ring = verlinde_fusion(md)
    subs = closed_subsets(ring)
    assert res.lattice_size == len(subs)
    for L in subs:
        Lp = SubBasis.of(np.nonzero(centralizer_mask(md, L))[0])
        assert not (L.issubset(Lp) and adjoint_subbasis(ring, Lp).issubset(L))

    dd = double_modular_data(bundled_groups()["group_s3.json"])
    t0 = time.perf_counter()
    res = group_theoretical_certificate(dd.modular, dd.ring)
    assert time.perf_counter() - t0 < 5
    assert res.found
    cert = res.certificate
    d = dd.modular.dims
    assert round(float((d[list(cert.L)] ** 2).sum())) == 6
    Lp = SubBasis.of(np.nonzero(centralizer_mask(dd.modular, cert.L))[0])
    assert cert.L.issubset(Lp)
    assert adjoint_subbasis(dd.ring, Lp).issubset(cert.L)
    assert cert.lagrangian

    toric = ModularData.from_dict(fixtures.load_json("toric_code.json"))
    t0 = time.perf_counter()
    assert group_theoretical_certificate(toric).found
    assert time.perf_counter() - t0 < 5
    return f"printed: none in {len(subs)} sub-bases; D(S3): L={list(cert.L)}; toric code: found"


@criterion(7, "Drinfeld doubles of bundled groups")
def test_criterion_7_doubles():
    t0 = time.perf_counter()
    ranks = []
    for name, G in bundled_groups().items():
        dd = double_modular_data(G)
        md = dd.modular.with_tolerance(1e-8)
        rep = verify_modular(md)
        assert rep.valid, (name, [c.name for c in rep.failures()])
        ring = verlinde_fusion(md)
        assert validate_fusion_ring(ring).valid
        assert abs(float((md.dims ** 2).sum()) - G.order ** 2) < 1e-8
        assert group_theoretical_certificate(md, ring).found, name
        ranks.append(md.rank)
        if name == "group_s3.json":
            assert tuple(np.rint(md.dims).astype(int)) == (1, 1, 2, 2, 2, 2, 3, 3)
    elapsed = time.perf_counter() - t0
    assert elapsed < 30
    return f"6 groups, ranks {ranks}"


def _direct_sum_index(orders, x, y):
    idx = 0
    for a, b, n in zip(x, y, orders):
        idx = idx * n + (a + b) % n
    return idx


@criterion(8, "property suites (metric groups, centralizers, types, relabelings)")
def test_criterion_8_properties():
    rng = np.random.default_rng(8)
    notes = []

    # (a) every abelian group of order <= 25; 200 random forms spread over them
    types = [t for n in range(1, 26) for t in abelian_group_types(n)]
    count = 0
    while count < 200:
        for orders in types:
            if count == 200:
                break
            mg = random_metric_group(orders, rng)
            md = metric_group_data(mg)
            assert verify_modular(md).valid, orders
            ring = verlinde_fusion(md)
            els = mg.elements
            expect = np.zeros_like(ring.N)
            for a, b in itertools.product(range(mg.size), repeat=2):
                expect[a, b, _direct_sum_index(orders, els[a], els[b])] = 1
            assert np.array_equal(ring.N, expect), orders
            count += 1
    notes.append(f"(a) {len(types)} groups, {count} forms")

    # (b) centralizer duality on every sub-basis of every modular fixture
    total = 0
    for name, md in modular_fixtures().items():
        ring = verlinde_fusion(md)
        D = md.global_dim
        d = md.dims
        for L in fusion_subcategory_lattice(ring):
            Lp = SubBasis.of(np.nonzero(centralizer_mask(md, L))[0])
            dimL = float((d[list(L)] ** 2).sum())
            dimLp = float((d[list(Lp)] ** 2).sum())
            assert abs(dimL * dimLp - D) < 1e-8 * D, (name, L)
            back = SubBasis.of(np.nonzero(centralizer_mask(md, Lp))[0])
            assert back == L, (name, L)
            assert centralizer(md, L, ring) == Lp
            total += 1
    notes.append(f"(b) {total} sub-bases")

    # (c) type enumeration against nested loops
    for N in range(1, 1001):
        assert {t.parts for t in enumerate_types(N)} == naive_types(N), N
    notes.append("(c) N <= 1000")

    # (d) canonical form under random relabelings
    rings = dict(bundled_rings())
    for name, md in modular_fixtures().items():
        rings["verlinde " + name] = verlinde_fusion(md)
    for name, ring in rings.items():
        cf = canonical_form(ring)
        for _ in range(500):
            moved = ring.relabel(random_permutation_fixing_unit(rng, ring.rank))
            other = canonical_form(moved)
            assert other.key == cf.key, name
            assert np.array_equal(other.ring.N, cf.ring.N), name
    notes.append(f"(d) {len(rings)} rings x 500")
    return "; ".join(notes)


if __name__ == "__main__":
    import pytest
    sys.exit(pytest.main([__file__, "-q", "-s"]))

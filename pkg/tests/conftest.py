import itertools
import sys

import numpy as np
import pytest

from fusionkit import fixtures
from fusionkit.characters import FiniteGroup
from fusionkit.doubles import double_modular_data
from fusionkit.fusion_core import FusionRing, validate_fusion_ring
from fusionkit.modular_data import ModularData, MetricGroup, metric_group_data

GROUP_FILES = ["group_z2.json", "group_z3.json", "group_z2xz2.json", "group_s3.json",
               "group_d4.json", "group_q8.json"]


def bundled_rings() -> dict[str, FusionRing]:
    """Every valid ring among the bundled files plus the small builders."""
    out = {}
    for name in fixtures.bundled_names():
        data = fixtures.load_json(name)
        if isinstance(data, dict) and {"labels", "dual", "N"} <= data.keys():
            ring = FusionRing.from_dict(data)
            if validate_fusion_ring(ring).valid:
                out[name] = ring
    out["trivial"] = fixtures.trivial_ring()
    out["z2"] = fixtures.cyclic_ring(2)
    out["z5"] = fixtures.cyclic_ring(5)
    out["klein"] = fixtures.klein_ring()
    return out


def bundled_groups() -> dict[str, FiniteGroup]:
    return {name: FiniteGroup.from_dict(fixtures.load_json(name)) for name in GROUP_FILES}


def modular_fixtures() -> dict[str, ModularData]:
    out = {
        "printed36": ModularData.from_dict(fixtures.load_json("printed36.json")),
        "toric_code": ModularData.from_dict(fixtures.load_json("toric_code.json")),
        "semion_z4": metric_group_data(MetricGroup.from_coefficients((4,), (1,))),
    }
    for name, G in bundled_groups().items():
        out["D(" + name.removeprefix("group_").removesuffix(".json") + ")"] = \
            double_modular_data(G).modular
    return out


def frobenius_orbit(cell, dual):
    """Cells forced equal to ``cell`` by reciprocity, computed by closure."""
    seen = {cell}
    todo = [cell]
    while todo:
        i, j, k = todo.pop()
        for c in ((dual[i], k, j), (k, dual[j], i), (dual[j], dual[i], dual[k])):
            if c not in seen:
                seen.add(c)
                todo.append(c)
    return frozenset(seen)


def brute_force_completions(labels, dims, dual, fixed=None, free=None):
    """Every integral ring compatible with the data, by plain enumeration.

    Unit rows and columns are filled from the axioms. Cells not fixed are
    grouped into reciprocity orbits and every value tuple up to
    ``floor(d_i d_j / d_k)`` is tried; when ``free`` is given, orbits outside
    it are zero.
    """
    n = len(dims)
    fixed = dict(fixed or {})
    cells = [c for c in itertools.product(range(1, n), repeat=3) if c not in fixed]
    orbits = []
    done = set()
    for c in cells:
        if c in done:
            continue
        orb = frobenius_orbit(c, dual)
        done |= orb
        if any(o in fixed for o in orb):
            continue
        orbits.append(sorted(orb))
    if free is not None:
        free = set(free)
        orbits = [o for o in orbits if free & set(o)]
    base = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        base[0, i, i] = base[i, 0, i] = 1
        base[i, dual[i], 0] = 1
    for c, v in fixed.items():
        base[c] = v
    ranges = [range(min(dims[i] * dims[j] // dims[k] for i, j, k in o) + 1) for o in orbits]
    d = np.asarray(dims)
    found = []
    for vals in itertools.product(*ranges):
        N = base.copy()
        for o, v in zip(orbits, vals):
            for c in o:
                N[c] = v
        if not np.array_equal(np.einsum("ijk,k->ij", N, d), np.outer(d, d)):
            continue
        ring = FusionRing(labels, dual, N)
        if validate_fusion_ring(ring).valid:
            found.append(ring)
    return found


def random_permutation_fixing_unit(rng, n):
    return [0] + [int(x) + 1 for x in rng.permutation(n - 1)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = mod.acceptance_lines() if mod is not None else []
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

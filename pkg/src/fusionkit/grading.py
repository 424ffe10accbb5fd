"""Universal grading, graded components and cocycle twists of the product."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .checks import Check, ValidationReport
from .errors import CapacityError, InputError, VerificationError
from .fusion_core import (FusionRing, adjoint_subbasis, fp_dimensions, invertibles,
                          validate_fusion_ring)


@dataclass(frozen=True)
class Grading:
    """Faithful grading of a fusion ring by a finite abelian group.

    Group elements are the component ids ``0..order-1``; components are
    numbered by their smallest basis index, so the trivial component is 0.
    """

    components: tuple[tuple[int, ...], ...]
    assignment: tuple[int, ...]
    table: tuple[tuple[int, ...], ...]
    matches_invertibles: bool | None = None

    trivial = 0

    @property
    def order(self) -> int:
        return len(self.components)

    def degree(self, i: int) -> int:
        return self.assignment[i]

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inverse(self, x: int) -> int:
        return self.table[x].index(0)

    def to_dict(self):
        out = {"order": self.order, "components": [list(c) for c in self.components],
               "table": [list(r) for r in self.table]}
        if self.matches_invertibles is not None:
            out["matches_invertibles"] = self.matches_invertibles
        return out


def universal_grading(ring: FusionRing, modular_candidate: bool = False) -> Grading:
    """Components are the classes of ``i ~ a*i`` for ``a`` in the adjoint sub-basis.

    With ``modular_candidate`` set, also record whether the grading group has
    as many elements as there are invertibles (true for modular categories).
    """
    n = ring.rank
    ad = list(adjoint_subbasis(ring))
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in ad:
        for i, k in np.argwhere(ring.N[a] > 0):
            ri, rk = find(int(i)), find(int(k))
            if ri != rk:
                parent[max(ri, rk)] = min(ri, rk)

    roots = sorted({find(i) for i in range(n)})
    comp_id = {r: c for c, r in enumerate(roots)}
    assignment = tuple(comp_id[find(i)] for i in range(n))
    m = len(roots)
    components = tuple(tuple(i for i in range(n) if assignment[i] == c) for c in range(m))

    table = [[-1] * m for _ in range(m)]
    for i, j, k in np.argwhere(ring.N > 0):
        x, y, z = assignment[i], assignment[j], assignment[k]
        if table[x][y] == -1:
            table[x][y] = z
        elif table[x][y] != z:
            raise VerificationError(
                f"components {x}*{y} land in both {table[x][y]} and {z}", (int(i), int(j), int(k)))
    if any(-1 in row for row in table):
        raise VerificationError("component product table is incomplete")
    t = np.asarray(table)
    if not np.array_equal(t, t.T):
        raise CapacityError("non-abelian universal grading group is not supported")

    matches = None
    if modular_candidate:
        matches = len(invertibles(ring)[0]) == m
    return Grading(components, assignment, tuple(tuple(r) for r in table), matches)


def component_dimensions(ring: FusionRing, grading: Grading) -> tuple:
    """FP dimension of each component; all equal for a faithful grading."""
    dims = fp_dimensions(ring)
    out = tuple(dims.total(c) for c in grading.components)
    if dims.integral:
        equal = len(set(out)) == 1
    else:
        equal = max(out) - min(out) <= 1e-9 * max(out)
    if not equal:
        raise VerificationError(f"component dimensions differ: {out}", out)
    return out


@dataclass(frozen=True)
class PointedCochain:
    """Map ``G x G -> invertible basis elements``; unset pairs mean the unit."""

    group_order: int
    values: Mapping[tuple[int, int], int] = field(default_factory=dict)
    symmetric: bool = False

    def __call__(self, i: int, j: int) -> int:
        return self.values.get((i, j), 0)

    @property
    def normalized(self) -> bool:
        return all(v == 0 for (i, j), v in self.values.items() if i == 0 or j == 0)

    def inverse(self, group) -> "PointedCochain":
        """Pointwise inverse, using the multiplication of the invertibles."""
        vals = {k: group.inverse(v) for k, v in self.values.items()}
        return PointedCochain(self.group_order, vals, self.symmetric)

    def to_dict(self):
        vals = [[i, j, v] for (i, j), v in sorted(self.values.items()) if v != 0]
        out = {"group_order": self.group_order, "values": vals}
        if self.symmetric:
            out["symmetric"] = True
        return out

    @classmethod
    def from_dict(cls, data) -> "PointedCochain":
        try:
            n = int(data["group_order"])
            raw = data.get("values", [])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"cochain JSON missing field: {exc}") from None
        vals = {}
        for entry in raw:
            if len(entry) != 3:
                raise InputError(f"cochain entry {entry} is not [i, j, invertible]")
            i, j, v = (int(x) for x in entry)
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"cochain entry {entry} outside the group")
            vals[(i, j)] = v
        return cls(n, vals, bool(data.get("symmetric", False)))


def _check_cochain_input(ring, chi, grading):
    inv, group = invertibles(ring)
    for (i, j), v in chi.values.items():
        if v not in inv:
            raise InputError(f"chi({i},{j}) = {v} is not an invertible basis element")
    if chi.group_order != grading.order:
        raise InputError(f"cochain is on a group of order {chi.group_order}, "
                         f"the universal grading group has order {grading.order}")
    return group


def validate_cochain(ring: FusionRing, chi: PointedCochain,
                     grading: Grading | None = None) -> ValidationReport:
    """Normalization and the 2-cocycle identity, checked elementwise.

    The identity ``chi(j,k) chi(i,j+k) = chi(i,j) chi(i+j,k)`` is evaluated in
    the group of invertibles; the witness is the first failing ``(i, j, k)``.
    """
    grading = grading or universal_grading(ring)
    group = _check_cochain_input(ring, chi, grading)
    n = grading.order

    bad = next(((i, j) for i in range(n) for j in range(n)
                if (i == 0 or j == 0) and chi(i, j) != 0), None)
    checks = [Check("normalized", bad is None, bad)]

    bad = None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = group.mul(chi(j, k), chi(i, grading.mul(j, k)))
                rhs = group.mul(chi(i, j), chi(grading.mul(i, j), k))
                if lhs != rhs:
                    bad = (i, j, k)
                    break
            if bad:
                break
        if bad:
            break
    checks.append(Check("cocycle", bad is None, bad))

    if chi.symmetric:
        bad = next(((i, j) for i in range(n) for j in range(n) if chi(i, j) != chi(j, i)), None)
        checks.append(Check("symmetric", bad is None, bad))
    return ValidationReport(tuple(checks))


def graded_twist(ring: FusionRing, chi: PointedCochain) -> FusionRing:
    """Replace ``a * b`` by ``chi(|a|,|b|) * a * b`` at the level of fusion rules.

    The new dual permutation is read off from the unit multiplicities.  Only
    the fusion rules are produced; no associator is constructed.
    """
    grading = universal_grading(ring)
    report = validate_cochain(ring, chi, grading)
    if not report.valid:
        bad = report.failures()[0]
        raise VerificationError(f"cochain fails {bad.name} check", bad.witness)

    n = ring.rank
    N = ring.N
    shift = np.empty((n, n), dtype=np.int64)   # shift[x, a] = index of x*a, x invertible
    for x in set(chi.values.values()) | {0}:
        for a in range(n):
            shift[x, a] = int(np.argmax(N[x, a]))
    deg = grading.assignment
    new = np.empty_like(N)
    for a in range(n):
        for b in range(n):
            new[a, b] = N[shift[chi(deg[a], deg[b]), a], b]

    dual = []
    for a in range(n):
        units = np.nonzero(new[a, :, 0])[0]
        if len(units) != 1 or new[a, units[0], 0] != 1:
            raise VerificationError(f"twisted ring has no unique dual for {ring.labels[a]}", a)
        dual.append(int(units[0]))
    try:
        out = FusionRing(ring.labels, dual, new)
    except InputError as exc:
        raise VerificationError(f"twisted ring is malformed: {exc}") from None
    report = validate_fusion_ring(out)
    if not report.valid:
        bad = report.failures()[0]
        raise VerificationError(f"twisted ring fails {bad.name}: cochain is inconsistent "
                                f"with this grading", bad.witness)
    return out

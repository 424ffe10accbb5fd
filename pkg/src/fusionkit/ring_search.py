"""Backtracking completion of partially specified fusion rings.

Cells ``N[i][j][k]`` are merged into classes that must share a value:
Frobenius reciprocity, the left action of the declared invertibles and the
right action derived from it through duality.  Each class carries an integer
interval.  Dimension equations ``d_i d_j = sum_k N[i][j][k] d_k`` are
propagated as linear interval constraints, and associativity is checked on
interval bounds of both bracketings after every assignment.
"""

from __future__ import annotations

import json
import time
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from .canonical import canonical_key
from .errors import CapacityError, InputError, UnsatisfiableError
from .fusion_core import FusionRing, _read_json, validate_fusion_ring

NODE_CAP = 1_000_000

Cell = tuple[int, int, int]


@dataclass(frozen=True)
class SearchSpec:
    """Constraints for a fusion-ring completion.

    ``action`` lists ``(h, perm)`` with ``perm[a]`` the index of ``h*a``; it
    is closed under composition before use.  ``free=None`` means every cell
    not otherwise determined is free; an explicit list makes all other
    undetermined cells zero.
    """

    labels: tuple[str, ...]
    dims: tuple[int, ...]
    dual: tuple[int, ...]
    degrees: tuple[int, ...] | None = None
    grading_table: tuple[tuple[int, ...], ...] | None = None
    action: tuple[tuple[int, tuple[int, ...]], ...] = ()
    fixed: Mapping[Cell, int] = field(default_factory=dict)
    free: tuple[Cell, ...] | None = None
    bounds: Mapping[Cell, int] = field(default_factory=dict)
    relabel_group: tuple[tuple[int, ...], ...] | None = None
    forced_count: int = 0

    @property
    def rank(self) -> int:
        return len(self.dims)

    def with_fixed(self, extra: Mapping[Cell, int]) -> "SearchSpec":
        merged = dict(self.fixed)
        merged.update(extra)
        return replace(self, fixed=merged)

    # -- JSON ----------------------------------------------------------------

    @classmethod
    def from_dict(cls, data) -> "SearchSpec":
        try:
            dims = tuple(int(d) for d in data["dims"])
            n = len(dims)
            labels = tuple(data.get("labels") or [str(i) for i in range(n)])
            raw_dual = data["dual"]
            if any(d is None or d == "unknown" for d in raw_dual):
                raise InputError("dual entries must all be given")
            dual = tuple(int(d) for d in raw_dual)
            degrees = table = None
            if "grading" in data and data["grading"] is not None:
                g = data["grading"]
                degrees = tuple(int(x) for x in g["degrees"])
                if "table" in g:
                    table = tuple(tuple(int(x) for x in row) for row in g["table"])
                else:
                    m = int(g["order"])
                    table = tuple(tuple((a + b) % m for b in range(m)) for a in range(m))
            action = tuple((int(a["element"]), tuple(int(x) for x in a["perm"]))
                           for a in data.get("pointed_action", []))
            fixed = {}
            for entry in data.get("fixed", []):
                i, j, k, v = (int(x) for x in entry)
                fixed[(i, j, k)] = v
            free = data.get("free", "auto")
            free = None if free == "auto" else tuple(tuple(int(x) for x in c) for c in free)
            bounds = {}
            for entry in data.get("bounds", []):
                i, j, k, v = (int(x) for x in entry)
                bounds[(i, j, k)] = v
            rg = data.get("relabel_group")
            rg = None if rg is None else tuple(tuple(int(x) for x in p) for p in rg)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed search spec: {exc!r}") from None
        return cls(labels, dims, dual, degrees, table, action, fixed, free, bounds, rg)

    def to_dict(self) -> dict:
        out: dict = {"labels": list(self.labels), "dims": list(self.dims), "dual": list(self.dual)}
        if self.degrees is not None:
            out["grading"] = {"degrees": list(self.degrees),
                              "table": [list(r) for r in self.grading_table]}
        if self.action:
            out["pointed_action"] = [{"element": h, "perm": list(p)} for h, p in self.action]
        out["fixed"] = [[*c, v] for c, v in sorted(self.fixed.items())]
        out["free"] = "auto" if self.free is None else [list(c) for c in self.free]
        if self.bounds:
            out["bounds"] = [[*c, v] for c, v in sorted(self.bounds.items())]
        if self.relabel_group is not None:
            out["relabel_group"] = [list(p) for p in self.relabel_group]
        return out

    @classmethod
    def load(cls, path) -> "SearchSpec":
        return cls.from_dict(_read_json(path))


# -- problem construction -------------------------------------------------------


def _close_action(spec: SearchSpec) -> dict[int, tuple[int, ...]]:
    n = spec.rank
    ident = tuple(range(n))
    acts = {0: ident}
    for h, perm in spec.action:
        if sorted(perm) != list(range(n)):
            raise InputError(f"action of {spec.labels[h]} is not a permutation of the basis")
        if perm[0] != h:
            raise InputError(f"action of {spec.labels[h]} must send the unit to {spec.labels[h]}")
        if spec.dims[h] != 1:
            raise InputError(f"acting element {spec.labels[h]} must have dimension 1")
        if h in acts and acts[h] != perm:
            raise InputError(f"two different actions given for {spec.labels[h]}")
        acts[h] = perm
    frontier = list(acts)
    while frontier:
        nxt = []
        for h in frontier:
            for g in list(acts):
                comp = tuple(acts[g][acts[h][a]] for a in range(n))    # g*(h*a)
                e = comp[0]
                if e in acts and acts[e] != comp:
                    raise InputError(f"declared action is not a group action at "
                                     f"{spec.labels[g]}*{spec.labels[h]}")
                if e not in acts:
                    acts[e] = comp
                    nxt.append(e)
        frontier = nxt
    for h, perm in acts.items():
        inv = spec.dual[h]
        if inv not in acts or acts[inv][perm[0]] != 0:
            raise InputError(f"dual of {spec.labels[h]} does not act as its inverse")
    return acts


class _UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class _Problem:
    def __init__(self, spec: SearchSpec):
        self.spec = spec
        n = spec.rank
        self.n = n
        dims, dual = spec.dims, spec.dual
        if n == 0 or len(dual) != n or len(spec.labels) != n:
            raise InputError("labels, dims and dual must have the same length")
        if sorted(dual) != list(range(n)) or any(dual[dual[i]] != i for i in range(n)):
            raise InputError("dual must be an involutive permutation")
        if dims[0] != 1 or dual[0] != 0:
            raise InputError("basis element 0 must be the unit with dimension 1")
        if any(d <= 0 for d in dims):
            raise InputError("dimensions must be positive integers")
        bad = next((i for i in range(n) if dims[dual[i]] != dims[i]), None)
        if bad is not None:
            raise InputError(f"{spec.labels[bad]} and its dual have different dimensions")
        if spec.degrees is not None and len(spec.degrees) != n:
            raise InputError("grading degrees must cover every basis element")

        acts = _close_action(spec)
        self.acts = acts
        right = {h: tuple(dual[acts[dual[h]][dual[a]]] for a in range(n)) for h in acts}

        idx = lambda i, j, k: (i * n + j) * n + k   # noqa: E731
        uf = _UnionFind(n ** 3)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    c = idx(i, j, k)
                    uf.union(c, idx(dual[i], k, j))
                    uf.union(c, idx(k, dual[j], i))
                    uf.union(c, idx(dual[j], dual[i], dual[k]))
                    for h, lam in acts.items():
                        uf.union(c, idx(lam[i], j, lam[k]))
                        rho = right[h]
                        uf.union(c, idx(i, rho[j], rho[k]))
        roots = {}
        cls = np.empty(n ** 3, dtype=np.int64)
        for c in range(n ** 3):
            r = uf.find(c)
            if r not in roots:
                roots[r] = len(roots)
            cls[c] = roots[r]
        self.cell_class = cls.reshape(n, n, n)
        m = len(roots)
        self.nclass = m
        self.members: list[list[Cell]] = [[] for _ in range(m)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    self.members[cls[idx(i, j, k)]].append((i, j, k))

        # pinned values with their source, for clash reports
        pins: dict[int, tuple[int, str]] = {}

        def pin(cell, v, why):
            c = int(self.cell_class[cell])
            if c in pins and pins[c][0] != v:
                raise InputError(f"{why} gives N{list(cell)} = {v} but {pins[c][1]} "
                                 f"forces {pins[c][0]}")
            pins.setdefault(c, (v, why))

        for a in range(n):
            for c in range(n):
                pin((0, a, c), int(a == c), "unit axiom")
                pin((a, 0, c), int(a == c), "unit axiom")
                pin((a, c, 0), int(c == dual[a]), "dual axiom")
        for h, lam in acts.items():
            for a in range(n):
                for c in range(n):
                    pin((h, a, c), int(lam[a] == c), f"action of {spec.labels[h]}")
        if spec.degrees is not None:
            deg, tab = spec.degrees, spec.grading_table
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        if deg[k] != tab[deg[i]][deg[j]]:
                            pin((i, j, k), 0, "grading")
        for cell, v in spec.fixed.items():
            if not all(0 <= x < n for x in cell):
                raise InputError(f"fixed cell {list(cell)} out of range")
            if v < 0:
                raise InputError(f"fixed cell {list(cell)} is negative")
            pin(cell, v, f"fixed entry N{list(cell)}")
        if spec.free is not None:
            free = set(spec.free)
            fixed = set(spec.fixed)
            for c in range(m):
                if c in pins:
                    continue
                if any(cell not in free and cell not in fixed for cell in self.members[c]):
                    pins[c] = (0, "not listed as free")
        self.pins = pins

        hi = [0] * m
        for c in range(m):
            hi[c] = min(dims[i] * dims[j] // dims[k] for i, j, k in self.members[c])
        for cell, b in spec.bounds.items():
            c = int(self.cell_class[cell])
            hi[c] = min(hi[c], b)
        lo = [0] * m
        for c, (v, why) in pins.items():
            if v > hi[c]:
                raise UnsatisfiableError(
                    f"{why} sets {v} above the dimension bound {hi[c]}", self.members[c][0])
            lo[c] = hi[c] = v
        self.lo0, self.hi0 = lo, hi

        self.equations = []
        self.eqs_of: list[list[int]] = [[] for _ in range(m)]
        for i in range(n):
            for j in range(n):
                terms: dict[int, int] = {}
                for k in range(n):
                    c = int(self.cell_class[i, j, k])
                    terms[c] = terms.get(c, 0) + dims[k]
                e = len(self.equations)
                self.equations.append(((i, j), dims[i] * dims[j], tuple(terms.items())))
                for c in terms:
                    self.eqs_of[c].append(e)

    def describe(self, e) -> str:
        (i, j), rhs, _ = self.equations[e]
        lab = self.spec.labels
        return f"d({lab[i]})*d({lab[j]}) = {rhs} = sum_k N[{lab[i]}][{lab[j]}][k] d_k"

    def propagate(self, lo, hi, start=None):
        """Tighten intervals in place; return the index of a violated equation."""
        work = deque(range(len(self.equations)) if start is None else start)
        queued = set(work)
        while work:
            e = work.popleft()
            queued.discard(e)
            _, rhs, terms = self.equations[e]
            smin = sum(c * lo[t] for t, c in terms)
            smax = sum(c * hi[t] for t, c in terms)
            if smin > rhs or smax < rhs:
                return e
            for t, c in terms:
                omin = smin - c * lo[t]
                omax = smax - c * hi[t]
                nh = (rhs - omin) // c
                nl = -((omax - rhs) // c)
                changed = False
                if nh < hi[t]:
                    smax -= c * (hi[t] - nh)
                    hi[t] = nh
                    changed = True
                if nl > lo[t]:
                    smin += c * (nl - lo[t])
                    lo[t] = nl
                    changed = True
                if lo[t] > hi[t]:
                    return e
                if changed:
                    for e2 in self.eqs_of[t]:
                        if e2 not in queued:
                            queued.add(e2)
                            work.append(e2)
        return None

    def tensor(self, vals) -> np.ndarray:
        return np.asarray(vals, dtype=np.int64)[self.cell_class]

    def associativity_ok(self, lo, hi):
        L, H = self.tensor(lo), self.tensor(hi)
        lhs_lo = np.einsum("abx,xcd->abcd", L, L)
        lhs_hi = np.einsum("abx,xcd->abcd", H, H)
        rhs_lo = np.einsum("bcx,axd->abcd", L, L)
        rhs_hi = np.einsum("bcx,axd->abcd", H, H)
        return not ((lhs_lo > rhs_hi).any() or (rhs_lo > lhs_hi).any())


# -- public operations ----------------------------------------------------------


def derive_forced_entries(spec: SearchSpec) -> SearchSpec:
    """Fix every cell determined by the axioms, the action and the dimensions.

    Returns a spec whose ``fixed`` map contains all such cells and whose
    ``forced_count`` is the number of cells added.
    """
    prob = _Problem(spec)
    lo, hi = list(prob.lo0), list(prob.hi0)
    e = prob.propagate(lo, hi)
    if e is not None:
        raise UnsatisfiableError(f"dimension equation violated: {prob.describe(e)}",
                                 prob.equations[e][0])
    extra = {}
    for c in range(prob.nclass):
        if lo[c] == hi[c]:
            for cell in prob.members[c]:
                if cell not in spec.fixed:
                    extra[cell] = lo[c]
    out = spec.with_fixed(extra)
    return replace(out, forced_count=len(extra))


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    dimension_prunes: int = 0
    associativity_failures: int = 0
    rejected_leaves: int = 0
    forced_cells: int = 0
    free_classes: int = 0
    seconds: float = 0.0

    def to_dict(self):
        return dict(self.__dict__)


@dataclass(frozen=True)
class SearchResult:
    raw: tuple[FusionRing, ...]
    rings: tuple[FusionRing, ...]
    keys: tuple[str, ...]
    stats: SearchStats

    def __len__(self):
        return len(self.rings)

    def __iter__(self):
        return iter(self.rings)

    def to_dict(self):
        return {"raw_completions": len(self.raw), "classes": len(self.rings),
                "keys": list(self.keys), "stats": self.stats.to_dict(),
                "rings": [r.to_dict() for r in self.rings]}


def _group_closure(gens, n):
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[i]] for i in range(n))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(seen)


def complete_fusion_rings(spec: SearchSpec, node_cap: int = NODE_CAP) -> SearchResult:
    """All completions of ``spec``; deduplicated up to relabeling.

    Without an explicit ``relabel_group`` two completions are identified when
    they are isomorphic as based rings.  Output is sorted by key.
    """
    t0 = time.perf_counter()
    prob = _Problem(spec)
    stats = SearchStats()
    lo, hi = list(prob.lo0), list(prob.hi0)
    e = prob.propagate(lo, hi)
    if e is not None:
        raise UnsatisfiableError(f"dimension equation violated: {prob.describe(e)}",
                                 prob.equations[e][0])
    stats.forced_cells = sum(len(prob.members[c]) for c in range(prob.nclass)
                             if lo[c] == hi[c] and c not in prob.pins)
    stats.free_classes = sum(1 for c in range(prob.nclass) if lo[c] < hi[c])
    found: list[FusionRing] = []

    def leaf(vals):
        stats.leaves += 1
        ring = FusionRing(spec.labels, spec.dual, prob.tensor(vals))
        if not validate_fusion_ring(ring).valid or not _dims_ok(ring, spec.dims):
            stats.rejected_leaves += 1
            return
        found.append(ring)

    def rec(lo, hi):
        stats.nodes += 1
        if stats.nodes > node_cap:
            stats.seconds = time.perf_counter() - t0
            raise CapacityError(f"search exceeded node cap {node_cap}", stats.to_dict())
        open_ = [c for c in range(prob.nclass) if lo[c] < hi[c]]
        if not open_:
            leaf(lo)
            return
        c = min(open_, key=lambda x: (hi[x] - lo[x], x))
        for v in range(lo[c], hi[c] + 1):
            lo2, hi2 = list(lo), list(hi)
            lo2[c] = hi2[c] = v
            if prob.propagate(lo2, hi2, prob.eqs_of[c]) is not None:
                stats.dimension_prunes += 1
                continue
            if not prob.associativity_ok(lo2, hi2):
                stats.associativity_failures += 1
                continue
            rec(lo2, hi2)

    if prob.associativity_ok(lo, hi):
        rec(lo, hi)
    else:
        stats.associativity_failures += 1

    if spec.relabel_group is not None:
        group = _group_closure(spec.relabel_group, spec.rank)

        def key_of(r):
            return min(r.relabel(p).N.tobytes() for p in group).hex()
    else:
        key_of = canonical_key
    reps: dict[str, FusionRing] = {}
    for r in found:
        reps.setdefault(key_of(r), r)
    keys = tuple(sorted(reps))
    stats.seconds = time.perf_counter() - t0
    return SearchResult(tuple(found), tuple(reps[k] for k in keys), keys, stats)


def _dims_ok(ring: FusionRing, dims) -> bool:
    d = np.asarray(dims, dtype=np.int64)
    return bool(np.array_equal(ring.N @ d, np.outer(d, d)))


def spec_satisfied(ring: FusionRing, spec: SearchSpec) -> bool:
    """Whether ``ring`` meets every hard constraint in ``spec``."""
    N = ring.N
    n = spec.rank
    if ring.rank != n or tuple(ring.dual) != tuple(spec.dual) or not _dims_ok(ring, spec.dims):
        return False
    if any(N[c] != v for c, v in spec.fixed.items()):
        return False
    if spec.degrees is not None:
        deg, tab = spec.degrees, spec.grading_table
        for i, j, k in np.argwhere(N > 0):
            if deg[k] != tab[deg[i]][deg[j]]:
                return False
    for h, lam in _close_action(spec).items():
        for a in range(n):
            if N[h, a, lam[a]] != 1:
                return False
        lam = np.asarray(lam)
        if not np.array_equal(N[lam][:, :, lam], N):
            return False
    if spec.free is not None:
        allowed = set(spec.free) | set(spec.fixed)
        for cell in map(tuple, np.argwhere(N > 0)):
            if 0 in (cell[0], cell[1]) or (cell[2] == 0 and cell[1] == spec.dual[cell[0]]):
                continue
            if cell in allowed:
                continue
            if cell[0] in dict(spec.action) or cell[0] in _close_action(spec):
                continue
            return False
    return True


def dump_spec(spec: SearchSpec, path) -> None:
    with open(path, "w") as fh:
        json.dump(spec.to_dict(), fh, indent=1)

"""Canonical labeling of fusion rings up to based-ring isomorphism.

The key is the lexicographically smallest encoding of ``N`` over all
relabelings that fix the unit and respect an isomorphism-invariant
partition of the basis.  The partition comes from colour refinement
(dimension, self-duality, then iterated neighbourhood signatures), which
cuts the search down to ties the invariants cannot separate; those ties are
resolved by branch and bound on the encoding prefix.  Two leaves with equal
encodings differ by a ring automorphism, which is used to skip subtrees that
are images of ones already searched.
"""

from __future__ import annotations

import hashlib
from functools import lru_cache
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .fusion_core import FusionRing, fp_dimensions

DEFAULT_MAX_RANK = 24


@dataclass(frozen=True)
class CanonicalForm:
    key: str
    perm: tuple[int, ...]   # perm[new] = old
    ring: FusionRing


def _refine(ring: FusionRing, dims) -> list[int]:
    N = ring.N
    n = ring.rank
    dual = ring.dual
    colors = [(int(i != 0), dims[i], int(dual[i] == i), int(N[i, i, i])) for i in range(n)]
    colors = _reindex(colors)
    nclass = len(set(colors))
    while True:
        sigs = []
        for i in range(n):
            nbr = []
            for j in range(n):
                for k in range(n):
                    a, b, c = int(N[i, j, k]), int(N[j, i, k]), int(N[j, k, i])
                    if a or b or c:
                        nbr.append((colors[j], colors[k], a, b, c))
            sigs.append((colors[i], colors[dual[i]], tuple(sorted(nbr))))
        new = _reindex(sigs)
        count = len(set(new))
        colors = new
        if count == nclass:
            return colors
        nclass = count


def _reindex(sigs):
    order = {s: r for r, s in enumerate(sorted(set(sigs)))}
    return [order[s] for s in sigs]


@lru_cache(maxsize=32)
def _shells(n):
    """Index triples grouped by their largest entry, each group sorted."""
    out = []
    for t in range(n):
        trip = [(a, b, c) for a in range(t + 1) for b in range(t + 1) for c in range(t + 1)
                if max(a, b, c) == t]
        arr = np.array(trip, dtype=np.int64).reshape(-1, 3)
        out.append((arr[:, 0], arr[:, 1], arr[:, 2]))
    return out


def canonical_form(ring: FusionRing, max_rank: int = DEFAULT_MAX_RANK) -> CanonicalForm:
    """Canonical relabeling and key; equal keys iff isomorphic based rings."""
    n = ring.rank
    if n > max_rank:
        raise CapacityError(f"rank {n} exceeds canonical-form cap {max_rank}")
    dvec = fp_dimensions(ring)
    dims = [dvec.exact[i] if dvec.integral else round(dvec.values[i], 9) for i in range(n)]
    colors = _refine(ring, dims)
    slot_color = sorted(colors)
    shells = _shells(n)
    N = ring.N
    # big-endian int32 bytes compare lexicographically like the integers
    enc_dtype = np.dtype(">i4")

    best: list[bytes] | None = None
    best_perm: list[int] | None = None
    perm = [0] * n
    used = [False] * n
    autos: list[list[int]] = []   # automorphisms found from tied leaves

    def encode(t):
        a, b, c = shells[t]
        p = np.asarray(perm[: t + 1])
        return N[p[a], p[b], p[c]].astype(enc_dtype).tobytes()

    def orbit(x, t):
        gens = [s for s in autos if all(s[perm[i]] == perm[i] for i in range(t))]
        seen, todo = {x}, [x]
        while todo:
            y = todo.pop()
            for s in gens:
                if s[y] not in seen:
                    seen.add(s[y])
                    todo.append(s[y])
        return seen

    def search(t):
        """Return a level to unwind to when a tied leaf proves a subtree redundant."""
        nonlocal best, best_perm
        if t == n:
            if best is None or prefix < best:
                best = list(prefix)
                best_perm = list(perm)
            elif prefix == best:
                sigma = list(range(n))
                for i in range(n):
                    sigma[best_perm[i]] = perm[i]
                autos.append(sigma)
                return next(i for i in range(n) if perm[i] != best_perm[i])
            return None
        # chunks at one level have equal length, so only the smallest can lead to the minimum
        chunks = {}
        for old in range(n):
            if not used[old] and colors[old] == slot_color[t]:
                perm[t] = old
                chunks[old] = encode(t)
        low = min(chunks.values())
        if best is not None and prefix + [low] > best[: t + 1]:
            return None
        tried: list[int] = []
        for old, chunk in chunks.items():
            if chunk != low:
                continue
            if tried and not orbit(old, t).isdisjoint(tried):
                continue
            perm[t] = old
            used[old] = True
            prefix.append(chunk)
            back = search(t + 1)
            prefix.pop()
            used[old] = False
            tried.append(old)
            if back is not None and back < t:
                return back
        return None

    prefix: list[bytes] = []
    search(0)
    assert best is not None and best_perm is not None
    digest = hashlib.sha256(n.to_bytes(2, "big") + b"".join(best)).hexdigest()
    return CanonicalForm(digest, tuple(best_perm), ring.relabel(best_perm))


def canonical_key(ring: FusionRing, max_rank: int = DEFAULT_MAX_RANK) -> str:
    return canonical_form(ring, max_rank).key


def is_isomorphic(a: FusionRing, b: FusionRing) -> bool:
    return a.rank == b.rank and canonical_key(a) == canonical_key(b)

"""Fusion rings: storage, axiom validation, dimensions and sub-bases.

A fusion ring of rank ``n`` is stored as a dense ``(n, n, n)`` integer array
``N`` with ``N[i, j, k]`` the multiplicity of ``k`` in ``i * j``.  Index 0 is
always the unit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .checks import Check, ValidationReport
from .errors import InputError, NumericalError

FP_TOL = 1e-12
FP_MAX_ITER = 100_000
DIM_TOL = 1e-9


class FusionRing:
    """Based ring with unit 0, a dual permutation and structure constants.

    Instances are immutable: the structure tensor is stored read-only.
    Construction only checks the *shape* of the data; use
    :func:`validate_fusion_ring` for the ring axioms.
    """

    __slots__ = ("_labels", "_dual", "_N")

    def __init__(self, labels: Sequence[str], dual: Sequence[int], N):
        labels = tuple(str(x) for x in labels)
        n = len(labels)
        if n == 0:
            raise InputError("fusion ring needs at least one label")
        N = np.asarray(N)
        if N.shape != (n, n, n):
            raise InputError(f"structure tensor has shape {N.shape}, expected {(n, n, n)}")
        if N.size and not np.issubdtype(N.dtype, np.integer):
            if not np.all(np.equal(np.mod(N, 1), 0)):
                raise InputError("structure constants must be integers")
        N = N.astype(np.int64)
        if (N < 0).any():
            bad = tuple(int(x) for x in np.argwhere(N < 0)[0])
            raise InputError(f"negative structure constant at {bad}")
        dual = tuple(int(x) for x in dual)
        if sorted(dual) != list(range(n)):
            raise InputError(f"dual {list(dual)} is not a permutation of 0..{n - 1}")
        N.setflags(write=False)
        self._labels = labels
        self._dual = dual
        self._N = N

    labels = property(lambda self: self._labels)
    dual = property(lambda self: self._dual)
    N = property(lambda self: self._N)

    @property
    def rank(self) -> int:
        return len(self._labels)

    def index(self, label: str) -> int:
        return self._labels.index(label)

    def fusion_matrix(self, i: int) -> np.ndarray:
        """Matrix of left multiplication by ``i``: rows ``j``, columns ``k``."""
        return self._N[i]

    def product(self, i: int, j: int) -> dict[int, int]:
        """Decomposition of ``i * j`` as ``{k: multiplicity}``."""
        row = self._N[i, j]
        return {int(k): int(row[k]) for k in np.nonzero(row)[0]}

    def relabel(self, perm: Sequence[int]) -> "FusionRing":
        """Return the ring whose basis element ``t`` is old element ``perm[t]``."""
        perm = np.asarray(perm, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.rank)):
            raise InputError("relabeling is not a permutation")
        inv = np.empty_like(perm)
        inv[perm] = np.arange(self.rank)
        N = self._N[np.ix_(perm, perm, perm)]
        dual = inv[np.asarray(self._dual)[perm]]
        labels = [self._labels[p] for p in perm]
        return FusionRing(labels, dual, N)

    def __eq__(self, other):
        if not isinstance(other, FusionRing):
            return NotImplemented
        return (self._labels == other._labels and self._dual == other._dual
                and np.array_equal(self._N, other._N))

    def __hash__(self):
        return hash((self._labels, self._dual, self._N.tobytes()))

    def __repr__(self):
        return f"FusionRing(rank={self.rank}, labels={list(self._labels)})"

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        triples = [[int(i), int(j), int(k), int(self._N[i, j, k])]
                   for i, j, k in np.argwhere(self._N > 0)]
        return {"labels": list(self._labels), "dual": list(self._dual), "N": triples}

    @classmethod
    def from_dict(cls, data: dict) -> "FusionRing":
        try:
            labels = data["labels"]
            dual = data["dual"]
            raw = data["N"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"fusion ring JSON missing field: {exc}") from None
        n = len(labels)
        if len(dual) != n:
            raise InputError(f"dual has length {len(dual)}, expected {n}")
        if raw and isinstance(raw[0], list) and raw[0] and isinstance(raw[0][0], list):
            N = np.array(raw)
        else:
            N = np.zeros((n, n, n), dtype=np.int64)
            for entry in raw:
                if len(entry) != 4:
                    raise InputError(f"N entry {entry} is not [i, j, k, value]")
                i, j, k, v = entry
                if not all(0 <= x < n for x in (i, j, k)):
                    raise InputError(f"N entry {entry} has an index out of range")
                N[i, j, k] = v
        return cls(labels, dual, N)

    @classmethod
    def load(cls, path) -> "FusionRing":
        return cls.from_dict(_read_json(path))

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n")


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: "
                         f"{exc.msg}") from None
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def group_ring(table, labels=None) -> FusionRing:
    """Pointed fusion ring of a finite group given by its multiplication table.

    ``table[a][b]`` is the index of ``a * b``; index 0 must be the identity.
    """
    table = np.asarray(table, dtype=np.int64)
    n = table.shape[0]
    if table.shape != (n, n) or not np.array_equal(table[0], np.arange(n)):
        raise InputError("group table must be square with identity at index 0")
    N = np.zeros((n, n, n), dtype=np.int64)
    a, b = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    N[a, b, table] = 1
    dual = [int(np.nonzero(table[a] == 0)[0][0]) for a in range(n)]
    return FusionRing(labels or [f"g{a}" for a in range(n)], dual, N)


# -- validation ------------------------------------------------------------


def _first(mask) -> tuple | None:
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    return tuple(int(x) for x in hits[0])


def validate_fusion_ring(ring: FusionRing) -> ValidationReport:
    """Check unit, dual, associativity and Frobenius reciprocity axioms.

    Each failing check carries the first violating index tuple in
    lexicographic order.
    """
    N, n = ring.N, ring.rank
    dual = np.asarray(ring.dual)
    eye = np.eye(n, dtype=np.int64)

    bad = _first(N[0] != eye)
    if bad is None:
        w = _first(N[:, 0, :] != eye)
        bad = None if w is None else (w[0], 0, w[1])
    else:
        bad = (0,) + bad
    unit = Check("unit", bad is None, bad)

    expected0 = np.zeros((n, n), dtype=np.int64)
    expected0[np.arange(n), dual] = 1
    bad = _first(N[:, :, 0] != expected0)
    if bad is not None:
        dual_check = Check("dual", False, (bad[0], bad[1], 0))
    elif dual[0] != 0 or not np.array_equal(dual[dual], np.arange(n)):
        i = int(np.nonzero(dual[dual] != np.arange(n))[0][0]) if dual[0] == 0 else 0
        dual_check = Check("dual", False, (i,), detail="dual is not an involution fixing 0")
    else:
        dual_check = Check("dual", True)

    lhs = np.einsum("ijm,mkl->ijkl", N, N)
    rhs = np.einsum("jkm,iml->ijkl", N, N)
    bad = _first(lhs != rhs)
    assoc = Check("associativity", bad is None, bad)

    frob1 = N[dual].transpose(0, 2, 1)          # N[dual i, k, j]
    frob2 = N[:, dual, :].transpose(2, 1, 0)    # N[k, dual j, i]
    bad = _first((N != frob1) | (N != frob2))
    frob = Check("frobenius_reciprocity", bad is None, bad)

    return ValidationReport((unit, dual_check, assoc, frob))


# -- dimensions ------------------------------------------------------------


@dataclass(frozen=True)
class DimensionVector:
    """Frobenius-Perron dimensions of the basis plus the global dimension."""

    values: tuple[float, ...]
    exact: tuple[int, ...] | None
    global_dim: float

    @property
    def integral(self) -> bool:
        return self.exact is not None

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.exact[i] if self.exact is not None else self.values[i]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.exact if self.exact is not None else self.values, dtype=float)

    def total(self, indices: Iterable[int]):
        """FP dimension of the span of ``indices`` (sum of squares)."""
        return sum(self[i] ** 2 for i in indices)

    def to_dict(self):
        return {"dims": list(self.exact or self.values), "global": self.global_dim,
                "integral": self.integral}


def fp_dimensions(ring: FusionRing, tol: float = FP_TOL,
                  max_iter: int = FP_MAX_ITER) -> DimensionVector:
    """Perron-Frobenius dimensions by power iteration.

    Iterates on ``M = sum_i N_i``, whose Perron vector is the common positive
    eigenvector of every fusion matrix (``M`` is entrywise positive for a valid
    ring).  When every dimension rounds to an integer the rounded vector is
    checked exactly against ``d_i d_j = sum_k N_ij^k d_k``.
    """
    N = ring.N.astype(float)
    n = ring.rank
    M = N.sum(axis=0)
    v = np.ones(n) / np.sqrt(n)
    for it in range(1, max_iter + 1):
        w = M @ v
        norm = np.linalg.norm(w)
        if norm == 0:
            raise NumericalError("zero iterate in power iteration", {"iteration": it})
        w /= norm
        if np.abs(w - v).max() < tol:
            v = w
            break
        v = w
    else:
        raise NumericalError("power iteration did not converge",
                             {"iterations": max_iter, "last_step": float(np.abs(w - v).max())})
    d = v / v[0]
    # every N_i must share the eigenvector: N_i d = d_i d
    resid = np.abs(np.einsum("ijk,k->ij", N, d) - np.outer(d, d)).max() / max(d.max() ** 2, 1)
    if resid > 1e-9:
        raise NumericalError("dimension vector is not a common eigenvector",
                             {"relative_residual": float(resid)})

    rounded = np.rint(d)
    exact = None
    if np.all(np.abs(d - rounded) < 1e-6) and np.all(rounded >= 1):
        ints = rounded.astype(np.int64)
        if np.array_equal(np.einsum("ijk,k->ij", ring.N, ints), np.outer(ints, ints)):
            exact = tuple(int(x) for x in ints)
    if exact is not None:
        return DimensionVector(tuple(float(x) for x in exact), exact, int(sum(x * x for x in exact)))
    return DimensionVector(tuple(float(x) for x in d), None, float((d ** 2).sum()))


# -- sub-bases -------------------------------------------------------------


@dataclass(frozen=True, order=True)
class SubBasis:
    """Sorted index set spanning a fusion subring (contains 0, closed)."""

    indices: tuple[int, ...]

    @classmethod
    def of(cls, indices: Iterable[int]) -> "SubBasis":
        return cls(tuple(sorted({int(i) for i in indices})))

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, i):
        return i in self.indices

    def issubset(self, other) -> bool:
        return set(self.indices) <= set(other)

    def dim(self, dims: DimensionVector):
        return dims.total(self.indices)

    def labels(self, ring: FusionRing) -> list[str]:
        return [ring.labels[i] for i in self.indices]

    def __repr__(self):
        return f"SubBasis({list(self.indices)})"


def is_subbasis(ring: FusionRing, indices: Iterable[int]) -> bool:
    """Exact closure test: contains 0, dual-closed, fusion-closed."""
    idx = sorted(set(indices))
    if 0 not in idx:
        return False
    if any(ring.dual[i] not in idx for i in idx):
        return False
    mask = np.zeros(ring.rank, dtype=bool)
    mask[idx] = True
    produced = (ring.N[np.ix_(mask, mask)] > 0).any(axis=(0, 1))
    return not (produced & ~mask).any()


def _close(ring: FusionRing, mask: np.ndarray) -> np.ndarray:
    dual = np.asarray(ring.dual)
    mask = mask.copy()
    mask[0] = True
    while True:
        new = mask | mask[dual]
        new |= (ring.N[np.ix_(new, new)] > 0).any(axis=(0, 1))
        if np.array_equal(new, mask):
            return mask
        mask = new


def generated_subbasis(ring: FusionRing, seeds: Iterable[int] = ()) -> SubBasis:
    """Smallest sub-basis containing ``seeds``."""
    mask = np.zeros(ring.rank, dtype=bool)
    for s in seeds:
        if not 0 <= s < ring.rank:
            raise InputError(f"seed {s} out of range")
        mask[s] = True
    return SubBasis.of(np.nonzero(_close(ring, mask))[0])


def adjoint_subbasis(ring: FusionRing, within: Iterable[int] | None = None) -> SubBasis:
    """Sub-basis generated by the constituents of ``X * dual(X)``.

    With ``within`` given, ``X`` ranges only over that set, which gives the
    adjoint subring of a fusion subring.
    """
    members = range(ring.rank) if within is None else within
    mask = np.zeros(ring.rank, dtype=bool)
    for i in members:
        mask |= ring.N[i, ring.dual[i]] > 0
    return SubBasis.of(np.nonzero(_close(ring, mask))[0])


def is_nilpotent(ring: FusionRing) -> tuple[bool, list[SubBasis]]:
    """Follow the adjoint chain until it stabilizes.

    Returns the flag and the strictly decreasing chain, starting with the
    full basis.
    """
    chain = [SubBasis(tuple(range(ring.rank)))]
    while True:
        nxt = adjoint_subbasis(ring, chain[-1])
        if nxt == chain[-1]:
            break
        chain.append(nxt)
    return chain[-1].indices == (0,), chain


@dataclass(frozen=True)
class InvertibleGroup:
    """Group of invertible basis elements, tabulated on ring indices."""

    elements: tuple[int, ...]
    table: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.elements)

    def mul(self, x: int, y: int) -> int:
        return self.table[self.elements.index(x)][self.elements.index(y)]

    def inverse(self, x: int) -> int:
        row = self.table[self.elements.index(x)]
        return self.elements[row.index(0)]

    def power(self, x: int, k: int) -> int:
        out = 0
        for _ in range(k % self.order(x)):
            out = self.mul(out, x)
        return out

    def order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mul(y, x)
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = np.asarray(self.table)
        return bool(np.array_equal(t, t.T))


def invertibles(ring: FusionRing) -> tuple[SubBasis, InvertibleGroup]:
    """Basis elements whose fusion matrix is a permutation matrix."""
    N = ring.N
    elems = [i for i in range(ring.rank)
             if np.all(N[i].sum(axis=1) == 1) and np.all(N[i].sum(axis=0) == 1)]
    table = tuple(tuple(int(np.argmax(N[a, b])) for b in elems) for a in elems)
    return SubBasis(tuple(elems)), InvertibleGroup(tuple(elems), table)

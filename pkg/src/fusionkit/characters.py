"""Finite groups from tables and their character tables (Burnside-Dixon)."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from .errors import CapacityError, InputError, NumericalError

CHARACTER_CAP = 64


class FiniteGroup:
    """Finite group given by a multiplication table over ``0..n-1``."""

    def __init__(self, table, labels=None):
        t = np.asarray(table, dtype=np.int64)
        n = t.shape[0] if t.ndim == 2 else 0
        if n == 0 or t.shape != (n, n):
            raise InputError("group table must be a nonempty square array")
        rng = np.arange(n)
        if t.min() < 0 or t.max() >= n:
            raise InputError("group table has entries out of range")
        for row in (*t, *t.T):
            if not np.array_equal(np.sort(row), rng):
                raise InputError("group table is not a Latin square")
        ids = [e for e in range(n) if np.array_equal(t[e], rng)]
        if not ids:
            raise InputError("group table has no identity")
        # t[t][a, b, c] = (ab)c
        if not np.array_equal(t[t], _assoc_rhs(t)):
            raise InputError("group table is not associative")
        self.table = t
        self.table.setflags(write=False)
        self.identity = ids[0]
        self.inverse = tuple(int(np.nonzero(t[a] == self.identity)[0][0]) for a in range(n))
        self.labels = tuple(labels) if labels else tuple(str(a) for a in range(n))

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return int(self.table[self.table[g, x], self.inverse[g]])

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = int(self.table[x, a])
            k += 1
        return k

    def exponent(self) -> int:
        e = 1
        for a in range(self.order):
            o = self.element_order(a)
            e = e * o // gcd(e, o)
        return e

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def subgroup(self, elements) -> tuple["FiniteGroup", list[int]]:
        """Subgroup on ``elements`` (sorted); returns it with the index map."""
        els = sorted(set(int(x) for x in elements))
        pos = {x: i for i, x in enumerate(els)}
        try:
            tab = [[pos[int(self.table[a, b])] for b in els] for a in els]
        except KeyError:
            raise InputError("elements are not closed under multiplication") from None
        return FiniteGroup(tab, [self.labels[x] for x in els]), els

    @classmethod
    def from_permutations(cls, generators) -> "FiniteGroup":
        """Close a set of permutations; elements sorted lexicographically."""
        gens = [tuple(int(x) for x in g) for g in generators]
        if not gens:
            return cls([[0]], ["()"])
        m = len(gens[0])
        if any(sorted(g) != list(range(m)) for g in gens):
            raise InputError("generators must be permutations of the same points")
        ident = tuple(range(m))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    q = tuple(g[p[i]] for i in range(m))
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        els = sorted(seen)
        pos = {p: i for i, p in enumerate(els)}
        # (a*b)(i) = a(b(i))
        tab = [[pos[tuple(a[b[i]] for i in range(m))] for b in els] for a in els]
        return cls(tab, ["".join(map(str, p)) for p in els])

    @classmethod
    def from_dict(cls, data) -> "FiniteGroup":
        try:
            if "permutation_generators" in data:
                return cls.from_permutations(data["permutation_generators"])
            table = data["table"]
            if "order" in data and int(data["order"]) != len(table):
                raise InputError(f"order {data['order']} does not match table size {len(table)}")
            return cls(table, data.get("labels"))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed group JSON: {exc!r}") from None


def _assoc_rhs(t):
    # rhs[a, b, c] = a(bc)
    return t[np.arange(t.shape[0])[:, None, None], t[None, :, :]]


@dataclass(frozen=True)
class GroupAnalysis:
    classes: tuple[tuple[int, ...], ...]      # sorted by representative
    representatives: tuple[int, ...]
    centralizers: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]


def group_analysis(G: FiniteGroup) -> GroupAnalysis:
    """Conjugacy classes (representative = smallest index) and centralizers."""
    n = G.order
    class_of = [-1] * n
    classes = []
    for a in range(n):
        if class_of[a] != -1:
            continue
        cl = sorted({G.conj(g, a) for g in range(n)})
        for x in cl:
            class_of[x] = len(classes)
        classes.append(tuple(cl))
    reps = tuple(c[0] for c in classes)
    cents = tuple(tuple(g for g in range(n) if G.mul(g, r) == G.mul(r, g)) for r in reps)
    return GroupAnalysis(tuple(classes), reps, cents, tuple(class_of))


# -- linear algebra over F_p --------------------------------------------------


def _nullspace_mod(A, p):
    """Basis (as rows) of the right null space of ``A`` over ``F_p``."""
    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + nz[0]
        A[[r, k]] = A[[k, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        others = np.nonzero(A[:, c])[0]
        others = others[others != r]
        if len(others):
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-A[i, f]) % p
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), cols)


def _is_prime(m):
    if m < 2:
        return False
    return all(m % d for d in range(2, isqrt(m) + 1))


def _primitive_root(p):
    phi = p - 1
    factors = {d for d in range(2, phi + 1) if phi % d == 0 and _is_prime(d)}
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in factors):
            return g
    raise NumericalError(f"no primitive root mod {p}")


@dataclass(frozen=True)
class CharacterTable:
    classes: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]
    values: np.ndarray      # values[chi, class]
    class_of: tuple[int, ...]

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(int(round(v)) for v in self.values[:, 0].real)

    def character(self, m: int, g: int) -> complex:
        return complex(self.values[m, self.class_of[g]])


def character_table(H: FiniteGroup, cap: int = CHARACTER_CAP) -> CharacterTable:
    """Irreducible characters by Dixon's modular version of Burnside's method.

    Common eigenvectors of the class-multiplication matrices are found over
    ``F_p`` for a prime ``p = 1 mod exponent`` exceeding ``2 sqrt|H|``, turned
    into character values mod ``p`` and lifted to sums of roots of unity.
    Rows are sorted by degree, then by values; the trivial character is first.
    """
    n = H.order
    if n > cap:
        raise CapacityError(f"group order {n} exceeds character-table cap {cap}")
    ga = group_analysis(H)
    classes, reps, cls = ga.classes, ga.representatives, ga.class_of
    # identity class first: group_analysis sorts by representative, identity may not be 0
    r = len(classes)
    e = H.exponent()
    p = e + 1
    while not (_is_prime(p) and p > 2 * np.sqrt(n)):
        p += e
    sizes = [len(c) for c in classes]
    inv_cls = [cls[H.inverse[reps[i]]] for i in range(r)]
    id_cls = cls[H.identity]

    # c[j][i][k] = #{x in C_i : x^-1 z_k in C_j}
    A = np.zeros((r, r, r), dtype=np.int64)
    for k in range(r):
        z = reps[k]
        for x in range(n):
            y = H.mul(H.inverse[x], z)
            A[cls[y], cls[x], k] += 1

    rng = np.random.default_rng(0)
    spaces = [np.eye(r, dtype=np.int64)]
    mats = [sum(int(c) * A[j] for j, c in enumerate(rng.integers(1, p, r))) % p] + list(A % p)
    for M in mats:
        if all(len(V) == 1 for V in spaces):
            break
        new = []
        for V in spaces:
            if len(V) == 1:
                new.append(V)
                continue
            MB = (M @ V.T) % p               # columns: images of basis vectors
            found = 0
            for lam in range(p):
                coeffs = _nullspace_mod((MB - lam * V.T) % p, p)
                if len(coeffs):
                    new.append((coeffs @ V) % p)
                    found += len(coeffs)
                if found == len(V):
                    break
            if found != len(V):
                raise NumericalError("class matrices are not diagonalizable over F_p",
                                     {"prime": p})
        spaces = new
    if len(spaces) != r or any(len(V) != 1 for V in spaces):
        raise NumericalError("failed to split the class algebra", {"prime": p})

    z = pow(_primitive_root(p), (p - 1) // e, p)
    zeta = np.exp(2j * np.pi / e)
    inv_e = pow(e, -1, p)
    powers_cls = [[cls[_pow(H, reps[i], l)] for l in range(e)] for i in range(r)]
    rows = []
    for V in spaces:
        v = V[0]
        omega = v * pow(int(v[id_cls]), -1, p) % p
        acc = sum(int(omega[i]) * int(omega[inv_cls[i]]) * pow(sizes[i], -1, p) for i in range(r)) % p
        d2 = n * pow(acc, -1, p) % p
        deg = next((d for d in range(1, isqrt(n) + 1) if d * d % p == d2), None)
        if deg is None:
            raise NumericalError("no admissible degree for a character", {"prime": p})
        theta = [int(omega[i]) * deg * pow(sizes[i], -1, p) % p for i in range(r)]
        row = np.zeros(r, dtype=complex)
        for i in range(r):
            mult = []
            for k in range(e):
                s = sum(theta[powers_cls[i][l]] * pow(z, (-k * l) % e, p) for l in range(e))
                mult.append(s * inv_e % p)
            if sum(mult) != deg or max(mult) > deg:
                raise NumericalError("lifting to complex values failed",
                                     {"prime": p, "class": i, "multiplicities": mult})
            row[i] = sum(m * zeta ** k for k, m in enumerate(mult))
        rows.append(row)

    vals = np.array(rows)
    vals[np.abs(vals.imag) < 1e-12] = vals[np.abs(vals.imag) < 1e-12].real
    order = sorted(range(r), key=lambda m: (round(vals[m, id_cls].real),
                                            tuple((-round(x.real, 9), -round(x.imag, 9))
                                                  for x in vals[m])))
    vals = vals[order]
    # orthogonality: sum_g chi(g) conj(psi(g)) = |H| delta
    gram = (vals * np.asarray(sizes)) @ vals.conj().T
    err = float(np.abs(gram - n * np.eye(r)).max())
    if err > 1e-9 * n:
        raise NumericalError("character table fails orthogonality", {"residual": err})
    return CharacterTable(classes, reps, vals, cls)


def _pow(H, a, k):
    x = H.identity
    for _ in range(k):
        x = H.mul(x, a)
    return x

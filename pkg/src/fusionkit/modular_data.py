"""Candidate modular data (S, T): axioms, Verlinde rings, centralizers, certificates.

``S`` is the unnormalized S-matrix with ``S[0, 0] == 1`` so that its first row
is the dimension vector; ``s = S / sqrt(D)`` with ``D = sum_i S[0, i]**2`` is
the unitary normalization.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from math import gcd
from pathlib import Path

import numpy as np

from .checks import Check, ValidationReport
from .errors import CapacityError, InputError, VerificationError
from .fusion_core import (FusionRing, SubBasis, _read_json, adjoint_subbasis,
                          generated_subbasis, is_subbasis)

DEFAULT_TOL = 1e-9
VERLINDE_TOL = 1e-6
T_ORDER_CAP = 10_000
LATTICE_MAX_RANK = 32


@dataclass(frozen=True, eq=False)
class ModularData:
    S: np.ndarray
    T: np.ndarray
    tolerance: float = DEFAULT_TOL
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        S = np.array(self.S, dtype=complex)
        T = np.array(self.T, dtype=complex).reshape(-1)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise InputError(f"S must be square, got shape {S.shape}")
        if T.shape[0] != S.shape[0]:
            raise InputError(f"T has {T.shape[0]} entries, S has size {S.shape[0]}")
        if not self.tolerance > 0:
            raise InputError("tolerance must be positive")
        if self.labels is not None and len(self.labels) != S.shape[0]:
            raise InputError("label count does not match S")
        S.setflags(write=False)
        T.setflags(write=False)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "T", T)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def rank(self) -> int:
        return self.S.shape[0]

    @property
    def dims(self) -> np.ndarray:
        return self.S[0].real

    @property
    def global_dim(self) -> float:
        return float((self.S[0] ** 2).real.sum())

    @property
    def s(self) -> np.ndarray:
        return self.S / np.sqrt(self.global_dim)

    def with_tolerance(self, tol: float) -> "ModularData":
        return ModularData(self.S, self.T, tol, self.labels)

    def label_list(self) -> list[str]:
        return list(self.labels) if self.labels else [str(i) for i in range(self.rank)]

    def to_dict(self) -> dict:
        def c(z):
            return {"re": float(z.real), "im": float(z.imag)}
        out = {"S": [[c(z) for z in row] for row in self.S], "T": [c(z) for z in self.T],
               "tolerance": self.tolerance}
        if self.labels:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ModularData":
        try:
            tol = float(data.get("tolerance", DEFAULT_TOL))
            labels = data.get("labels")
            if "root_order" in data:
                n = int(data["root_order"])
                S = [[_cyclotomic(e, n) for e in row] for row in data["S"]]
                T = [_cyclotomic(e, n) for e in data["T"]]
            else:
                S = [[_complex(z) for z in row] for row in data["S"]]
                T = [_complex(z) for z in data["T"]]
            S, T = np.array(S, dtype=complex), np.array(T, dtype=complex)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed modular-data JSON: {exc!r}") from None
        return cls(S, T, tol, labels)

    @classmethod
    def load(cls, path) -> "ModularData":
        return cls.from_dict(_read_json(path))

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n")


def _complex(z) -> complex:
    if isinstance(z, dict):
        return complex(float(z.get("re", 0.0)), float(z.get("im", 0.0)))
    if isinstance(z, (int, float)):
        return complex(z)
    raise ValueError(f"cannot read {z!r} as a complex number")


def _cyclotomic(terms, n: int) -> complex:
    """Evaluate ``sum coeff * exp(2 pi i exponent / n)`` from ``[[coeff, exponent], ...]``."""
    total = 0j
    for coeff, exponent in terms:
        c = Fraction(coeff) if isinstance(coeff, str) else coeff
        total += float(c) * np.exp(2j * np.pi * (int(exponent) % n) / n)
    return total


# -- verification ------------------------------------------------------------


@dataclass(frozen=True)
class GaussSums:
    p_plus: complex
    p_minus: complex
    global_dim: float
    tolerance: float = DEFAULT_TOL

    @property
    def product(self) -> complex:
        return self.p_plus * self.p_minus

    @property
    def residual(self) -> float:
        return float(abs(self.product - self.global_dim))

    @property
    def product_ok(self) -> bool:
        return self.residual < self.tolerance * max(1.0, self.global_dim)

    def to_dict(self):
        return {"p_plus": {"re": self.p_plus.real, "im": self.p_plus.imag},
                "p_minus": {"re": self.p_minus.real, "im": self.p_minus.imag},
                "product_residual": self.residual}


def gauss_sums(md: ModularData) -> GaussSums:
    """``p_pm = sum_k theta_k^{pm 1} d_k^2`` with dimensions from the first row."""
    d2 = md.dims ** 2
    p_plus = complex((md.T * d2).sum())
    p_minus = complex((md.T.conj() * d2).sum())
    return GaussSums(p_plus, p_minus, md.global_dim, md.tolerance)


def t_order(T, tol=DEFAULT_TOL, cap=T_ORDER_CAP) -> int | None:
    """Smallest ``m <= cap`` with ``T**m == 1`` entrywise, else ``None``."""
    T = np.asarray(T, dtype=complex)
    for m in range(1, cap + 1):
        if np.abs(T ** m - 1).max() < tol:
            return m
    return None


@dataclass(frozen=True)
class ModularReport(ValidationReport):
    global_dim: float = 0.0
    t_order: int | None = None
    gauss: GaussSums | None = None

    def to_dict(self):
        out = super().to_dict()
        out["global_dim"] = self.global_dim
        out["t_order"] = self.t_order
        if self.gauss is not None:
            out["gauss_sums"] = self.gauss.to_dict()
        return out


def _verlinde_tensor(md: ModularData) -> np.ndarray:
    s = md.s
    return np.einsum("ir,jr,kr,r->ijk", s, s, s.conj(), 1.0 / s[0])


def verify_modular(md: ModularData, t_order_cap: int = T_ORDER_CAP,
                   verlinde_tol: float = VERLINDE_TOL) -> ModularReport:
    """Run every modular-data check and collect residuals.

    Checks: symmetry, dimension row, unit-modulus twists, unitarity of the
    normalized ``s``, Verlinde integrality, finite order of ``T``, the Gauss
    sum product and ``(s t)^3 = (p_+ / sqrt(D)) s^2``.
    """
    tol = md.tolerance
    S, T = md.S, md.T
    n = md.rank
    checks = []

    r = float(np.abs(S - S.T).max())
    checks.append(Check("symmetry", r < tol, residual=r))

    row = S[0]
    r = float(max(abs(row[0] - 1), np.abs(row.imag).max()))
    ok = r < tol and bool((row.real > tol).all())
    checks.append(Check("dimension_row", ok, residual=r,
                        witness=None if ok else int(np.argmin(row.real))))

    r = float(max(np.abs(np.abs(T) - 1).max(), abs(T[0] - 1)))
    checks.append(Check("twists_unit_modulus", r < tol, residual=r))

    D = md.global_dim
    s = md.s
    r = float(np.abs(s @ s.conj().T - np.eye(n)).max())
    unitary = r < tol
    checks.append(Check("unitarity", unitary, residual=r))

    if unitary and ok:
        Nc = _verlinde_tensor(md)
        rounded = np.rint(Nc.real)
        resid = np.abs(Nc - rounded)
        worst = tuple(int(x) for x in np.unravel_index(np.argmax(resid), resid.shape))
        r = float(resid.max())
        neg = (rounded < 0).any()
        checks.append(Check("verlinde_integrality", r < verlinde_tol and not neg,
                            witness=None if r < verlinde_tol and not neg else worst, residual=r))
    else:
        checks.append(Check("verlinde_integrality", False, detail="skipped: s is not unitary"))

    m = t_order(T, tol, t_order_cap)
    checks.append(Check("t_finite_order", m is not None,
                        detail=f"order {m}" if m else f"no order <= {t_order_cap}"))

    gs = gauss_sums(md)
    checks.append(Check("gauss_product", gs.product_ok, residual=gs.residual))

    t = np.diag(T)
    st = s @ t
    lhs = st @ st @ st
    rhs = gs.p_plus / np.sqrt(D) * (s @ s)
    r = float(np.abs(lhs - rhs).max())
    checks.append(Check("modular_relation", r < tol, residual=r))

    return ModularReport(tuple(checks), D, m, gs)


def verlinde_fusion(md: ModularData, tol: float = VERLINDE_TOL) -> FusionRing:
    """Fusion ring from ``N_ij^k = sum_r s_ir s_jr conj(s_kr) / s_0r``."""
    s = md.s
    r = float(np.abs(s @ s.conj().T - np.eye(md.rank)).max())
    if r >= md.tolerance:
        raise VerificationError(f"s is not unitary (residual {r:.3g})")
    Nc = _verlinde_tensor(md)
    rounded = np.rint(Nc.real)
    resid = np.abs(Nc - rounded)
    if resid.max() >= tol:
        worst = tuple(int(x) for x in np.unravel_index(np.argmax(resid), resid.shape))
        raise VerificationError(f"not a modular fusion datum: N{worst} is not an integer "
                                f"(residual {resid.max():.3g})", worst)
    if (rounded < 0).any():
        worst = tuple(int(x) for x in np.argwhere(rounded < 0)[0])
        raise VerificationError(f"not a modular fusion datum: N{worst} is negative", worst)
    N = rounded.astype(np.int64)
    dual = []
    for i in range(md.rank):
        hits = np.nonzero(N[i, :, 0])[0]
        if len(hits) != 1:
            raise VerificationError(f"not a modular fusion datum: no unique dual for {i}", (i,))
        dual.append(int(hits[0]))
    try:
        return FusionRing(md.label_list(), dual, N)
    except InputError as exc:
        raise VerificationError(f"not a modular fusion datum: {exc}") from None


def twist_equation_check(md: ModularData, ring: FusionRing) -> float:
    """Max of ``|S_ij - theta_i^-1 theta_j^-1 sum_k N_{i dual(j)}^k theta_k d_k|``."""
    if ring.rank != md.rank:
        raise InputError(f"ring has rank {ring.rank}, modular data has rank {md.rank}")
    T = md.T
    d = md.dims
    dual = np.asarray(ring.dual)
    inner = np.einsum("ijk,k->ij", ring.N[:, dual, :].astype(complex), T * d)
    pred = inner / np.outer(T, T)
    return float(np.abs(md.S - pred).max())


# -- sub-bases, centralizers, certificates -----------------------------------


def _centralizer_mask(md: ModularData, sub) -> np.ndarray:
    d = md.dims
    idx = list(sub)
    diff = np.abs(md.S[:, idx] - np.outer(d, d[idx]))
    return (diff < md.tolerance).all(axis=1)


def centralizer(md: ModularData, sub, ring: FusionRing | None = None,
                check: bool = True) -> SubBasis:
    """Muger centralizer of a sub-basis, via ``S_ij == d_i d_j``.

    With ``check`` set and nondegenerate (unitary) data, also confirms the
    dimension identity ``dim(D) dim(D') = D`` and ``(D')' = D``.
    """
    ring = ring if ring is not None else verlinde_fusion(md)
    if not is_subbasis(ring, sub):
        raise InputError(f"{list(sub)} is not a fusion-closed sub-basis")
    out = SubBasis.of(np.nonzero(_centralizer_mask(md, sub))[0])
    if check:
        d = md.dims
        D = md.global_dim
        prod = float((d[list(sub)] ** 2).sum() * (d[list(out)] ** 2).sum())
        if abs(prod - D) > 1e-6 * D:
            raise VerificationError(f"dim(D) dim(D') = {prod:g} differs from {D:g}", list(sub))
        back = SubBasis.of(np.nonzero(_centralizer_mask(md, out))[0])
        if back != SubBasis.of(sub):
            raise VerificationError("double centralizer does not return the sub-basis",
                                    list(sub))
    return out


def fusion_subcategory_lattice(ring: FusionRing, max_rank: int = LATTICE_MAX_RANK) -> list[SubBasis]:
    """All fusion-closed, dual-closed sub-bases, sorted by size then indices.

    Every sub-basis is reached from a smaller one by adjoining one generator
    and closing, so a breadth-first closure search is exhaustive.
    """
    if ring.rank > max_rank:
        raise CapacityError(f"rank {ring.rank} exceeds lattice cap {max_rank}")
    start = generated_subbasis(ring, ())
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for sb in frontier:
            for x in range(ring.rank):
                if x in sb:
                    continue
                t = generated_subbasis(ring, (*sb.indices, x))
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return sorted(seen, key=lambda b: (len(b), b.indices))


@dataclass(frozen=True)
class Certificate:
    """Symmetric ``L`` with ``(L')_ad`` inside ``L``."""

    L: SubBasis
    L_prime: SubBasis
    dim: float
    tannakian_candidate: bool
    lagrangian: bool

    def to_dict(self):
        return {"L": list(self.L.indices), "L_prime": list(self.L_prime.indices),
                "dim": self.dim, "tannakian_candidate": self.tannakian_candidate,
                "lagrangian": self.lagrangian}


@dataclass(frozen=True)
class CertificateSearch:
    certificate: Certificate | None
    certificates: tuple[Certificate, ...] = field(default_factory=tuple)
    symmetric: tuple[SubBasis, ...] = field(default_factory=tuple)
    tannakian_candidates: tuple[SubBasis, ...] = field(default_factory=tuple)
    lattice_size: int = 0

    @property
    def found(self) -> bool:
        return self.certificate is not None

    def to_dict(self):
        return {
            "found": self.found,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "certificate_count": len(self.certificates),
            "symmetric": [list(b.indices) for b in self.symmetric],
            "tannakian_candidates": [list(b.indices) for b in self.tannakian_candidates],
            "lattice_size": self.lattice_size,
        }


def group_theoretical_certificate(md: ModularData, ring: FusionRing | None = None,
                                  max_rank: int = LATTICE_MAX_RANK) -> CertificateSearch:
    """Search the whole sub-basis lattice for a symmetric ``L`` with ``(L')_ad <= L``.

    For integral modular data the existence of such an ``L`` is equivalent to
    group-theoreticity, so an empty result after the exhaustive search is a
    proof of the opposite.  Symmetric sub-bases with all twists 1 are flagged
    as Tannakian candidates (fibre functors are not constructed).

    The returned ``certificate`` prefers Tannakian candidates, then larger
    ``L``, then the lexicographically smallest index set.
    """
    ring = ring if ring is not None else verlinde_fusion(md)
    d = md.dims
    if np.abs(d - np.rint(d)).max() > 1e-6:
        raise InputError("certificate search is only defined for integral dimensions")
    lattice = fusion_subcategory_lattice(ring, max_rank)
    symmetric, tannakian, certs = [], [], []
    D = md.global_dim
    for L in lattice:
        Lp = SubBasis.of(np.nonzero(_centralizer_mask(md, L))[0])
        if not L.issubset(Lp):
            continue
        symmetric.append(L)
        tann = bool(np.abs(md.T[list(L)] - 1).max() < md.tolerance)
        if tann:
            tannakian.append(L)
        if adjoint_subbasis(ring, Lp).issubset(L):
            dimL = float((d[list(L)] ** 2).sum())
            certs.append(Certificate(L, Lp, dimL, tann, abs(dimL ** 2 - D) < 1e-6 * D))
    best = min(certs, key=lambda c: (not c.tannakian_candidate, -c.dim, c.L.indices),
               default=None)
    return CertificateSearch(best, tuple(certs), tuple(symmetric), tuple(tannakian), len(lattice))


# -- metric groups -------------------------------------------------------------


def _first_hit(mask) -> tuple | None:
    hits = np.argwhere(mask)
    return None if len(hits) == 0 else tuple(int(x) for x in hits[0])


def _mixed_radix(orders):
    return list(itertools.product(*[range(n) for n in orders]))


@dataclass(frozen=True)
class MetricGroup:
    """Finite abelian group ``Z_n1 x ... x Z_nr`` with a quadratic form.

    ``exponents[a]`` is the rational ``r`` with ``q(a) = exp(2 pi i r)``;
    elements are enumerated in row-major mixed-radix order.
    """

    orders: tuple[int, ...]
    exponents: tuple[Fraction, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if any(n < 1 for n in orders):
            raise InputError("cyclic factor orders must be positive")
        size = int(np.prod(orders)) if orders else 1
        exps = tuple(Fraction(e) % 1 for e in self.exponents)
        if len(exps) != size:
            raise InputError(f"need {size} form values, got {len(exps)}")
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def from_coefficients(cls, orders, diag, cross=None) -> "MetricGroup":
        """``q(x) = exp(2 pi i (sum k_i x_i^2 / 2n_i + sum c_ij x_i x_j / gcd(n_i, n_j)))``.

        ``k_i * n_i`` must be even for the form to be well defined.
        """
        orders = tuple(orders)
        cross = cross or {}
        for k, n in zip(diag, orders):
            if (k * n) % 2:
                raise InputError(f"coefficient {k} on Z_{n} does not give a well-defined form")
        exps = []
        for x in _mixed_radix(orders):
            r = sum(Fraction(k * xi * xi, 2 * n) for k, xi, n in zip(diag, x, orders))
            for (i, j), c in cross.items():
                r += Fraction(c * x[i] * x[j], gcd(orders[i], orders[j]))
            exps.append(r)
        return cls(orders, tuple(exps))

    @cached_property
    def elements(self) -> list[tuple[int, ...]]:
        return _mixed_radix(self.orders)

    @property
    def size(self) -> int:
        return len(self.exponents)

    def _index(self, x) -> int:
        idx = 0
        for xi, n in zip(x, self.orders):
            idx = idx * n + xi % n
        return idx

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
        """Addition table, negation and ``q`` as integers modulo a common denominator."""
        els = np.array(self.elements, dtype=np.int64).reshape(self.size, len(self.orders))
        radix = np.array([int(np.prod(self.orders[i + 1:])) for i in range(len(self.orders))],
                         dtype=np.int64)
        mods = np.array(self.orders, dtype=np.int64)
        add = (((els[:, None, :] + els[None, :, :]) % mods) * radix).sum(axis=-1)
        neg = (((-els) % mods) * radix).sum(axis=-1)
        den = 1
        for e in self.exponents:
            den = den * e.denominator // gcd(den, e.denominator)
        q = np.array([int(e * den) for e in self.exponents], dtype=np.int64)
        return add, neg, q, den

    @cached_property
    def _bilinear_table(self) -> np.ndarray:
        add, _, q, den = self._tables
        return (q[add] - q[:, None] - q[None, :]) % den

    def add(self, a: int, b: int) -> int:
        return int(self._tables[0][a, b])

    def neg(self, a: int) -> int:
        return int(self._tables[1][a])

    def bilinear(self, a: int, b: int) -> Fraction:
        """Exponent of ``b(a, b) = q(a+b) / (q(a) q(b))``."""
        return Fraction(int(self._bilinear_table[a, b]), self._tables[3])

    def check(self) -> ValidationReport:
        add, neg, q, den = self._tables
        B = self._bilinear_table
        bad = _first_hit(q[neg] != q)
        checks = [Check("even", bad is None, bad)]
        # b(a+b, c) = b(a, c) + b(b, c)
        viol = (B[add] - B[:, None, :] - B[None, :, :]) % den != 0
        bad = _first_hit(viol)
        checks.append(Check("bihomomorphic", bad is None, bad))
        radical = ~(B[1:] != 0).any(axis=1)
        bad = None if not radical.any() else (int(np.argmax(radical)) + 1,)
        checks.append(Check("nondegenerate", bad is None, bad))
        return ValidationReport(tuple(checks))

    @property
    def nondegenerate(self) -> bool:
        return self.check()["nondegenerate"].passed

    def is_anisotropic(self) -> bool:
        """No nonzero element with ``q(a) = 1``."""
        return all(self.exponents[a] != 0 for a in range(1, self.size))


def metric_group_data(mg: MetricGroup, tolerance: float = DEFAULT_TOL) -> ModularData:
    """Pointed modular data: ``theta_a = q(a)``, ``S_ab = b(a, b)^-1``."""
    report = mg.check()
    if not report.valid:
        bad = report.failures()[0]
        raise VerificationError(f"metric group fails {bad.name} check", bad.witness)
    n = mg.size
    S = np.empty((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            S[a, b] = np.exp(-2j * np.pi * float(mg.bilinear(a, b)))
    T = np.array([np.exp(2j * np.pi * float(r)) for r in mg.exponents])
    labels = ["".join(map(str, x)) if x else "0" for x in mg.elements]
    return ModularData(S, T, tolerance, labels)


def elliptic_form(p: int) -> MetricGroup:
    """Anisotropic form ``(x^2 - e y^2) / p`` on ``Z_p x Z_p`` for an odd prime ``p``.

    ``e`` is the smallest quadratic non-residue mod ``p``.
    """
    squares = {x * x % p for x in range(p)}
    e = next(x for x in range(2, p) if x not in squares)
    return MetricGroup.from_coefficients((p, p), (2, -2 * e))


def abelian_group_types(order: int) -> list[tuple[int, ...]]:
    """Invariant-factor decompositions ``n1 | n2 | ... | nr`` of the given order."""
    out = []

    def rec(remaining, prev, acc):
        if remaining == 1:
            out.append(tuple(acc))
            return
        for n in range(2, remaining + 1):
            if remaining % n == 0 and (prev is None or n % prev == 0):
                rec(remaining // n, n, acc + [n])

    if order == 1:
        return [()]
    rec(order, None, [])
    return out


def random_metric_group(orders, rng, max_tries: int = 200) -> MetricGroup:
    """Random nondegenerate quadratic form on the given group."""
    orders = tuple(orders)
    for _ in range(max_tries):
        diag = []
        for n in orders:
            k = int(rng.integers(0, 2 * n))
            if (k * n) % 2:
                k += 1
            diag.append(k)
        cross = {(i, j): int(rng.integers(0, gcd(orders[i], orders[j])))
                 for i in range(len(orders)) for j in range(i + 1, len(orders))}
        mg = MetricGroup.from_coefficients(orders, diag, cross)
        if mg.nondegenerate:
            return mg
    raise VerificationError(f"no nondegenerate form found on {orders}")

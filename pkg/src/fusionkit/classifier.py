"""Dimension-type enumeration and arithmetic case elimination.

For an integral modular category of global dimension ``p q^4`` or
``p^2 q^2`` the possible values of ``FPdim(C_pt)`` are divisors of the
global dimension.  Each divisor is run through a fixed list of arithmetic
rules; the first rule that applies decides its verdict.  No category is
ever constructed: every rule is a predicate on ``(p, q, shape, pt_dim)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt

from .errors import InputError

SHAPES = ("pq4", "p2q2")

LABEL_E = "E(zeta,±)"
LABEL_36 = "dimension-36 family"


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, isqrt(n) + 1))


def _prime_power(n: int) -> bool:
    """True for 1 and for powers of a single prime."""
    if n == 1:
        return True
    d = next(d for d in range(2, n + 1) if n % d == 0)
    while n % d == 0:
        n //= d
    return n == 1


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class DimensionProfile:
    """Global dimension ``p q^4`` or ``p^2 q^2`` for distinct primes.

    For the symmetric shape ``p2q2`` the primes are stored with ``p < q``.
    """

    p: int
    q: int
    shape: str

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise InputError(f"shape must be one of {SHAPES}, got {self.shape!r}")
        if not (_is_prime(self.p) and _is_prime(self.q)) or self.p == self.q:
            raise InputError(f"p={self.p}, q={self.q} must be distinct primes")
        if self.shape == "p2q2" and self.p > self.q:
            p, q = self.q, self.p
            object.__setattr__(self, "p", p)
            object.__setattr__(self, "q", q)

    @property
    def N(self) -> int:
        return self.p * self.q ** 4 if self.shape == "pq4" else self.p ** 2 * self.q ** 2

    def to_dict(self):
        return {"p": self.p, "q": self.q, "shape": self.shape, "N": self.N}


@dataclass(frozen=True, order=True)
class TypeSignature:
    """Multiplicities of simple-object dimensions, as ``((d, m), ...)``."""

    parts: tuple[tuple[int, int], ...]

    def mult(self, d: int) -> int:
        return dict(self.parts).get(d, 0)

    @property
    def total(self) -> int:
        return sum(m * d * d for d, m in self.parts)

    @property
    def rank(self) -> int:
        return sum(m for _, m in self.parts)

    def __str__(self):
        return "(" + "; ".join(f"{d},{m}" for d, m in self.parts) + ")"

    def to_list(self):
        return [list(x) for x in self.parts]


def allowed_dims(N: int) -> list[int]:
    """Dimensions ``d > 1`` whose square divides ``N``."""
    return [d for d in range(2, isqrt(N) + 1) if N % (d * d) == 0]


def _solutions(target: int, dims: list[int]) -> list[tuple[int, ...]]:
    """All ``(m_d)`` with ``sum m_d d^2 <= target``, keyed by the remaining sum.

    Coin-change style table: ``table[s]`` lists multiplicity vectors over the
    dims processed so far with weight exactly ``s``.
    """
    table: dict[int, list[tuple[int, ...]]] = {0: [()]}
    for d in dims:
        w = d * d
        new: dict[int, list[tuple[int, ...]]] = {}
        for s, vecs in table.items():
            for m in range((target - s) // w + 1):
                new.setdefault(s + m * w, []).extend(v + (m,) for v in vecs)
        table = new
    return [(s, v) for s, vecs in table.items() for v in vecs]


@lru_cache(maxsize=None)
def _representable(s: int, dims: tuple[int, ...]) -> bool:
    """Whether ``s = sum m_d d^2`` for some ``m_d >= 0``."""
    if s == 0:
        return True
    if not dims:
        return False
    w = dims[-1] ** 2
    return any(_representable(s - m * w, dims[:-1]) for m in range(s // w + 1))


def _ones_options(M: int, dims, ones: range) -> list[int]:
    """Invertible counts ``a`` in ``ones`` for which ``M - a`` is representable."""
    dims = tuple(dims)
    return [a for a in range(ones.start, min(ones.stop - 1, M) + 1)
            if _representable(M - a, dims)]


def _target(profile) -> int:
    return profile.N if isinstance(profile, DimensionProfile) else int(profile)


def enumerate_types(profile: DimensionProfile | int) -> list[TypeSignature]:
    """Every signature with ``sum m_d d^2 = N``, ``d^2 | N`` and ``m_1 | N``, ``m_1 >= 1``."""
    N = _target(profile)
    if N < 1:
        raise InputError("target dimension must be positive")
    dims = allowed_dims(N)
    out = []
    for s, vec in _solutions(N - 1, dims):
        a = N - s
        if N % a:
            continue
        parts = ((1, a),) + tuple((d, m) for d, m in zip(dims, vec) if m)
        out.append(TypeSignature(parts))
    return sorted(out)


def _component_solutions(M: int, dims: list[int], ones: range) -> list[TypeSignature]:
    out = []
    for s, vec in _solutions(M, dims):
        a = M - s
        if a in ones:
            parts = (((1, a),) if a else ()) + tuple((d, m) for d, m in zip(dims, vec) if m)
            out.append(TypeSignature(parts))
    return sorted(out)


@dataclass(frozen=True)
class Refinement:
    """Per-component solutions of a faithful grading with ``u`` components."""

    u: int
    component_dim: int
    trivial: tuple[TypeSignature, ...]
    nontrivial: tuple[TypeSignature, ...]
    contradiction: str | None = None

    @property
    def consistent(self) -> bool:
        return self.contradiction is None

    def to_dict(self):
        return {"u": self.u, "component_dim": self.component_dim,
                "trivial": [str(s) for s in self.trivial],
                "nontrivial": [str(s) for s in self.nontrivial],
                "contradiction": self.contradiction}


def graded_refinement(profile: DimensionProfile | int, u: int,
                      signature: TypeSignature | None = None,
                      pt_in_adjoint: bool = False, explicit: bool = True) -> Refinement:
    """Split a type over ``u`` components of equal dimension ``N/u``.

    ``u`` is the number of invertibles, which equals the order of the
    universal grading group.  The trivial component holds at least one
    invertible, and at least two when it is not the whole of ``Vec``.  With
    ``pt_in_adjoint`` all ``u`` invertibles sit in the trivial component.
    A contradiction is reported when some component has no solution or the
    invertibles cannot be distributed so that they add up to ``u``.
    ``explicit=False`` skips listing the component solutions.
    """
    N = _target(profile)
    if u < 1 or N % u:
        raise InputError(f"u={u} must divide N={N}")
    M = N // u
    dims = allowed_dims(N)
    if signature is not None:
        dims = [d for d in dims if signature.mult(d)]
        if signature.mult(1) != u:
            raise InputError(f"signature has {signature.mult(1)} invertibles, not u={u}")
    if u == 1:
        if signature is not None:
            triv = (signature,)
        elif explicit:
            triv = tuple(s for s in enumerate_types(N) if s.mult(1) == 1)
        else:
            triv = ()
        ok = signature is not None or bool(_ones_options(N, dims, range(1, 2)))
        return Refinement(1, M, triv, (), None if ok else f"no type of dimension {N} with one invertible")

    if pt_in_adjoint:
        triv_ones, other_ones = range(u, u + 1), range(0, 1)
    else:
        lo = 2 if M > 1 else 1
        triv_ones, other_ones = range(lo, u + 1), range(0, u + 1)
    e_opts = _ones_options(M, dims, triv_ones)
    g_opts = _ones_options(M, dims, other_ones)
    trivial = _component_solutions(M, dims, triv_ones) if explicit else []
    nontrivial = _component_solutions(M, dims, other_ones) if explicit else []

    def out(msg):
        return Refinement(u, M, tuple(trivial), tuple(nontrivial), msg)

    if not e_opts:
        return out(f"trivial component: no solution of a_e + sum m_d d^2 = {M} "
                   f"with a_e in [{triv_ones.start}, {triv_ones.stop - 1}]")
    if not g_opts:
        return out(f"nontrivial component: no solution of a_g + sum m_d d^2 = {M} "
                   f"with a_g in [{other_ones.start}, {other_ones.stop - 1}]")
    least = e_opts[0] + (u - 1) * g_opts[0]
    if least > u:
        return out(f"invertible count: at least {e_opts[0]} + {u - 1}*{g_opts[0]} = {least} > {u}")

    if signature is not None and explicit:
        # the per-dimension totals of some choice of component solutions must match
        keys = [1] + dims
        reach = {tuple(s.mult(d) for d in keys) for s in trivial}
        for _ in range(u - 1):
            reach = {tuple(x + s.mult(d) for x, d in zip(r, keys))
                     for r in reach for s in nontrivial}
        want = tuple(signature.mult(d) for d in keys)
        if want not in reach:
            return out(f"no distribution of {signature} over {u} components")
        trivial = [s for s in trivial if _fits(s, signature)]
        nontrivial = [s for s in nontrivial if _fits(s, signature)]
    return out(None)


def _fits(s: TypeSignature, sig: TypeSignature) -> bool:
    return all(m <= sig.mult(d) for d, m in s.parts)


# -- rules ----------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    kind: str                  # eliminated | group_theoretical | survives
    rule: str
    witness: str
    label: str | None = None
    cited: bool = False


@dataclass(frozen=True)
class Rule:
    code: str
    name: str
    test: object   # callable(profile, a) -> Verdict | None

    def __call__(self, profile, a):
        return self.test(self, profile, a)


def _r0(rule, pr, a):
    if _ones_options(pr.N, allowed_dims(pr.N), range(a, a + 1)):
        return None
    return Verdict("eliminated", rule.code,
                   f"a + sum m_d d^2 = {pr.N} over d in {allowed_dims(pr.N)} has no solution with a = {a}")


def _r1(rule, pr, a):
    if a == 1 and pr.N > 1:
        return Verdict("eliminated", rule.code,
                       f"dimension {pr.N} has two prime factors, so a nontrivial invertible exists")
    return None


def _r2(rule, pr, a):
    ad = pr.N // a
    if _prime_power(ad):
        return Verdict("group_theoretical", rule.code,
                       f"FPdim(C_ad) = {pr.N}/{a} = {ad} is a prime power, so C is nilpotent")
    return None


def _r3(rule, pr, a):
    ref = graded_refinement(pr, a, explicit=False)
    if ref.contradiction and ref.contradiction.startswith("invertible count"):
        return Verdict("eliminated", rule.code,
                       f"{a} components of dimension {ref.component_dim}; {ref.contradiction}")
    return None


def _r4(rule, pr, a):
    ad = pr.N // a
    if ad > 1 and gcd(a, ad) == 1:
        return Verdict("eliminated", rule.code,
                       f"invertibles of C_ad number a_e >= 2 with a_e | {a} and a_e | {ad}, "
                       f"but gcd({a}, {ad}) = 1")
    return None


def _r5(rule, pr, a):
    comp = pr.N // a
    dims = allowed_dims(pr.N)
    if a < pr.N and dims and min(dims) ** 2 > comp:
        return Verdict("eliminated", rule.code,
                       f"components have dimension {comp} < {min(dims)}^2, so C would be pointed")
    return None


def _r6(rule, pr, a):
    if not _is_prime(a):
        return None
    ref = graded_refinement(pr, a, pt_in_adjoint=True, explicit=False)
    if ref.contradiction:
        w = ref.contradiction
        if pr.shape == "p2q2" and a == pr.q:
            w += f"; c_e*{pr.q} = ({pr.p}-1)({pr.p}+1) = {pr.p ** 2 - 1} is unsolvable"
        return Verdict("eliminated", rule.code, w)
    if pr.shape == "p2q2" and a == pr.q:
        ref = graded_refinement(pr, a, pt_in_adjoint=True)
        return Verdict("survives", rule.code,
                       f"trivial component {ref.trivial[0]}, others {ref.nontrivial[0]}",
                       label=LABEL_36)
    return None


def _r7(rule, pr, a):
    if pr.shape == "p2q2" and a == pr.p and pr.p > 2 and (pr.q - 1) % pr.p:
        return Verdict("eliminated", rule.code,
                       f"(q-1)/p = {pr.q - 1}/{pr.p} must be an algebraic integer")
    return None


def _r8(rule, pr, a):
    if pr.shape == "pq4" and a == pr.q ** 2:
        return Verdict("group_theoretical", rule.code,
                       "C_pt is Tannakian and the de-equivariantization is pointed", cited=True)
    if pr.shape == "p2q2" and a == pr.p:
        if pr.p == 2:
            return Verdict("survives", rule.code,
                           "de-equivariantization of dimension 2q^2 is group-theoretical "
                           "or Tambara-Yamagami on an elliptic form", label=LABEL_E, cited=True)
        return Verdict("group_theoretical", rule.code,
                       "de-equivariantization of dimension pq^2 with p odd is group-theoretical",
                       cited=True)
    return None


RULES = (
    Rule("R0", "type-equation", _r0),
    Rule("R1", "nontrivial-invertible", _r1),
    Rule("R2", "prime-power-adjoint", _r2),
    Rule("R3", "invertible-counting", _r3),
    Rule("R4", "adjoint-pointed-divisibility", _r4),
    Rule("R5", "component-capacity", _r5),
    Rule("R6", "trivial-component-arithmetic", _r6),
    Rule("R7", "gauss-sum-integrality", _r7),
    Rule("R8", "de-equivariantization", _r8),
)
RULE_NAMES = {r.code: r.name for r in RULES}


@dataclass(frozen=True)
class Case:
    pt_dim: int
    verdict: Verdict
    also: tuple[str, ...] = ()

    def to_dict(self):
        v = self.verdict
        out = {"pt_dim": self.pt_dim, "verdict": v.kind, "rule": v.rule,
               "rule_name": RULE_NAMES[v.rule], "witness": v.witness}
        if v.label:
            out["label"] = v.label
        if v.cited:
            out["cited"] = True
        out["also"] = list(self.also)
        return out


@dataclass(frozen=True)
class CaseReport:
    profile: DimensionProfile
    cases: tuple[Case, ...]
    overall: str = ""
    survivors: tuple[str, ...] = field(default=())

    def case(self, pt_dim: int) -> Case:
        return next(c for c in self.cases if c.pt_dim == pt_dim)

    @property
    def surviving(self) -> tuple[Case, ...]:
        return tuple(c for c in self.cases if c.verdict.kind == "survives")

    def to_dict(self):
        return {"profile": self.profile.to_dict(),
                "cases": [c.to_dict() for c in self.cases],
                "overall": self.overall,
                "survivors": list(self.survivors)}


def apply_elimination_rules(profile: DimensionProfile) -> CaseReport:
    """One verdict per divisor of ``N``; later applicable rules go to ``also``."""
    cases = []
    for a in _divisors(profile.N):
        decided = None
        also = []
        for rule in RULES:
            v = rule(profile, a)
            if v is None:
                continue
            if decided is None:
                decided = v
            else:
                also.append(rule.code)
        assert decided is not None, f"no rule decides pt_dim={a}"
        cases.append(Case(a, decided, tuple(also)))
    return CaseReport(profile, tuple(cases))


def classify(profile: DimensionProfile) -> CaseReport:
    """Case report plus the overall verdict and surviving candidate labels."""
    rep = apply_elimination_rules(profile)
    surv = tuple(f"{c.verdict.label} (FPdim(C_pt)={c.pt_dim})" for c in rep.surviving)
    if surv:
        overall = "group-theoretical or one of: " + ", ".join(surv)
    else:
        overall = "group-theoretical"
    return CaseReport(rep.profile, rep.cases, overall, surv)

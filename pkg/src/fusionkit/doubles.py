"""Modular data of the untwisted Drinfeld double of a small finite group."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .characters import (CharacterTable, FiniteGroup, GroupAnalysis, character_table,
                         group_analysis)
from .errors import CapacityError, InputError
from .modular_data import DEFAULT_TOL, ModularData, verlinde_fusion
from .fusion_core import FusionRing

DOUBLE_CAP = 24

__all__ = ["FiniteGroup", "group_analysis", "character_table", "DoubleLabel",
           "DoubleData", "double_modular_data", "DOUBLE_CAP"]


@dataclass(frozen=True)
class DoubleLabel:
    """Simple object ``(a, chi)``: class representative and a centralizer irrep."""

    rep: int
    class_index: int
    char_index: int
    class_size: int
    degree: int

    @property
    def dim(self) -> int:
        return self.class_size * self.degree

    def name(self, G: FiniteGroup) -> str:
        return f"({G.labels[self.rep]},chi{self.char_index})"


@dataclass(frozen=True)
class DoubleData:
    ring: FusionRing
    modular: ModularData
    simples: tuple[DoubleLabel, ...]

    def __iter__(self):   # allows ``ring, md = double_modular_data(G)``
        return iter((self.ring, self.modular))


def double_modular_data(G: FiniteGroup, cap: int = DOUBLE_CAP, omega=None,
                        tolerance: float = DEFAULT_TOL) -> DoubleData:
    """S and T of ``D(G)`` together with the Verlinde fusion ring.

    Simples are ordered by (class size, representative, character index), so
    the unit ``(e, trivial)`` comes first.  The unnormalized S uses

        S[(a,x),(b,y)] = |G|/(|C(a)||C(b)|) * sum_g conj(x(g b g^-1) y(g^-1 a g))

    over ``g`` with ``a`` commuting with ``g b g^-1``.  The factor ``|G|``
    makes ``S[0,0] = 1``.  T is ``x(a)/x(1)``.
    """
    if omega is not None:
        raise InputError("twisted doubles are unsupported; only the untwisted double is built")
    n = G.order
    if n > cap:
        raise CapacityError(f"group order {n} exceeds double cap {cap}")
    ga: GroupAnalysis = group_analysis(G)
    idx_order = sorted(range(len(ga.classes)),
                       key=lambda c: (len(ga.classes[c]), ga.representatives[c]))

    simples: list[DoubleLabel] = []
    tables: dict[int, tuple[CharacterTable, dict[int, int]]] = {}
    for c in idx_order:
        a = ga.representatives[c]
        H, els = G.subgroup(ga.centralizers[c])
        ct = character_table(H)
        tables[c] = (ct, {g: i for i, g in enumerate(els)})
        for m, deg in enumerate(ct.degrees):
            simples.append(DoubleLabel(a, c, m, len(ga.classes[c]), deg))

    def chi(lbl: DoubleLabel, g: int) -> complex:
        ct, pos = tables[lbl.class_index]
        return ct.character(lbl.char_index, pos[g])

    r = len(simples)
    T = np.array([chi(x, x.rep) / x.degree for x in simples])
    S = np.zeros((r, r), dtype=complex)
    for u, x in enumerate(simples):
        a = x.rep
        ca = len(ga.centralizers[x.class_index])
        for v in range(u, r):
            y = simples[v]
            b = y.rep
            cb = len(ga.centralizers[y.class_index])
            acc = 0j
            for g in range(n):
                gbg = G.conj(g, b)
                if G.mul(a, gbg) != G.mul(gbg, a):
                    continue
                gag = G.conj(G.inverse[g], a)
                acc += (chi(x, gbg) * chi(y, gag)).conjugate()
            S[u, v] = S[v, u] = acc * n / (ca * cb)
    S[np.abs(S.imag) < 1e-12] = S[np.abs(S.imag) < 1e-12].real
    S = S / S[0, 0].real    # already 1 for the unit; guards rounding

    labels = [x.name(G) for x in simples]
    md = ModularData(S, T, tolerance=tolerance, labels=labels)
    ring = verlinde_fusion(md)
    ring = FusionRing(labels, ring.dual, ring.N)
    return DoubleData(ring, md, tuple(simples))

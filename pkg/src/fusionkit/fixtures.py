"""Bundled example data and small constructors used by tests and the CLI.

The JSON files under ``fusionkit/data`` are the shipped fixtures; the
builders here produce the same objects from generating rules so the two
can be cross-checked.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .fusion_core import FusionRing, group_ring

RING36_LABELS = ("1", "g", "g2", "Y", "X", "gX", "g2X", "X*", "gX*", "g2X*")


def data_path(name: str) -> Path:
    return Path(str(resources.files("fusionkit") / "data" / name))


def load_json(name: str):
    return json.loads(data_path(name).read_text())


def bundled_names() -> list[str]:
    return sorted(p.name for p in data_path("").iterdir() if p.suffix == ".json")


def cyclic_ring(n: int) -> FusionRing:
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return group_ring(table, [f"g{a}" if a else "1" for a in range(n)])


def klein_ring() -> FusionRing:
    table = [[a ^ b for b in range(4)] for a in range(4)]
    return group_ring(table, ["1", "e", "m", "f"])


def trivial_ring() -> FusionRing:
    return FusionRing(["1"], [0], np.ones((1, 1, 1), dtype=np.int64))


def ring36(variant: str = "i") -> FusionRing:
    """Rank-10 Z3-graded ring of global dimension 36.

    Basis ``1, g, g2, Y, X, gX, g2X, X*, gX*, g2X*``.  The rules shared by both
    variants: ``g Y = Y``, ``Y Y = 1+g+g2+2Y``, ``Y X = X+gX+g2X`` and
    ``X X* = 1+Y``.  Variant ``"i"`` has ``X X = X* + gX*``, variant ``"ii"``
    has ``X X = gX* + g2X*``.
    """
    if variant == "i":
        xx = (0, 1)
    elif variant == "ii":
        xx = (1, 2)
    else:
        raise ValueError(f"unknown variant {variant!r}")

    def g(a):
        return a % 3

    def X(a):
        return 4 + a % 3

    def Xs(a):
        return 7 + a % 3

    Y = 3
    n = 10
    N = np.zeros((n, n, n), dtype=np.int64)
    # elements as (kind, exponent): kind 0 = g^a, 1 = Y, 2 = g^a X, 3 = g^a X*
    kinds = [(0, 0), (0, 1), (0, 2), (1, 0), (2, 0), (2, 1), (2, 2), (3, 0), (3, 1), (3, 2)]

    def prod(p, r):
        (kp, a), (kr, b) = p, r
        if kp > kr:
            return prod(r, p)   # commutative
        s = a + b
        if kp == 0:
            return {[g(s), Y, X(s), Xs(s)][kr] if kr != 1 else Y: 1}
        if kp == 1 and kr == 1:
            return {0: 1, 1: 1, 2: 1, Y: 2}
        if kp == 1:
            base = X if kr == 2 else Xs
            return {base(0): 1, base(1): 1, base(2): 1}
        if kp == 2 and kr == 3:
            return {g(s): 1, Y: 1}
        if kp == 2 and kr == 2:
            return {Xs(s + c): 1 for c in xx}
        # X* X*: dual of X X
        return {X(s - c): 1 for c in xx}

    for i, p in enumerate(kinds):
        for j, r in enumerate(kinds):
            for k, m in prod(p, r).items():
                N[i, j, k] = m
    dual = [0, 2, 1, 3, 7, 9, 8, 4, 6, 5]
    return FusionRing(RING36_LABELS, dual, N)


def printed36_matrices():
    """S (unnormalized) and T of the rank-10 modular data, with q = exp(i pi/3)."""
    q = np.exp(1j * np.pi / 3)
    a, b, c, d = 2 * q ** 2, 2 * q ** -2, 2 * q, 2 * q ** -1
    S = np.array([
        [1, 1, 1, 3, 2, 2, 2, 2, 2, 2],
        [1, 1, 1, 3, a, b, a, b, a, b],
        [1, 1, 1, 3, b, a, b, a, b, a],
        [3, 3, 3, -3, 0, 0, 0, 0, 0, 0],
        [2, a, b, 0, d, c, c, d, -2, -2],
        [2, b, a, 0, c, d, d, c, -2, -2],
        [2, a, b, 0, c, d, -2, -2, d, c],
        [2, b, a, 0, d, c, -2, -2, c, d],
        [2, a, b, 0, -2, -2, d, c, c, d],
        [2, b, a, 0, -2, -2, c, d, d, c],
    ], dtype=complex)
    T = np.array([1, 1, 1, -1, q ** 2, q ** 2, 1, 1, q ** -2, q ** -2], dtype=complex)
    return S, T

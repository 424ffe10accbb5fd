import cmath
import itertools

import numpy as np
import pytest

from fusionkit import fixtures
from fusionkit.canonical import canonical_key
from fusionkit.characters import FiniteGroup, character_table, group_analysis
from fusionkit.doubles import double_modular_data
from fusionkit.errors import CapacityError, InputError
from fusionkit.modular_data import verify_modular

from conftest import bundled_groups


def cyclic(n):
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)])


def alternating4():
    evens = [p for p in itertools.permutations(range(4))
             if sum(p[i] > p[j] for i in range(4) for j in range(i + 1, 4)) % 2 == 0]
    return FiniteGroup.from_permutations([evens[1], evens[3]])


def assert_orthogonal(G, ct):
    sizes = np.array([len(c) for c in ct.classes])
    V = ct.values
    gram = (V * sizes) @ V.conj().T / G.order
    assert np.abs(gram - np.eye(len(V))).max() < 1e-9
    cent = V.conj().T @ V
    assert np.abs(cent - np.diag(G.order / sizes)).max() < 1e-9


def test_group_validation():
    with pytest.raises(InputError):
        FiniteGroup([[0, 1], [0, 1]])                # not a Latin square
    with pytest.raises(InputError):
        FiniteGroup([[0, 1, 2], [1, 0, 2], [2, 2, 0]])
    with pytest.raises(InputError):
        # Latin square with identity 0 but not associative
        FiniteGroup([[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3],
                     [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]])


def test_s3_conjugacy_classes():
    G = bundled_groups()["group_s3.json"]
    ga = group_analysis(G)
    sizes = sorted(len(c) for c in ga.classes)
    assert sizes == [1, 2, 3]
    assert sorted(len(c) for c in ga.centralizers) == [2, 3, 6]


def test_s3_character_table():
    ct = character_table(bundled_groups()["group_s3.json"])
    assert ct.degrees == (1, 1, 2)
    sizes = [len(c) for c in ct.classes]
    by_size = {s: i for i, s in enumerate(sizes)}
    # classical table: transpositions (3) and 3-cycles (2)
    t, r = by_size[3], by_size[2]
    assert sorted(round(ct.values[m, t].real) for m in range(3)) == [-1, 0, 1]
    assert sorted(round(ct.values[m, r].real) for m in range(3)) == [-1, 1, 1]


def test_cyclic_tables_are_roots_of_unity():
    G = cyclic(3)
    ct = character_table(G)
    w = cmath.exp(2j * cmath.pi / 3)
    got = sorted((round(ct.values[m, 1].real, 9), round(ct.values[m, 1].imag, 9)) for m in range(3))
    want = sorted((round(z.real, 9), round(z.imag, 9)) for z in (1, w, w * w))
    assert got == want


def test_trivial_group():
    G = cyclic(1)
    ct = character_table(G)
    assert ct.values.shape == (1, 1) and ct.values[0, 0] == 1


@pytest.mark.parametrize("name", ["group_z2.json", "group_z3.json", "group_z2xz2.json",
                                  "group_s3.json", "group_d4.json", "group_q8.json"])
def test_bundled_tables_are_orthogonal(name):
    G = bundled_groups()[name]
    assert_orthogonal(G, character_table(G))


@pytest.mark.parametrize("G", [cyclic(12), alternating4(), cyclic(7)],
                         ids=["z12", "a4", "z7"])
def test_more_tables_are_orthogonal(G):
    ct = character_table(G)
    assert_orthogonal(G, ct)
    assert sum(d * d for d in ct.degrees) == G.order


def test_a4_degrees():
    assert character_table(alternating4()).degrees == (1, 1, 1, 3)


def test_q8_and_d4_share_degrees_but_not_involutions():
    G = bundled_groups()
    q8, d4 = G["group_q8.json"], G["group_d4.json"]
    assert character_table(q8).degrees == (1, 1, 1, 1, 2)
    assert character_table(d4).degrees == (1, 1, 1, 1, 2)
    assert q8.exponent() == d4.exponent() == 4
    assert sum(q8.element_order(g) == 2 for g in range(8)) == 1
    assert sum(d4.element_order(g) == 2 for g in range(8)) == 5


def test_character_table_cap():
    with pytest.raises(CapacityError):
        character_table(cyclic(10), cap=8)


def test_double_of_s3():
    dd = double_modular_data(bundled_groups()["group_s3.json"])
    assert tuple(x.dim for x in dd.simples) == (1, 1, 2, 2, 2, 2, 3, 3)
    assert np.allclose(dd.modular.dims, [1, 1, 2, 2, 2, 2, 3, 3])
    assert verify_modular(dd.modular.with_tolerance(1e-8)).valid


def test_double_of_z2_is_toric_code():
    dd = double_modular_data(bundled_groups()["group_z2.json"])
    assert canonical_key(dd.ring) == canonical_key(fixtures.klein_ring())
    assert sorted(np.round(dd.modular.T.real).astype(int)) == [-1, 1, 1, 1]


def test_double_of_abelian_group_has_order_squared_simples():
    for n in (2, 3, 4, 5):
        dd = double_modular_data(cyclic(n))
        assert dd.modular.rank == n * n
        assert verify_modular(dd.modular).valid


def test_double_of_a4():
    dd = double_modular_data(alternating4())
    assert verify_modular(dd.modular.with_tolerance(1e-8)).valid
    assert sum(x.dim ** 2 for x in dd.simples) == 144


def test_double_rejects_twists_and_large_groups():
    G = cyclic(3)
    with pytest.raises(InputError):
        double_modular_data(G, omega={})
    with pytest.raises(CapacityError):
        double_modular_data(cyclic(30))


def test_double_unpacks_to_ring_and_data():
    ring, md = double_modular_data(cyclic(2))
    assert ring.rank == md.rank == 4

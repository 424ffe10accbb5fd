import cmath
import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fusionkit import fixtures
from fusionkit.canonical import canonical_key
from fusionkit.errors import CapacityError, InputError, VerificationError
from fusionkit.fusion_core import SubBasis, validate_fusion_ring
from fusionkit.modular_data import (MetricGroup, ModularData, abelian_group_types, centralizer,
                                    elliptic_form, fusion_subcategory_lattice, gauss_sums,
                                    group_theoretical_certificate, metric_group_data,
                                    random_metric_group, t_order, twist_equation_check,
                                    verify_modular, verlinde_fusion)


def printed():
    return ModularData.from_dict(fixtures.load_json("printed36.json"))


def test_exact_fixture_matches_float_builder():
    S, T = fixtures.printed36_matrices()
    md = printed()
    assert np.abs(md.S - S).max() < 1e-12
    assert np.abs(md.T - T).max() < 1e-12


def test_gauss_sums_by_direct_summation():
    md = printed()
    d = [1, 1, 1, 3, 2, 2, 2, 2, 2, 2]
    q = cmath.exp(1j * cmath.pi / 3)
    theta = [1, 1, 1, -1, q ** 2, q ** 2, 1, 1, q ** -2, q ** -2]
    p_plus = sum(t * x * x for t, x in zip(theta, d))
    p_minus = sum(t.conjugate() * x * x if isinstance(t, complex) else t * x * x
                  for t, x in zip(theta, d))
    gs = gauss_sums(md)
    assert abs(gs.p_plus - p_plus) < 1e-12
    assert abs(gs.p_minus - p_minus) < 1e-12
    assert abs(p_plus - (-6)) < 1e-12


def test_t_order():
    assert t_order([1, -1, 1j]) == 4
    assert t_order([1, cmath.exp(2j * cmath.pi / 7)]) == 7
    assert t_order([1, cmath.exp(2j)], cap=50) is None


def test_failures_are_localized():
    md = printed()
    S = md.S.copy()
    S[4, 5] += 0.01
    rep = verify_modular(ModularData(S, md.T, md.tolerance, md.label_list()))
    assert not rep["symmetry"].passed
    assert rep["symmetry"].residual == pytest.approx(0.01, rel=1e-6)

    T = md.T.copy()
    T[3] = 1j
    rep = verify_modular(ModularData(md.S, T, md.tolerance, md.label_list()))
    assert rep["symmetry"].passed and rep["unitarity"].passed
    assert not rep["modular_relation"].passed


def test_non_integral_verlinde_is_rejected():
    # a unitary symmetric matrix with the right first row that is not modular
    theta = np.pi / 5
    s = np.array([[np.cos(theta), np.sin(theta)], [np.sin(theta), -np.cos(theta)]])
    S = s / s[0, 0]
    md = ModularData(S, np.array([1, 1j]))
    rep = verify_modular(md)
    assert not rep["verlinde_integrality"].passed
    assert rep["verlinde_integrality"].witness is not None
    with pytest.raises(VerificationError):
        verlinde_fusion(md)


def test_malformed_json_is_an_input_error():
    with pytest.raises(InputError):
        ModularData.from_dict({"S": [[1]]})
    with pytest.raises(InputError):
        ModularData.from_dict({"S": [[1, 1], [1]], "T": [1, 1]})


def test_verlinde_of_printed_data_is_the_second_ring():
    md = printed()
    ring = verlinde_fusion(md)
    assert validate_fusion_ring(ring).valid
    assert canonical_key(ring) == canonical_key(fixtures.ring36("ii"))
    assert canonical_key(ring) != canonical_key(fixtures.ring36("i"))
    assert twist_equation_check(md, ring) < 1e-9


def test_twist_equation_detects_wrong_ring():
    md = printed()
    assert twist_equation_check(md, fixtures.ring36("i")) > 1e-3


def test_lattice_of_printed_ring():
    ring = fixtures.ring36("ii")
    lattice = fusion_subcategory_lattice(ring)
    assert [b.indices for b in lattice] == [(0,), (0, 1, 2), (0, 1, 2, 3), tuple(range(10))]
    with pytest.raises(CapacityError):
        fusion_subcategory_lattice(ring, max_rank=5)


def test_centralizers_in_printed_data():
    md = printed()
    assert centralizer(md, [0, 1, 2]).indices == (0, 1, 2, 3)
    assert centralizer(md, [0, 1, 2, 3]).indices == (0, 1, 2)
    assert centralizer(md, [0]).indices == tuple(range(10))
    with pytest.raises(InputError):
        centralizer(md, [0, 3])


def test_printed_data_has_no_certificate():
    res = group_theoretical_certificate(printed())
    assert not res.found
    assert res.lattice_size == 4
    assert [b.indices for b in res.symmetric] == [(0,), (0, 1, 2)]


def test_toric_code_certificate_is_lagrangian():
    md = ModularData.from_dict(fixtures.load_json("toric_code.json"))
    res = group_theoretical_certificate(md)
    assert res.found
    cert = res.certificate
    assert cert.tannakian_candidate and cert.lagrangian and len(cert.L) == 2
    assert cert.L == cert.L_prime


def test_metric_group_checks():
    good = MetricGroup.from_coefficients((3,), (2,))
    assert good.check().valid
    deg = MetricGroup.from_coefficients((4,), (2,))       # q(x) = x^2/4 has b(2, .) = 1
    rep = deg.check()
    assert not rep["nondegenerate"].passed and rep["nondegenerate"].witness == (2,)
    with pytest.raises(VerificationError):
        metric_group_data(deg)
    with pytest.raises(InputError):
        MetricGroup.from_coefficients((3,), (1,))


def test_semion_like_form_on_z2():
    mg = MetricGroup((2,), (Fraction(0), Fraction(1, 4)))
    md = metric_group_data(mg)
    rep = verify_modular(md)
    assert rep.valid
    assert rep.t_order == 4


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_elliptic_forms_are_anisotropic(p):
    mg = elliptic_form(p)
    assert mg.is_anisotropic()
    assert mg.nondegenerate
    # anisotropic on Z_p^2 means only the zero element has q = 1
    zeros = [a for a in range(mg.size) if mg.exponents[a] == 0]
    assert zeros == [0]
    assert verify_modular(metric_group_data(mg)).valid


def _partitions(k):
    if k == 0:
        return 1
    table = [1] + [0] * k
    for part in range(1, k + 1):
        for s in range(part, k + 1):
            table[s] += table[s - part]
    return table[k]


def _abelian_count(n):
    count, p = 1, 2
    while n > 1:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        count *= _partitions(e)
        p += 1
    return count


@pytest.mark.parametrize("n", range(1, 65))
def test_abelian_group_types_count(n):
    types = abelian_group_types(n)
    assert len(types) == _abelian_count(n)
    for t in types:
        assert int(np.prod(t)) == n
        assert all(b % a == 0 for a, b in zip(t, t[1:]))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2,), (3,), (4,), (2, 2), (5,), (6,), (2, 4), (3, 3)]),
       st.integers(0, 2 ** 32 - 1))
def test_metric_group_bilinear_form_is_symmetric(orders, seed):
    mg = random_metric_group(orders, np.random.default_rng(seed))
    for a, b in itertools.product(range(mg.size), repeat=2):
        assert mg.bilinear(a, b) == mg.bilinear(b, a)
    assert SubBasis.of(range(mg.size)).indices == tuple(range(mg.size))

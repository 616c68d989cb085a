import pytest

from ringoid.addcat import AddCat, AddFunctor, zero_category
from ringoid.kzero import (endomorphism_ring, jacobson_radical, k0_compare, k0_enumeration, k0_induced_map,
                           k0_localization_check, k0_nilinvariance_check, k0_radical_oracle)
from ringoid.rings import RingHom, product_ring, reduction, upper_triangular, zmod
from ringoid.sqzero import build_square_zero, reduced_bimodule, regular_bimodule
from ringoid.zlin import FpAbGroup
from ringoid.zoo import cyclic_group_category, fixture_categories, z4_z2

# (K0 rank, order of the radical of the endomorphism ring), checked by hand:
# local rings give rank 1, semisimple blocks add one each
FIXTURE_K0 = {
    "Z/4": (1, 2),
    "Z/6": (2, 1),
    "F2xF2": (2, 1),
    "T2(F2)": (2, 2),
    "M2(F2)": (1, 1),
    "F2[C2]": (1, 2),
    "F2[C3]": (2, 1),
    "A": (2, 8),
    "Ab{2,3,4}": (3, 8),
    "T2(F2)[e11,e22]": (2, 2),
}


def test_endomorphism_ring_examples():
    assert endomorphism_ring(zmod(4).as_category()).group == FpAbGroup.cyclic(4)
    end = endomorphism_ring(z4_z2())
    assert end.order() == 32
    assert end.group == FpAbGroup((2, 2, 2, 4))
    assert end.validate()


def test_endomorphism_ring_of_disjoint_objects_is_a_product():
    c = cyclic_group_category({"Z2": 2, "Z3": 3})
    assert endomorphism_ring(c).order() == product_ring(zmod(2), zmod(3)).order()


def test_endomorphism_ring_of_empty_category_is_zero():
    assert endomorphism_ring(AddCat([], {}, {}, {})).order() == 1


def test_k0_examples():
    assert k0_enumeration(zmod(4).as_category()).group == FpAbGroup.free(1)
    assert k0_enumeration(zero_category()).group.is_trivial()
    assert k0_enumeration(product_ring(zmod(2), zmod(2)).as_category()).group == FpAbGroup.free(2)


def test_radical_oracle_examples():
    rep = k0_radical_oracle(zmod(4))
    assert rep.radical_order == 2 and rep.k0.group == FpAbGroup.free(1)
    assert k0_radical_oracle(zmod(2)).k0.group == FpAbGroup.free(1)
    rep = k0_radical_oracle(upper_triangular(2, 2))
    assert rep.radical_order == 2 and rep.k0.group == FpAbGroup.free(2)
    assert sorted(jacobson_radical(upper_triangular(2, 2))) == [(0, 0, 0), (0, 1, 0)]


@pytest.mark.parametrize("name", sorted(FIXTURE_K0))
def test_fixture_k0_values(name):
    e, o, agree = k0_compare(fixture_categories()[name])
    rank, rad = FIXTURE_K0[name]
    assert agree
    assert e.group == FpAbGroup.free(rank)
    assert o.radical_order == rad


def test_matrix_ring_class_is_twice_the_simple():
    k = k0_enumeration(fixture_categories()["M2(F2)"])
    assert k.classes["R"] == (2,)


def test_induced_map_of_identity():
    a = z4_z2()
    m, ks, kt = k0_induced_map(AddFunctor.identity(a))
    assert m.is_bijective()
    assert all(m(v) == v for v in ks.group.gens())


def test_induced_map_of_reduction():
    m, _, _ = k0_induced_map(reduction(4, 2).as_functor())
    assert m.is_bijective()


def test_induced_map_of_diagonal():
    f = RingHom.from_basis_images(zmod(2), product_ring(zmod(2), zmod(2)), [(1, 1)])
    m, ks, kt = k0_induced_map(f.as_functor())
    assert ks.group == FpAbGroup.free(1) and kt.group == FpAbGroup.free(2)
    assert m(ks.classes["*"]) == kt.classes["*"] == (1, 1)


def test_nil_invariance_examples():
    assert k0_nilinvariance_check(reduction(4, 2).as_functor()).ok
    assert k0_nilinvariance_check(AddFunctor.identity(z4_z2())).ok
    a = z4_z2()
    for m in (regular_bimodule(a), reduced_bimodule(a, 2)):
        s = build_square_zero(a, m)
        assert k0_nilinvariance_check(s.projection).ok


def test_localization_examples():
    a = z4_z2()
    v = k0_localization_check([], a)
    assert v.ok
    v = k0_localization_check(list(a.objects), a)
    assert v.ok and v.groups[2].is_trivial()
    v = k0_localization_check(["Z2"], a)
    assert v.ok
    assert [str(g) for g in v.groups] == ["Z", "Z + Z", "Z"]

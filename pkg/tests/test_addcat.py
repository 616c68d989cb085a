import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from ringoid.addcat import (AddCat, AddFunctor, direct_sum, is_isomorphism, random_morphism, validate_category,
                            zero_category)
from ringoid.rings import integers, matrix_ring, product_ring, reduction, upper_triangular, zmod
from ringoid.zlin import FpAbGroup
from ringoid.zoo import cyclic_group_category, fixture_categories, z4_z2


def test_one_object_ring_is_valid():
    assert validate_category(zmod(4).as_category())


def test_two_object_fixture_is_valid():
    a = z4_z2()
    assert validate_category(a)
    assert [str(a.hom(x, y)) for x, y in product(a.objects, repeat=2)] == ["Z/4", "Z/2", "Z/2", "Z/2"]


def test_broken_associativity_reports_witness():
    # generators e (identity), a, b of hom(*, *) = (Z/2)^3 with a.a = b, a.b = e, b.a = b.b = 0
    e, a, b, z = (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0)
    table = [[e, a, b], [a, b, e], [b, z, z]]
    c = AddCat(["*"], {("*", "*"): FpAbGroup((2, 2, 2))}, {("*", "*", "*"): table}, {"*": e})
    rep = validate_category(c)
    assert not rep
    assert rep.axiom == "associativity"
    assert rep.witness is not None


def test_broken_unit_is_caught():
    c = AddCat(["*"], {("*", "*"): FpAbGroup((4,))}, {("*", "*", "*"): [[(2,)]]}, {"*": (1,)})
    assert validate_category(c).axiom == "unit"


def test_relations_must_be_respected():
    # x -> y -> x pairs two elements of order 2, so the value 1 in Z/4 is not bilinear
    c = AddCat(["x", "y"], {("x", "x"): FpAbGroup((4,)), ("x", "y"): FpAbGroup((2,)),
                            ("y", "x"): FpAbGroup((2,)), ("y", "y"): FpAbGroup((2,))},
               {("x", "x", "x"): [[(1,)]], ("y", "y", "y"): [[(1,)]], ("x", "y", "x"): [[(1,)]]},
               {"x": (1,), "y": (1,)})
    assert not validate_category(c)


def test_compose_examples():
    z = integers().as_category()
    assert z.compose(z.single("*", "*", (2,)), z.single("*", "*", (3,))) == z.single("*", "*", (6,))
    a = z4_z2()
    incl = a.single("Z2", "Z4", (1,))
    proj = a.single("Z4", "Z2", (1,))
    assert a.compose(incl, proj) == a.single("Z4", "Z4", (2,))
    f = random_morphism(a, ("Z4", "Z2"), ("Z2", "Z2", "Z4"), random.Random(1))
    assert a.compose(a.identity(f.target), f) == f == a.compose(f, a.identity(f.source))


def test_compose_dimension_mismatch():
    a = z4_z2()
    with pytest.raises(ValueError):
        a.compose(a.identity(("Z4",)), a.identity(("Z2",)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_matrix_composition_is_associative(seed):
    rng = random.Random(seed)
    a = z4_z2()
    objs = [tuple(rng.choice(a.objects) for _ in range(rng.randint(0, 3))) for _ in range(4)]
    f, g, h = (random_morphism(a, objs[i], objs[i + 1], rng) for i in range(3))
    assert a.compose(h, a.compose(g, f)) == a.compose(a.compose(h, g), f)


def test_direct_sum_with_zero():
    a = z4_z2()
    s, (i1, _), (p1, _) = direct_sum(a, ("Z4",), ())
    assert s == ("Z4",)
    assert i1 == a.identity(("Z4",)) == p1


def test_biproduct_identities():
    a = z4_z2()
    X, Y = ("Z4", "Z2"), ("Z2",)
    s, inj, proj = direct_sum(a, X, Y)
    for i, j in product(range(2), repeat=2):
        c = a.compose(proj[i], inj[j])
        expect = a.identity(inj[j].source) if i == j else a.zero(inj[j].source, proj[i].target)
        assert c == expect
    total = a.add(a.compose(inj[0], proj[0]), a.compose(inj[1], proj[1]))
    assert total == a.identity(s)


def test_swap_squares_to_identity():
    a = z4_z2()
    X, Y = ("Z4",), ("Z2",)
    swap = a.morphism(X + Y, Y + X, [[(0,), (1,)], [(1,), (0,)]])
    back = a.morphism(Y + X, X + Y, [[(0,), (1,)], [(1,), (0,)]])
    assert a.compose(back, swap) == a.identity(X + Y)
    assert is_isomorphism(a, swap)


def test_end_of_z2_squared_has_order_16():
    a = z4_z2()
    assert a.hom_order(("Z2", "Z2"), ("Z2", "Z2")) == 16
    assert len(list(a.hom_elements(("Z2", "Z2"), ("Z2", "Z2")))) == 16


def test_isomorphism_examples():
    r = zmod(4).as_category()
    ident = r.identity(("*",))
    dec = is_isomorphism(r, ident)
    assert dec and dec.inverse == ident
    assert not is_isomorphism(r, r.single("*", "*", (2,)))
    dec = is_isomorphism(r, r.single("*", "*", (3,)))
    assert dec and dec.inverse == r.single("*", "*", (3,))


def test_isomorphism_over_z_uses_determinant():
    z = integers().as_category()
    m = z.morphism(("*", "*"), ("*", "*"), [[(2,), (1,)], [(1,), (1,)]])
    dec = is_isomorphism(z, m)
    assert dec and z.compose(dec.inverse, m) == z.identity(("*", "*"))
    assert not is_isomorphism(z, z.morphism(("*", "*"), ("*", "*"), [[(2,), (0,)], [(0,), (1,)]]))


def test_isomorphism_between_different_objects():
    # Z/2 + Z/3 is isomorphic to Z/6
    a = cyclic_group_category({"Z2": 2, "Z3": 3, "Z6": 6})
    assert validate_category(a)
    f = a.morphism(("Z2", "Z3"), ("Z6",), [[(1,), (1,)]])
    dec = is_isomorphism(a, f)
    assert dec
    assert a.compose(f, dec.inverse) == a.identity(("Z6",))


def test_zero_category():
    z = zero_category()
    assert validate_category(z)
    assert z.hom("0", "0").is_trivial()


def test_fixture_categories_validate():
    for name, c in fixture_categories().items():
        assert validate_category(c), name


def test_ring_examples():
    assert validate_category(matrix_ring(2, 2).as_category())
    assert upper_triangular(2, 2).order() == 8
    assert product_ring(zmod(2), zmod(3)).order() == 6
    assert zmod(1).order() == 1


def test_reduction_functor_validates():
    f = reduction(8, 2).as_functor()
    assert f.validate()
    assert f.map_elem("*", "*", (5,)) == (1,)


def test_functor_must_preserve_identities():
    src, tgt = zmod(4).as_category(), zmod(2).as_category()
    bad = AddFunctor.from_images(src, tgt, {"*": "*"}, {("*", "*"): [(0,)]})
    assert not bad.validate()


def test_functor_lifts_morphisms():
    f = reduction(4, 2).as_functor()
    g = f.target.single("*", "*", (1,))
    lift = f.lift_morphism(("*",), ("*",), g)
    assert lift is not None and f.map_morphism(lift) == g


def test_full_subcategory_and_inclusion():
    a = z4_z2()
    b = a.full_subcategory(["Z2"])
    assert b.objects == ("Z2",)
    assert a.inclusion_of(b).validate()

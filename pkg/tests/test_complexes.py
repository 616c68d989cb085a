import random

import pytest
from hypothesis import given, settings, strategies as st

from ringoid.complexes import (STUPID, BoundedComplex, ChainMap, WeightWindow, check_weight_axioms, compose_maps,
                               cone, cone_of_identity, direct_sum, identity_map, kb_hom, kb_hom_data,
                               random_complex, shift, single, stupid_truncation, subtract_maps, two_term,
                               weight_complex)
from ringoid.rings import integers, zmod
from ringoid.zlin import FpAbGroup
from ringoid.zoo import z4_z2

Z = integers().as_category()


def times(n):
    return Z.single("*", "*", (n,))


def test_hom_between_singles_over_z():
    assert kb_hom(single(Z, "*"), single(Z, "*")) == FpAbGroup.free(1)
    assert kb_hom(single(Z, "*"), single(Z, "*", 1)).is_trivial()


def test_cone_of_identity_is_contractible():
    x = cone_of_identity(Z, "*")
    assert x.is_valid()
    assert x.support() == [0, 1]
    assert kb_hom(x, x).is_trivial()
    data = kb_hom_data(x, x)
    assert data.is_null_homotopic(identity_map(x))


def test_low_to_high_weights_vanish():
    x = two_term(Z, times(2), 0)
    y = two_term(Z, times(3), 2)
    assert kb_hom(x, y).is_trivial()


def test_two_term_homotopy_classes():
    # (Z -2-> Z) is Z/2 in degree 0; its endomorphisms up to homotopy are Z/2
    x = two_term(Z, times(2), 1)
    assert kb_hom(x, x) == FpAbGroup.cyclic(2)
    a = z4_z2()
    y = two_term(a, a.single("Z4", "Z4", (2,)), 1)
    assert kb_hom(y, y) == FpAbGroup((2, 2))


def test_shift_signs_and_degrees():
    x = two_term(Z, times(2), 1)
    s = shift(x, 1)
    assert s.support() == [1, 2]
    assert s.diff(2) == times(-2)
    assert shift(shift(x, 1), -1) == x


def test_cone_differential_squares_to_zero():
    a = z4_z2()
    rng = random.Random(3)
    for _ in range(20):
        x = random_complex(a, rng)
        f = identity_map(x)
        c = cone(f)
        assert c.is_valid()
        assert kb_hom(c, c).is_trivial()


def test_chain_map_check():
    x = two_term(Z, times(2), 1)
    bad = ChainMap(x, x, {1: Z.identity(("*",))})
    assert not bad.is_chain_map()
    assert identity_map(x).is_chain_map()


def test_class_and_representative_round_trip():
    x = two_term(Z, times(2), 1)
    data = kb_hom_data(x, x)
    ident = identity_map(x)
    cls = data.class_of(ident)
    rep = data.representative(cls)
    assert rep.is_chain_map()
    assert data.is_null_homotopic(subtract_maps(rep, ident))
    twice = compose_maps(ident, ident)
    assert data.class_of(twice) == cls


def test_truncation_of_two_term_complex():
    x = two_term(Z, times(2), 1)
    t = stupid_truncation(x, 0)
    assert t.low.terms == {0: ("*",)}
    assert t.high.terms == {1: ("*",)}
    assert t.is_degreewise_split_exact()


def test_truncation_of_concentrated_complex():
    t = stupid_truncation(single(Z, "*"), 0)
    assert t.high.is_zero()
    assert t.is_degreewise_split_exact()


def test_truncation_of_three_term_complex():
    x = BoundedComplex(Z, {2: ("*",), 1: ("*",), 0: ("*",)}, {2: times(2), 1: times(0)})
    assert x.is_valid()
    t = stupid_truncation(x, 1)
    assert t.low.support() == [0, 1]
    assert t.high.support() == [2]
    assert t.is_degreewise_split_exact()


def test_weight_axioms_over_z4():
    r = zmod(4).as_category()
    rng = random.Random(0)
    sample = [random_complex(r, rng) for _ in range(15)]
    rep = check_weight_axioms(r, sample, STUPID)
    assert rep.ok, rep.failure
    assert rep.checked["orthogonality"] > 0


def test_window_with_everything_nonnegative_fails():
    r = zmod(4).as_category()
    sample = [single(r, "*", 0), single(r, "*", 1)]
    rep = check_weight_axioms(r, sample, WeightWindow(None, 0))
    assert not rep.ok
    assert rep.failure == "orthogonality"
    assert rep.witness is not None


def test_two_term_complexes_over_z():
    sample = [two_term(Z, times(n), d) for n in (0, 1, 2, 3, 6) for d in (0, 1, 2)]
    assert check_weight_axioms(Z, sample).ok


def test_weight_complex_of_zero():
    x = BoundedComplex(Z, {})
    assert weight_complex(x).complex.is_zero()


def test_weight_complex_fixes_reduced_complexes():
    x = two_term(Z, times(2), 1)
    res = weight_complex(x)
    assert res.complex == x and res.eliminated == 0


def test_weight_complex_removes_contractible_summands():
    a = z4_z2()
    x = two_term(a, a.single("Z4", "Z2", (1,)), 1)
    padded = direct_sum(x, cone_of_identity(a, ("Z4", "Z2"), 0))
    res = weight_complex(padded)
    assert res.eliminated == 2
    assert res.complex.terms == x.terms
    for m in (res.to_reduced, res.from_reduced):
        assert m.is_chain_map()
    there = compose_maps(res.from_reduced, res.to_reduced)
    data = kb_hom_data(padded, padded)
    assert data.is_null_homotopic(subtract_maps(there, identity_map(padded)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_weight_complex_is_homotopy_equivalence(seed):
    a = z4_z2()
    x = random_complex(a, random.Random(seed), degrees=(0, 1, 2, 3))
    res = weight_complex(x)
    back = compose_maps(res.to_reduced, res.from_reduced)
    y = res.complex
    assert kb_hom_data(y, y).is_null_homotopic(subtract_maps(back, identity_map(y)))
    there = compose_maps(res.from_reduced, res.to_reduced)
    assert kb_hom_data(x, x).is_null_homotopic(subtract_maps(there, identity_map(x)))


def test_shape_mismatch_is_rejected():
    with pytest.raises(ValueError):
        BoundedComplex(Z, {1: ("*",)}, {1: Z.single("*", "*", (1,))})

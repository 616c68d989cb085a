from itertools import product
from math import gcd, prod

import pytest
from hypothesis import given, settings, strategies as st

from ringoid.zlin import (AbHom, FpAbGroup, IntMatrix, cokernel_presentation, direct_sum, group_tensor, kernel,
                          present, same_subgroup, smith_normal_form, solve, subgroup_from_generators,
                          subquotient, tensor_pairing)

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-30, 30), min_size=c, max_size=c), min_size=r, max_size=r)))


def check_snf(m: IntMatrix):
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert abs(u.det()) == 1 and abs(v.det()) == 1
    assert d.is_diagonal()
    diag = d.diagonal()
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert diag[:len(nz)] == tuple(nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return d


def test_snf_examples():
    assert check_snf(IntMatrix.diagonal_matrix([2, 3])).diagonal() == (1, 6)
    assert check_snf(IntMatrix.from_rows([[0]])).diagonal() == (0,)
    assert check_snf(IntMatrix.from_rows([[4]])).diagonal() == (4,)
    assert check_snf(IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])).diagonal() == (2, 6, 12)


def test_snf_empty_and_rectangular():
    check_snf(IntMatrix.zeros(0, 3))
    check_snf(IntMatrix.zeros(3, 0))
    assert check_snf(IntMatrix.from_rows([[6, 4, 2]])).diagonal() == (2,)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_properties(rows):
    check_snf(IntMatrix.from_rows(rows))


@settings(max_examples=100, deadline=None)
@given(matrices, st.data())
def test_solve_finds_preimages(rows, data):
    a = IntMatrix.from_rows(rows)
    x = data.draw(st.lists(st.integers(-9, 9), min_size=a.cols, max_size=a.cols))
    b = a @ x
    sol = solve(a, b)
    assert sol is not None and a @ sol == b


def test_solve_reports_absence():
    assert solve(IntMatrix.from_rows([[2]]), [1]) is None
    (x,) = solve(IntMatrix.from_rows([[2]]), [1], moduli=[3])
    assert (2 * x) % 3 == 1


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_kernel_vectors_are_killed(rows):
    a = IntMatrix.from_rows(rows)
    for k in kernel(a):
        assert not any(a @ k)


def test_canonical_form_is_enforced():
    with pytest.raises(ValueError):
        FpAbGroup((4, 2))
    with pytest.raises(ValueError):
        FpAbGroup((0, 2))
    with pytest.raises(ValueError):
        FpAbGroup((1,))
    assert FpAbGroup.from_moduli([4, 2, 3]) == FpAbGroup((2, 12))
    assert str(FpAbGroup((2, 0))) == "Z/2 + Z"


def test_cokernel_examples():
    z = FpAbGroup.free(1)
    two = AbHom(z, z, IntMatrix.from_rows([[2]]))
    assert cokernel_presentation(two)[0] == FpAbGroup.cyclic(2)
    assert cokernel_presentation(AbHom.zero(FpAbGroup.trivial(), z))[0] == z
    z2 = FpAbGroup.free(2)
    g, proj = cokernel_presentation(AbHom(z2, z2, IntMatrix.diagonal_matrix([2, 3])))
    assert g == FpAbGroup.cyclic(6)
    assert proj.is_surjective()


def test_subgroup_examples():
    assert subgroup_from_generators(FpAbGroup.cyclic(4), [(2,)])[0] == FpAbGroup.cyclic(2)
    z2 = FpAbGroup.free(2)
    sub, inc = subgroup_from_generators(z2, [(2, 0), (0, 2)])
    assert sub == z2
    assert cokernel_presentation(inc)[0].order() == 4
    assert subgroup_from_generators(FpAbGroup.cyclic(6), [])[0].is_trivial()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, 6, 8, 9]), min_size=1, max_size=3), st.data())
def test_subgroup_index_formula(moduli, data):
    g = FpAbGroup.from_moduli(moduli)
    gens = data.draw(st.lists(st.lists(st.integers(0, 20), min_size=g.ngens, max_size=g.ngens), max_size=3))
    sub, inc = subgroup_from_generators(g, gens)
    quot, _ = cokernel_presentation(inc)
    assert sub.order() * quot.order() == g.order()
    assert inc.is_injective()
    assert all(inc.preimage(g.reduce(v)) is not None for v in gens)


def bilinear_oracle(m: int, n: int) -> int:
    """Number of bilinear maps Z/m x Z/n -> Q/Z, each fixed by b(1, 1) in (1/mn)Z/Z."""
    return sum(1 for t in range(m * n) if (t * m) % (m * n) == 0 and (t * n) % (m * n) == 0)


def test_tensor_examples():
    g = FpAbGroup((2, 6, 0))
    assert group_tensor(FpAbGroup.free(1), g) == g
    assert group_tensor(FpAbGroup.cyclic(4), FpAbGroup.cyclic(6)) == FpAbGroup.cyclic(2)
    assert group_tensor(FpAbGroup.cyclic(2), FpAbGroup.cyclic(3)).is_trivial()


@pytest.mark.parametrize("m,n", list(product([2, 3, 4, 6, 8, 12], repeat=2)))
def test_tensor_of_cyclics_matches_bilinear_count(m, n):
    t = group_tensor(FpAbGroup.cyclic(m), FpAbGroup.cyclic(n))
    assert t.order() == gcd(m, n) == bilinear_oracle(m, n)


def test_tensor_pairing_is_bilinear():
    a, b = FpAbGroup((2, 4)), FpAbGroup((6,))
    t, pair = tensor_pairing(a, b)
    assert t == group_tensor(a, b) == FpAbGroup((2, 2))
    for x, x2 in product(list(a.elements())[:4], repeat=2):
        for y in b.elements():
            assert pair(a.add(x, x2), y) == t.add(pair(x, y), pair(x2, y))


def test_direct_sum_identities():
    s, inj, proj = direct_sum(FpAbGroup.cyclic(2), FpAbGroup.cyclic(3))
    assert s == FpAbGroup.cyclic(6)
    for i, j in product(range(2), repeat=2):
        c = proj[i].compose(inj[j])
        assert c == (AbHom.identity(inj[j].source) if i == j else AbHom.zero(inj[j].source, proj[i].target))
    total = inj[0].compose(proj[0]) + inj[1].compose(proj[1])
    assert total == AbHom.identity(s)


@settings(max_examples=40, deadline=None)
@given(st.permutations([2, 4, 3, 9, 5]))
def test_canonicality_ignores_order(moduli):
    assert FpAbGroup.from_moduli(moduli) == FpAbGroup((6, 180))
    assert FpAbGroup.from_moduli(moduli).order() == prod(moduli)


def test_presentation_canon_and_lift():
    p = present(2, [(2, 4), (0, 6)])
    assert p.group.order() == 12
    for v in product(range(-3, 4), repeat=2):
        c = p.canon(v)
        assert p.canon(p.lift(c)) == c


def test_same_subgroup():
    g = FpAbGroup.cyclic(12)
    assert same_subgroup(g, [(2,)], [(10,)])
    assert not same_subgroup(g, [(2,)], [(4,)])


def test_subquotient_of_z():
    sq = subquotient([(2,)], [(6,)], [0])
    assert sq.group == FpAbGroup.cyclic(3)
    assert sq.project((4,)) is not None
    assert sq.project((3,)) is None

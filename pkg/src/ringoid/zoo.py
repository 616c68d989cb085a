"""Fixture categories, functors and random generators used by tests and the CLI."""

from __future__ import annotations

import random
from itertools import product
from math import gcd
from typing import Mapping

from .addcat import AddCat, AddFunctor, validate_category
from .ideals import Ideal, generated_ideal
from .rings import (RingHom, RingPresentation, category_from_idempotents, group_ring_cyclic, matrix_ring,
                    poly_quotient, product_ring, reduction, truncated_poly, upper_triangular, zmod)
from .zlin import FpAbGroup


def cyclic_group_category(orders: Mapping[str, int], name: str = "") -> AddCat:
    """Full subcategory of abelian groups on cyclic groups ``Z/n`` (``n = 0`` is Z).

    ``hom(Z/a, Z/b)`` is cyclic, generated by ``1 -> b / gcd(a, b)``.
    """
    labels = list(orders)

    def gen_value(a, b):
        """Image of 1 under the generator of hom(Z/a, Z/b), or None if hom is 0."""
        if b == 0:
            return 1 if a == 0 else None
        g = gcd(a, b)
        return None if g == 1 else b // g

    hom = {}
    for x, y in product(labels, repeat=2):
        a, b = orders[x], orders[y]
        if gen_value(a, b) is not None:
            hom[x, y] = FpAbGroup.cyclic(gcd(a, b) if b else 0)

    def comp(x, y, z, g, f):
        a, b, c = orders[x], orders[y], orders[z]
        v = g[0] * gen_value(b, c) * f[0] * gen_value(a, b)
        if c:
            v %= c
        return (v // gen_value(a, c),)

    identity = {x: (1,) for x in labels if (x, x) in hom}
    return AddCat.from_composition(labels, hom, comp, identity, name=name or "Ab{" + ",".join(labels) + "}")


def z4_z2() -> AddCat:
    return cyclic_group_category({"Z4": 4, "Z2": 2}, name="A")


def ring_idempotents(ring: RingPresentation) -> list[tuple[int, ...]]:
    return [e for e in ring.elements() if any(e) and ring.mul(e, e) == e]


def small_rings(max_order: int = 64) -> list[RingPresentation]:
    """A fixed list of finite rings of order at most ``max_order``."""
    cands = [zmod(n) for n in (2, 3, 4, 5, 6, 8, 9, 12, 16, 27, 32, 64)]
    cands += [truncated_poly(2, 2), truncated_poly(2, 3), truncated_poly(3, 2), truncated_poly(4, 2),
              truncated_poly(2, 4), truncated_poly(2, 5), truncated_poly(2, 6), truncated_poly(4, 3)]
    cands += [upper_triangular(2, 2), upper_triangular(2, 3), upper_triangular(2, 4), upper_triangular(3, 2)]
    cands += [matrix_ring(2, 2)]
    cands += [group_ring_cyclic(2, 2), group_ring_cyclic(2, 3), group_ring_cyclic(3, 2), group_ring_cyclic(2, 4),
              group_ring_cyclic(3, 3), group_ring_cyclic(4, 2), group_ring_cyclic(2, 5), group_ring_cyclic(2, 6)]
    cands += [poly_quotient(2, [1, 1], name="F4"), poly_quotient(2, [1, 1, 0], name="F8"),
              poly_quotient(3, [1, 0], name="F9")]
    cands += [product_ring(zmod(2), zmod(2)), product_ring(zmod(2), zmod(3)), product_ring(zmod(4), zmod(2)),
              product_ring(zmod(2), truncated_poly(2, 2)), product_ring(zmod(3), upper_triangular(2, 2))]
    return [r for r in cands if r.order() <= max_order]


def random_ring_category(rng: random.Random, max_objects: int = 3, max_order: int = 64) -> AddCat:
    ring = rng.choice(small_rings(max_order))
    ids = ring_idempotents(ring)
    k = rng.randint(1, min(max_objects, len(ids)))
    chosen = rng.sample(ids, k)
    return category_from_idempotents(ring, {f"e{i}": e for i, e in enumerate(chosen)},
                                     name=f"{ring.name}[{k} idem]")


def random_cyclic_category(rng: random.Random, max_objects: int = 3, max_order: int = 64) -> AddCat:
    sizes = [n for n in range(2, max_order + 1)]
    k = rng.randint(1, max_objects)
    orders = {f"C{i}": rng.choice(sizes) for i in range(k)}
    return cyclic_group_category(orders)


def random_category(rng: random.Random, max_objects: int = 3, max_order: int = 64) -> AddCat:
    """A random valid category with at most ``max_objects`` objects and small finite homs."""
    maker = rng.choice([random_ring_category, random_cyclic_category])
    c = maker(rng, max_objects, max_order)
    assert validate_category(c), c
    assert all(c.hom(x, y).order() <= max_order for x in c.objects for y in c.objects)
    return c


# ---------------------------------------------------------------------------
# nilpotent surjections of finite rings


def _poly_truncation(n: int, k: int, j: int) -> RingHom:
    """``Z/n[x]/(x^k) -> Z/n[x]/(x^j)`` for ``j <= k`` (j = 0 not allowed)."""
    src, tgt = truncated_poly(n, k), truncated_poly(n, j)
    imgs = [tuple(int(a == i) for a in range(j)) for i in range(k)]
    return RingHom.from_basis_images(src, tgt, imgs, name=f"{src.name}->{tgt.name}")


def _poly_to_base(n: int, k: int, m: int) -> RingHom:
    """``Z/n[x]/(x^k) -> Z/m``, ``x -> 0``."""
    src = truncated_poly(n, k)
    return RingHom.from_basis_images(src, zmod(m), [(1,)] + [(0,)] * (k - 1), name=f"{src.name}->Z/{m}")


def _triangular_to_diagonal(k: int, n: int, m: int) -> RingHom:
    src = upper_triangular(k, n)
    tgt = zmod(m)
    for _ in range(k - 1):
        tgt = product_ring(zmod(m), tgt)
    idx = [(a, b) for a in range(k) for b in range(a, k)]
    imgs = [tuple(int(a == b == c) for c in range(k)) for a, b in idx]
    return RingHom.from_basis_images(src, tgt, imgs, name=f"{src.name}->diag")


def _augmentation(n: int, m: int, p: int) -> RingHom:
    src = group_ring_cyclic(n, m)
    return RingHom.from_basis_images(src, zmod(p), [(1,)] * m, name=f"{src.name}->Z/{p}")


def _group_ring_reduction(n: int, m: int, p: int) -> RingHom:
    src, tgt = group_ring_cyclic(n, m), group_ring_cyclic(p, m)
    imgs = [tuple(int(a == i) for a in range(m)) for i in range(m)]
    return RingHom.from_basis_images(src, tgt, imgs, name=f"{src.name}->{tgt.name}")


def _matrix_reduction(k: int, n: int, p: int) -> RingHom:
    src, tgt = matrix_ring(k, n), matrix_ring(k, p)
    size = k * k
    imgs = [tuple(int(a == i) for a in range(size)) for i in range(size)]
    return RingHom.from_basis_images(src, tgt, imgs, name=f"{src.name}->{tgt.name}")


def _product(f: RingHom, g: RingHom) -> RingHom:
    """``f x g``; product rings use the canonical generators of the factors as basis."""
    src, tgt = product_ring(f.source, g.source), product_ring(f.target, g.target)
    nf, ng = f.target.group.ngens, g.target.group.ngens
    imgs = [tuple(f(v)) + (0,) * ng for v in f.source.group.gens()]
    imgs += [(0,) * nf + tuple(g(v)) for v in g.source.group.gens()]
    return RingHom.from_basis_images(src, tgt, imgs, name=f"{f.name} x {g.name}")


def nilpotent_surjections(max_order: int = 256) -> list[RingHom]:
    """Surjective ring maps with nilpotent kernel between rings of order at most ``max_order``."""
    out: list[RingHom] = []
    for p in (2, 3, 5, 7, 11, 13):
        k = 1
        while p ** (k + 1) <= max_order:
            k += 1
        for big in range(2, k + 1):
            for small in range(1, big):
                out.append(reduction(p ** big, p ** small))
    for n, m in ((12, 6), (36, 6), (72, 6), (18, 6), (100, 10), (200, 10), (45, 15), (144, 6)):
        out.append(reduction(n, m))
    for n in (2, 3):
        for k in (2, 3, 4):
            if n ** k <= max_order:
                for j in range(1, k):
                    out.append(_poly_truncation(n, k, j))
                out.append(_poly_to_base(n, k, n))
    out += [_poly_to_base(4, 2, 2), _poly_to_base(4, 3, 2), _poly_to_base(9, 2, 3)]
    out += [_triangular_to_diagonal(2, 2, 2), _triangular_to_diagonal(2, 3, 3), _triangular_to_diagonal(3, 2, 2),
            _triangular_to_diagonal(2, 4, 2), _triangular_to_diagonal(2, 5, 5)]
    out += [_matrix_reduction(2, 4, 2)]
    out += [_augmentation(2, 2, 2), _augmentation(2, 4, 2), _augmentation(3, 3, 3), _augmentation(4, 2, 2),
            _augmentation(2, 8, 2), _augmentation(5, 5, 5)]
    out += [_group_ring_reduction(4, 2, 2), _group_ring_reduction(4, 3, 2), _group_ring_reduction(9, 2, 3)]
    out += [_product(reduction(4, 2), reduction(9, 3)), _product(reduction(8, 2), _poly_to_base(2, 2, 2))]
    return [f for f in out if f.source.order() <= max_order and f.target.order() <= max_order]


# ---------------------------------------------------------------------------
# named fixtures


def fixture_categories() -> dict[str, AddCat]:
    t2 = upper_triangular(2, 2)
    return {
        "Z/4": zmod(4).as_category("R"),
        "Z/6": zmod(6).as_category("R"),
        "F2xF2": product_ring(zmod(2), zmod(2)).as_category("R"),
        "T2(F2)": t2.as_category("R"),
        "M2(F2)": matrix_ring(2, 2).as_category("R"),
        "F2[C2]": group_ring_cyclic(2, 2).as_category("R"),
        "F2[C3]": group_ring_cyclic(2, 3).as_category("R"),
        "A": z4_z2(),
        "Ab{2,3,4}": cyclic_group_category({"Z2": 2, "Z3": 3, "Z4": 4}),
        "T2(F2)[e11,e22]": category_from_idempotents(t2, {"P1": (1, 0, 0), "P2": (0, 0, 1)}),
    }


def fixture_extensions() -> dict[str, AddFunctor]:
    """Named functors that are nilpotent extensions."""
    out = {f.name: f.as_functor() for f in (reduction(4, 2), reduction(8, 2), reduction(9, 3),
                                             _poly_to_base(2, 2, 2), _triangular_to_diagonal(2, 2, 2),
                                             _augmentation(2, 2, 2), _matrix_reduction(2, 4, 2))}
    a = z4_z2()
    out["id(A)"] = AddFunctor.identity(a)
    return out


# ---------------------------------------------------------------------------
# square-zero instances


def two_sided_ideals(a: AddCat) -> list[Ideal]:
    """All two-sided ideals of a one-object category with finite endomorphisms."""
    (x,) = a.objects
    principal: list[Ideal] = []
    for v in a.hom(x, x).elements():
        i = generated_ideal(a, {(x, x): [v]})
        if not any(i == j for j in principal):
            principal.append(i)
    found = list(principal)
    frontier = list(principal)
    while frontier:
        nxt = []
        for i in frontier:
            for p in principal:
                s = Ideal(a, {(x, x): i.gens[x, x] + p.gens[x, x]})
                if not any(s == j for j in found):
                    found.append(s)
                    nxt.append(s)
        frontier = nxt
    return found


def square_zero_instances(max_base: int = 16, max_bimodule: int = 16):
    """``(base category, bimodule)`` over every small ring of order at most ``max_base``.

    Bimodules are the zero bimodule, every two-sided ideal, every quotient by a
    two-sided ideal, and direct sums of two of these, up to order ``max_bimodule``.
    """
    from .sqzero import direct_sum_bimodule, ideal_bimodule, quotient_bimodule, zero_bimodule

    for ring in small_rings(max_base):
        a = ring.as_category("*")
        blocks = []
        for i in two_sided_ideals(a):
            for m in (ideal_bimodule(i), quotient_bimodule(i)):
                if not m.is_zero() and m.order() <= max_bimodule:
                    blocks.append(m)
        yield a, zero_bimodule(a)
        for m in blocks:
            yield a, m
        for k, m1 in enumerate(blocks):
            for m2 in blocks[k:]:
                if m1.order() * m2.order() <= max_bimodule:
                    yield a, direct_sum_bimodule(m1, m2)

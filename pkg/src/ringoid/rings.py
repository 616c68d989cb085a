"""Rings given by structure constants on a finitely generated additive group.

A ring is the one-object case of an additive category, and this module is the
bridge in both directions: `RingPresentation.as_category` and
`category_from_idempotents` build categories from rings, while
`kzero.endomorphism_ring` goes back.
"""

from __future__ import annotations

from itertools import product
from typing import Callable, Mapping, Sequence

from .addcat import AddCat, AddFunctor, ValidationReport
from .zlin import AbHom, FpAbGroup, IntMatrix, Presentation, Vector, present_moduli, subgroup_from_generators


class RingPresentation:
    """Additive group plus a bilinear multiplication on its generators.

    ``table[i][j]`` is the product ``g_i * g_j`` in canonical coordinates.
    """

    def __init__(self, group: FpAbGroup, table: Sequence[Sequence[Sequence[int]]],
                 unit: Sequence[int], name: str = "", basis: Presentation | None = None):
        self.group = group
        self.table = tuple(tuple(group.reduce(v) for v in row) for row in table)
        self.unit = group.reduce(unit)
        self.name = name
        self.basis = basis
        self._terms = [(i, j, v) for i, row in enumerate(self.table) for j, v in enumerate(row) if any(v)]

    def __repr__(self) -> str:
        return f"RingPresentation({self.name or '?'}: {self.group})"

    @classmethod
    def from_basis(cls, moduli: Sequence[int], mul: Callable[[int, int], Sequence[int]],
                   unit: Sequence[int], name: str = "") -> RingPresentation:
        """Build from a (not necessarily canonical) basis with moduli.

        ``mul(a, b)`` returns the product of basis vectors a and b in basis
        coordinates.
        """
        p = present_moduli(moduli)
        n = len(moduli)
        basis_table = [[tuple(mul(a, b)) for b in range(n)] for a in range(n)]
        lifts = p.from_canon.columns()

        def bmul(u, v):
            acc = [0] * n
            for a in range(n):
                if u[a]:
                    for b in range(n):
                        if v[b]:
                            for k, c in enumerate(basis_table[a][b]):
                                acc[k] += u[a] * v[b] * c
            return acc

        table = [[p.canon(bmul(u, v)) for v in lifts] for u in lifts]
        return cls(p.group, table, p.canon(unit), name=name, basis=p)

    def to_basis(self, x: Sequence[int]) -> Vector:
        return self.basis.lift(x) if self.basis else tuple(x)

    def from_basis_coords(self, v: Sequence[int]) -> Vector:
        return self.basis.canon(v) if self.basis else self.group.reduce(v)

    # arithmetic
    def zero(self) -> Vector:
        return self.group.zero()

    def one(self) -> Vector:
        return self.unit

    def add(self, a, b) -> Vector:
        return self.group.add(a, b)

    def sub(self, a, b) -> Vector:
        return self.group.sub(a, b)

    def neg(self, a) -> Vector:
        return self.group.neg(a)

    def mul(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        acc = [0] * self.group.ngens
        for i, j, v in self._terms:
            c = a[i] * b[j]
            if c:
                for k, x in enumerate(v):
                    acc[k] += c * x
        return self.group.reduce(acc)

    def power(self, a, n: int) -> Vector:
        out = self.unit
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def is_finite(self) -> bool:
        return self.group.is_finite()

    def order(self) -> int | None:
        return self.group.order()

    def elements(self):
        return self.group.elements()

    def left_matrix(self, a: Sequence[int]) -> IntMatrix:
        """Matrix of ``x -> a * x``."""
        return IntMatrix.from_columns([self.mul(a, g) for g in self.group.gens()], self.group.ngens)

    def right_matrix(self, a: Sequence[int]) -> IntMatrix:
        """Matrix of ``x -> x * a``."""
        return IntMatrix.from_columns([self.mul(g, a) for g in self.group.gens()], self.group.ngens)

    def validate(self) -> ValidationReport:
        g = self.group
        gens = g.gens()
        for i, j in product(range(g.ngens), repeat=2):
            v = self.table[i][j]
            for d in (g.moduli[i], g.moduli[j]):
                if d and any(g.scale(d, v)):
                    return ValidationReport(False, "bilinearity", (i, j), "product ignores a relation")
        for i, x in enumerate(gens):
            if self.mul(self.unit, x) != x or self.mul(x, self.unit) != x:
                return ValidationReport(False, "unit", (i,), "unit law fails")
        for i, j, k in product(range(g.ngens), repeat=3):
            a, b, c = gens[i], gens[j], gens[k]
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                return ValidationReport(False, "associativity", (i, j, k), "associativity fails")
        return ValidationReport.passed()

    def as_category(self, label: str = "*") -> AddCat:
        """The one-object additive category (free modules of rank one)."""
        table = [[self.table[i][j] for j in range(self.group.ngens)] for i in range(self.group.ngens)]
        return AddCat([label], {(label, label): self.group}, {(label, label, label): table},
                      {label: self.unit}, name=self.name)


class RingHom:
    """A unital ring homomorphism, as an additive map on canonical coordinates."""

    def __init__(self, source: RingPresentation, target: RingPresentation, additive: AbHom, name: str = ""):
        self.source = source
        self.target = target
        self.additive = additive
        self.name = name

    @classmethod
    def from_basis_images(cls, source: RingPresentation, target: RingPresentation,
                          images: Sequence[Sequence[int]], name: str = "") -> RingHom:
        """Images of the source basis vectors, given in target basis coordinates."""
        imgs = []
        for g in source.group.gens():
            b = source.to_basis(g)
            acc = [0] * len(images[0])
            for coeff, img in zip(b, images):
                for k, v in enumerate(img):
                    acc[k] += coeff * v
            imgs.append(target.from_basis_coords(acc))
        return cls(source, target, AbHom.from_images(source.group, target.group, imgs), name=name)

    def __call__(self, x: Sequence[int]) -> Vector:
        return self.additive(x)

    def validate(self) -> ValidationReport:
        if not self.additive.is_valid():
            return ValidationReport(False, "additive", None, "map does not respect relations")
        if self(self.source.unit) != self.target.unit:
            return ValidationReport(False, "unit", None, "unit is not preserved")
        for i, a in enumerate(self.source.group.gens()):
            for j, b in enumerate(self.source.group.gens()):
                if self(self.source.mul(a, b)) != self.target.mul(self(a), self(b)):
                    return ValidationReport(False, "multiplicativity", (i, j), "product is not preserved")
        return ValidationReport.passed()

    def as_functor(self, source_cat: AddCat | None = None, target_cat: AddCat | None = None,
                   label: str = "*") -> AddFunctor:
        s = source_cat or self.source.as_category(label)
        t = target_cat or self.target.as_category(label)
        (x,), (y,) = s.objects, t.objects
        return AddFunctor(s, t, {x: y}, {(x, x): self.additive}, name=self.name)


# ---------------------------------------------------------------------------
# constructors


def _unit_vector(n, i):
    return tuple(int(k == i) for k in range(n))


def _zname(n: int) -> str:
    return f"Z/{n}" if n else "Z"


def zmod(n: int) -> RingPresentation:
    if n == 1:
        return RingPresentation(FpAbGroup.trivial(), [], [], name="0")
    return RingPresentation.from_basis([n], lambda a, b: (1,), (1,), name=_zname(n))


def integers() -> RingPresentation:
    return zmod(0)


def matrix_ring(k: int, n: int) -> RingPresentation:
    """``M_k(Z/n)``, basis of matrix units ``E_ab`` indexed ``a*k + b``."""
    size = k * k

    def mul(u, v):
        a, b = divmod(u, k)
        c, d = divmod(v, k)
        return _unit_vector(size, a * k + d) if b == c else (0,) * size

    unit = tuple(int(i % (k + 1) == 0) for i in range(size))
    return RingPresentation.from_basis([n] * size, mul, unit, name=f"M{k}({_zname(n)})")


def upper_triangular(k: int, n: int) -> RingPresentation:
    """Upper triangular ``k x k`` matrices over ``Z/n``."""
    idx = [(a, b) for a in range(k) for b in range(a, k)]
    pos = {ab: i for i, ab in enumerate(idx)}
    size = len(idx)

    def mul(u, v):
        (a, b), (c, d) = idx[u], idx[v]
        return _unit_vector(size, pos[a, d]) if b == c else (0,) * size

    unit = tuple(int(a == b) for a, b in idx)
    return RingPresentation.from_basis([n] * size, mul, unit, name=f"T{k}({_zname(n)})")


def poly_quotient(n: int, coeffs: Sequence[int], name: str = "") -> RingPresentation:
    """``Z/n[x] / (f)`` for monic ``f = x^k + c_{k-1} x^{k-1} + ... + c_0``.

    ``coeffs`` lists ``c_0 .. c_{k-1}``.
    """
    k = len(coeffs)

    def reduce_poly(p):
        p = list(p)
        for deg in range(len(p) - 1, k - 1, -1):
            c = p[deg]
            if c:
                p[deg] = 0
                for i, ci in enumerate(coeffs):
                    p[deg - k + i] -= c * ci
        return tuple(p[:k])

    def mul(a, b):
        p = [0] * (2 * k)
        p[a + b] = 1
        return reduce_poly(p)

    return RingPresentation.from_basis([n] * k, mul, _unit_vector(k, 0),
                                       name=name or f"Z/{n}[x]/({list(coeffs)})")


def truncated_poly(n: int, k: int) -> RingPresentation:
    """``Z/n[x] / (x^k)``."""
    return poly_quotient(n, [0] * k, name=f"{_zname(n)}[x]/(x^{k})")


def group_ring_cyclic(n: int, m: int) -> RingPresentation:
    """``Z/n[C_m]``."""
    return RingPresentation.from_basis([n] * m, lambda a, b: _unit_vector(m, (a + b) % m),
                                       _unit_vector(m, 0), name=f"{_zname(n)}[C{m}]")


def product_ring(r: RingPresentation, s: RingPresentation) -> RingPresentation:
    """The direct product ``r x s``."""
    nr, ns = r.group.ngens, s.group.ngens
    moduli = list(r.group.moduli) + list(s.group.moduli)

    def mul(a, b):
        if a < nr and b < nr:
            return tuple(r.table[a][b]) + (0,) * ns
        if a >= nr and b >= nr:
            return (0,) * nr + tuple(s.table[a - nr][b - nr])
        return (0,) * (nr + ns)

    return RingPresentation.from_basis(moduli, mul, tuple(r.unit) + tuple(s.unit),
                                       name=f"{r.name} x {s.name}")


def reduction(n: int, m: int) -> RingHom:
    """``Z/n -> Z/m`` for ``m | n``."""
    if n % m:
        raise ValueError(f"{m} does not divide {n}")
    return RingHom.from_basis_images(zmod(n), zmod(m), [(1,)], name=f"{_zname(n)}->{_zname(m)}")


def category_from_idempotents(ring: RingPresentation, idempotents: Mapping[str, Sequence[int]],
                              name: str = "") -> AddCat:
    """Full subcategory of projective modules ``eR`` on the given idempotents.

    ``hom(e, f) = f R e`` with composition the ring product, so identities are
    the idempotents themselves.
    """
    labels = list(idempotents)
    idem = {x: ring.group.reduce(idempotents[x]) for x in labels}
    for x, e in idem.items():
        if ring.mul(e, e) != e:
            raise ValueError(f"{x} is not idempotent")
    subs: dict[tuple[str, str], AbHom] = {}
    for x in labels:
        for y in labels:
            gens = [ring.mul(idem[y], ring.mul(g, idem[x])) for g in ring.group.gens()]
            _, inc = subgroup_from_generators(ring.group, gens)
            subs[x, y] = inc
    hom = {k: inc.source for k, inc in subs.items()}

    def comp(x, y, z, g, f):
        prod_ = ring.mul(subs[y, z](g), subs[x, y](f))
        return subs[x, z].preimage(prod_)

    identity = {x: subs[x, x].preimage(idem[x]) for x in labels}
    return AddCat.from_composition(labels, hom, comp, identity, name=name or f"{ring.name}[idem]")

"""Bimodules over an additive category and square-zero extensions.

A bimodule ``M`` assigns a group ``M(x, y)`` to each pair of objects, with a
left action of ``hom(y, y')`` and a right action of ``hom(x', x)``, both stored
on generators like composition tables:

* ``left[(x, y, y2)][i][j] = g_i . m_j`` for ``g_i`` in hom(y, y2) and ``m_j`` in M(x, y);
* ``right[(x2, x, y)][i][j] = m_i . f_j`` for ``m_i`` in M(x, y) and ``f_j`` in hom(x2, x).

The square-zero extension has ``hom(x, y) + M(x, y)`` as hom groups and
composes by ``(f2, m2) o (f1, m1) = (f2 f1, f2 . m1 + m2 . f1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Mapping, Sequence

from .addcat import AddCat, AddFunctor, ValidationReport
from .ideals import DEFAULT_MAX_EXPONENT, Ideal, NilpotenceCertificate, check_nilpotent_extension
from .rings import RingHom, RingPresentation
from .zlin import FpAbGroup, Vector, cokernel_presentation, contains_all, direct_sum

Pair = tuple[Vector, Vector]


def _bilinear(table, n_out: int):
    terms = [(i, j, v) for i, row in enumerate(table) for j, v in enumerate(row) if any(v)]

    def apply(a, b):
        acc = [0] * n_out
        for i, j, v in terms:
            c = a[i] * b[j]
            if c:
                for k, x in enumerate(v):
                    acc[k] += c * x
        return acc

    return apply


class Bimodule:
    """A bimodule over ``base``; missing groups are trivial and missing tables zero."""

    def __init__(self, base: AddCat, value: Mapping[tuple[str, str], FpAbGroup],
                 left: Mapping[tuple[str, str, str], Sequence], right: Mapping[tuple[str, str, str], Sequence],
                 name: str = ""):
        self.base = base
        self.name = name
        self._value = {(x, y): value.get((x, y), FpAbGroup.trivial())
                       for x, y in product(base.objects, repeat=2)}
        self.left = {k: tuple(tuple(tuple(v) for v in row) for row in t) for k, t in left.items()}
        self.right = {k: tuple(tuple(tuple(v) for v in row) for row in t) for k, t in right.items()}
        self._lcache: dict = {}
        self._rcache: dict = {}

    def __repr__(self) -> str:
        return f"Bimodule({self.name or '?'} over {self.base.name or '?'})"

    def value(self, x: str, y: str) -> FpAbGroup:
        return self._value[x, y]

    def is_zero(self) -> bool:
        return all(g.is_trivial() for g in self._value.values())

    def order(self) -> int | None:
        total = 1
        for g in self._value.values():
            o = g.order()
            if o is None:
                return None
            total *= o
        return total

    def act_left(self, x: str, y: str, y2: str, g: Sequence[int], m: Sequence[int]) -> Vector:
        """``g . m`` for ``g`` in hom(y, y2), ``m`` in M(x, y)."""
        key = (x, y, y2)
        out = self._value[x, y2]
        if key not in self._lcache:
            self._lcache[key] = _bilinear(self.left.get(key, ()), out.ngens)
        return out.reduce(self._lcache[key](g, m))

    def act_right(self, x2: str, x: str, y: str, m: Sequence[int], f: Sequence[int]) -> Vector:
        """``m . f`` for ``m`` in M(x, y), ``f`` in hom(x2, x)."""
        key = (x2, x, y)
        out = self._value[x2, y]
        if key not in self._rcache:
            self._rcache[key] = _bilinear(self.right.get(key, ()), out.ngens)
        return out.reduce(self._rcache[key](m, f))

    @classmethod
    def from_actions(cls, base: AddCat, value: Mapping[tuple[str, str], FpAbGroup],
                     left: Callable[[str, str, str, Vector, Vector], Sequence[int]],
                     right: Callable[[str, str, str, Vector, Vector], Sequence[int]], name: str = "") -> Bimodule:
        """Tabulate action functions on generators."""
        triv = FpAbGroup.trivial()
        val = {k: value.get(k, triv) for k in product(base.objects, repeat=2)}
        lt, rt = {}, {}
        for x, y, z in product(base.objects, repeat=3):
            if base.hom(y, z).ngens and val[x, y].ngens and val[x, z].ngens:
                lt[x, y, z] = [[val[x, z].reduce(left(x, y, z, g, m)) for m in val[x, y].gens()]
                               for g in base.hom(y, z).gens()]
            if val[y, z].ngens and base.hom(x, y).ngens and val[x, z].ngens:
                rt[x, y, z] = [[val[x, z].reduce(right(x, y, z, m, f)) for f in base.hom(x, y).gens()]
                               for m in val[y, z].gens()]
        return cls(base, val, lt, rt, name=name)

    def validate(self) -> ValidationReport:
        """Well-definedness, unit laws, associativity of both actions, and their compatibility."""
        a, obs = self.base, self.base.objects
        for x, y, z in product(obs, repeat=3):
            hyz, mxy, mxz = a.hom(y, z), self.value(x, y), self.value(x, z)
            for i, g in enumerate(hyz.gens()):
                for j, m in enumerate(mxy.gens()):
                    v = self.act_left(x, y, z, g, m)
                    for d in (hyz.moduli[i], mxy.moduli[j]):
                        if d and any(mxz.scale(d, v)):
                            return ValidationReport(False, "bilinearity", (x, y, z, i, j), "left action")
            myz, hxy = self.value(y, z), a.hom(x, y)
            for i, m in enumerate(myz.gens()):
                for j, f in enumerate(hxy.gens()):
                    v = self.act_right(x, y, z, m, f)
                    for d in (myz.moduli[i], hxy.moduli[j]):
                        if d and any(mxz.scale(d, v)):
                            return ValidationReport(False, "bilinearity", (x, y, z, i, j), "right action")
        for x, y in product(obs, repeat=2):
            for j, m in enumerate(self.value(x, y).gens()):
                if self.act_left(x, y, y, a.id(y), m) != m or self.act_right(x, x, y, m, a.id(x)) != m:
                    return ValidationReport(False, "unit", (x, y, j), "identity does not act trivially")
        for w, x, y, z in product(obs, repeat=4):
            # left: (h g) m = h (g m) with m in M(w, x), g: x -> y, h: y -> z
            for m in self.value(w, x).gens():
                for g in a.hom(x, y).gens():
                    gm = self.act_left(w, x, y, g, m)
                    for h in a.hom(y, z).gens():
                        if self.act_left(w, x, z, a.compose_elem(x, y, z, h, g), m) != self.act_left(w, y, z, h, gm):
                            return ValidationReport(False, "associativity", (w, x, y, z), "left action")
            # right: m (f e) = (m f) e with m in M(y, z), f: x -> y, e: w -> x
            for m in self.value(y, z).gens():
                for f in a.hom(x, y).gens():
                    mf = self.act_right(x, y, z, m, f)
                    for e in a.hom(w, x).gens():
                        if self.act_right(w, y, z, m, a.compose_elem(w, x, y, f, e)) != self.act_right(w, x, z, mf, e):
                            return ValidationReport(False, "associativity", (w, x, y, z), "right action")
            # compatibility: (g m) f = g (m f) with f: w -> x, m in M(x, y), g: y -> z
            for m in self.value(x, y).gens():
                for g in a.hom(y, z).gens():
                    gm = self.act_left(x, y, z, g, m)
                    for f in a.hom(w, x).gens():
                        lhs = self.act_right(w, x, z, gm, f)
                        rhs = self.act_left(w, y, z, g, self.act_right(w, x, y, m, f))
                        if lhs != rhs:
                            return ValidationReport(False, "compatibility", (w, x, y, z), "(g m) f != g (m f)")
        return ValidationReport.passed()


# ---------------------------------------------------------------------------
# builders


def zero_bimodule(a: AddCat) -> Bimodule:
    return Bimodule(a, {}, {}, {}, name="0")


def regular_bimodule(a: AddCat) -> Bimodule:
    """``M(x, y) = hom(x, y)`` with composition on both sides."""
    return Bimodule(a, {k: a.hom(*k) for k in product(a.objects, repeat=2)}, a.comp, a.comp, name="reg")


def ideal_bimodule(i: Ideal) -> Bimodule:
    """A two-sided ideal with the actions given by composition."""
    a = i.category
    incs = {k: i.subgroup(*k)[1] for k in product(a.objects, repeat=2)}

    def left(x, y, z, g, m):
        return incs[x, z].preimage(a.compose_elem(x, y, z, g, incs[x, y](m)))

    def right(x, y, z, m, f):
        return incs[x, z].preimage(a.compose_elem(x, y, z, incs[y, z](m), f))

    return Bimodule.from_actions(a, {k: v.source for k, v in incs.items()}, left, right, name=f"ideal {i.name}")


def quotient_bimodule(i: Ideal) -> Bimodule:
    """``hom / I`` with the induced actions."""
    a = i.category
    projs = {}
    for k in product(a.objects, repeat=2):
        _, inc = i.subgroup(*k)
        projs[k] = cokernel_presentation(inc)[1]

    def left(x, y, z, g, m):
        return projs[x, z](a.compose_elem(x, y, z, g, projs[x, y].preimage(m)))

    def right(x, y, z, m, f):
        return projs[x, z](a.compose_elem(x, y, z, projs[y, z].preimage(m), f))

    return Bimodule.from_actions(a, {k: p.target for k, p in projs.items()}, left, right, name=f"hom/{i.name}")


def reduced_bimodule(a: AddCat, k: int) -> Bimodule:
    """``hom (x) Z/k``, the regular bimodule reduced modulo ``k``."""
    gens = {}
    for x, y in product(a.objects, repeat=2):
        g = a.hom(x, y)
        gens[x, y] = [g.scale(k, v) for v in g.gens()]
    return quotient_bimodule(Ideal(a, gens, name=f"{k}"))


def direct_sum_bimodule(m1: Bimodule, m2: Bimodule) -> Bimodule:
    a = m1.base
    sums = {k: direct_sum(m1.value(*k), m2.value(*k)) for k in product(a.objects, repeat=2)}

    def split(k, v):
        _, _, (p1, p2) = sums[k]
        return p1(v), p2(v)

    def join(k, u, w):
        s, (i1, i2), _ = sums[k]
        return s.add(i1(u), i2(w))

    def left(x, y, z, g, m):
        u, w = split((x, y), m)
        return join((x, z), m1.act_left(x, y, z, g, u), m2.act_left(x, y, z, g, w))

    def right(x, y, z, m, f):
        u, w = split((y, z), m)
        return join((x, z), m1.act_right(x, y, z, u, f), m2.act_right(x, y, z, w, f))

    return Bimodule.from_actions(a, {k: v[0] for k, v in sums.items()}, left, right,
                                 name=f"{m1.name}+{m2.name}")


def ring_bimodule(ring: RingPresentation, target: RingPresentation, phi: RingHom, psi: RingHom,
                  label: str = "*", base: AddCat | None = None) -> Bimodule:
    """``target`` as an R-bimodule through ``phi`` on the left and ``psi`` on the right."""
    a = base or ring.as_category(label)
    (x,) = a.objects

    def left(_x, _y, _z, g, m):
        return target.mul(phi(g), m)

    def right(_x, _y, _z, m, f):
        return target.mul(m, psi(f))

    return Bimodule.from_actions(a, {(x, x): target.group}, left, right,
                                 name=f"{target.name}[{phi.name},{psi.name}]")


# ---------------------------------------------------------------------------
# square-zero extensions


@dataclass
class SquareZeroCat:
    category: AddCat
    base: AddCat
    bimodule: Bimodule
    projection: AddFunctor
    section: AddFunctor
    sums: dict

    def split(self, x: str, y: str, v: Sequence[int]) -> Pair:
        """Coordinates in ``hom(x, y) + M(x, y)`` -> ``(f, m)``."""
        _, _, (p1, p2) = self.sums[x, y]
        return p1(v), p2(v)

    def join(self, x: str, y: str, f: Sequence[int], m: Sequence[int]) -> Vector:
        s, (i1, i2), _ = self.sums[x, y]
        return s.add(i1(f), i2(m))

    def compose_pairs(self, x: str, y: str, z: str, g: Pair, f: Pair) -> Pair:
        return sqzero_compose(self.base, self.bimodule, x, y, z, g, f)


def sqzero_compose(a: AddCat, m: Bimodule, x: str, y: str, z: str, g: Pair, f: Pair) -> Pair:
    """``(f2, m2) o (f1, m1) = (f2 f1, f2 . m1 + m2 . f1)`` with ``f = (f1, m1)``, ``g = (f2, m2)``."""
    f1, m1 = f
    f2, m2 = g
    mz = m.value(x, z)
    term = mz.add(m.act_left(x, y, z, f2, m1), m.act_right(x, y, z, m2, f1))
    return a.compose_elem(x, y, z, f2, f1), term


def build_square_zero(a: AddCat, m: Bimodule, name: str = "") -> SquareZeroCat:
    report = m.validate()
    if not report:
        raise ValueError(f"bimodule is invalid: {report.axiom} at {report.witness}")
    obs = a.objects
    sums = {(x, y): direct_sum(a.hom(x, y), m.value(x, y)) for x, y in product(obs, repeat=2)}

    def split(x, y, v):
        _, _, (p1, p2) = sums[x, y]
        return p1(v), p2(v)

    def join(x, y, f, mm):
        s, (i1, i2), _ = sums[x, y]
        return s.add(i1(f), i2(mm))

    def comp(x, y, z, g, f):
        return join(x, z, *sqzero_compose(a, m, x, y, z, split(y, z, g), split(x, y, f)))

    identity = {x: join(x, x, a.id(x), m.value(x, x).zero()) for x in obs}
    cat = AddCat.from_composition(obs, {k: v[0] for k, v in sums.items()}, comp, identity,
                                  name=name or f"{a.name}+{m.name}")
    proj = AddFunctor(cat, a, {x: x for x in obs}, {k: v[2][0] for k, v in sums.items()}, name="p")
    sec = AddFunctor(a, cat, {x: x for x in obs}, {k: v[1][0] for k, v in sums.items()}, name="i")
    return SquareZeroCat(cat, a, m, proj, sec, sums)


def verify_square_zero_nilpotent(s: SquareZeroCat, max_exponent: int = DEFAULT_MAX_EXPONENT) -> NilpotenceCertificate:
    """Nilpotence certificate of the projection; its exponent is at most 2."""
    report = check_nilpotent_extension(s.projection, max_exponent, bound=1)
    cert = report.certificate
    if not report.verdict or cert.exponent > 2:
        raise ArithmeticError(f"square-zero projection failed the nilpotence check: {cert.reason}")
    return cert


def kernel_matches_bimodule(s: SquareZeroCat, kernel: Ideal) -> bool:
    """Whether the kernel ideal of the projection is exactly ``M`` in every hom group."""
    for x, y in product(s.base.objects, repeat=2):
        _, (_, i2), _ = s.sums[x, y]
        mgens = [i2(v) for v in s.bimodule.value(x, y).gens()]
        g = s.category.hom(x, y)
        if not (contains_all(g, mgens, kernel.gens[x, y]) and contains_all(g, kernel.gens[x, y], mgens)):
            return False
    return True

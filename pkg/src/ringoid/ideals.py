"""Two-sided ideals, additive quotients and nilpotent extensions.

An `Ideal` stores, for every ordered pair of objects, a list of generators of a
subgroup of the hom group.  Products of ideals are spanned by composites of
generators, which is exact because composition is bilinear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from .addcat import (AddCat, AddFunctor, MatMorphism, MatObject, ValidationReport, is_isomorphism,
                     validate_category)
from .karoubi import (DEFAULT_BOUND, EquivalenceReport, KaroubiObject, equivalence_up_to_idempotents,
                      kar_isomorphism, mat_objects)
from .zlin import (AbHom, FpAbGroup, Vector, cokernel_presentation, contains_all, direct_sum,
                   subgroup_from_generators, tensor_presentation)

DEFAULT_MAX_EXPONENT = 16

Chain = tuple[tuple[str, str, Vector], ...]


class Ideal:
    """Per-pair subgroups ``I(x, y)`` of the hom groups of ``category``.

    ``chains`` optionally records, for each generator, a sequence of ideal
    elements whose composite it is; these serve as witnesses for powers.
    """

    def __init__(self, category: AddCat, gens: Mapping[tuple[str, str], Sequence[Sequence[int]]],
                 chains: Mapping[tuple[str, str], Sequence[Chain]] | None = None, name: str = ""):
        self.category = category
        self.name = name
        self.gens: dict[tuple[str, str], list[Vector]] = {}
        self.chains: dict[tuple[str, str], list[Chain]] = {}
        for x, y in product(category.objects, repeat=2):
            g = category.hom(x, y)
            raw = [g.reduce(v) for v in gens.get((x, y), [])]
            ch = list(chains[x, y]) if chains and (x, y) in chains else [((x, y, v),) for v in raw]
            keep = [(v, c) for v, c in zip(raw, ch) if any(v)]
            self.gens[x, y] = [v for v, _ in keep]
            self.chains[x, y] = [c for _, c in keep]

    def __repr__(self) -> str:
        return f"Ideal({self.name or '?'} in {self.category.name or '?'})"

    @cached_property
    def _subgroups(self) -> dict[tuple[str, str], tuple[FpAbGroup, AbHom]]:
        c = self.category
        return {k: subgroup_from_generators(c.hom(*k), v) for k, v in self.gens.items()}

    def subgroup(self, x: str, y: str) -> tuple[FpAbGroup, AbHom]:
        """``I(x, y)`` in canonical form with its inclusion into hom(x, y)."""
        return self._subgroups[x, y]

    def group(self, x: str, y: str) -> FpAbGroup:
        return self._subgroups[x, y][0]

    def contains(self, x: str, y: str, v: Sequence[int]) -> bool:
        return self._subgroups[x, y][1].preimage(v) is not None

    def contains_morphism(self, f: MatMorphism) -> bool:
        return all(self.contains(f.source[j], f.target[i], f.entries[i][j])
                   for i in range(len(f.target)) for j in range(len(f.source)))

    def is_zero(self) -> bool:
        return not any(self.gens.values())

    def rational_rank(self) -> int:
        return sum(g.free_rank for g, _ in self._subgroups.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ideal) or other.category is not self.category:
            return NotImplemented
        return all(self._same(other, k) for k in self.gens)

    def _same(self, other: Ideal, k) -> bool:
        g = self.category.hom(*k)
        return contains_all(g, self.gens[k], other.gens[k]) and contains_all(g, other.gens[k], self.gens[k])

    __hash__ = None

    def is_two_sided(self) -> ValidationReport:
        """Closure under pre- and post-composition, checked on generators."""
        c = self.category
        for (x, y), gens in self.gens.items():
            for k, i in enumerate(gens):
                for z in c.objects:
                    for g in c.hom(y, z).gens():
                        if not self.contains(x, z, c.compose_elem(x, y, z, g, i)):
                            return ValidationReport(False, "left-closure", (x, y, z, k),
                                                    f"g o i leaves the ideal on {x}->{y}->{z}")
                    for f in c.hom(z, x).gens():
                        if not self.contains(z, y, c.compose_elem(z, x, y, i, f)):
                            return ValidationReport(False, "right-closure", (z, x, y, k),
                                                    f"i o f leaves the ideal on {z}->{x}->{y}")
        return ValidationReport.passed()

    def summary(self) -> dict[tuple[str, str], str]:
        return {k: str(g) for k, (g, _) in self._subgroups.items()}


def zero_ideal(c: AddCat) -> Ideal:
    return Ideal(c, {}, name="0")


def unit_ideal(c: AddCat) -> Ideal:
    return Ideal(c, {(x, y): c.hom(x, y).gens() for x, y in product(c.objects, repeat=2)}, name="(1)")


def generated_ideal(c: AddCat, gens: Mapping[tuple[str, str], Sequence[Sequence[int]]], name: str = "") -> Ideal:
    """The two-sided ideal generated by the given morphisms: ``span{g s f}``."""
    out: dict[tuple[str, str], list[Vector]] = {}
    for (x, y), elems in gens.items():
        for s in elems:
            for w, z in product(c.objects, repeat=2):
                for f in c.hom(w, x).gens():
                    sf = c.compose_elem(w, x, y, s, f)
                    if not any(sf):
                        continue
                    for g in c.hom(y, z).gens():
                        out.setdefault((w, z), []).append(c.compose_elem(w, y, z, g, sf))
    return Ideal(c, {k: _prune(c.hom(*k), v) for k, v in out.items()}, name=name)


def _prune(g: FpAbGroup, vecs: Sequence[Vector], chains=None):
    """Greedily drop vectors already in the span of earlier ones."""
    keep, kept_chains = [], []
    for n, v in enumerate(vecs):
        if not any(v) or (keep and contains_all(g, keep, [v])):
            continue
        keep.append(v)
        if chains is not None:
            kept_chains.append(chains[n])
    return keep if chains is None else (keep, kept_chains)


def kernel_ideal(f: AddFunctor) -> Ideal:
    """Morphisms sent to zero by ``f``."""
    gens = {k: m.kernel_generators for k, m in f.hom_maps.items()}
    ideal = Ideal(f.source, gens, name=f"ker({f.name})" if f.name else "ker")
    report = ideal.is_two_sided()
    assert report, f"kernel of a functor is not two-sided: {report.message}"
    return ideal


def ideal_product(i: Ideal, j: Ideal) -> Ideal:
    """``I o J``: spanned by composites ``a o b`` with ``b`` in J and ``a`` in I."""
    c = i.category
    gens: dict[tuple[str, str], list[Vector]] = {}
    chains: dict[tuple[str, str], list[Chain]] = {}
    for x, z in product(c.objects, repeat=2):
        vecs, chs = [], []
        for y in c.objects:
            for b, cb in zip(j.gens[x, y], j.chains[x, y]):
                for a, ca in zip(i.gens[y, z], i.chains[y, z]):
                    v = c.compose_elem(x, y, z, a, b)
                    if any(v):
                        vecs.append(v)
                        chs.append(cb + ca)
        gens[x, z], chains[x, z] = _prune(c.hom(x, z), vecs, chs)
    return Ideal(c, gens, chains)


def ideal_power(i: Ideal, n: int) -> Ideal:
    if n < 1:
        raise ValueError("ideal powers start at 1")
    out = i
    for _ in range(n - 1):
        out = ideal_product(out, i)
    return out


# ---------------------------------------------------------------------------
# nilpotence


@dataclass
class NilpotenceCertificate:
    """Outcome of a nilpotence search.

    ``status`` is "nilpotent", "not-nilpotent" or "inconclusive".  For a
    nilpotent ideal, ``exponent`` is the least n with ``I^n = 0`` and
    ``witness`` a composable chain of n - 1 ideal elements with nonzero
    composite (empty when n = 1).
    """

    status: str
    exponent: int | None
    bound: int
    witness: Chain | None = None
    reason: str = ""
    powers: list[dict[tuple[str, str], str]] = field(default_factory=list)

    @property
    def nilpotent(self) -> bool | None:
        return {"nilpotent": True, "not-nilpotent": False}.get(self.status)


def _witness(p: Ideal) -> Chain | None:
    for k, chs in p.chains.items():
        if chs:
            return chs[0]
    return None


def nilpotence_certificate(i: Ideal, max_exponent: int = DEFAULT_MAX_EXPONENT) -> NilpotenceCertificate:
    """Search for the least n with ``I^n = 0``.

    Non-nilpotence is certified when two consecutive powers coincide while
    nonzero, or when their ranks after tensoring with the rationals coincide
    and are positive: then every further power has the same positive rank.
    """
    if i.is_zero():
        return NilpotenceCertificate("nilpotent", 1, max_exponent, (), "ideal is zero",
                                     [i.summary()])
    powers = [i]
    for k in range(2, max_exponent + 1):
        p = ideal_product(powers[-1], i)
        prev = powers[-1]
        powers.append(p)
        summaries = [q.summary() for q in powers]
        if p.is_zero():
            return NilpotenceCertificate("nilpotent", k, max_exponent, _witness(prev),
                                         f"power {k} vanishes", summaries)
        if p == prev:
            return NilpotenceCertificate("not-nilpotent", None, max_exponent, _witness(p),
                                         f"powers {k - 1} and {k} coincide and are nonzero", summaries)
        r = p.rational_rank()
        if r > 0 and r == prev.rational_rank():
            return NilpotenceCertificate("not-nilpotent", None, max_exponent, _witness(p),
                                         f"rational rank stabilised at {r} from power {k - 1}", summaries)
    return NilpotenceCertificate("inconclusive", None, max_exponent, _witness(powers[-1]),
                                 f"power {max_exponent} is still nonzero", [q.summary() for q in powers])


# ---------------------------------------------------------------------------
# quotients


@dataclass
class QuotientCategory:
    category: AddCat
    projection: AddFunctor
    killed: tuple[str, ...]


def _factoring_map(a: AddCat, killed: Sequence[str], x: str, y: str) -> AbHom:
    """``(+)_z hom(z, y) (x) hom(x, z) -> hom(x, y)`` over z in ``killed``."""
    target = a.hom(x, y)
    pieces = []
    for z in killed:
        hz, hx = a.hom(z, y), a.hom(x, z)
        tp = tensor_presentation(hz, hx)
        imgs = []
        for lift in tp.from_canon.columns():
            acc = target.zero()
            for idx, coeff in enumerate(lift):
                if coeff:
                    gi, fj = divmod(idx, hx.ngens)
                    v = a.compose_elem(x, z, y, hz.gens()[gi], hx.gens()[fj])
                    acc = target.add(acc, target.scale(coeff, v))
            imgs.append(acc)
        pieces.append((tp.group, imgs))
    src, inj, proj = direct_sum(*(g for g, _ in pieces))
    imgs = []
    for gen in src.gens():
        acc = target.zero()
        for (g, pimgs), p in zip(pieces, proj):
            coords = p(gen)
            for coeff, v in zip(coords, pimgs):
                acc = target.add(acc, target.scale(coeff, v))
        imgs.append(acc)
    return AbHom.from_images(src, target, imgs)


def quotient_category(a: AddCat, killed: Sequence[str], name: str = "") -> QuotientCategory:
    """``A / B`` for the full subcategory on ``killed``.

    Each hom group is the cokernel of the composition map out of
    ``(+)_z hom(z, y) (x) hom(x, z)``; composition is induced from ``a``.
    """
    killed = tuple(z for z in a.objects if z in set(killed))
    projs: dict[tuple[str, str], AbHom] = {}
    for x, y in product(a.objects, repeat=2):
        _, p = cokernel_presentation(_factoring_map(a, killed, x, y))
        projs[x, y] = p
    hom = {k: p.target for k, p in projs.items()}

    def comp(x, y, z, g, f):
        gl, fl = projs[y, z].preimage(g), projs[x, y].preimage(f)
        return projs[x, z](a.compose_elem(x, y, z, gl, fl))

    identity = {x: projs[x, x](a.id(x)) for x in a.objects}
    q = AddCat.from_composition(a.objects, hom, comp, identity,
                                name=name or f"{a.name}/<{','.join(killed)}>")
    report = validate_category(q)
    if not report:
        raise RuntimeError(f"induced composition on the quotient is invalid: {report}")
    proj = AddFunctor(a, q, {x: x for x in a.objects}, projs, name="quot")
    return QuotientCategory(q, proj, killed)


def _enumerate(g_moduli: Sequence[int]) -> np.ndarray:
    grids = np.meshgrid(*[np.arange(d, dtype=np.int64) for d in g_moduli], indexing="ij")
    return np.stack([gr.ravel() for gr in grids], axis=1) if g_moduli else np.zeros((1, 0), dtype=np.int64)


def _encode(vecs: np.ndarray, moduli: Sequence[int]) -> np.ndarray:
    code = np.zeros(len(vecs), dtype=np.int64)
    for k, d in enumerate(moduli):
        code = code * d + vecs[:, k]
    return code


def factoring_subgroup_bruteforce(a: AddCat, killed: Sequence[str], x: str, y: str) -> set[Vector]:
    """All morphisms ``x -> y`` factoring through a sum of objects in ``killed``.

    Every composite ``x -> z -> y`` is enumerated, then the set is closed under
    addition by breadth-first search.  Finite hom groups only.
    """
    target = a.hom(x, y)
    if not target.is_finite():
        raise ValueError("brute force needs finite hom groups")
    mod = np.array(target.moduli, dtype=np.int64)
    found: set[Vector] = {target.zero()}
    for z in killed:
        hz, hx = a.hom(z, y), a.hom(x, z)
        if not (hz.ngens and hx.ngens and target.ngens):
            continue
        table = np.zeros((hz.ngens, hx.ngens, target.ngens), dtype=np.int64)
        for gi, g in enumerate(hz.gens()):
            for fj, f in enumerate(hx.gens()):
                table[gi, fj] = a.compose_elem(x, z, y, g, f)
        gs, fs = _enumerate(hz.moduli), _enumerate(hx.moduli)
        comp = np.einsum("ai,bj,ijk->abk", gs, fs, table).reshape(-1, target.ngens) % mod
        found.update(tuple(int(c) for c in row) for row in np.unique(comp, axis=0))
    frontier = list(found)
    gens = list(found)
    while frontier:
        nxt = []
        for u in frontier:
            for v in gens:
                w = target.add(u, v)
                if w not in found:
                    found.add(w)
                    nxt.append(w)
        frontier = nxt
    return found


# ---------------------------------------------------------------------------
# nilpotent extensions


@dataclass
class NilpotentExtensionReport:
    essentially_surjective: bool
    bijective_on_classes: bool
    full: bool
    certificate: NilpotenceCertificate
    kernel: Ideal
    unreached: list[str]
    failing_pair: tuple[str, str] | None
    bound: int
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> bool | None:
        """Conjunction of the three conditions; None if nilpotence is undecided."""
        if not (self.essentially_surjective and self.full):
            return False
        return self.certificate.nilpotent

    def __bool__(self) -> bool:
        return bool(self.verdict)


def _isomorphic(cat: AddCat, X: MatObject, Y: MatObject) -> bool:
    if sorted(X) == sorted(Y):
        return True
    P = KaroubiObject(tuple(X), cat.identity(X))
    Q = KaroubiObject(tuple(Y), cat.identity(Y))
    return kar_isomorphism(cat, P, Q) is not None


def _preimage_object(f: AddFunctor, y: str, bound: int) -> MatObject | None:
    for X in mat_objects(f.source, bound, 1):
        if _isomorphic(f.target, (y,), f.map_object(X)):
            return X
    return None


def check_nilpotent_extension(f: AddFunctor, max_exponent: int = DEFAULT_MAX_EXPONENT,
                              bound: int = DEFAULT_BOUND) -> NilpotentExtensionReport:
    """Check that ``f`` is essentially surjective, full, with nilpotent kernel.

    Injectivity on isomorphism classes of base objects is reported separately.
    """
    unreached = [y for y in f.target.objects if _preimage_object(f, y, bound) is None]
    failing = next((k for k, m in f.hom_maps.items() if not m.is_surjective()), None)
    ker = kernel_ideal(f)
    cert = nilpotence_certificate(ker, max_exponent)
    S, T = f.source, f.target
    injective = True
    for x, x2 in product(S.objects, repeat=2):
        if x < x2 and _isomorphic(T, (f.object_map[x],), (f.object_map[x2],)):
            injective &= _isomorphic(S, (x,), (x2,))
    notes = [f"essential surjectivity searched over source objects with at most {bound} summands"]
    if not (S.is_finite() and T.is_finite()):
        notes.append("infinite hom groups: isomorphism searches use a coefficient box")
    return NilpotentExtensionReport(not unreached, injective, failing is None, cert, ker, unreached,
                                    failing, bound, notes)


@dataclass
class InverseConstruction:
    inverse: MatMorphism
    lift: MatMorphism
    terms: int


def lift_inverse(f: AddFunctor, u: MatMorphism, exponent: int) -> InverseConstruction:
    """Invert ``u`` given that ``f(u)`` is invertible and ``ker f`` has the given exponent.

    Lift an inverse ``h`` of ``f(u)``; then ``id - h u`` lies in the kernel
    ideal, so ``(h u)^-1 = sum_{k < n} (id - h u)^k`` and ``(h u)^-1 h``
    inverts ``u``.  The result is verified on both sides.
    """
    S, T = f.source, f.target
    fu = f.map_morphism(u)
    dec = is_isomorphism(T, fu)
    if not dec:
        raise ValueError("image of the morphism is not invertible")
    h = f.lift_morphism(u.target, u.source, dec.inverse)
    if h is None:
        raise ValueError("inverse of the image does not lift; functor is not full")
    X = u.source
    ident = S.identity(X)
    nil = S.sub(ident, S.compose(h, u))
    total, term = ident, ident
    for _ in range(exponent - 1):
        term = S.compose(nil, term)
        total = S.add(total, term)
    inv = S.compose(total, h)
    if S.compose(inv, u) != ident or S.compose(u, inv) != S.identity(u.target):
        raise ArithmeticError("geometric series did not produce an inverse")
    return InverseConstruction(inv, h, exponent)


# ---------------------------------------------------------------------------
# exact sequences


@dataclass
class ExactSequenceReport:
    exact: bool
    induced: AddFunctor
    equivalence: EquivalenceReport
    quotient: QuotientCategory

    def __bool__(self) -> bool:
        return self.exact


def induced_functor(q: QuotientCategory, g: AddFunctor) -> AddFunctor:
    """The functor ``A/B -> C`` through which ``g`` factors."""
    a, c = q.projection.source, g.target
    for z in q.killed:
        if any(g.map_elem(z, z, a.id(z))):
            raise ValueError(f"functor does not kill {z}")
    maps = {}
    for x, y in product(a.objects, repeat=2):
        p = q.projection.hom_maps[x, y]
        imgs = [g.map_elem(x, y, p.preimage(gen)) for gen in p.target.gens()]
        maps[x, y] = AbHom.from_images(p.target, c.hom(g.object_map[x], g.object_map[y]), imgs)
    return AddFunctor(q.category, c, g.object_map, maps, name=f"{g.name}~" if g.name else "induced")


def check_exact_sequence(killed: Sequence[str], a: AddCat, c: AddCat, g: AddFunctor,
                         bound: int = DEFAULT_BOUND) -> ExactSequenceReport:
    """Whether ``B -> A -> C`` is exact: ``A/B -> C`` is an equivalence up to idempotents."""
    if g.source is not a or g.target is not c:
        raise ValueError("functor does not go from a to c")
    q = quotient_category(a, killed)
    ind = induced_functor(q, g)
    rep = equivalence_up_to_idempotents(ind, bound)
    return ExactSequenceReport(rep.equivalent, ind, rep, q)

"""Grothendieck groups of presented additive categories.

Two independent routes:

* `k0_enumeration` completes the category (bounded Karoubi envelope), finds
  its indecomposable objects and presents K0 on all classes with the relations
  coming from direct-sum decompositions.
* `k0_radical_oracle` works on a finite ring by brute force: compute the
  Jacobson radical from a full multiplication table, count central idempotents
  of the semisimple quotient, and read off the number of simple blocks.

With finite hom groups the completion is Krull-Schmidt, so stable isomorphism
coincides with isomorphism and the first route is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .addcat import AddCat, AddFunctor, MatMorphism, zero_category
from .ideals import check_nilpotent_extension, quotient_category
from .karoubi import DEFAULT_BOUND, KaroubiObject, decompose_idempotent, kar_isomorphism, karoubi_envelope
from .rings import RingPresentation, zmod
from .zlin import AbHom, FpAbGroup, IntMatrix, Vector, contains_all, present, solve


def endomorphism_ring(a: AddCat) -> RingPresentation:
    """``End`` of the sum of all objects, with block coordinates as basis."""
    G = tuple(a.objects)
    moduli = a.block_moduli(G, G)
    if not moduli:
        return zmod(1)
    gens = a.block_gens(G, G)

    def mul(i, j):
        return a.flatten(a.compose(gens[i], gens[j]))

    return RingPresentation.from_basis(moduli, mul, a.flatten(a.identity(G)), name=f"End({a.name})")


@dataclass
class K0Result:
    """K0 with labelled classes.

    ``labels`` are the indecomposable classes (one generator each before
    presentation); ``classes`` maps every recorded object label to its class.
    """

    group: FpAbGroup
    labels: list[str]
    classes: dict[str, Vector]
    complete: bool
    bound: int
    representatives: dict[str, KaroubiObject] = field(default_factory=dict)
    objects: dict[str, KaroubiObject] = field(default_factory=dict)
    category: AddCat | None = None
    notes: list[str] = field(default_factory=list)

    def class_of(self, label: str) -> Vector:
        return self.classes[label]

    def describe(self) -> str:
        return str(self.group)


def _classify(cat: AddCat, P: KaroubiObject, reps: dict[str, KaroubiObject]) -> str | None:
    for label, Q in reps.items():
        if kar_isomorphism(cat, P, Q) is not None:
            return label
    return None


def _summands(cat: AddCat, e: MatMorphism, reps: dict[str, KaroubiObject]) -> list[str]:
    """Indecomposable classes of the summands cut out by ``e``."""
    out = []
    for p in decompose_idempotent(cat, e):
        label = _classify(cat, KaroubiObject(e.source, p), reps)
        if label is None:
            raise LookupError("summand is not isomorphic to any recorded indecomposable")
        out.append(label)
    return out


def k0_enumeration(a: AddCat, bound: int = DEFAULT_BOUND) -> K0Result:
    """K0 of the idempotent completion of ``a``.

    Generators are all objects of the envelope; relations say that each base
    object is the sum of its indecomposable summands.
    """
    if not a.objects:
        return K0Result(FpAbGroup.trivial(), [], {}, True, bound, category=a)
    env = karoubi_envelope(a, bound)
    base = list(a.objects)
    # indecomposables: new objects, plus base objects whose identity is primitive
    reps: dict[str, KaroubiObject] = {}
    decomp: dict[str, list[str]] = {}
    for x in base:
        ids = decompose_idempotent(a, a.identity((x,)))
        if len(ids) == 1:
            reps[x] = env.objects[x]
    for label in env.new_objects:
        reps[label] = env.objects[label]
    for x in base:
        decomp[x] = _summands(a, a.identity((x,)), reps)
    labels = list(reps)
    all_labels = base + list(env.new_objects)
    index = {lab: k for k, lab in enumerate(all_labels)}
    relations = []
    for x in base:
        r = [0] * len(all_labels)
        r[index[x]] += 1
        for lab in decomp[x]:
            r[index[lab]] -= 1
        if any(r):
            relations.append(r)
    pres = present(len(all_labels), relations)
    classes = {lab: pres.canon([int(k == index[lab]) for k in range(len(all_labels))]) for lab in all_labels}
    notes = list(env.notes)
    notes.append("K0 computed after idempotent completion")
    if not env.complete:
        notes.append("incomplete: infinite hom groups, indecomposables found by bounded search")
    return K0Result(pres.group, labels, classes, env.complete, bound, reps, dict(env.objects), a, notes)


# ---------------------------------------------------------------------------
# brute-force oracle on finite rings


def _ring_tables(r: RingPresentation):
    """Index all elements and return (elements, codes, add table, mul table)."""
    moduli = list(r.group.moduli)
    elems = list(r.elements())
    n = len(elems)
    arr = np.array(elems, dtype=np.int64).reshape(n, len(moduli))
    weights = np.ones(len(moduli), dtype=np.int64)
    for k in range(len(moduli) - 2, -1, -1):
        weights[k] = weights[k + 1] * moduli[k + 1]
    code = arr @ weights if moduli else np.zeros(n, dtype=np.int64)
    pos = np.empty(n, dtype=np.int64)
    pos[code] = np.arange(n)
    mod = np.array(moduli, dtype=np.int64)

    def index_of(vecs):
        return pos[(vecs % mod) @ weights] if moduli else np.zeros(len(vecs), dtype=np.int64)

    add = index_of(arr[:, None, :] + arr[None, :, :]).reshape(n, n) if moduli else np.zeros((n, n), int)
    table = np.zeros((len(moduli), len(moduli), len(moduli)), dtype=np.int64)
    for i in range(len(moduli)):
        for j in range(len(moduli)):
            table[i, j] = r.table[i][j]
    prods = np.einsum("ai,bj,ijk->abk", arr, arr, table)
    mul = index_of(prods.reshape(-1, len(moduli))).reshape(n, n) if moduli else np.zeros((n, n), int)
    return elems, arr, add, mul, index_of


def jacobson_radical(r: RingPresentation) -> list[Vector]:
    """``{x : 1 - a x is a unit for every a}``, by exhaustion over a finite ring."""
    if not r.is_finite():
        raise ValueError("the radical oracle needs a finite ring")
    elems, arr, add, mul, index_of = _ring_tables(r)
    n = len(elems)
    one = int(index_of(np.array([r.one()], dtype=np.int64))[0])
    neg = index_of(-arr)
    # finite rings are Dedekind-finite, so a one-sided inverse is two-sided
    units = (mul == one).any(axis=1)
    one_minus = add[one][neg]
    jac = units[one_minus[mul]].all(axis=0)
    return [elems[i] for i in range(n) if jac[i]]


@dataclass
class RadicalReport:
    radical_order: int
    central_idempotents: int
    blocks: int
    k0: K0Result


def k0_radical_oracle(r: RingPresentation) -> RadicalReport:
    """K0 of a finite ring as ``Z^b``, ``b`` the number of simple blocks of ``R/J``."""
    if not r.is_finite():
        raise ValueError("the radical oracle needs a finite ring")
    elems, arr, add, mul, index_of = _ring_tables(r)
    rad = jacobson_radical(r)
    rad_idx = index_of(np.array(rad, dtype=np.int64).reshape(len(rad), arr.shape[1]))
    # coset label of each element: least index in x + J
    coset = add[:, rad_idx].min(axis=1)
    reps = np.unique(coset)
    neg = index_of(-arr)

    def diff(a, b):
        return coset[add[a, neg[b]]]

    zero = coset[int(index_of(np.zeros((1, arr.shape[1]), dtype=np.int64))[0])]
    count = 0
    for e in reps:
        if diff(mul[e, e], e) != zero:
            continue
        if np.all(coset[mul[e, reps]] == coset[mul[reps, e]]):
            count += 1
    b = count.bit_length() - 1
    if 1 << b != count:
        raise ArithmeticError(f"central idempotent count {count} is not a power of two")
    labels = [f"S{k}" for k in range(b)]
    group = FpAbGroup.free(b)
    classes = {lab: tuple(int(i == k) for i in range(b)) for k, lab in enumerate(labels)}
    res = K0Result(group, labels, classes, True, 0, notes=["radical oracle: one class per simple block"])
    return RadicalReport(len(rad), count, b, res)


# ---------------------------------------------------------------------------
# induced maps and the exactness checks


def _image_class(f: AddFunctor, P: KaroubiObject, kt: K0Result) -> Vector:
    e = f.map_morphism(P.idempotent)
    acc = kt.group.zero()
    for s in _summands(f.target, e, kt.representatives):
        acc = kt.group.add(acc, kt.classes[s])
    return acc


def k0_induced_map(f: AddFunctor, bound: int = DEFAULT_BOUND, source: K0Result | None = None,
                   target: K0Result | None = None) -> tuple[AbHom, K0Result, K0Result]:
    """``[P] -> [f(P)]``, checked on the class of every recorded object."""
    ks = source or k0_enumeration(f.source, bound)
    kt = target or k0_enumeration(f.target, bound)
    labels = list(ks.classes)
    images = {lab: _image_class(f, ks.objects[lab], kt) for lab in labels}
    m = IntMatrix.from_columns([ks.classes[lab] for lab in labels], ks.group.ngens) if labels \
        else IntMatrix.zeros(ks.group.ngens, 0)
    imgs = []
    for g in ks.group.gens():
        coeffs = solve(m, g, ks.group.moduli)
        acc = kt.group.zero()
        for lab, c in zip(labels, coeffs):
            acc = kt.group.add(acc, kt.group.scale(c, images[lab]))
        imgs.append(acc)
    hom = AbHom.from_images(ks.group, kt.group, imgs)
    for lab in labels:
        if hom(ks.classes[lab]) != images[lab]:
            raise ArithmeticError(f"induced map is not well defined on the class of {lab}")
    return hom, ks, kt


@dataclass
class NilInvarianceVerdict:
    ok: bool
    extension: bool
    isomorphism: bool
    oracle_agrees: bool | None
    source: K0Result
    target: K0Result
    witness: str | None = None


def k0_nilinvariance_check(f: AddFunctor, bound: int = DEFAULT_BOUND, with_oracle: bool = True) -> NilInvarianceVerdict:
    rep = check_nilpotent_extension(f, bound=bound)
    hom, ks, kt = k0_induced_map(f, bound)
    iso = hom.is_bijective()
    witness = None
    if not iso:
        bad = next((lab for lab in ks.labels if not any(hom(ks.classes[lab]))), None)
        witness = bad or "cokernel"
    agrees = None
    if with_oracle and f.source.is_finite() and f.target.is_finite():
        o_s = k0_radical_oracle(endomorphism_ring(f.source)).k0.group
        o_t = k0_radical_oracle(endomorphism_ring(f.target)).k0.group
        agrees = o_s == ks.group and o_t == kt.group
    ok = bool(rep.verdict) and iso and agrees is not False
    return NilInvarianceVerdict(ok, bool(rep.verdict), iso, agrees, ks, kt, witness)


@dataclass
class LocalizationVerdict:
    ok: bool
    composite_zero: bool
    surjective: bool
    middle_exact: bool
    groups: tuple[FpAbGroup, FpAbGroup, FpAbGroup]


def k0_localization_check(killed: Sequence[str], a: AddCat, bound: int = DEFAULT_BOUND) -> LocalizationVerdict:
    """Exactness of ``K0(B) -> K0(A) -> K0(A/B) -> 0``."""
    killed = [x for x in a.objects if x in set(killed)]
    q = quotient_category(a, killed)
    ka = k0_enumeration(a, bound)
    kq = k0_enumeration(q.category, bound)
    if killed:
        b = a.full_subcategory(killed)
        kb = k0_enumeration(b, bound)
        first, _, _ = k0_induced_map(a.inclusion_of(b), bound, kb, ka)
    else:
        kb = k0_enumeration(zero_category(), bound)
        first = AbHom.zero(kb.group, ka.group)
    second, _, _ = k0_induced_map(q.projection, bound, ka, kq)
    comp = second.compose(first)
    composite_zero = all(not any(comp(g)) for g in kb.group.gens())
    surjective = second.is_surjective()
    images = [first(g) for g in kb.group.gens()]
    middle = contains_all(ka.group, images, second.kernel_generators)
    ok = composite_zero and surjective and middle
    return LocalizationVerdict(ok, composite_zero, surjective, middle, (kb.group, ka.group, kq.group))


def k0_compare(a: AddCat, bound: int = DEFAULT_BOUND) -> tuple[K0Result, RadicalReport, bool]:
    """Both routes on ``a``; the flag says whether the groups agree."""
    e = k0_enumeration(a, bound)
    o = k0_radical_oracle(endomorphism_ring(a))
    return e, o, e.group == o.k0.group


"""Idempotents, their splittings, and bounded Karoubi envelopes.

Searches that cannot be exhaustive (infinite hom groups, or splittings through
objects larger than the bound) say so: `split_idempotent` raises
`BoundExhausted`, and envelopes carry a ``complete`` flag.

For categories with finite hom groups every endomorphism ring is finite, hence
semiperfect, so the idempotent completion is Krull-Schmidt.  Every indecomposable
object of the envelope is then cut out by a primitive idempotent on a single
base object, which is what `karoubi_envelope` enumerates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Iterator, Sequence

from .addcat import AddCat, AddFunctor, MatMorphism, MatObject
from .zlin import AbHom, IntMatrix, Vector, kernel, present_moduli, solve, subgroup_from_generators, subquotient

DEFAULT_BOUND = 4
DEFAULT_SPREAD = 2
DEFAULT_BUDGET = 200_000


class BoundExhausted(LookupError):
    """A bounded search ended without an answer; one may exist beyond the bound."""

    def __init__(self, message: str, bound: int):
        super().__init__(message)
        self.bound = bound


@dataclass(frozen=True)
class KaroubiObject:
    """An object of the idempotent completion: a carrier with an idempotent."""

    carrier: MatObject
    idempotent: MatMorphism


@dataclass(frozen=True)
class Splitting:
    """``e = s o r`` with ``r o s = id_y``."""

    y: MatObject
    r: MatMorphism
    s: MatMorphism


def mat_objects(cat: AddCat, max_size: int, min_size: int = 0) -> Iterator[MatObject]:
    """All MatObjects up to reordering, by size then label order."""
    for n in range(min_size, max_size + 1):
        yield from combinations_with_replacement(cat.objects, n)


def is_idempotent(cat: AddCat, e: MatMorphism) -> bool:
    return e.source == e.target and cat.compose(e, e) == e


def _span_elements(gens: Sequence[Vector], moduli: Sequence[int], spread: int) -> tuple[Iterator[Vector], bool]:
    """Elements of the span of ``gens`` (exhaustive iff the span is finite)."""
    sq = subquotient(gens, [], moduli)
    g = sq.group
    ranges = [range(d) if d else range(-spread, spread + 1) for d in g.moduli]

    def it():
        for c in product(*ranges):
            yield tuple(x % d if d else x for x, d in zip(sq.lift @ c, moduli))

    return it(), g.is_finite()


def endomorphisms(cat: AddCat, X: MatObject, spread: int = DEFAULT_SPREAD) -> tuple[Iterator[MatMorphism], bool]:
    moduli = cat.block_moduli(X, X)
    if all(moduli):
        return cat.hom_elements(X, X), True
    box = product(*(range(d) if d else range(-spread, spread + 1) for d in moduli))
    return (cat.unflatten(X, X, v) for v in box), False


def idempotents(cat: AddCat, X: MatObject, spread: int = DEFAULT_SPREAD) -> tuple[list[MatMorphism], bool]:
    """Idempotents on ``X`` in lexicographic coordinate order.

    The flag is True when the list is complete (finite endomorphism group).
    """
    elems, complete = endomorphisms(cat, X, spread)
    out = [e for e in elems if cat.compose(e, e) == e]
    out.sort(key=cat.flatten)
    return out, complete


def is_below(cat: AddCat, f: MatMorphism, e: MatMorphism) -> bool:
    """``f <= e`` in the idempotent order: ``e f = f e = f``."""
    return cat.compose(e, f) == f and cat.compose(f, e) == f


def primitive_idempotents(cat: AddCat, X: MatObject, spread: int = DEFAULT_SPREAD) -> tuple[list[MatMorphism], bool]:
    ids, complete = idempotents(cat, X, spread)
    out = []
    for e in ids:
        if cat.is_zero(e):
            continue
        if not any(not cat.is_zero(f) and f != e and is_below(cat, f, e) for f in ids):
            out.append(e)
    return out, complete


def decompose_idempotent(cat: AddCat, e: MatMorphism, spread: int = DEFAULT_SPREAD) -> list[MatMorphism]:
    """Write ``e`` as a sum of pairwise orthogonal primitive idempotents."""
    ids, _ = idempotents(cat, e.source, spread)
    nonzero = [f for f in ids if not cat.is_zero(f)]
    prims = [f for f in nonzero if not any(g != f and is_below(cat, g, f) for g in nonzero)]
    out, rest = [], e
    while not cat.is_zero(rest):
        f = next((p for p in prims if is_below(cat, p, rest)), None)
        if f is None:
            raise BoundExhausted("no primitive idempotent found below a nonzero idempotent", spread)
        out.append(f)
        rest = cat.sub(rest, f)
    return out


def _stacked_solve(blocks, rhs, moduli):
    rows = [r for m in blocks for r in m.entries]
    a = IntMatrix.from_rows(rows, blocks[0].cols)
    return solve(a, rhs, moduli)


def split_idempotent(cat: AddCat, e: MatMorphism, bound: int = DEFAULT_BOUND,
                     spread: int = DEFAULT_SPREAD, budget: int = DEFAULT_BUDGET) -> Splitting:
    """Find ``y`` (at most ``bound`` summands), ``r: X -> y`` and ``s: y -> X``.

    Candidates ``s`` range over ``{s : e s = s}``; for each one the equations
    ``r s = id_y`` and ``s r = e`` are linear in ``r`` and solved exactly.
    """
    if not is_idempotent(cat, e):
        raise ValueError("morphism is not idempotent")
    X = e.source
    tried = 0
    exhaustive = True
    for y in mat_objects(cat, bound):
        mod_yX = cat.block_moduli(y, X)
        fix = cat.postcompose_matrix(e, y)
        n = fix.cols
        a = IntMatrix.from_rows([[fix[i, j] - (i == j) for j in range(n)] for i in range(fix.rows)], n)
        elems, finite = _span_elements(kernel(a, mod_yX), mod_yX, spread)
        exhaustive &= finite
        id_y = cat.identity(y)
        for v in elems:
            tried += 1
            if tried > budget:
                raise BoundExhausted(f"candidate budget {budget} exhausted", bound)
            s = cat.unflatten(y, X, v)
            r_s = cat.precompose_matrix(s, y)         # r -> r o s in hom(y, y)
            s_r = cat.postcompose_matrix(s, X)        # r -> s o r in hom(X, X)
            rhs = cat.flatten(id_y) + cat.flatten(e)
            moduli = cat.block_moduli(y, y) + cat.block_moduli(X, X)
            x = _stacked_solve([r_s, s_r], rhs, moduli)
            if x is not None:
                return Splitting(y, cat.unflatten(X, y, x), s)
    what = "within bound" if exhaustive else "within bound and coefficient box"
    raise BoundExhausted(f"no splitting found {what} {bound}", bound)


def kar_hom_inclusion(cat: AddCat, P: KaroubiObject, Q: KaroubiObject) -> "_Incl":
    """Inclusion of ``e' hom(X, X') e`` into the block hom group ``hom(X, X')``."""
    X, Y = P.carrier, Q.carrier
    post = cat.postcompose_matrix(Q.idempotent, X)
    pre = cat.precompose_matrix(P.idempotent, Y)
    gens = (post @ pre).columns()
    pres = present_moduli(cat.block_moduli(X, Y))
    ambient = pres.group
    _, inc = subgroup_from_generators(ambient, [pres.canon(g) for g in gens])
    return _Incl(inc, pres, cat, X, Y)


class _Incl:
    """Subgroup inclusion into a block hom group, in block coordinates."""

    def __init__(self, inc: AbHom, pres, cat: AddCat, X, Y):
        self.inc, self.pres, self.cat, self.X, self.Y = inc, pres, cat, X, Y
        self.source = inc.source

    def __call__(self, c) -> MatMorphism:
        return self.cat.unflatten(self.X, self.Y, self.pres.lift(self.inc(c)))

    def preimage(self, f: MatMorphism) -> Vector | None:
        return self.inc.preimage(self.pres.canon(self.cat.flatten(f)))


def kar_isomorphism(cat: AddCat, P: KaroubiObject, Q: KaroubiObject, spread: int = DEFAULT_SPREAD,
                    budget: int = DEFAULT_BUDGET) -> tuple[MatMorphism, MatMorphism] | None:
    """Find ``a: P -> Q`` and ``b: Q -> P`` with ``b a = e`` and ``a b = e'``.

    Candidates for ``a`` are enumerated in ``e' hom e``; ``b`` is then the
    solution of a linear system.  Returns None when no isomorphism exists
    (exhaustively, for finite hom groups).
    """
    X, Y = P.carrier, Q.carrier
    e, f = P.idempotent, Q.idempotent
    inc = kar_hom_inclusion(cat, P, Q)
    group = inc.source
    if group.is_finite():
        cands = group.elements()
    else:
        cands = product(*(range(d) if d else range(-spread, spread + 1) for d in group.moduli))
    mod_XX, mod_YY, mod_YX = cat.block_moduli(X, X), cat.block_moduli(Y, Y), cat.block_moduli(Y, X)
    n = len(mod_YX)
    ident = IntMatrix.identity(n)
    e_post = cat.postcompose_matrix(e, Y)           # b -> e b
    f_pre = cat.precompose_matrix(f, X)             # b -> b f
    fix_l = IntMatrix.from_rows([[e_post[i, j] - ident[i, j] for j in range(n)] for i in range(n)], n)
    fix_r = IntMatrix.from_rows([[f_pre[i, j] - ident[i, j] for j in range(n)] for i in range(n)], n)
    for k, c in enumerate(cands):
        if k > budget:
            return None
        a = inc(c)
        ba = cat.precompose_matrix(a, X)           # b -> b a in hom(X, X)
        ab = cat.postcompose_matrix(a, Y)          # b -> a b in hom(Y, Y)
        rhs = cat.flatten(e) + cat.flatten(f) + (0,) * (2 * n)
        x = _stacked_solve([ba, ab, fix_l, fix_r], rhs, mod_XX + mod_YY + mod_YX + mod_YX)
        if x is not None:
            return a, cat.unflatten(Y, X, x)
    return None


def _label(x: str, e: MatMorphism) -> str:
    return f"{x}|{'.'.join(str(c) for c in e.entries[0][0])}"


@dataclass
class KaroubiEnvelope:
    category: AddCat
    objects: dict[str, KaroubiObject]
    new_objects: list[str]
    embedding: AddFunctor
    bound: int
    complete: bool
    notes: list[str] = field(default_factory=list)


def karoubi_envelope(c: AddCat, bound: int = DEFAULT_BOUND, spread: int = DEFAULT_SPREAD) -> KaroubiEnvelope:
    """Bounded idempotent completion.

    Objects are the base objects plus one representative for each isomorphism
    class of indecomposable summand not already isomorphic to a base object.
    Representatives are the lexicographically least primitive idempotent of
    their class on the first base object that carries one.
    """
    reps: dict[str, KaroubiObject] = {x: KaroubiObject((x,), c.identity((x,))) for x in c.objects}
    new: list[str] = []
    complete = True
    if bound >= 1:
        for x in c.objects:
            prims, finite = primitive_idempotents(c, (x,), spread)
            complete &= finite
            for e in prims:
                cand = KaroubiObject((x,), e)
                if any(kar_isomorphism(c, cand, reps[o], spread) is not None for o in reps):
                    continue
                label = _label(x, e)
                reps[label] = cand
                new.append(label)
    else:
        complete = False
    env = _envelope_category(c, reps)
    emb_maps = {}
    for x in c.objects:
        for y in c.objects:
            inc = kar_hom_inclusion(c, reps[x], reps[y])
            imgs = [inc.preimage(c.single(x, y, g)) for g in c.hom(x, y).gens()]
            emb_maps[x, y] = AbHom.from_images(c.hom(x, y), env.hom(x, y), imgs)
    emb = AddFunctor(c, env, {x: x for x in c.objects}, emb_maps, name="kar")
    notes = [f"primitive idempotents searched on single objects (bound {bound})"]
    if complete:
        notes.append("finite hom groups: list of indecomposables is complete (Krull-Schmidt)")
    else:
        notes.append(f"infinite hom groups: idempotents searched in the box |coord| <= {spread}")
    return KaroubiEnvelope(env, reps, new, emb, bound, complete, notes)


def _envelope_category(c: AddCat, reps: dict[str, KaroubiObject]) -> AddCat:
    labels = list(reps)
    incs = {(p, q): kar_hom_inclusion(c, reps[p], reps[q]) for p in labels for q in labels}
    hom = {k: v.source for k, v in incs.items()}

    def comp(p, q, r, g, f):
        return incs[p, r].preimage(c.compose(incs[q, r](g), incs[p, q](f)))

    identity = {p: incs[p, p].preimage(reps[p].idempotent) for p in labels}
    return AddCat.from_composition(labels, hom, comp, identity, name=f"Kar({c.name})")


@dataclass
class EquivalenceReport:
    equivalent: bool
    fully_faithful: bool
    failing_pair: tuple[str, str] | None
    retracts: dict[str, tuple[MatObject, MatMorphism, MatMorphism] | None]
    bound: int
    within_bound: bool

    def __bool__(self) -> bool:
        return self.equivalent


def retract_witness(f: AddFunctor, y: str):
    """Exhibit ``y`` as a retract of a sum of images of ``f``, or return None.

    ``y`` is such a retract iff ``id_y`` lies in the subgroup of End(y) spanned
    by composites ``y -> f(x) -> y``.  That is a linear condition; a solution
    gives the witness directly.
    """
    T = f.target
    terms = []
    for x in f.source.objects:
        fx = f.object_map[x]
        for s in T.hom(y, fx).gens():
            for r in T.hom(fx, y).gens():
                terms.append((fx, r, s))
    end = T.hom(y, y)
    if not terms:
        return None if any(T.id(y)) else ((), T.zero((y,), ()), T.zero((), (y,)))
    cols = [T.compose_elem(y, fx, y, r, s) for fx, r, s in terms]
    coeffs = solve(IntMatrix.from_columns(cols, end.ngens), T.id(y), end.moduli)
    if coeffs is None:
        return None
    used = [(c, t) for c, t in zip(coeffs, terms) if c]
    X = tuple(t[0] for _, t in used)
    s = T.morphism((y,), X, [[t[2]] for _, t in used])
    r = T.morphism(X, (y,), [[T.hom(t[0], y).scale(c, t[1]) for c, t in used]])
    return X, r, s


def equivalence_up_to_idempotents(f: AddFunctor, bound: int = DEFAULT_BOUND) -> EquivalenceReport:
    """Fully faithful, and every target object a retract of a sum of images."""
    for (x, y), m in f.hom_maps.items():
        if not m.is_bijective():
            return EquivalenceReport(False, False, (x, y), {}, bound, True)
    retracts = {y: retract_witness(f, y) for y in f.target.objects}
    ok = all(w is not None for w in retracts.values())
    within = all(w is None or len(w[0]) <= bound for w in retracts.values())
    return EquivalenceReport(ok, True, None, retracts, bound, within)

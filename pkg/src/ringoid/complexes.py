"""Bounded chain complexes over a presented additive category.

Grading is homological: ``d_n: X_n -> X_{n-1}``.  Weight truncations are the
stupid truncations, with degrees ``<= k`` forming the subcomplex, so a complex
supported in degrees ``>= 0`` has non-negative weight.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .addcat import AddCat, AddFunctor, MatMorphism, MatObject, is_isomorphism
from .karoubi import mat_objects
from .zlin import FpAbGroup, IntMatrix, Subquotient, Vector, kernel, subquotient


class BoundedComplex:
    """Objects ``X_n`` and differentials ``d_n: X_n -> X_{n-1}``; missing entries are zero."""

    def __init__(self, category: AddCat, terms: Mapping[int, MatObject],
                 diffs: Mapping[int, MatMorphism] | None = None):
        self.category = category
        self.terms = {n: tuple(X) for n, X in terms.items() if len(X)}
        self.diffs = {}
        for n, d in (diffs or {}).items():
            if d.source != self.term(n) or d.target != self.term(n - 1):
                raise ValueError(f"differential {n} has the wrong shape")
            if not category.is_zero(d):
                self.diffs[n] = d

    def term(self, n: int) -> MatObject:
        return self.terms.get(n, ())

    def diff(self, n: int) -> MatMorphism:
        d = self.diffs.get(n)
        return d if d is not None else self.category.zero(self.term(n), self.term(n - 1))

    def support(self) -> list[int]:
        return sorted(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def bounds(self) -> tuple[int, int] | None:
        s = self.support()
        return (s[0], s[-1]) if s else None

    def __repr__(self) -> str:
        parts = [f"{n}:{'+'.join(self.terms[n])}" for n in sorted(self.terms, reverse=True)]
        return f"Complex({' -> '.join(parts) or '0'})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoundedComplex):
            return NotImplemented
        return (self.category is other.category and self.terms == other.terms
                and self.diffs == other.diffs)

    __hash__ = None

    def is_valid(self) -> bool:
        c = self.category
        return all(c.is_zero(c.compose(self.diff(n - 1), self.diff(n))) for n in self.support())


@dataclass
class ChainMap:
    source: BoundedComplex
    target: BoundedComplex
    components: dict[int, MatMorphism]

    def component(self, n: int) -> MatMorphism:
        m = self.components.get(n)
        return m if m is not None else self.source.category.zero(self.source.term(n), self.target.term(n))

    def degrees(self) -> list[int]:
        return sorted(set(self.source.support()) | set(self.target.support()))

    def is_chain_map(self) -> bool:
        c = self.source.category
        for n in self.degrees() + [max(self.degrees(), default=0) + 1]:
            lhs = c.compose(self.target.diff(n), self.component(n))
            rhs = c.compose(self.component(n - 1), self.source.diff(n))
            if lhs != rhs:
                return False
        return True


def single(c: AddCat, X: MatObject | str, degree: int = 0) -> BoundedComplex:
    X = (X,) if isinstance(X, str) else tuple(X)
    return BoundedComplex(c, {degree: X})


def two_term(c: AddCat, f: MatMorphism, degree: int = 1) -> BoundedComplex:
    """``f`` placed as ``d_degree``."""
    return BoundedComplex(c, {degree: f.source, degree - 1: f.target}, {degree: f})


def shift(x: BoundedComplex, k: int = 1) -> BoundedComplex:
    """``x[k]``: ``x[k]_n = x_{n-k}`` with differentials multiplied by ``(-1)^k``."""
    c = x.category
    sign = -1 if k % 2 else 1
    return BoundedComplex(c, {n + k: X for n, X in x.terms.items()},
                          {n + k: c.scale(sign, d) for n, d in x.diffs.items()})


def _block_diag(c: AddCat, f: MatMorphism, g: MatMorphism) -> MatMorphism:
    rows = []
    for i in range(len(f.target)):
        rows.append(tuple(f.entries[i]) + tuple(c.hom(y, f.target[i]).zero() for y in g.source))
    for i in range(len(g.target)):
        rows.append(tuple(c.hom(x, g.target[i]).zero() for x in f.source) + tuple(g.entries[i]))
    return MatMorphism(f.source + g.source, f.target + g.target, tuple(rows))


def direct_sum(x: BoundedComplex, y: BoundedComplex) -> BoundedComplex:
    c = x.category
    degs = set(x.support()) | set(y.support())
    terms = {n: x.term(n) + y.term(n) for n in degs}
    diffs = {n: _block_diag(c, x.diff(n), y.diff(n)) for n in degs}
    return BoundedComplex(c, terms, diffs)


def _block(c: AddCat, blocks: Sequence[Sequence[MatMorphism]]) -> MatMorphism:
    """Assemble a block matrix ``[[a, b], [c, d]]`` of MatMorphisms."""
    source = sum((b.source for b in blocks[0]), ())
    target = sum((row[0].target for row in blocks), ())
    rows = []
    for row in blocks:
        for i in range(len(row[0].target)):
            rows.append(sum((tuple(b.entries[i]) for b in row), ()))
    return MatMorphism(source, target, tuple(rows))


def cone(f: ChainMap) -> BoundedComplex:
    """``cone(f)_n = X_{n-1} + Y_n`` with ``d = [[-d_X, 0], [f, d_Y]]``."""
    x, y, c = f.source, f.target, f.source.category
    degs = {n + 1 for n in x.support()} | set(y.support())
    terms = {n: x.term(n - 1) + y.term(n) for n in degs}
    diffs = {}
    for n in degs:
        blocks = [[c.neg(x.diff(n - 1)), c.zero(y.term(n), x.term(n - 2))],
                  [f.component(n - 1), y.diff(n)]]
        diffs[n] = _block(c, blocks)
    return BoundedComplex(c, terms, diffs)


def identity_map(x: BoundedComplex) -> ChainMap:
    c = x.category
    return ChainMap(x, x, {n: c.identity(x.term(n)) for n in x.support()})


def cone_of_identity(c: AddCat, X: MatObject | str, degree: int = 0) -> BoundedComplex:
    """The contractible complex ``X --1--> X`` in degrees ``degree + 1``, ``degree``."""
    return cone(identity_map(single(c, X, degree)))


def apply_functor(f: AddFunctor, x: BoundedComplex) -> BoundedComplex:
    return BoundedComplex(f.target, {n: f.map_object(X) for n, X in x.terms.items()},
                          {n: f.map_morphism(d) for n, d in x.diffs.items()})


# ---------------------------------------------------------------------------
# homotopy classes of chain maps


class _Blocks:
    """Direct sum of hom groups ``hom(X_n, Y_{n+offset})`` over degrees."""

    def __init__(self, c: AddCat, x: BoundedComplex, y: BoundedComplex, offset: int):
        self.c, self.offset = c, offset
        degs = [n for n in x.support() if y.term(n + offset)]
        self.parts = []
        start = 0
        for n in degs:
            X, Y = x.term(n), y.term(n + offset)
            size = len(c.block_moduli(X, Y))
            self.parts.append((n, X, Y, start, size))
            start += size
        self.size = start
        self.moduli = [d for n, X, Y, _, _ in self.parts for d in c.block_moduli(X, Y)]
        self.index = {p[0]: p for p in self.parts}

    def unflatten(self, v: Sequence[int]) -> dict[int, MatMorphism]:
        return {n: self.c.unflatten(X, Y, v[s:s + k]) for n, X, Y, s, k in self.parts}

    def flatten(self, comps: Mapping[int, MatMorphism]) -> list[int]:
        out = [0] * self.size
        for n, X, Y, s, k in self.parts:
            m = comps.get(n)
            if m is not None:
                out[s:s + k] = self.c.flatten(m)
        return out

    def unit(self, j: int) -> dict[int, MatMorphism]:
        return self.unflatten([int(i == j) for i in range(self.size)])


@dataclass
class KbHom:
    """``K^b(x, y)``: chain maps modulo null-homotopic ones."""

    group: FpAbGroup
    source: BoundedComplex
    target: BoundedComplex
    _maps: _Blocks
    _sq: Subquotient

    def class_of(self, f: ChainMap) -> Vector | None:
        """Homotopy class of ``f``, or None if ``f`` is not a chain map."""
        return self._sq.project(self._maps.flatten(f.components))

    def representative(self, v: Sequence[int]) -> ChainMap:
        comps = self._maps.unflatten(self._sq.lift @ v)
        return ChainMap(self.source, self.target, comps)

    def is_null_homotopic(self, f: ChainMap) -> bool:
        cls = self.class_of(f)
        return cls is not None and not any(cls)


def kb_hom_data(x: BoundedComplex, y: BoundedComplex) -> KbHom:
    c = x.category
    maps = _Blocks(c, x, y, 0)
    devs = _Blocks(c, x, y, -1)
    homs = _Blocks(c, x, y, 1)

    cols = []
    for j in range(maps.size):
        f = maps.unit(j)
        out = {}
        for n, m in f.items():
            # contribution of f_n to (d^Y f - f d^X) in degrees n and n + 1
            if n in devs.index:
                out[n] = c.add(out[n], c.compose(y.diff(n), m)) if n in out else c.compose(y.diff(n), m)
            if n + 1 in devs.index:
                t = c.neg(c.compose(m, x.diff(n + 1)))
                out[n + 1] = c.add(out[n + 1], t) if n + 1 in out else t
        cols.append(devs.flatten(out))
    delta0 = IntMatrix.from_columns(cols, devs.size) if cols else IntMatrix.zeros(devs.size, 0)

    bounds = []
    for j in range(homs.size):
        h = homs.unit(j)
        out = {}
        for n, m in h.items():
            # contribution of h_n to d^Y h + h d^X in degrees n and n + 1
            if n in maps.index:
                t = c.compose(y.diff(n + 1), m)
                out[n] = c.add(out[n], t) if n in out else t
            if n + 1 in maps.index:
                t = c.compose(m, x.diff(n + 1))
                out[n + 1] = c.add(out[n + 1], t) if n + 1 in out else t
        bounds.append(maps.flatten(out))

    cycles = kernel(delta0, devs.moduli) if maps.size else []
    sq = subquotient(cycles, bounds, maps.moduli)
    return KbHom(sq.group, x, y, maps, sq)


def kb_hom(x: BoundedComplex, y: BoundedComplex) -> FpAbGroup:
    """Chain maps ``x -> y`` modulo homotopy, as an abelian group."""
    return kb_hom_data(x, y).group


def compose_maps(g: ChainMap, f: ChainMap) -> ChainMap:
    c = f.source.category
    degs = set(f.degrees()) | set(g.degrees())
    return ChainMap(f.source, g.target, {n: c.compose(g.component(n), f.component(n)) for n in degs})


def subtract_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    c = f.source.category
    degs = set(f.degrees()) | set(g.degrees())
    return ChainMap(f.source, f.target, {n: c.sub(f.component(n), g.component(n)) for n in degs})


# ---------------------------------------------------------------------------
# truncations and weights


@dataclass
class Truncation:
    """``low -> x -> high`` with ``low`` in degrees ``<= k`` and ``high`` in degrees ``> k``."""

    k: int
    low: BoundedComplex
    high: BoundedComplex
    inclusion: ChainMap
    projection: ChainMap

    def is_degreewise_split_exact(self) -> bool:
        """Check ``p i = 0`` and the splitting identities ``r i = 1, p s = 1, i r + s p = 1``."""
        x = self.inclusion.target
        c = x.category
        if not (self.inclusion.is_chain_map() and self.projection.is_chain_map()):
            return False
        for n in x.support():
            X, L, H = x.term(n), self.low.term(n), self.high.term(n)
            i, p = self.inclusion.component(n), self.projection.component(n)
            r = c.identity(X) if L else c.zero(X, ())
            s = c.identity(X) if H else c.zero((), X)
            checks = [
                c.is_zero(c.compose(p, i)),
                c.compose(r, i) == c.identity(L),
                c.compose(p, s) == c.identity(H),
                c.add(c.compose(i, r), c.compose(s, p)) == c.identity(X),
            ]
            if not all(checks):
                return False
        return True


def stupid_truncation(x: BoundedComplex, k: int) -> Truncation:
    c = x.category
    low = BoundedComplex(c, {n: X for n, X in x.terms.items() if n <= k},
                         {n: d for n, d in x.diffs.items() if n <= k})
    high = BoundedComplex(c, {n: X for n, X in x.terms.items() if n > k},
                          {n: d for n, d in x.diffs.items() if n > k + 1})
    inc = ChainMap(low, x, {n: c.identity(X) for n, X in low.terms.items()})
    proj = ChainMap(x, high, {n: c.identity(X) for n, X in high.terms.items()})
    return Truncation(k, low, high, inc, proj)


@dataclass(frozen=True)
class WeightWindow:
    """Weight classes by degree support of the reduced complex.

    ``x`` has weight ``>= 0`` when its reduced form lives in degrees
    ``>= ge0_from`` and weight ``<= 0`` when it lives in degrees ``<= le0_upto``.
    ``None`` declares the class to be everything.
    """

    ge0_from: int | None = 0
    le0_upto: int | None = 0

    def weight_ge(self, x: BoundedComplex, w: int = 0) -> bool:
        if self.ge0_from is None:
            return True
        b = weight_complex(x).complex.bounds()
        return b is None or b[0] >= self.ge0_from + w

    def weight_le(self, x: BoundedComplex, w: int = 0) -> bool:
        if self.le0_upto is None:
            return True
        b = weight_complex(x).complex.bounds()
        return b is None or b[1] <= self.le0_upto + w


STUPID = WeightWindow()


@dataclass
class WeightReport:
    ok: bool
    checked: dict[str, int] = field(default_factory=dict)
    failure: str | None = None
    witness: tuple | None = None
    bound: int = 1


def heart_objects(c: AddCat, max_size: int = 1) -> list[MatObject]:
    return list(mat_objects(c, max_size, 1))


def check_weight_axioms(c: AddCat, sample: Iterable[BoundedComplex], window: WeightWindow = STUPID,
                        heart_size: int = 1, max_shift: int = 2) -> WeightReport:
    """Check the weight axioms on a sample of complexes.

    Covers shift closure, orthogonality between weight ``<= 0`` and weight
    ``>= 1``, truncation triangles, boundedness, and negative
    self-orthogonality of heart objects (sums of at most ``heart_size`` base
    objects in degree 0).
    """
    sample = list(sample)
    counts = {"shift": 0, "orthogonality": 0, "triangles": 0, "bounded": 0, "heart": 0}
    lows, highs = [], []
    for x in sample:
        if not x.is_valid():
            return WeightReport(False, counts, "complex", (x,))
        if window.weight_ge(x) and not window.weight_ge(shift(x, 1)):
            return WeightReport(False, counts, "shift", (x,))
        if window.weight_le(x) and not window.weight_le(shift(x, -1)):
            return WeightReport(False, counts, "shift", (x,))
        counts["shift"] += 1
        t = stupid_truncation(x, 0)
        if not t.is_degreewise_split_exact():
            return WeightReport(False, counts, "triangle", (x,))
        if not (window.weight_le(t.low) and window.weight_ge(t.high, 1)):
            return WeightReport(False, counts, "triangle-window", (x, t.low, t.high))
        counts["triangles"] += 1
        b = x.bounds()
        if b is not None and not (window.weight_ge(x, b[0]) and window.weight_le(x, b[1])):
            return WeightReport(False, counts, "bounded", (x,))
        counts["bounded"] += 1
        for z in (x, t.low, t.high):
            if window.weight_le(z):
                lows.append(z)
            if window.weight_ge(z, 1):
                highs.append(z)
    for x in lows:
        for y in highs:
            if not kb_hom(x, y).is_trivial():
                return WeightReport(False, counts, "orthogonality", (x, y))
            counts["orthogonality"] += 1
    heart = heart_objects(c, heart_size)
    for X in heart:
        for Y in heart:
            for n in range(1, max_shift + 1):
                if not kb_hom(single(c, X), single(c, Y, n)).is_trivial():
                    return WeightReport(False, counts, "heart", (X, Y, n))
                counts["heart"] += 1
    return WeightReport(True, counts, bound=heart_size)


# ---------------------------------------------------------------------------
# weight complex


@dataclass
class WeightComplexResult:
    """Reduced complex with mutually inverse homotopy equivalences."""

    complex: BoundedComplex
    to_reduced: ChainMap
    from_reduced: ChainMap
    eliminated: int


def _drop(X: MatObject, k: int) -> MatObject:
    return X[:k] + X[k + 1:]


def _submatrix(f: MatMorphism, rows: Sequence[int], cols: Sequence[int]) -> MatMorphism:
    return MatMorphism(tuple(f.source[j] for j in cols), tuple(f.target[i] for i in rows),
                       tuple(tuple(f.entries[i][j] for j in cols) for i in rows))


def _find_invertible(x: BoundedComplex):
    c = x.category
    for n in sorted(x.diffs):
        d = x.diffs[n]
        for j, src in enumerate(d.source):
            for i, tgt in enumerate(d.target):
                e = d.entries[i][j]
                if not any(e):
                    continue
                dec = is_isomorphism(c, c.single(src, tgt, e))
                if dec:
                    return n, i, j, dec.inverse
    return None


def _eliminate(x: BoundedComplex, n: int, i: int, j: int, inv: MatMorphism):
    """Cancel the invertible entry ``d_n[i][j]``; returns the new complex and the two maps."""
    c = x.category
    d = x.diff(n)
    B, C = x.term(n), x.term(n - 1)
    rest_b = [k for k in range(len(B)) if k != j]
    rest_c = [k for k in range(len(C)) if k != i]
    delta = _submatrix(d, [i], rest_b)
    gamma = _submatrix(d, rest_c, [j])
    eps = _submatrix(d, rest_c, rest_b)
    new_d = c.sub(eps, c.compose(gamma, c.compose(inv, delta)))
    terms = dict(x.terms)
    terms[n], terms[n - 1] = _drop(B, j), _drop(C, i)
    diffs = {m: x.diff(m) for m in x.diffs}
    diffs[n] = new_d
    all_b, all_c = list(range(len(B))), list(range(len(C)))
    if n + 1 in diffs:
        diffs[n + 1] = _submatrix(x.diff(n + 1), rest_b, list(range(len(x.term(n + 1)))))
    if n - 1 in diffs:
        diffs[n - 1] = _submatrix(x.diff(n - 1), list(range(len(x.term(n - 2)))), rest_c)
    y = BoundedComplex(c, terms, {m: v for m, v in diffs.items()})
    # x -> y: projection in degree n, [-gamma inv, 1] in degree n - 1
    ident_b, ident_c = c.identity(B), c.identity(C)
    f_n = _submatrix(ident_b, rest_b, all_b)
    gi = c.neg(c.compose(gamma, inv))
    f_n1 = _submatrix(ident_c, rest_c, all_c)
    f_n1 = c.add(f_n1, _place_column(c, gi, C, i, rest_c))
    # y -> x: [-inv delta; 1] in degree n, inclusion in degree n - 1
    g_n = _submatrix(ident_b, all_b, rest_b)
    g_n = c.add(g_n, _place_row(c, c.neg(c.compose(inv, delta)), B, j, rest_b))
    g_n1 = _submatrix(ident_c, all_c, rest_c)
    f_comps, g_comps = {}, {}
    for m in x.support():
        if m == n:
            f_comps[m], g_comps[m] = f_n, g_n
        elif m == n - 1:
            f_comps[m], g_comps[m] = f_n1, g_n1
        else:
            f_comps[m] = g_comps[m] = c.identity(x.term(m))
    return y, ChainMap(x, y, f_comps), ChainMap(y, x, g_comps)


def _place_column(c: AddCat, col: MatMorphism, C: MatObject, i: int, rest: Sequence[int]) -> MatMorphism:
    """Map ``C -> C'`` whose only nonzero column is ``col`` at position ``i``."""
    Cp = tuple(C[k] for k in rest)
    rows = []
    for r, y in enumerate(Cp):
        rows.append(tuple(col.entries[r][0] if k == i else c.hom(C[k], y).zero() for k in range(len(C))))
    return MatMorphism(C, Cp, tuple(rows))


def _place_row(c: AddCat, row: MatMorphism, B: MatObject, j: int, rest: Sequence[int]) -> MatMorphism:
    """Map ``B' -> B`` whose only nonzero row is ``row`` at position ``j``."""
    Bp = tuple(B[k] for k in rest)
    rows = []
    for k in range(len(B)):
        rows.append(tuple(row.entries[0][s] if k == j else c.hom(Bp[s], B[k]).zero() for s in range(len(Bp))))
    return MatMorphism(Bp, B, tuple(rows))


def weight_complex(x: BoundedComplex) -> WeightComplexResult:
    """Complex of heart objects, reduced by cancelling invertible differential entries.

    For a discrete base category the stupid-truncation tower returns ``x``
    itself, so this is ``x`` up to removal of contractible summands, done in a
    fixed order so the output is canonical for a given input.
    """
    current = x
    f = identity_map(x)
    g = identity_map(x)
    steps = 0
    while True:
        found = _find_invertible(current)
        if found is None:
            break
        n, i, j, inv = found
        current, f_step, g_step = _eliminate(current, n, i, j, inv)
        f = compose_maps(f_step, f)
        g = compose_maps(g, g_step)
        steps += 1
    return WeightComplexResult(current, f, g, steps)


# ---------------------------------------------------------------------------
# random complexes


def random_complex(c: AddCat, rng: random.Random, degrees: Sequence[int] = (0, 1, 2),
                   max_summands: int = 2, spread: int = 2) -> BoundedComplex:
    """A random complex on the given consecutive degrees with ``d o d = 0``."""
    degs = sorted(degrees)
    terms = {n: tuple(rng.choice(c.objects) for _ in range(rng.randint(0, max_summands))) for n in degs}
    diffs: dict[int, MatMorphism] = {}
    for n in degs[1:]:
        X, Y = terms[n], terms.get(n - 1, ())
        moduli = c.block_moduli(X, Y)
        if not moduli:
            continue
        prev = diffs.get(n - 1)
        if prev is None:
            gens = [[int(i == k) for i in range(len(moduli))] for k in range(len(moduli))]
        else:
            a = c.postcompose_matrix(prev, X)
            gens = kernel(a, c.block_moduli(X, prev.target))
        if not gens:
            continue
        v = [0] * len(moduli)
        for g in gens:
            k = rng.randint(-spread, spread)
            v = [a + k * b for a, b in zip(v, g)]
        diffs[n] = c.unflatten(X, Y, v)
    return BoundedComplex(c, terms, diffs)

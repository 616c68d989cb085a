"""Exact integer linear algebra.

Smith normal form, finitely generated abelian groups in invariant-factor form,
and homomorphisms between them.  Everything is plain Python ``int`` so there is
no overflow at any size.

Two layers live here.  `FpAbGroup` and `AbHom` are the canonical, user-facing
objects.  Underneath, the helpers `solve`, `kernel` and `present` work on a bare
list of *moduli* (one per coordinate, ``0`` meaning an infinite cyclic
coordinate), which is how block-structured hom groups are handled elsewhere
without canonicalizing every intermediate sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """A dense integer matrix, stored row-major."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [tuple(int(a) for a in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        columns = [tuple(c) for c in columns]
        return cls(rows, len(columns), tuple(tuple(c[i] for c in columns) for i in range(rows)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal_matrix(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntMatrix:
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for i, a in enumerate(diag):
            data[i][i] = a
        return cls.from_rows(data, cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(
            tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
            ocols = other.columns()
            return IntMatrix(self.rows, other.cols,
                             tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in ocols)
                                   for r in self.entries))
        v = tuple(other)
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.entries)

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix(self.rows, self.cols + other.cols,
                         tuple(a + b for a, b in zip(self.entries, other.entries)))

    def is_diagonal(self) -> bool:
        return all(a == 0 for i, r in enumerate(self.entries) for j, a in enumerate(r) if i != j)

    def diagonal(self) -> Vector:
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        n = self.rows
        if n != self.cols:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = [list(r) for r in self.entries]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


def _snf(a: Sequence[Sequence[int]], nrows: int, ncols: int):
    """Return (U, U^-1, D, V) as nested lists with U A V = D."""
    A = [list(r) for r in a]
    U = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    Ui = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    V = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q == 0:
            return
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]
        for r in Ui:
            r[src] -= q * r[dst]

    def add_col(dst, src, q):
        if q == 0:
            return
        for r in A:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]
        for r in Ui:
            r[i] = -r[i]

    for t in range(min(nrows, ncols)):
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            for i in range(t + 1, nrows):
                add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, ncols):
                add_col(j, t, -(A[t][j] // p))
            rest = [(abs(A[i][t]), i, None) for i in range(t + 1, nrows) if A[i][t]]
            rest += [(abs(A[t][j]), None, j) for j in range(t + 1, ncols) if A[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda e: e[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next((i for i in range(t + 1, nrows)
                        if any(A[i][j] % p for j in range(t + 1, ncols))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            negate_row(t)
    return U, Ui, A, V


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(u, d, v)`` with ``u @ m @ v == d`` in Smith normal form.

    ``u`` and ``v`` are unimodular; the diagonal of ``d`` is non-negative with
    each entry dividing the next (zeros last).
    """
    U, _, D, V = _snf(m.entries, m.rows, m.cols)
    return (IntMatrix.from_rows(U, m.rows), IntMatrix.from_rows(D, m.cols),
            IntMatrix.from_rows(V, m.cols))


def _relation_matrix(a: IntMatrix, moduli: Sequence[int]):
    """[a | diag(moduli)] restricted to nonzero moduli, as nested lists."""
    extra = [i for i, d in enumerate(moduli) if d]
    rows = [list(r) + [moduli[i] if i == k else 0 for k in extra]
            for i, r in enumerate(a.entries)]
    return rows, a.cols + len(extra)


def reduce_vector(v: Iterable[int], moduli: Sequence[int]) -> Vector:
    return tuple(x % d if d else x for x, d in zip(v, moduli))


def solve(a: IntMatrix, b: Sequence[int], moduli: Sequence[int] | None = None) -> Vector | None:
    """Find integer ``x`` with ``a @ x == b`` coordinatewise modulo ``moduli``.

    Returns ``None`` when no solution exists.
    """
    if moduli is None:
        moduli = (0,) * a.rows
    rows, ncols = _relation_matrix(a, moduli)
    U, _, D, V = _snf(rows, a.rows, ncols)
    c = [sum(u * x for u, x in zip(ur, b)) for ur in U]
    y = [0] * ncols
    for i in range(a.rows):
        d = D[i][i] if i < ncols else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    x = [sum(V[r][k] * y[k] for k in range(ncols)) for r in range(a.cols)]
    return tuple(x)


def kernel(a: IntMatrix, moduli: Sequence[int] | None = None) -> list[Vector]:
    """Generators of the lattice ``{x : a @ x == 0 mod moduli}``."""
    if moduli is None:
        moduli = (0,) * a.rows
    rows, ncols = _relation_matrix(a, moduli)
    _, _, D, V = _snf(rows, a.rows, ncols)
    rank = sum(1 for i in range(min(a.rows, ncols)) if D[i][i])
    gens = []
    for j in range(rank, ncols):
        g = tuple(V[r][j] for r in range(a.cols))
        if any(g):
            gens.append(g)
    return gens


# ---------------------------------------------------------------------------
# Groups


def _is_canonical(factors: Sequence[int]) -> bool:
    finite = [d for d in factors if d != 0]
    if any(d <= 1 for d in finite):
        return False
    nz = len(finite)
    if any(d != 0 for d in factors[nz:]):
        return False
    return all(finite[i + 1] % finite[i] == 0 for i in range(nz - 1))


@dataclass(frozen=True)
class FpAbGroup:
    """A finitely generated abelian group ``Z/d_1 + ... + Z/d_k``.

    The factor list is canonical: every nonzero ``d_i > 1`` divides the next
    nonzero factor and infinite factors (``0``) come last.  Two groups are
    isomorphic iff their factor lists agree, so ``==`` is isomorphism.
    Elements are tuples of coordinates, one per factor.
    """

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(int(d) for d in self.invariant_factors))
        if not _is_canonical(self.invariant_factors):
            raise ValueError(f"not in invariant-factor form: {list(self.invariant_factors)}")

    @classmethod
    def trivial(cls) -> FpAbGroup:
        return cls(())

    @classmethod
    def cyclic(cls, n: int) -> FpAbGroup:
        return cls(() if n == 1 else (n,))

    @classmethod
    def free(cls, rank: int) -> FpAbGroup:
        return cls((0,) * rank)

    @classmethod
    def from_moduli(cls, moduli: Sequence[int]) -> FpAbGroup:
        return present_moduli(moduli).group

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors)

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.invariant_factors

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d)

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def order(self) -> int | None:
        """Number of elements, or ``None`` for an infinite group."""
        return prod(self.invariant_factors) if self.is_finite() else None

    def zero(self) -> Vector:
        return (0,) * self.ngens

    def gens(self) -> list[Vector]:
        n = self.ngens
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]

    def reduce(self, v: Iterable[int]) -> Vector:
        v = tuple(v)
        if len(v) != self.ngens:
            raise ValueError(f"element {v} has wrong length for {self}")
        return reduce_vector(v, self.invariant_factors)

    def add(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        return self.reduce(x + y for x, y in zip(a, b))

    def sub(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        return self.reduce(x - y for x, y in zip(a, b))

    def neg(self, a: Sequence[int]) -> Vector:
        return self.reduce(-x for x in a)

    def scale(self, n: int, a: Sequence[int]) -> Vector:
        return self.reduce(n * x for x in a)

    def contains(self, v: Sequence[int]) -> bool:
        return len(v) == self.ngens and all(
            0 <= x < d for x, d in zip(v, self.invariant_factors) if d)

    def elements(self) -> Iterator[Vector]:
        if not self.is_finite():
            raise ValueError(f"cannot enumerate the infinite group {self}")
        return iter(product(*(range(d) for d in self.invariant_factors)))

    def element_order(self, v: Sequence[int]) -> int:
        """Order of an element; 0 if it has infinite order."""
        o = 1
        for x, d in zip(self.reduce(v), self.invariant_factors):
            if d == 0:
                if x:
                    return 0
            else:
                o = o * (d // gcd(d, x)) // gcd(o, d // gcd(d, x))
        return o

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class Presentation:
    """A canonical group together with coordinate changes to a generating set.

    ``to_canon`` (m x n) sends generator coordinates to canonical
    coordinates; ``from_canon`` (n x m) lifts canonical generators back.
    """

    group: FpAbGroup
    to_canon: IntMatrix
    from_canon: IntMatrix

    def canon(self, v: Sequence[int]) -> Vector:
        return self.group.reduce(self.to_canon @ v)

    def lift(self, c: Sequence[int]) -> Vector:
        return self.from_canon @ c


def present(ngens: int, relations: Sequence[Sequence[int]]) -> Presentation:
    """Canonical form of ``Z^ngens / <relations>``."""
    relations = [tuple(r) for r in relations if any(r)]
    rows = [[r[i] for r in relations] for i in range(ngens)]
    U, Ui, D, _ = _snf(rows, ngens, len(relations))
    keep, factors = [], []
    for i in range(ngens):
        d = D[i][i] if i < len(relations) else 0
        if d != 1:
            keep.append(i)
            factors.append(d)
    to_canon = IntMatrix.from_rows([U[i] for i in keep], ngens)
    from_canon = IntMatrix.from_rows([[Ui[r][i] for i in keep] for r in range(ngens)], len(keep))
    group = FpAbGroup(factors)
    return Presentation(group, to_canon, from_canon)


def present_moduli(moduli: Sequence[int]) -> Presentation:
    n = len(moduli)
    return present(n, [tuple(d if k == i else 0 for k in range(n)) for i, d in enumerate(moduli) if d])


# ---------------------------------------------------------------------------
# Homomorphisms


@dataclass(frozen=True)
class AbHom:
    """A homomorphism given by the images of the source generators (columns)."""

    source: FpAbGroup
    target: FpAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        m = self.matrix
        if m.rows != self.target.ngens or m.cols != self.source.ngens:
            raise ValueError("matrix shape does not match source/target")
        reduced = IntMatrix.from_columns(
            [self.target.reduce(c) for c in m.columns()], m.rows)
        object.__setattr__(self, "matrix", reduced)

    @classmethod
    def from_images(cls, source: FpAbGroup, target: FpAbGroup,
                    images: Sequence[Sequence[int]]) -> AbHom:
        return cls(source, target, IntMatrix.from_columns(images, target.ngens))

    @classmethod
    def identity(cls, g: FpAbGroup) -> AbHom:
        return cls(g, g, IntMatrix.identity(g.ngens))

    @classmethod
    def zero(cls, source: FpAbGroup, target: FpAbGroup) -> AbHom:
        return cls(source, target, IntMatrix.zeros(target.ngens, source.ngens))

    def __call__(self, x: Sequence[int]) -> Vector:
        return self.target.reduce(self.matrix @ x)

    def is_valid(self) -> bool:
        """Relations of the source go to zero in the target."""
        for d, col in zip(self.source.invariant_factors, self.matrix.columns()):
            if d and any(self.target.reduce(d * c for c in col)):
                return False
        return True

    def compose(self, other: AbHom) -> AbHom:
        """``self o other``."""
        if other.target != self.source:
            raise ValueError("homomorphisms are not composable")
        return AbHom(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: AbHom) -> AbHom:
        m = IntMatrix.from_rows([[a + b for a, b in zip(r, s)]
                                 for r, s in zip(self.matrix.entries, other.matrix.entries)],
                                self.matrix.cols)
        return AbHom(self.source, self.target, m)

    def __neg__(self) -> AbHom:
        m = IntMatrix.from_rows([[-a for a in r] for r in self.matrix.entries], self.matrix.cols)
        return AbHom(self.source, self.target, m)

    def __sub__(self, other: AbHom) -> AbHom:
        return self + (-other)

    def __eq__(self, other):
        return (isinstance(other, AbHom) and self.source == other.source
                and self.target == other.target and self.matrix == other.matrix)

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def preimage(self, y: Sequence[int]) -> Vector | None:
        x = solve(self.matrix, y, self.target.moduli)
        return None if x is None else self.source.reduce(x)

    @cached_property
    def kernel_generators(self) -> list[Vector]:
        gens = kernel(self.matrix, self.target.moduli)
        out = []
        for g in gens:
            g = self.source.reduce(g)
            if any(g):
                out.append(g)
        return out

    def kernel(self) -> tuple[FpAbGroup, AbHom]:
        return subgroup_from_generators(self.source, self.kernel_generators)

    def image(self) -> tuple[FpAbGroup, AbHom]:
        return subgroup_from_generators(self.target, self.matrix.columns())

    def cokernel(self) -> tuple[FpAbGroup, AbHom]:
        return cokernel_presentation(self)

    def is_injective(self) -> bool:
        return not self.kernel_generators

    def is_surjective(self) -> bool:
        return all(self.preimage(g) is not None for g in self.target.gens())

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> AbHom:
        if not self.is_bijective():
            raise ValueError("homomorphism is not invertible")
        return AbHom.from_images(self.target, self.source,
                                 [self.preimage(g) for g in self.target.gens()])


def cokernel_presentation(m: AbHom) -> tuple[FpAbGroup, AbHom]:
    """Cokernel of ``m`` in canonical form, with the projection onto it."""
    t = m.target
    rels = [tuple(d if k == i else 0 for k in range(t.ngens)) for i, d in enumerate(t.moduli) if d]
    rels += m.matrix.columns()
    p = present(t.ngens, rels)
    return p.group, AbHom(t, p.group, p.to_canon)


def subgroup_from_generators(g: FpAbGroup, gens: Sequence[Sequence[int]]) -> tuple[FpAbGroup, AbHom]:
    """The subgroup of ``g`` generated by ``gens`` and its inclusion."""
    gens = [g.reduce(x) for x in gens]
    gens = [x for x in gens if any(x)]
    if not gens:
        return FpAbGroup.trivial(), AbHom.zero(FpAbGroup.trivial(), g)
    a = IntMatrix.from_columns(gens, g.ngens)
    p = present(len(gens), kernel(a, g.moduli))
    return p.group, AbHom(p.group, g, a @ p.from_canon)


def same_subgroup(g: FpAbGroup, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    """Whether two generating sets span the same subgroup of ``g``."""
    return contains_all(g, a, b) and contains_all(g, b, a)


def contains_all(g: FpAbGroup, gens: Sequence[Sequence[int]], elems: Sequence[Sequence[int]]) -> bool:
    """Whether every element of ``elems`` lies in the span of ``gens``."""
    gens = [g.reduce(x) for x in gens]
    m = IntMatrix.from_columns(gens, g.ngens) if gens else IntMatrix.zeros(g.ngens, 0)
    return all(solve(m, e, g.moduli) is not None for e in elems)


def direct_sum(*groups: FpAbGroup) -> tuple[FpAbGroup, list[AbHom], list[AbHom]]:
    """Canonical direct sum with its injections and projections."""
    moduli = [d for gr in groups for d in gr.moduli]
    p = present_moduli(moduli)
    s = p.group
    inj, proj, offset = [], [], 0
    for gr in groups:
        n = gr.ngens
        inj.append(AbHom(gr, s, IntMatrix.from_columns(
            [p.to_canon.column(offset + k) for k in range(n)], s.ngens)))
        proj.append(AbHom(s, gr, IntMatrix.from_rows(
            [p.from_canon.entries[offset + k] for k in range(n)], s.ngens)))
        offset += n
    return s, inj, proj


def tensor_presentation(a: FpAbGroup, b: FpAbGroup) -> Presentation:
    """``a (x) b`` presented on the pure tensors of generators, index ``i * b.ngens + j``."""
    moduli = [gcd(x, y) for x in a.moduli for y in b.moduli]
    return present_moduli(moduli)


def group_tensor(a: FpAbGroup, b: FpAbGroup) -> FpAbGroup:
    """``a (x) b`` over the integers."""
    return tensor_presentation(a, b).group


def tensor_pairing(a: FpAbGroup, b: FpAbGroup):
    """Return ``(a (x) b, pair)`` where ``pair(x, y)`` is ``x (x) y``."""
    p = tensor_presentation(a, b)

    def pair(x: Sequence[int], y: Sequence[int]) -> Vector:
        return p.canon([xi * yj for xi in x for yj in y])

    return p.group, pair


@dataclass(frozen=True)
class Subquotient:
    """``span(sub) / (span(rel) + relations of the ambient moduli)``."""

    group: FpAbGroup
    lift: IntMatrix          # ambient coords of the canonical generators
    ambient_moduli: tuple[int, ...]
    _sub: IntMatrix
    _rel: IntMatrix
    _to_canon: IntMatrix

    def project(self, v: Sequence[int]) -> Vector | None:
        """Class of an ambient vector, or ``None`` if it is not in the subgroup."""
        k = self._sub.cols
        a = self._sub.hstack(self._rel)
        x = solve(a, v, self.ambient_moduli)
        if x is None:
            return None
        return self.group.reduce(self._to_canon @ x[:k])


def subquotient(sub: Sequence[Sequence[int]], rel: Sequence[Sequence[int]],
                moduli: Sequence[int]) -> Subquotient:
    n = len(moduli)
    s = IntMatrix.from_columns(sub, n) if sub else IntMatrix.zeros(n, 0)
    r = IntMatrix.from_columns(rel, n) if rel else IntMatrix.zeros(n, 0)
    k = s.cols
    rels = [g[:k] for g in kernel(s.hstack(r), moduli)]
    p = present(k, rels)
    lift = s @ p.from_canon
    lift = IntMatrix.from_columns([reduce_vector(c, moduli) for c in lift.columns()], n)
    return Subquotient(p.group, lift, tuple(moduli), s, r, p.to_canon)


def random_element(g: FpAbGroup, rng, spread: int = 3) -> Vector:
    """A uniformly random element (finite coordinates) with bounded free part."""
    return tuple(rng.randrange(d) if d else rng.randint(-spread, spread) for d in g.moduli)

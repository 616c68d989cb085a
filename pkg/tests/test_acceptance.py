"""Acceptance suite: one PASS/FAIL line per criterion, each under its time limit.

Run ``pytest tests/test_acceptance.py -s`` to see the lines, or execute the
file directly.
"""
import random
import time
from itertools import product

from ringoid.addcat import is_isomorphism, validate_category
from ringoid.complexes import STUPID, check_weight_axioms, random_complex
from ringoid.ideals import (check_nilpotent_extension, factoring_subgroup_bruteforce, kernel_ideal, lift_inverse,
                            quotient_category)
from ringoid.karoubi import idempotents, karoubi_envelope, mat_objects, split_idempotent
from ringoid.kzero import k0_localization_check, k0_nilinvariance_check
from ringoid.sqzero import build_square_zero, kernel_matches_bimodule, sqzero_compose, verify_square_zero_nilpotent
from ringoid.zlin import IntMatrix, smith_normal_form
from ringoid.zoo import (fixture_categories, fixture_extensions, nilpotent_surjections, random_category,
                         square_zero_instances, z4_z2)


def report(number: int, title: str, ok: bool, elapsed: float, limit: float, detail: str = "") -> None:
    passed = ok and elapsed < limit
    extra = f"; {detail}" if detail else ""
    print(f"{'PASS' if passed else 'FAIL'} {number}. {title} ({elapsed:.1f}s of {limit:.0f}s{extra})")
    assert ok, f"criterion {number} failed{extra}"
    assert elapsed < limit, f"criterion {number} took {elapsed:.1f}s, limit {limit:.0f}s"


def test_quotient_matches_bruteforce():
    start = time.perf_counter()
    rng = random.Random(2024)
    instances, pairs = 100, 0
    bad = None
    for _ in range(instances):
        a = random_category(rng)
        kill = rng.sample(list(a.objects), rng.randint(1, len(a.objects)))
        q = quotient_category(a, kill)
        for x, y in product(a.objects, repeat=2):
            brute = factoring_subgroup_bruteforce(a, kill, x, y)
            proj = q.projection.hom_maps[x, y]
            zero = q.category.hom(x, y).zero()
            killed_by_proj = {v for v in a.hom(x, y).elements() if proj(v) == zero}
            pairs += 1
            if killed_by_proj != brute or q.category.hom(x, y).order() * len(brute) != a.hom(x, y).order():
                bad = bad or (a.name, kill, x, y)
    report(1, "quotient hom groups equal brute-force cokernels", bad is None, time.perf_counter() - start, 60,
           f"{instances} categories, {pairs} hom groups" + (f", mismatch {bad}" if bad else ""))


def test_nil_invariance_of_k0():
    start = time.perf_counter()
    maps = nilpotent_surjections(256)
    names = {f.name for f in maps}
    ok = len(maps) >= 50
    exp = {n: check_nilpotent_extension(f.as_functor()).certificate.exponent
           for f in maps for n in ("Z/4->Z/2", "Z/8->Z/2") if f.name == n}
    ok &= exp == {"Z/4->Z/2": 2, "Z/8->Z/2": 3}
    failures = [f.name for f in maps if not k0_nilinvariance_check(f.as_functor(), with_oracle=True).ok]
    ok &= not failures
    report(2, "K0 is invariant under nilpotent extensions", ok, time.perf_counter() - start, 120,
           f"{len(maps)} surjections, {len(names)} distinct names, exponents {exp}"
           + (f", failing {failures}" if failures else ""))


def _compose_law_holds(s) -> bool:
    a, c = s.base, s.category
    for x, y, z in product(a.objects, repeat=3):
        for g in c.hom(y, z).gens():
            for f in c.hom(x, y).gens():
                got = s.split(x, z, c.compose_elem(x, y, z, g, f))
                want = sqzero_compose(a, s.bimodule, x, y, z, s.split(y, z, g), s.split(x, y, f))
                if got != want:
                    return False
    return True


def test_square_zero_extensions():
    start = time.perf_counter()
    count = 0
    bad = None
    for a, m in square_zero_instances(16, 16):
        count += 1
        s = build_square_zero(a, m)
        back = s.section.then(s.projection)
        checks = {
            "bimodule": bool(m.validate()),
            "category": bool(validate_category(s.category)),
            "section": all(back.map_elem(x, y, g) == g
                           for x, y in product(a.objects, repeat=2) for g in a.hom(x, y).gens()),
            "kernel": kernel_matches_bimodule(s, kernel_ideal(s.projection)),
            "composition": _compose_law_holds(s),
        }
        cert = verify_square_zero_nilpotent(s)
        checks["exponent"] = cert.exponent == (2 if m.order() > 1 else 1)
        failed = [k for k, v in checks.items() if not v]
        if failed and bad is None:
            bad = (a.name, failed)
    report(3, "square-zero extensions are nilpotent extensions of exponent at most 2",
           bad is None and count > 0, time.perf_counter() - start, 60,
           f"{count} (ring, bimodule) pairs" + (f", failing {bad}" if bad else ""))


def test_stupid_weight_structure():
    start = time.perf_counter()
    rng = random.Random(7)
    checked = 0
    failures = []
    for name, c in fixture_categories().items():
        sample = [random_complex(c, rng) for _ in range(20)]
        checked += len(sample)
        rep = check_weight_axioms(c, sample, STUPID)
        if not rep.ok:
            failures.append((name, rep.failure))
    report(4, "stupid truncations satisfy the weight axioms", not failures and checked >= 200,
           time.perf_counter() - start, 60, f"{checked} complexes" + (f", failing {failures}" if failures else ""))


def test_karoubi_envelope_is_idempotent_complete():
    start = time.perf_counter()
    split = 0
    failures = []
    for name, c in fixture_categories().items():
        env = karoubi_envelope(c)
        k = env.category
        for X in mat_objects(k, 1, 1):
            es, _ = idempotents(k, X)
            for e in es:
                sp = split_idempotent(k, e)
                if k.compose(sp.s, sp.r) != e or k.compose(sp.r, sp.s) != k.identity(sp.y):
                    failures.append((name, X))
                split += 1
        if karoubi_envelope(k).new_objects:
            failures.append((name, "double envelope adds objects"))
    report(5, "idempotents split in the envelope and completing twice adds nothing", not failures,
           time.perf_counter() - start, 30, f"{split} idempotents split" + (f", failing {failures}" if failures else ""))


def test_k0_localization_sequence():
    start = time.perf_counter()
    v = k0_localization_check(["Z2"], z4_z2())
    ok = v.ok and [str(g) for g in v.groups] == ["Z", "Z + Z", "Z"]
    rng = random.Random(11)
    failures = []
    n = 20
    for _ in range(n):
        a = random_category(rng)
        kill = rng.sample(list(a.objects), rng.randint(1, len(a.objects)))
        if not k0_localization_check(kill, a).ok:
            failures.append((a.name, kill))
    ok &= not failures
    report(6, "K0 localization sequence is exact", ok, time.perf_counter() - start, 60,
           f"Z2 in A gives {' -> '.join(str(g) for g in v.groups)}, {n} generated instances"
           + (f", failing {failures}" if failures else ""))


def test_nilpotent_extensions_are_conservative():
    start = time.perf_counter()
    inverted = checked = 0
    failures = []
    for name, f in fixture_extensions().items():
        S, T = f.source, f.target
        exponent = check_nilpotent_extension(f).certificate.exponent
        for X, Y in product(list(mat_objects(S, 2, 1)), repeat=2):
            if S.hom_order(X, Y) > 4096:
                continue
            for u in S.hom_elements(X, Y):
                checked += 1
                if is_isomorphism(T, f.map_morphism(u)):
                    try:
                        inv = lift_inverse(f, u, exponent).inverse
                    except (ValueError, ArithmeticError) as exc:
                        failures.append((name, X, Y, str(exc)))
                        continue
                    if S.compose(inv, u) != S.identity(X):
                        failures.append((name, X, Y))
                    inverted += 1
                elif is_isomorphism(S, u):
                    failures.append((name, X, Y, "iso with non-invertible image"))
    report(7, "morphisms with invertible image are invertible", not failures and inverted > 0,
           time.perf_counter() - start, 30, f"{checked} morphisms, {inverted} inverted by the geometric series"
           + (f", failing {failures[:3]}" if failures else ""))


def test_smith_normal_form_fuzz():
    start = time.perf_counter()
    rng = random.Random(1)
    bad = 0
    for _ in range(1000):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        m = IntMatrix.from_rows([[rng.randint(-100, 100) for _ in range(cols)] for _ in range(rows)], cols)
        u, d, v = smith_normal_form(m)
        diag = d.diagonal()
        nz = [x for x in diag if x]
        ok = (u @ m @ v == d and abs(u.det()) == 1 and abs(v.det()) == 1 and d.is_diagonal()
              and all(x >= 0 for x in diag) and diag[:len(nz)] == tuple(nz)
              and all(b % a == 0 for a, b in zip(nz, nz[1:])))
        bad += not ok
    report(8, "Smith normal form on 1000 random integer matrices", bad == 0, time.perf_counter() - start, 10,
           f"{bad} failures")


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q", "-s"]))

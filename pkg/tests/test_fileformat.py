import random
from importlib import resources

import pytest
from hypothesis import given, settings, strategies as st

from ringoid.addcat import validate_category
from ringoid.complexes import random_complex
from ringoid.fileformat import Document, ParseError, parse_text, serialize
from ringoid.karoubi import karoubi_envelope
from ringoid.sqzero import reduced_bimodule
from ringoid.zlin import FpAbGroup
from ringoid.zoo import fixture_categories, random_category, z4_z2


def sample_text() -> str:
    return resources.files("ringoid").joinpath("samples/sample.acat").read_text()


def test_sample_parses_and_round_trips():
    text = sample_text()
    doc = parse_text(text)
    a = doc.categories["A"]
    assert a.objects == ("Z4", "Z2")
    assert validate_category(a)
    assert serialize(doc) == text


def test_sample_sections():
    doc = parse_text(sample_text())
    assert list(doc.categories) == ["A", "R4", "R2"]
    assert doc.functors["red"].validate()
    assert doc.subcategories["B"] == ("A", ("Z2",))
    assert doc.bimodules["M"].validate()
    assert all(x.is_valid() for x in doc.complexes.values())


def test_bad_divisibility_names_the_hom_group():
    text = "[category A]\nobjects: x y\nhom x y: 4 2\n"
    with pytest.raises(ParseError) as err:
        parse_text(text)
    assert "hom x y" in str(err.value)
    assert err.value.line == 3


def test_empty_objects_section_gives_zero_category():
    doc = parse_text("[category Z]\nobjects:\n")
    assert doc.categories["Z"].objects == ()
    assert serialize(doc) == "[category Z]\nobjects:\n"


def test_comments_and_blank_lines_are_ignored():
    text = "# a ring\n\n[category R]  # Z/3\nobjects: *\nhom * *: 3\nidentity *: 1\ncomp * * * 0 0: 1\n"
    doc = parse_text(text)
    assert doc.categories["R"].hom("*", "*") == FpAbGroup.cyclic(3)


@pytest.mark.parametrize("text,fragment", [
    ("objects: x\n", "before the first section"),
    ("[categry A]\n", "unknown section"),
    ("[category A]\nhom x x: 2\n", "'objects:' must come first"),
    ("[category A]\nobjects: x\nhom x z: 2\n", "unknown object"),
    ("[category A]\nobjects: x\nhom x x: two\n", "expected integers"),
    ("[category A]\nobjects: x\nhom x x: 2\nidentity x: 1 1\n", "expected 1 coordinates"),
    ("[category A]\nobjects: x\nhom x x: 2\nidentity x: 1\ncomp x x x 0 3: 1\n", "out of range"),
    ("[category A]\nobjects: x\nhom x x: 2\nidentity x: 0\n", "invalid"),
    ("[functor F: A -> B]\n", "unknown category"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError) as err:
        parse_text(text)
    assert fragment in str(err.value)


def test_functor_must_map_every_object():
    text = sample_text().replace("object * -> *\n", "")
    with pytest.raises(ParseError, match="does not map"):
        parse_text(text)


def round_trip(doc: Document) -> None:
    text = serialize(doc)
    again = parse_text(text)
    assert serialize(again) == text
    for name, c in doc.categories.items():
        d = again.categories[name]
        assert d.objects == c.objects
        for x in c.objects:
            for y in c.objects:
                assert d.hom(x, y) == c.hom(x, y)
                for g in c.hom(x, y).gens():
                    for z in c.objects:
                        for f in c.hom(z, x).gens():
                            assert d.compose_elem(z, x, y, g, f) == c.compose_elem(z, x, y, g, f)


def test_fixture_categories_round_trip():
    doc = Document()
    for k, (name, c) in enumerate(fixture_categories().items()):
        doc.add_category(f"C{k}", c)
    round_trip(doc)


def test_envelope_round_trips():
    doc = Document()
    doc.add_category("K", karoubi_envelope(fixture_categories()["Z/6"]).category)
    round_trip(doc)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_documents_round_trip(seed):
    rng = random.Random(seed)
    a = random_category(rng)
    doc = Document()
    doc.add_category("A", a)
    doc.add_bimodule("M", reduced_bimodule(a, rng.choice([2, 3])))
    doc.add_complex("X", random_complex(a, rng))
    round_trip(doc)


def test_bimodule_and_complex_survive_round_trip():
    a = z4_z2()
    doc = Document()
    doc.add_category("A", a)
    doc.add_bimodule("M", reduced_bimodule(a, 2))
    again = parse_text(serialize(doc))
    m = again.bimodules["M"]
    assert m.validate()
    assert m.value("Z4", "Z4") == FpAbGroup.cyclic(2)

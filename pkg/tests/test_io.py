import json
import random
from pathlib import Path

import pytest

from hochcat.corpus import categories, dg_categories, presheaf_pairs, pseudocircle
from hochcat.deform import random_cochain
from hochcat.io import (
    FormatError,
    InputValidationError,
    category_from_dict,
    category_to_dict,
    cochain_from_dict,
    cochain_to_dict,
    cover_to_dict,
    dumps,
    poset_presheaf_to_dict,
    read_category,
    read_cochain,
    read_cover,
    read_poset_presheaf,
    read_space,
    space_from_dict,
    space_to_dict,
    write_json,
)
from hochcat.linalg import GF, QQ
from hochcat.lincat import same_structure
from hochcat.sites import Cover, constant_sheaf

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.mark.parametrize("field", [QQ, GF(3)], ids=lambda f: f.name)
def test_category_round_trip_is_byte_exact(field):
    for name, c in {**categories(field), **dg_categories(field)}.items():
        text = dumps(category_to_dict(c))
        back = category_from_dict(json.loads(text), name)
        assert same_structure(back, c), name
        assert dumps(category_to_dict(back)) == text, name


def test_space_with_presheaf_round_trip():
    x = pseudocircle()
    o = constant_sheaf(x)
    text = dumps(space_to_dict(x, o))
    sf = space_from_dict(json.loads(text))
    assert sf.space.opens == x.opens
    assert sf.presheaf.violations() == []
    assert dumps(space_to_dict(sf.space, sf.presheaf)) == text


def test_presheaf_and_cover_files_round_trip(tmp_path):
    for name, o in presheaf_pairs().items():
        path = tmp_path / "p.json"
        write_json(str(path), poset_presheaf_to_dict(o))
        back = read_poset_presheaf(str(path))
        assert dumps(poset_presheaf_to_dict(back)) == path.read_text(), name
    x = pseudocircle()
    cov = Cover(x, [x.minimal_open("c"), x.minimal_open("d")])
    path = tmp_path / "cover.json"
    write_json(str(path), cover_to_dict(cov))
    assert read_cover(str(path), x).pieces == cov.pieces


def test_cochain_round_trip():
    rng = random.Random(7)
    for name in ("k[e]", "kronecker", "A3"):
        c = categories()[name]
        for n in (0, 1, 2):
            co = random_cochain(c, n, rng)
            d = cochain_to_dict(c, co)
            assert cochain_from_dict(c, json.loads(dumps(d))) == co, (name, n)


def test_data_files_load():
    for p in ("dual_numbers", "a2", "kronecker", "upper_triangular"):
        assert read_category(str(DATA / f"{p}.json")).objects
    sf = read_space(str(DATA / "pseudocircle.json"))
    assert len(sf.space.points) == 4
    assert len(read_cover(str(DATA / "pseudocircle_cover.json"), sf.space).pieces) == 2
    assert read_poset_presheaf(str(DATA / "two_chain_augmentation.json")).violations() == []
    c = read_category(str(DATA / "dual_numbers.json"))
    assert read_cochain(c, str(DATA / "square_to_t.json")).degree == 2


def test_planted_defect_is_an_input_validation_error():
    with pytest.raises(InputValidationError, match="associativity|unit"):
        read_category(str(DATA / "broken_kronecker.json"))
    assert read_category(str(DATA / "broken_kronecker.json"), validate=False).objects


def _bad(doc, **kw):
    with pytest.raises(FormatError) as e:
        category_from_dict(doc, "f.json", **kw)
    return e.value.where


def test_format_errors_carry_a_location():
    good = category_to_dict(categories()["k[e]"])
    assert _bad({**good, "format": "hochcat.space"}) == "f.json:$.format"
    assert _bad({**good, "scalars": "reals"}) == "f.json:$.scalars"
    assert _bad(good, scalars=GF(2)) == "f.json:$.scalars"
    homs = [dict(good["homs"][0], degrees=[0, 1])]
    assert _bad({**good, "homs": homs}) == "f.json:$.homs[0].degrees"
    comp = json.loads(json.dumps(good["composition"]))
    comp[0]["products"][0]["g"] = "zz"
    assert _bad({**good, "composition": comp}) == "f.json:$.composition[0].products[0].g"
    missing = dict(good)
    del missing["identities"]
    assert _bad(missing) == "f.json:$.identities"


def test_unreadable_and_malformed_files(tmp_path):
    with pytest.raises(FormatError):
        read_category(str(tmp_path / "absent.json"))
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(FormatError, match="invalid JSON"):
        read_category(str(p))


def test_space_errors():
    with pytest.raises(InputValidationError):
        space_from_dict({"format": "hochcat.space", "points": ["a", "b", "c"], "opens": [[], ["a", "b"], ["b", "c"], ["a", "b", "c"]]})
    with pytest.raises(FormatError):
        space_from_dict({"format": "hochcat.space", "points": ["a"], "opens": [[], "{a,z}"]})

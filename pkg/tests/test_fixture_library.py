import json
import os
import shutil
from fractions import Fraction

import pytest

from src.core import fixture_library
from src.core.errors import FixtureError
from src.core.fixture_library import fixture_names, load_fixture, load_fixtures


@pytest.fixture
def fixture_dir(tmp_path, monkeypatch):
    shutil.copy(os.path.join(fixture_library.DATA_PATH, "fig2.json"), tmp_path / "fig2.json")
    monkeypatch.setattr(fixture_library, "DATA_PATH", str(tmp_path))
    return tmp_path


def rewrite(path, change):
    data = json.loads(path.read_text(encoding="utf-8"))
    change(data)
    path.write_text(json.dumps(data), encoding="utf-8")


def test_all_fixtures_load():
    assert fixture_names() == ["example1", "example2", "fig2", "fig3", "fig31", "fig311", "fig351", "fig39"]
    fixtures = load_fixtures()
    assert [f.name for f in fixtures] == fixture_names()
    for fixture in fixtures:
        assert fixture.code.length == fixture.expected_length
        assert len(fixture.plan.receivers) == fixture.instance.K


def test_ic_fixtures_keep_their_inner_set(fixture_cache):
    fixture = fixture_cache("example1")
    assert fixture.kind == "ic"
    assert fixture.inner_set.sorted() == [0, 1, 2]
    assert fixture.decomposition.s == 1


def test_expected_tau(fixture_cache):
    fixture = fixture_cache("fig2")
    assert fixture.expected_tau(3) == 0b111010
    with pytest.raises(KeyError):
        fixture.expected_tau(99)


def test_only_fig31_has_a_capacity_discrepancy(fixture_cache):
    for name in fixture_names():
        fixture = fixture_cache(name)
        if name == "fig31":
            assert fixture.capacity_discrepancy == "published value 1/6, the structure gives 1/7"
        else:
            assert fixture.capacity_discrepancy is None
    assert fixture_cache("fig311").published_capacity == Fraction(1, 4)


def test_hash_mismatch_is_rejected(fixture_dir):
    rewrite(fixture_dir / "fig2.json", lambda d: d.update(sha256="0" * 64))
    with pytest.raises(FixtureError, match="does not match"):
        load_fixture("fig2")


def test_wrong_stored_code_is_rejected(fixture_dir):
    rewrite(fixture_dir / "fig2.json", lambda d: d["expected"]["code"][2].update(mask_hex="1"))
    with pytest.raises(FixtureError, match="differs from stored"):
        load_fixture("fig2")


def test_wrong_stored_plan_is_rejected(fixture_dir):
    rewrite(fixture_dir / "fig2.json", lambda d: d["expected"]["plan"][0].update(gamma=["y_2"]))
    with pytest.raises(FixtureError, match="decodes with"):
        load_fixture("fig2")


def test_missing_fields_become_fixture_errors(fixture_dir):
    rewrite(fixture_dir / "fig2.json", lambda d: d.pop("expected"))
    with pytest.raises(FixtureError):
        load_fixture("fig2")


def test_unknown_fixture(fixture_dir):
    with pytest.raises(FixtureError):
        load_fixture("fig99")

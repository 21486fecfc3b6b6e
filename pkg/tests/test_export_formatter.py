import json

import pytest

from src.core.errors import InputFormatError
from src.core.export_formatter import IndexCodingExportFormatter
from src.core.index_code import encode_oic


@pytest.fixture
def formatter():
    return IndexCodingExportFormatter()


def test_parse_graph(formatter):
    instance = formatter.parse_instance({"K": 3, "edges": [[0, 1], [1, 2], [2, 0]], "t": 2})
    assert instance.K == 3
    assert instance.message_bits == 2
    assert instance.graph.out_mask(2) == 0b001


@pytest.mark.parametrize("data,message", [
    ({"edges": []}, '"K"'),
    ({"K": "3", "edges": []}, "integers"),
    ({"K": 3, "edges": [[0, 1, 2]]}, "pair of integers"),
    ({"K": 3, "edges": [[1, 1]]}, "self-loop [1,1]"),
    ({"K": 3, "edges": [[0, 1], [0, 1]]}, "duplicate edge [0,1]"),
    ({"K": 3, "edges": [[0, 3]]}, "outside"),
])
def test_graph_errors_name_the_problem(formatter, data, message):
    with pytest.raises(InputFormatError) as caught:
        formatter.parse_instance(data, "g.json")
    assert message in str(caught.value)
    assert str(caught.value).startswith("g.json: ")


def test_load_json_errors(formatter, tmp_path):
    with pytest.raises(InputFormatError, match="file not found"):
        formatter.load_json(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{\n  \"K\": 3,\n", encoding="utf-8")
    with pytest.raises(InputFormatError, match="invalid JSON"):
        formatter.load_json(str(broken))
    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(InputFormatError, match="object"):
        formatter.load_json(str(listed))


def test_decomposition_round_trip(formatter, fixture_cache):
    decomp = fixture_cache("fig351").decomposition
    assert formatter.parse_decomposition(formatter.decomposition_to_dict(decomp)) == decomp


def test_inner_set_reads_as_one_node(formatter):
    decomp = formatter.parse_decomposition({"V_I": [2, 0, 1]})
    assert decomp.s == 1
    assert decomp.nodes[0].vertices == {0, 1, 2}
    with pytest.raises(InputFormatError):
        formatter.parse_inner_set({"V_I": "abc"})


def test_malformed_decomposition(formatter):
    with pytest.raises(InputFormatError, match="malformed decomposition"):
        formatter.parse_decomposition({"nodes": [{"i": 0, "vertices": [0, 1]}]})


def test_code_json(formatter, fixture_cache):
    fixture = fixture_cache("fig2")
    code = encode_oic(fixture.instance.graph, fixture.decomposition)
    assert formatter.parse_code(code.to_dict()) == code
    with pytest.raises(InputFormatError):
        formatter.parse_code({"K": 6, "symbols": [{"label": "a", "mask_hex": "zz"}]})


def test_messages(formatter):
    assert formatter.parse_messages("0110", 4).values == (0, 1, 1, 0)
    assert formatter.parse_messages("3,0,7", 3, bits=3).values == (3, 0, 7)
    with pytest.raises(InputFormatError, match="expected 4 messages"):
        formatter.parse_messages("011", 4)
    with pytest.raises(InputFormatError):
        formatter.parse_messages("3,x", 2, bits=3)


def test_graph_hash_is_canonical(formatter, fixture_cache):
    fixture = fixture_cache("fig2")
    assert formatter.graph_sha256(fixture.instance) == fixture.sha256
    text = formatter.canonical_graph_json(fixture.instance)
    assert " " not in text
    assert text.startswith('{"K":6,"edges":[[0,2],')


def test_exports(formatter, tmp_path):
    json_path = tmp_path / "report.json"
    formatter.export_to_json({"code_length": 3}, str(json_path))
    assert json.loads(json_path.read_text(encoding="utf-8")) == {"code_length": 3}

    txt_path = tmp_path / "report.txt"
    formatter.export_to_txt("receiver | symbols", str(txt_path), title="Plan")
    lines = txt_path.read_text(encoding="utf-8").splitlines()
    assert lines[1] == "Plan"
    assert lines[-1] == "receiver | symbols"

    with pytest.raises(ValueError):
        formatter.export_to_json({}, str(json_path))
    with pytest.raises(ValueError):
        formatter.export_to_txt("  ", str(txt_path))

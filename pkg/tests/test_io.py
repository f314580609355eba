import json

import pytest
from hypothesis import given, settings, strategies as st

from simortho import io
from simortho.errors import ParseError
from simortho.family import FormFamily
from simortho.fields import GF, QQ, QQt
from simortho.hyperreal import HyperFamily, random_bounded_family
from simortho.oracle import STRATA, generate_corpus
from simortho.pipeline import OrthoCertificate, check_so, verify_certificate
from simortho.ultrafilter import single_zero_diagonal_family


def test_family_round_trip_corpus():
    for d in generate_corpus(1, 120):
        f = io.family_from_dict(d)
        back = io.family_to_dict(f, stratum=d["stratum"])
        assert back == d
        assert io.loads_family(io.dumps(d)) == f


def test_stable_tail_round_trip():
    f = single_zero_diagonal_family(GF(7), 3)
    d = io.family_to_dict(f)
    assert d["mode"] == "stable_tail" and len(d["forms"]) == 3
    g = io.loads_family(io.dumps(d))
    assert g.tail == f.tail and g.prefix == f.prefix


def test_hyper_round_trip():
    import random
    rng = random.Random(0)
    for _ in range(30):
        f = random_bounded_family(rng, 3)
        g = io.loads_family(io.dumps(io.family_to_dict(f)))
        assert isinstance(g, HyperFamily) and g.gram_t == f.gram_t


def test_certificate_round_trip_and_verify():
    for d in generate_corpus(2, 120):
        f = io.family_from_dict(d)
        cert = check_so(f)
        if not isinstance(cert, OrthoCertificate):
            continue
        text = io.dumps(io.verdict_to_dict(cert))
        back = io.loads_certificate(text)
        assert back.basis == cert.basis and back.radical_tail == cert.radical_tail
        assert verify_certificate(f, back).ok
        assert io.dumps(io.certificate_to_dict(back)) == text


def test_output_is_canonical():
    f = FormFamily.from_grams(QQ, [[["1/2", 0], [0, 3]]])
    text = io.dumps(io.family_to_dict(f))
    assert text.endswith("\n")
    assert json.loads(text)["forms"] == [[["1/2", "0"], ["0", "3"]]]
    assert text == json.dumps(json.loads(text), sort_keys=True, indent=2) + "\n"


def test_verdict_dicts():
    d = io.verdict_to_dict(check_so(FormFamily.from_grams(GF(2), [[[0, 1], [1, 0]]])), GF(2))
    assert d["verdict"] == "disproved" and d["reason"] == "alternating residual"
    assert d["witness"]["residual"]["dim"] == 2
    assert d["field"] == {"kind": "GF", "p": 2}
    json.dumps(d)


GOOD = {"schema": 1, "field": {"kind": "Q"}, "dim": 2, "forms": [[["1", "0"], ["0", "1"]]]}


def _with(**changes):
    d = json.loads(json.dumps(GOOD))
    d.update(changes)
    return d


@pytest.mark.parametrize("doc,fragment", [
    (_with(schema=2), "schema"),
    (_with(field={"kind": "GF", "p": 4}), "prime"),
    (_with(field={"kind": "R"}), "unknown field kind"),
    (_with(dim=-1), "dim"),
    (_with(mode="weird"), "mode"),
    (_with(forms=[[["1", "x"], ["x", "1"]]]), "forms[0][0][1]"),
    (_with(forms=[[["1", 2], ["2", "1"]]]), "scalars must be strings"),
    (_with(forms=[[["1", "2"], ["3", "1"]]]), "not symmetric"),
    (_with(forms=[[["1", "0"]]]), "expected 2 rows"),
    (_with(forms=[]), "at least one form"),
    (_with(tail=[["1", "0"], ["0", "1"]]), "only allowed in stable_tail"),
    (_with(mode="stable_tail"), "'tail' is required"),
    (_with(mode="hyper"), "kind Qt"),
    (_with(labels=["a", "b"]), "one label per form"),
    ([1, 2], "expected a JSON object"),
])
def test_family_parse_errors(doc, fragment):
    with pytest.raises(ParseError) as exc:
        io.family_from_dict(doc)
    assert fragment in str(exc.value)


def test_errors_are_anchored_to_line_and_column():
    text = '{\n  "schema": 1,\n  "field": {"kind": "Q"},\n  "dim": 2,\n  "forms": [[["1", "0"], ["0", "1/0"]]]\n}\n'
    with pytest.raises(ParseError) as exc:
        io.loads_family(text, "fam.json")
    msg = str(exc.value)
    assert msg.startswith("fam.json:5:32: forms[0][1][1]:")
    assert exc.value.path == ("forms", 0, 1, 1)
    assert text.splitlines()[4][31:36] == '"1/0"'


def test_json_syntax_error_position():
    with pytest.raises(ParseError) as exc:
        io.loads_family('{"schema": 1,\n "dim": }', "x.json")
    assert str(exc.value).startswith("x.json:2:9:")


def test_value_offsets_cover_nested_paths():
    text = '{"a": [1, {"b": [true, null]}], "c": "s"}'
    offsets = io.value_offsets(text)
    assert text[offsets[("a", 1, "b", 1)]:].startswith("null")
    assert text[offsets[("c",)]:].startswith('"s"')
    assert offsets[()] == 0


def test_certificate_parse_errors():
    cert = check_so(FormFamily.from_grams(QQ, [[[1, 0], [0, 2]]]))
    d = io.certificate_to_dict(cert)
    d["roots"][0]["basis"] = [["1"]]
    with pytest.raises(ParseError) as exc:
        io.certificate_from_dict(d)
    assert "roots[0].basis" in str(exc.value)
    d = io.certificate_to_dict(cert)
    del d["scalars"]
    with pytest.raises(ParseError, match="missing key 'scalars'"):
        io.certificate_from_dict(d)


@settings(max_examples=100, deadline=None)
@given(entries=st.lists(st.fractions(max_denominator=20), min_size=3, max_size=3))
def test_rational_entries_round_trip(entries):
    a, b, c = (str(x) for x in entries)
    f = FormFamily.from_grams(QQ, [[[a, b], [b, c]]])
    assert io.loads_family(io.dumps(io.family_to_dict(f))) == f

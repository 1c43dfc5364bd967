import json

import pytest

from ncycle_pp.errors import ParseError
from ncycle_pp.main import JobSpec, main


@pytest.mark.parametrize("argv,code", [
    (["verify", "--field", "2^12", "--poly", "x^2458 + x^1639 + x", "--n", "3"], 0),
    (["verify", "--field", "7", "--poly", "x^2", "--n", "2"], 1),
    (["verify", "--field", "12", "--poly", "x", "--n", "2"], 2),
    (["verify", "--field", "7", "--poly", "x^^2", "--n", "2"], 2),
    (["verify", "--field", "7", "--n", "2"], 2),
    (["cycles", "--field", "7", "--poly", "x^2"], 1),
    (["construct", "--field", "7", "--sigma", "0,1", "--mvec", "0,1", "--n", "3"], 0),
    (["family", "--family", "even-q-tri", "--param", "q=4", "--param", "a=1"], 0),
    (["family", "--family", "even-q-tri", "--param", "q=4", "--param", "z=1"], 2),
    (["family", "--family", "even-q-tri", "--param", "q=64", "--param", "a=1"], 1),
    (["search", "--field", "7", "--ell", "1", "--n", "2"], 0),
    (["search", "--field", "7", "--ell", "1", "--n", "2", "--budget", "8"], 3),
    (["search", "--field", "7", "--ell", "1", "--n", "2", "--r-range", "1-6"], 2),
    (["info", "--field", "2^4"], 0),
    (["bogus"], 2),
])
def test_exit_codes(argv, code):
    assert main(argv) == code


def test_jsonl_output(capsys):
    assert main(["search", "--field", "7", "--ell", "1", "--n", "2", "--format", "jsonl"]) == 0
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [line["kind"] for line in lines] == ["result"] * 8 + ["summary"]
    assert lines[0]["field"] == "7" and lines[0]["beta"] == 3
    assert lines[-1] == {"kind": "summary", "command": "search", "evaluated": 12, "hits": 8, "complete": True}


def test_text_output(capsys):
    assert main(["family", "--family", "char3-quad"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "PASS  x^521 + x^417 + x^105 + x  over GF(3^6) n=3"
    assert out[-1].startswith("NOTE  ")


def test_output_file(tmp_path, capsys):
    target = tmp_path / "info.jsonl"
    assert main(["info", "--field", "3^3", "--format", "jsonl", "--output", str(target)]) == 0
    assert capsys.readouterr().out == ""
    record = json.loads(target.read_text(encoding="utf-8"))
    assert record["kind"] == "info"
    assert record["q"] == 27
    assert record["order_factors"] == {"2": 1, "13": 1}


def test_unwritable_output_exits_2(tmp_path, capsys):
    target = tmp_path / "missing" / "out.txt"
    assert main(["info", "--field", "7", "--output", str(target)]) == 2
    assert not target.exists()
    assert capsys.readouterr().out == ""


def test_job_spec_round_trip():
    job = JobSpec(command="family", family="v-tri", params={"q": "64", "a": "35", "v": "61"},
                  output_format="jsonl", workers=2)
    assert JobSpec.from_argv(job.to_argv()) == job

    job = JobSpec(command="search", field="2^6", ell=9, n=3, r_range="1..10", budget=100)
    assert job.to_argv()[:3] == ["search", "--field", "2^6"]
    assert JobSpec.from_argv(job.to_argv()) == job
    assert job.parsed_r_range() == (1, 10)
    with pytest.raises(ParseError):
        JobSpec(command="search", r_range="10").parsed_r_range()

import json

import pytest

from monadlab.cli import main
from monadlab.monad import ein, parse_monad, serialize_monad


@pytest.fixture
def ein_file(tmp_path):
    p = tmp_path / "ein.monad"
    assert main(["example", "ein", "-o", str(p)]) == 0
    return p


def test_example_writes_canonical_document(ein_file):
    assert parse_monad(ein_file.read_text()) == ein()
    assert ein_file.read_text() == serialize_monad(ein())


def test_example_to_stdout(capsys):
    assert main(["example", "gnc-E", "--a", "0", "--b", "0", "--d", "2", "--seed", "7",
                 "--field", "Fq:101"]) == 0
    m = parse_monad(capsys.readouterr().out)
    assert (m.A, m.C) == ((-2,), (2,))


def test_example_bad_parameters(capsys):
    assert main(["example", "gnc-E", "--a", "2", "--b", "1", "--d", "3"]) == 3
    assert "error" in capsys.readouterr().err


def test_analyze_human(ein_file, capsys):
    assert main(["analyze", str(ein_file)]) == 0
    out = capsys.readouterr().out
    assert "buchsbaum p = 3" in out
    assert "c1 = -1, c2 = 2" in out
    lines = out.splitlines()
    rows = [l.split("|")[0].strip() for l in lines if "|" in l]
    assert rows == ["h^3", "h^2", "h^1", "h^0", "t"]


def test_analyze_json_matches_human_numbers(ein_file, capsys):
    assert main(["analyze", str(ein_file), "--json", "--window", "-6:4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == "monadlab.analysis/1"
    assert doc["cohomology"]["window"] == [-6, 4]
    assert doc["cohomology"]["h"]["1"] == [0, 0, 0, 0, 0, 1, 2, 1, 0, 0, 0]
    c = doc["classification"]
    assert (c["buchsbaum_p"], c["regularity_computed"], c["is_stable"]) == (3, 3, True)
    assert main(["analyze", str(ein_file), "--window", "-6:4"]) == 0
    human = capsys.readouterr().out
    h1 = next(l for l in human.splitlines() if l.startswith("h^1"))
    assert [int(x) for x in h1.split("|")[1].split()] == doc["cohomology"]["h"]["1"]


def test_analyze_probabilistic(ein_file, capsys):
    assert main(["analyze", str(ein_file), "--json", "--exactness", "probabilistic"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["exactness"]["beta_fiberwise_surjective"]["status"] == "probable"


def test_exit_codes(tmp_path, ein_file, capsys):
    text = ein_file.read_text()
    cases = {
        "missing.monad": None,
        "syntax.monad": text.replace('"x0"]', '"x0 +"]', 1),
        "json.monad": text[:-3],
        "degree.monad": text.replace('["x0"]', '["x0^2"]', 1),
        "broken.monad": text.replace('"x2^2", "x3^2"', '"x2^2", "x2^2"'),
        "notexact.monad": text.replace('"x3^2", "x0", "x1"', '"0", "x0", "x1"'),
    }
    want = {"missing.monad": 2, "syntax.monad": 2, "json.monad": 2, "degree.monad": 3,
            "broken.monad": 3, "notexact.monad": 3}
    for name, body in cases.items():
        p = tmp_path / name
        if body is not None:
            p.write_text(body)
        assert main(["analyze", str(p)]) == want[name], name
    err = capsys.readouterr().err
    assert "beta*alpha is not zero" in err


def test_narrow_window_is_validation_error(ein_file, capsys):
    assert main(["analyze", str(ein_file), "--window", "-2:1"]) == 3
    assert "window" in capsys.readouterr().err


def test_indeterminate_exit_code(ein_file, capsys):
    # a cap below the degree the proof needs leaves the question open
    assert main(["analyze", str(ein_file), "--max-degree", "2"]) == 4


def test_survey_json(capsys):
    assert main(["survey", "--charge", "2", "--trials", "3", "--seed", "5", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["histogram"] == {"2": 3}
    assert doc["field"] == "Fq:2147483647"
    assert len({t["seed"] for t in doc["trials"]}) == 3


def test_survey_human_and_gnc(capsys):
    assert main(["survey", "--gnc", "E", "--a", "0", "--b", "0", "--d", "1", "--trials", "2"]) == 0
    assert "p = 1:" in capsys.readouterr().out
    assert main(["survey", "--gnc", "E", "--trials", "2"]) == 3
    assert main(["survey", "--trials", "2"]) == 3


def test_verify_paper_filter(capsys):
    assert main(["verify-paper", "--filter", "ein"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] ein monad invariants" in out
    assert "1/1 claims passed" in out
    assert main(["verify-paper", "--filter", "nothing-matches"]) == 5


def test_verify_paper_theorem_filter_json(capsys):
    assert main(["verify-paper", "--filter", "theoremA", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"] and len(doc["claims"]) == 1


def test_bad_flags():
    with pytest.raises(SystemExit):
        main(["analyze", "x", "--window", "3"])
    with pytest.raises(SystemExit):
        main(["example", "ein", "--field", "Fq:100"])

import json
from pathlib import Path

import pytest

from twiglearn.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_learn_conj0(capsys):
    code, out, _ = run(
        capsys, "learn", "--class", "conj0", "--pos", FIXTURES / "offers.term"
    )
    assert code == 0
    assert out.splitlines() == ["offer[.//item/descr]", "offer[.//item/for-sale]"]


def test_learn_path0_heuristic(capsys):
    code, out, _ = run(
        capsys,
        "learn",
        "--class",
        "path0",
        "--pos",
        FIXTURES / "offers.term",
        "--neg",
        FIXTURES / "offers_neg.term",
    )
    assert code == 0
    assert out.strip() == "offer[.//item/for-sale]"


def test_learn_twig0(capsys):
    code, out, _ = run(
        capsys, "learn", "--class", "twig0", "--pos", FIXTURES / "dblp.term"
    )
    assert code == 0
    assert out.strip() == "dblp[*/url][*[author][title]]"


def test_learn_twig1_from_annotated_xml(capsys):
    code, out, _ = run(
        capsys, "learn", "--class", "twig1",
        FIXTURES / "library1.xml", FIXTURES / "library2.xml",
    )
    assert code == 0
    assert out.strip() == "library/*[author/marx]/title[.//*]"


def test_learn_json_output(capsys):
    code, out, _ = run(
        capsys,
        "learn",
        "--class",
        "twig1",
        FIXTURES / "library1.xml",
        FIXTURES / "library2.xml",
        "--json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["class"] == "twig1"
    assert doc["queries"][0]["text"] == "library/*[author/marx]/title[.//*]"
    assert doc["consistent"] is True
    assert len(doc["per_example"]) == 2


def test_learn_output_parses_back(capsys):
    from twiglearn.queries import parse_query, query_iso
    from twiglearn.trees import DecoratedTree
    from twiglearn.twig_learners import learn_psf_twig1

    code, out, _ = run(
        capsys, "learn", "--class", "twig1",
        FIXTURES / "library1.xml", FIXTURES / "library2.xml",
    )
    parsed = parse_query(out.strip(), unary=True)
    from twiglearn.trees import parse_xml

    sample = [
        ex
        for name in ("library1.xml", "library2.xml")
        for ex in parse_xml((FIXTURES / name).read_text()).positives()
    ]
    assert query_iso(parsed, learn_psf_twig1(sample))


def test_learn_deterministic(capsys):
    _, first, _ = run(capsys, "learn", "--class", "conj0", "--pos", FIXTURES / "offers.term")
    _, second, _ = run(capsys, "learn", "--class", "conj0", "--pos", FIXTURES / "offers.term")
    assert first == second


def test_learn_no_positives(capsys):
    code, _, err = run(capsys, "learn", "--class", "twig0", "--pos")
    assert code == 1


def test_eval_boolean(capsys):
    code, out, _ = run(
        capsys,
        "eval",
        "--query",
        "offer[.//item/for-sale]",
        FIXTURES / "offers.term",
    )
    assert code == 0
    lines = [l.split("\t")[-1] for l in out.splitlines()]
    assert lines == ["true", "true"]


def test_eval_unary_lists_nodes(capsys):
    code, out, _ = run(
        capsys,
        "eval",
        "--query",
        "*//*",
        "--unary",
        FIXTURES / "library_full.xml",
    )
    assert code == 0
    # every non-root node is an answer to the universal query
    from twiglearn.trees import parse_xml_tree

    tree = parse_xml_tree((FIXTURES / "library_full.xml").read_text())
    assert len(out.splitlines()) == tree.size - 1


def test_subsume(capsys):
    code, out, _ = run(capsys, "subsume", "r[.//b]", "r[a/b]")
    assert (code, out.strip()) == (0, "true")
    code, out, _ = run(capsys, "subsume", "r[a/b]", "r[.//b]")
    assert (code, out.strip()) == (0, "false")


def test_charsample(capsys):
    code, out, _ = run(capsys, "charsample", "r/b[a//b]//c[d]/*/c", "--unary")
    assert code == 0
    first, second = out.splitlines()
    assert first == "r(b(a(b),c(d,a0(c!))))"
    assert second.count("a2") == 16


def test_oracle_enumerate(capsys):
    code, out, _ = run(
        capsys,
        "oracle",
        "enumerate",
        "--class",
        "path-boolean",
        "--labels",
        "a",
        "--max-nodes",
        "1",
    )
    assert code == 0
    assert out.splitlines() == ["*", "a"]


def test_oracle_minimal(capsys):
    code, out, _ = run(
        capsys,
        "oracle",
        "minimal",
        "--class",
        "anchored-path-boolean",
        "--max-nodes",
        "3",
        "--pos",
        FIXTURES / "offers.term",
    )
    assert code == 0
    assert "offer[.//item/descr]" in out.splitlines()


def test_oracle_refute(capsys):
    code, out, _ = run(capsys, "oracle", "refute", "*[*]", "a[.//b]")
    assert code == 0 and out.strip()
    code, out, _ = run(capsys, "oracle", "refute", "a[.//b]", "*[*]", "--budget", "300")
    assert code == 1
    assert out.strip() == "unknown"


def test_consistency_command(capsys):
    code, out, _ = run(
        capsys,
        "consistency",
        "--class",
        "twig-boolean",
        "--no-star",
        "--max-depth",
        "4",
        "--max-nodes",
        "4",
        "--pos",
        FIXTURES / "offers.term",
        "--neg",
        FIXTURES / "offers_neg.term",
    )
    assert code == 0
    assert out.strip()


def test_consistency_inconsistent_exit_code(tmp_path, capsys):
    pos = tmp_path / "pos.term"
    neg = tmp_path / "neg.term"
    pos.write_text("r(a)\n")
    neg.write_text("r(a)\n")
    code, out, err = run(
        capsys,
        "consistency",
        "--class",
        "twig-boolean",
        "--pos",
        pos,
        "--neg",
        neg,
    )
    assert code == 1
    assert "inconsistent" in err


def test_sat2sample(capsys):
    code, out, _ = run(capsys, "sat2sample", FIXTURES / "phi0.cnf")
    assert code == 0
    lines = out.splitlines()
    assert sum(1 for l in lines if l.startswith("+")) == 2
    assert sum(1 for l in lines if l.startswith("-")) == 1


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["learn"])  # missing --class
    assert exc.value.code == 2

import logging
from pathlib import Path

from app.main import run
from app.services.storage import parse_report, parse_scalar, parse_suite, parse_table

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

INSTANCES = Path(__file__).resolve().parent.parent / "data" / "instances"


def instance(name):
    return str(INSTANCES / name)


def test_bound_pgl_prints_value(capsys):
    assert run(["bound", "pgl", "--p", "3", "--s", "2"]) == 0
    assert capsys.readouterr().out.strip() == "10"


def test_bound_pgl_json(capsys):
    assert run(["bound", "pgl", "--p", "2", "--s", "3", "--format", "json"]) == 0
    doc = parse_scalar(capsys.readouterr().out)
    assert doc.bound == 25
    assert doc.parameters == {"p": 2, "s": 3, "n": 8}


def test_bound_pgl_domain_error(capsys):
    assert run(["bound", "pgl", "--p", "6", "--s", "2"]) == 2
    assert "pgl-domain" in capsys.readouterr().err


def test_bound_section5_d4(capsys):
    assert run(["bound", "section5", "--instance", instance("d4.json"), "--format", "json"]) == 0
    doc = parse_report(capsys.readouterr().out)
    assert doc.bound == 5
    assert doc.csa_bound == 5
    assert doc.provenance == "section5"


def test_bound_section5_table(capsys):
    assert run(["bound", "section5", "--instance", instance("d4.json")]) == 0
    out = capsys.readouterr().out
    assert "bound              5" in out
    assert "normal-subgroup    5" in out


def test_bound_csa(capsys):
    assert run(["bound", "csa", "--instance", instance("d4.json")]) == 0
    assert capsys.readouterr().out.strip() == "5"
    assert run(["bound", "csa", "--instance", instance("s4.json"), "--format", "json"]) == 0
    doc = parse_scalar(capsys.readouterr().out)
    assert doc.bound == 37
    assert doc.parameters["r"] == 2


def test_bound_csa_needs_normal_subgroup(capsys):
    assert run(["bound", "csa", "--instance", instance("s3.json")]) == 3


def test_bound_thm_h(capsys):
    assert run(["bound", "thm-h", "--instance", instance("s3.json"), "--gens", "(1 2 3)", "--format", "json"]) == 0
    doc = parse_report(capsys.readouterr().out)
    assert doc.bound == 4
    assert doc.generating_tuple == ["(1 2 3)"]


def test_bound_thm_h_defaults_to_group_generators(capsys):
    assert run(["bound", "thm-h", "--instance", instance("klein.json"), "--format", "json"]) == 0
    assert parse_report(capsys.readouterr().out).bound == 5


def test_bound_thm_h_condition_ii(capsys):
    assert run(["bound", "thm-h", "--instance", instance("c3.json")]) == 2
    assert "condition-ii" in capsys.readouterr().err


def test_bound_optimal(capsys):
    assert run(["bound", "optimal", "--instance", instance("s3.json"), "--max-s", "1", "--format", "json"]) == 0
    doc = parse_report(capsys.readouterr().out)
    assert doc.bound == 4
    assert doc.provenance == "optimal"


def test_search_cap_exit_code(capsys):
    args = ["bound", "optimal", "--instance", instance("klein.json"), "--max-s", "2", "--search-cap", "1"]
    assert run(args) == 4


def test_json_output_is_byte_stable(capsys):
    args = ["bound", "section5", "--instance", instance("d4.json"), "--format", "json"]
    run(args)
    first = capsys.readouterr().out
    run(args)
    assert capsys.readouterr().out == first


def test_table_compare(capsys):
    assert run(["table", "compare", "--p", "3", "--s-max", "3", "--format", "json"]) == 0
    table = parse_table(capsys.readouterr().out)
    row = table.rows[-1]
    assert (row.eq1_odd_n, row.eq1_all_n, row.prior_mr, row.new) == (325, 649, 217, 136)

    assert run(["table", "compare", "--p", "3", "--s-max", "3"]) == 0
    assert "136" in capsys.readouterr().out


def test_verify_group_suite(capsys):
    assert run(["verify", "--suite", "group", "--max-order", "8", "--format", "json"]) == 0
    doc = parse_suite(capsys.readouterr().out)
    assert doc.passed is True
    assert doc.suite == "group"
    assert doc.checked > 0
    assert doc.counts["pairs"] > 0


def test_argument_errors_are_parse_errors(capsys):
    assert run(["bound", "pgl", "--p", "3"]) == 3
    assert run(["bound", "nonsense"]) == 3
    assert run(["bound", "thm-h", "--instance", instance("missing.json")]) == 3


def test_non_ascii_digits_are_parse_errors(capsys, tmp_path):
    doc = tmp_path / "superscript.json"
    doc.write_text('{"degree": 2, "group": ["(1 \\u00b2)"], "subgroup_H": []}', encoding="utf-8")
    assert run(["bound", "thm-h", "--instance", str(doc)]) == 3

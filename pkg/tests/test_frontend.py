"""Tests for the constraint-file parser, printer, and command line."""

import contextlib
import io
import json
import random
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bendsat import certify, eliminate, generate
from bendsat.core import BijunctiveFormula
from bendsat.errors import NotABendError, ParseError
from bendsat.frontend import (
    Certificate,
    certificate_from_jsonable,
    parse,
    parse_bend,
    pretty_print,
    run_cli,
    witness_from_jsonable,
)

GADGET_TEXT = """# unit strip with a forced endpoint
vars x
x >= 0
x <= 1
x <= 0 | x >= 1
"""

UNSAT_TEXT = """vars x y
-2 x + y >= 0
x + -2 y >= 0
x >= 1
"""


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = run_cli(argv)
    return code, out.getvalue(), err.getvalue()


class TestParse:
    def test_gadget_example(self):
        phi = parse(GADGET_TEXT, "gadget.bnd")
        assert phi.variables == ("x",)
        assert [str(b) for b in phi.bends] == ["x >= 0", "x <= 1", "x <= 0 | x >= 1"]

    def test_two_variable_line_canonicalizes(self):
        phi = parse("2/3 x + -1 y <= 5/2\n")
        assert [str(b) for b in phi.bends] == ["2 x + -3 y <= 15/2"]
        assert phi.variables == ("x", "y")

    def test_declared_order_wins_and_unused_names_stay(self):
        phi = parse("vars c a b\na >= 0\n")
        assert phi.variables == ("c", "a", "b")

    def test_undeclared_mention_is_appended(self):
        phi = parse("vars a\na + b <= 1\n")
        assert phi.variables == ("a", "b")

    def test_collection_order_without_declaration(self):
        phi = parse("y + -1 x <= 0\nz >= 1\na <= 2\n")
        assert phi.variables == ("x", "y", "z", "a")

    def test_comments_and_blank_lines_are_ignored(self):
        phi = parse("\n# all of it\nx >= 0  # trailing\n\n")
        assert [str(b) for b in phi.bends] == ["x >= 0"]

    def test_true_false_keywords(self):
        phi = parse("true\nfalse\n")
        assert phi.bends[0].is_top
        assert phi.bends[1].is_bottom
        assert str(phi.bends[0]) == "true"
        assert str(phi.bends[1]) == "false"

    def test_infinite_constants_collapse(self):
        phi = parse("x <= inf\ny >= -inf\n")
        assert phi.bends[0].is_top
        assert phi.bends[1].is_top

    def test_coefficient_spellings(self):
        phi = parse("-x + -3 y <= 4\n- 2 z > -1/2\n")
        assert [str(b) for b in phi.bends] == ["-x + -3 y <= 4", "z < 1/4"]

    def test_repeated_variable_merges_within_a_term_sum(self):
        phi = parse("x + x <= 2\n")
        assert [str(b) for b in phi.bends] == ["x <= 1"]

    def test_strict_relations_survive(self):
        phi = parse("x < 1 | x > 2\n")
        assert str(phi.bends[0]) == "x < 1 | x > 2"


class TestParseErrors:
    def test_two_inequalities_rejected_with_location(self):
        with pytest.raises(NotABendError) as info:
            parse("x >= 1 | x + y <= 3 | y >= 2\n", "bad.bnd")
        assert "REJECTED_NOT_A_BEND" in str(info.value)
        assert "bad.bnd:1:1" in str(info.value)

    def test_equality_gets_a_hint(self):
        with pytest.raises(ParseError) as info:
            parse("x = 1\n", "eq.bnd")
        assert "eq.bnd:1:3" in str(info.value)
        assert "separate lines" in str(info.value)

    def test_tilde_names_are_reserved(self):
        with pytest.raises(ParseError) as info:
            parse("~x >= 0\n")
        assert "reserved" in str(info.value)

    def test_unexpected_character(self):
        with pytest.raises(ParseError) as info:
            parse("x ?= 3\n", "odd.bnd")
        assert "odd.bnd:1:3" in str(info.value)

    def test_keyword_cannot_be_a_variable(self):
        with pytest.raises(ParseError):
            parse("vars true\n")
        with pytest.raises(ParseError):
            parse("inf <= 3\n")

    def test_duplicate_declaration(self):
        with pytest.raises(ParseError) as info:
            parse("vars a b a\n")
        assert "declared twice" in str(info.value)

    def test_constant_only_branch(self):
        with pytest.raises(ParseError):
            parse("3 <= 4\n")

    def test_missing_comparison(self):
        with pytest.raises(ParseError):
            parse("x + y\n")

    def test_trailing_input(self):
        with pytest.raises(ParseError):
            parse("x <= 1 2\n")

    def test_zero_denominator(self):
        with pytest.raises(ParseError):
            parse("1/0 x <= 1\n")

    def test_empty_branch(self):
        with pytest.raises(ParseError):
            parse("x >= 0 |\n")

    def test_machine_names_allowed_only_for_single_bends(self):
        bend = parse_bend("-~d1 + 2 ~x <= 0")
        assert str(bend) == "-~d1 + 2 ~x <= 0"


class TestPrettyPrint:
    def test_gadget_round_trips_exactly(self):
        phi = parse(GADGET_TEXT)
        again = parse(pretty_print(phi))
        assert again.variables == phi.variables
        assert [str(b) for b in again.bends] == [str(b) for b in phi.bends]

    def test_empty_formula_prints_empty(self):
        assert pretty_print(BijunctiveFormula([])) == ""

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6), st.booleans())
    def test_round_trip_is_identity_on_canonical_text(self, seed, tvpi):
        rng = random.Random(seed)
        make = generate.random_tvpi_formula if tvpi else generate.random_formula
        phi = make(rng)
        text = pretty_print(phi)
        again = parse(text)
        assert again.variables == phi.variables
        assert [str(b) for b in again.bends] == [str(b) for b in phi.bends]
        assert pretty_print(again) == text


class TestWitnessJson:
    def test_plain_object(self):
        got = witness_from_jsonable({"x": "1/2", "y": 3})
        assert got == {"x": Fraction(1, 2), "y": Fraction(3)}

    def test_wrapped_object(self):
        assert witness_from_jsonable({"witness": {"x": "2"}}) == {"x": Fraction(2)}

    def test_floats_are_rejected(self):
        with pytest.raises(ParseError):
            witness_from_jsonable({"x": 0.5})

    def test_junk_is_rejected(self):
        with pytest.raises(ParseError):
            witness_from_jsonable({"x": "half"})
        with pytest.raises(ParseError):
            witness_from_jsonable(["x"])


class TestCertificateJson:
    def test_witness_kind_round_trip(self):
        cert = Certificate.of_witness({"x": Fraction(1, 3)})
        back = certificate_from_jsonable(certify.certificate_to_jsonable(cert))
        assert back.kind == "witness"
        assert back.witness == {"x": Fraction(1, 3)}

    def test_trace_kind_round_trip(self):
        cert = Certificate.of_trace("eliminate x in [0, 1]\nunsatisfiable\n")
        back = certificate_from_jsonable(certify.certificate_to_jsonable(cert))
        assert back.kind == "trace"
        assert back.trace == cert.trace

    def test_refutation_round_trip_still_checks(self):
        phi = parse(UNSAT_TEXT)
        result = eliminate.solve(phi)
        assert not result.satisfiable and result.refutation is not None
        cert = Certificate.of_refutation(result.refutation)
        blob = json.loads(json.dumps(certify.certificate_to_jsonable(cert)))
        back = certificate_from_jsonable(blob)
        assert back.kind == "handcuff-refutation"
        assert certify.check_refutation(back.refutation, phi)

    def test_unknown_kind_is_rejected(self):
        with pytest.raises(ParseError):
            certificate_from_jsonable({"kind": "promise"})


class TestCliSolve:
    def test_sat_exit_zero(self, tmp_path):
        path = tmp_path / "g.bnd"
        path.write_text(GADGET_TEXT)
        code, out, err = run(["solve", str(path)])
        assert (code, out, err) == (0, "SAT\n", "")

    def test_unsat_exit_one(self, tmp_path):
        path = tmp_path / "u.bnd"
        path.write_text(UNSAT_TEXT)
        code, out, err = run(["solve", str(path)])
        assert (code, out, err) == (1, "UNSAT\n", "")

    def test_witness_text_lines(self, tmp_path):
        path = tmp_path / "g.bnd"
        path.write_text(GADGET_TEXT)
        code, out, _ = run(["solve", str(path), "--witness"])
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "SAT"
        assert lines[1] in ("x = 0", "x = 1")

    def test_witness_json_uses_rational_strings(self, tmp_path):
        path = tmp_path / "g.bnd"
        path.write_text(GADGET_TEXT)
        code, out, _ = run(["solve", str(path), "--witness", "--format", "json"])
        assert code == 0
        blob = json.loads(out)
        assert blob["status"] == "sat"
        assert blob["witness"]["x"] in ("0", "1")
        assert isinstance(blob["witness"]["x"], str)

    def test_unsat_json_certificate_checks(self, tmp_path):
        path = tmp_path / "u.bnd"
        path.write_text(UNSAT_TEXT)
        code, out, _ = run(["solve", str(path), "--certificate", "--format", "json"])
        assert code == 1
        blob = json.loads(out)
        assert blob["status"] == "unsat"
        cert = certificate_from_jsonable(blob["certificate"])
        assert certify.check_refutation(cert.refutation, parse(UNSAT_TEXT))

    def test_text_certificate_on_unsat(self, tmp_path):
        path = tmp_path / "u.bnd"
        path.write_text(UNSAT_TEXT)
        code, out, _ = run(["solve", str(path), "--certificate"])
        assert code == 1
        assert out.startswith("UNSAT\nhandcuff-refutation\n")
        assert out.rstrip().endswith("end")

    def test_oracle_agreement_keeps_exit_codes(self, tmp_path):
        sat = tmp_path / "g.bnd"
        sat.write_text(GADGET_TEXT)
        unsat = tmp_path / "u.bnd"
        unsat.write_text(UNSAT_TEXT)
        assert run(["solve", str(sat), "--oracle"])[0] == 0
        assert run(["solve", str(unsat), "--oracle"])[0] == 1

    def test_missing_file_is_exit_two(self, tmp_path):
        code, _, err = run(["solve", str(tmp_path / "absent.bnd")])
        assert code == 2
        assert "error:" in err

    def test_parse_error_is_exit_two(self, tmp_path):
        path = tmp_path / "bad.bnd"
        path.write_text("x >= 1 | x + y <= 3 | y >= 2\n")
        code, _, err = run(["solve", str(path)])
        assert code == 2
        assert "REJECTED_NOT_A_BEND" in err

    def test_json_output_is_byte_identical_across_runs(self, tmp_path):
        path = tmp_path / "g.bnd"
        path.write_text(GADGET_TEXT)
        argv = ["solve", str(path), "--witness", "--certificate", "--format", "json", "--seed", "7"]
        first = run(argv)
        second = run(argv)
        assert first == second


class TestCliCheck:
    def test_half_is_not_a_gadget_witness(self, tmp_path):
        problem = tmp_path / "g.bnd"
        problem.write_text(GADGET_TEXT)
        witness = tmp_path / "w.json"
        witness.write_text('{"x": "1/2"}')
        code, out, _ = run(["check", str(problem), "--witness", str(witness)])
        assert (code, out) == (1, "invalid\n")

    def test_endpoint_witness_is_valid(self, tmp_path):
        problem = tmp_path / "g.bnd"
        problem.write_text(GADGET_TEXT)
        witness = tmp_path / "w.json"
        witness.write_text('{"x": "1"}')
        code, out, _ = run(["check", str(problem), "--witness", str(witness)])
        assert (code, out) == (0, "valid\n")

    def test_solver_certificate_validates(self, tmp_path):
        problem = tmp_path / "u.bnd"
        problem.write_text(UNSAT_TEXT)
        _, out, _ = run(["solve", str(problem), "--certificate", "--format", "json"])
        cert = tmp_path / "c.json"
        cert.write_text(json.dumps(json.loads(out)["certificate"]))
        assert run(["check", str(problem), "--certificate", str(cert)])[0] == 0

    def test_refutation_against_wrong_formula_is_invalid(self, tmp_path):
        problem = tmp_path / "u.bnd"
        problem.write_text(UNSAT_TEXT)
        _, out, _ = run(["solve", str(problem), "--certificate", "--format", "json"])
        cert = tmp_path / "c.json"
        cert.write_text(json.dumps(json.loads(out)["certificate"]))
        other = tmp_path / "g.bnd"
        other.write_text(GADGET_TEXT)
        code, out, _ = run(["check", str(other), "--certificate", str(cert)])
        assert (code, out) == (1, "invalid\n")

    def test_malformed_witness_json_is_exit_two(self, tmp_path):
        problem = tmp_path / "g.bnd"
        problem.write_text(GADGET_TEXT)
        witness = tmp_path / "w.json"
        witness.write_text("{not json")
        assert run(["check", str(problem), "--witness", str(witness)])[0] == 2

    def test_witness_or_certificate_is_required(self, tmp_path):
        problem = tmp_path / "g.bnd"
        problem.write_text(GADGET_TEXT)
        assert run(["check", str(problem)])[0] == 2


class TestCliFuzz:
    def test_small_fuzz_run_agrees(self):
        code, out, _ = run(["fuzz", "--count", "15", "--seed", "3"])
        assert code == 0
        assert out.endswith("15 instances, 0 disagreements\n")

    def test_tvpi_fuzz_run_agrees(self):
        code, out, _ = run(["fuzz", "--count", "10", "--seed", "5", "--tvpi"])
        assert code == 0
        assert "0 disagreements" in out


class TestCliPlumbing:
    def test_no_arguments_is_exit_two(self):
        assert run([])[0] == 2

    def test_unknown_subcommand_is_exit_two(self):
        assert run(["prove", "x.bnd"])[0] == 2

    def test_console_script_is_wired(self, tmp_path):
        path = tmp_path / "g.bnd"
        path.write_text(GADGET_TEXT)
        proc = subprocess.run(
            [sys.executable, "-c", "from bendsat.frontend import main; main()",
             "solve", str(path)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout == "SAT\n"

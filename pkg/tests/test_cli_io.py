import io
import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from torfan.cli import run_command
from torfan.cli_io import (ComplexDocument, FanDocument, instance_from_polyhedron,
                           parse_document, parse_instance)
from torfan.corpus import CorpusConfig, generate_corpus
from torfan.errors import DimensionError, ParseError, RankError, SchemaError
from torfan.fans import fan_equal, normal_fan
from torfan.quotients import git_chamber_complex, make_context
from torfan.svg import render_svg, svg_text
from helpers import instances, orthant, segment, square

GOLDEN = Path(__file__).parent / "golden"

ORTHANT_SUM = """{
  "schema": "torfan/1",
  "kind": "instance",
  "polyhedron": {"hrep": {"ambient_dim": 3,
                          "inequalities": [["1","0","0"],["0","1","0"],["0","0","1"]],
                          "rhs": ["0","0","0"]}},
  "projection": [[1, 1, 1]]
}
"""


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def orthant_file(tmp_path):
    p = tmp_path / "orthant.json"
    p.write_text(ORTHANT_SUM)
    return str(p)


class TestParse:
    def test_orthant(self):
        doc = parse_instance(ORTHANT_SUM)
        assert (doc.n, doc.d) == (3, 1)
        assert doc.polyhedron() == orthant(3)

    def test_exact_third(self):
        text = ORTHANT_SUM.replace('"rhs": ["0","0","0"]', '"rhs": ["1/3","0","0"]')
        doc = parse_instance(text)
        assert doc.hrep.b[0] == Fraction(1, 3) and isinstance(doc.hrep.b[0], Fraction)

    def test_square_projection(self):
        text = ORTHANT_SUM.replace("[[1, 1, 1]]", "[[1, 0, 0], [0, 1, 0], [0, 0, 1]]")
        with pytest.raises(RankError):
            parse_instance(text)

    def test_rank_deficient_projection(self):
        with pytest.raises(RankError):
            parse_instance(ORTHANT_SUM.replace("[[1, 1, 1]]", "[[1, 1, 1], [2, 2, 2]]"))

    def test_malformed_reports_line(self):
        text = ORTHANT_SUM.replace('"kind": "instance",', '"kind": "instance"')
        with pytest.raises(ParseError, match=r"line 4"):
            parse_instance(text)

    def test_field_diagnostics(self):
        with pytest.raises(SchemaError, match=r"inequalities\[1\]"):
            parse_instance(ORTHANT_SUM.replace('["0","1","0"]', '["0","1"]'))
        with pytest.raises(SchemaError, match=r"rhs\[0\]"):
            parse_instance(ORTHANT_SUM.replace('"rhs": ["0"', '"rhs": ["zero"'))
        with pytest.raises(SchemaError, match="schema"):
            parse_instance(ORTHANT_SUM.replace("torfan/1", "torfan/9"))

    def test_decimal_rejected(self):
        with pytest.raises(SchemaError):
            parse_instance(ORTHANT_SUM.replace('"rhs": ["0"', '"rhs": [0.5'))


class TestRoundTrip:
    def test_fixed_documents(self):
        for text in [ORTHANT_SUM]:
            doc = parse_instance(text)
            assert parse_instance(doc.dumps()) == doc
            assert parse_instance(doc.dumps()).dumps() == doc.dumps()

    def test_fan_document(self):
        F = normal_fan(square())
        doc = FanDocument.from_fan(F, "normal-fan", ORTHANT_SUM)
        back = parse_document(doc.dumps())
        assert back == doc and fan_equal(back.fan(), F)

    def test_complex_document(self):
        K = git_chamber_complex(orthant(4), make_context([[1, 1, -1, -1]]))
        doc = ComplexDocument.from_complex(K, "chambers")
        back = parse_document(doc.dumps())
        assert back == doc and fan_equal(back.complex(), K)

    @given(instances())
    def test_instances(self, inst):
        P, ctx = inst
        for form in ("hrep", "vrep"):
            doc = instance_from_polyhedron(P, ctx.pi_Z, name="x", form=form)
            back = parse_instance(doc.dumps())
            assert back == doc and back.polyhedron() == P

    @given(st.integers(0, 10**6))
    def test_corpus_preconditions(self, seed):
        doc = generate_corpus(CorpusConfig(n=4, d=2, count=4, seed=seed))
        assert parse_document(doc.dumps()) == doc
        for inst in doc.instances:
            assert not inst.polyhedron().is_empty
            ctx = inst.context()
            assert ctx.d == 2 and ctx.diagram_failures() == []


class TestCommands:
    def test_verify_main(self, orthant_file):
        code, out, _ = run(["verify", "main", orthant_file])
        rep = json.loads(out)
        assert code == 0 and rep["summary"] == "pass, 1 instance"

    def test_quotient_fan(self, orthant_file):
        code, out, _ = run(["quotient-fan", "--v", "1", orthant_file])
        doc = parse_document(out)
        assert code == 0 and len(doc.maximal_cones) == 3

    def test_quotient_fan_wrong_length(self, orthant_file):
        code, _, err = run(["quotient-fan", "--v", "1,2", orthant_file])
        assert code == 2 and "--v" in err

    def test_render_3d(self, tmp_path, orthant_file):
        _, out, _ = run(["normal-fan", orthant_file])
        fan = tmp_path / "fan.json"
        fan.write_text(out)
        code, _, err = run(["render", "--svg", str(tmp_path / "x.svg"), str(fan)])
        assert code == 2 and "SVG rendering only for ambient dimension ≤ 2" in err

    def test_bad_input(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        assert run(["chambers", str(bad)])[0] == 2
        assert run(["chambers", str(tmp_path / "missing.json")])[0] == 2
        assert run(["no-such-command"])[0] == 2

    def test_verify_failure_exit(self, tmp_path, monkeypatch, orthant_file):
        from torfan import cli
        from torfan.quotients import VerificationReport

        def failing(P, ctx):
            r = VerificationReport("main", instances=1)
            r.fail({"reason": "forced"})
            return r
        monkeypatch.setattr(cli, "verify_main_theorem", failing)
        code, out, _ = run(["verify", "main", orthant_file])
        assert code == 1 and json.loads(out)["witness"]["reason"] == "forced"

    @pytest.mark.parametrize("cmd", [["dual"], ["normal-fan"], ["fiber-fan", "--route", "both"], ["chambers"],
                                     ["chow-fan"], ["verify", "fiberduality"], ["verify", "affine"]])
    def test_all_commands_succeed(self, cmd, orthant_file):
        code, out, err = run(cmd + [orthant_file])
        assert code == 0, err
        doc = json.loads(out)
        if doc["kind"] == "report":
            assert doc["status"] == "pass"
        else:
            parse_document(out)

    def test_dual_output_is_instance(self, orthant_file):
        _, out, _ = run(["dual", orthant_file])
        doc = parse_instance(out)
        assert doc.polyhedron() == orthant(3) and doc.d == 2

    def test_seed_env(self, monkeypatch):
        monkeypatch.setenv("TORFAN_SEED", "11")
        a = run(["random-corpus", "--n", "3", "--d", "1", "--count", "3"])[1]
        b = run(["random-corpus", "--n", "3", "--d", "1", "--count", "3", "--seed", "11"])[1]
        c = run(["random-corpus", "--n", "3", "--d", "1", "--count", "3", "--seed", "12"])[1]
        assert a == b and a != c

    def test_corpus_verify(self, tmp_path):
        _, out, _ = run(["random-corpus", "--n", "3", "--d", "1", "--count", "4", "--seed", "5"])
        p = tmp_path / "corpus.json"
        p.write_text(out)
        code, rep, _ = run(["verify", "main", str(p)])
        assert code == 0 and json.loads(rep)["summary"] == "pass, 4 instances"

    def test_determinism(self, orthant_file):
        for cmd in (["chow-fan"], ["chambers"], ["verify", "fiberduality", "--seed", "3"], ["dual"]):
            assert run(cmd + [orthant_file])[1] == run(cmd + [orthant_file])[1]


class TestSvg:
    @pytest.mark.parametrize("name,make", [
        ("fan_1d", lambda: normal_fan(segment())),
        ("quadrants", lambda: normal_fan(square())),
        ("chambers_weights", lambda: git_chamber_complex(orthant(4), make_context([[1, 1, -1, -1]]))),
    ])
    def test_golden(self, name, make):
        text = svg_text(make())
        assert text == (GOLDEN / f"{name}.svg").read_text()

    def test_structure(self):
        assert svg_text(normal_fan(square())).count("<polygon") == 4
        one = svg_text(normal_fan(segment()))
        assert one.count('height="12"') == 2 and ">(1)<" in one and ">(-1)<" in one
        walls = svg_text(git_chamber_complex(orthant(4), make_context([[1, 1, -1, -1]])))
        assert walls.count('stroke-width="2"') == 1 and ">0</text>" in walls

    def test_render_file(self, tmp_path):
        p = render_svg(normal_fan(square()), tmp_path / "q.svg")
        assert p.read_text().startswith("<svg")

    def test_dimension(self):
        with pytest.raises(DimensionError):
            svg_text(normal_fan(orthant(3)))

import io
import json
import subprocess
import sys

import pytest

from igkit import parse_document
from igkit.cli import main

from conftest import DATA

GOLDEN = str(DATA / "golden.ig")
GOLDEN_CORE = str(DATA / "golden_core.ig")
PRODUCER = str(DATA / "producer.ig")


class Terminal(io.StringIO):
    def isatty(self):
        return True


def run(*argv, out=None):
    out = out if out is not None else io.StringIO()
    err = io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def bad_file(tmp_path):
    path = tmp_path / "bad.ig"
    path.write_text("ID: bad\nFarmers (A) sell (I) daily (Cex,prop)\n")
    return str(path)


class TestParse:
    def test_round_trips_golden(self, golden_text, tmp_path):
        code, out, _ = run("parse", GOLDEN)
        assert code == 0
        # comment lines are dropped, records come back verbatim
        body = "\n".join(l for l in golden_text.splitlines() if not l.startswith("#")).lstrip("\n")
        assert out == body + "\n"
        again = tmp_path / "again.ig"
        again.write_text(out)
        assert run("parse", str(again))[1] == out

    def test_tree_format(self):
        code, out, _ = run("parse", "--format", "tree", PRODUCER)
        assert code == 0
        assert json.loads(out)["records"][0]["id"] == "producer"

    def test_parse_errors_exit_one(self, bad_file):
        code, _, err = run("parse", bad_file)
        assert code == 1 and "OrphanProperty" in err

    def test_output_file(self, tmp_path):
        target = tmp_path / "out.ig"
        assert run("parse", PRODUCER, "-o", str(target))[0] == 0
        assert target.read_text() == (DATA / "producer.ig").read_text()


class TestValidate:
    def test_core_projection_conforms_to_core_plus_context(self):
        code, out, _ = run("validate", "--profile", "IG Core+C_Ext", GOLDEN_CORE)
        assert code == 0
        assert out.strip().endswith("0 errors, 0 warnings")
        assert "under IG Core+C_Ext" in out

    def test_full_golden_exceeds_core(self):
        code, out, _ = run("validate", "--profile", "IG Core+C_Ext", GOLDEN)
        assert code == 1 and "FeatureNotInProfile" in out

    def test_golden_passes_without_profile(self):
        assert run("validate", "--strict", GOLDEN)[0] == 0

    def test_verbose_and_json(self):
        _, out, _ = run("validate", "-v", PRODUCER)
        assert "ImpliedContext" in out
        code, out, _ = run("validate", "--format", "json", PRODUCER)
        payload = json.loads(out)
        assert code == 0 and payload[0]["kind"] == "Regulative"
        assert payload[0]["features"] == ["A", "Bdir", "D", "I"]

    def test_taxonomy_option(self, tmp_path):
        doc = tmp_path / "local.ig"
        doc.write_text("ID: one\nFarmers (A) sell (I) at harvest (Cac;ctx:harvest)\n")
        tax = tmp_path / "tax.json"
        tax.write_text(json.dumps({"schema": "igkit-taxonomy-1", "nodes": [
            {"prefix": "ctx", "code": "harvest", "name": "Harvest", "parent": "tmp"}]}))
        assert run("validate", str(doc))[0] == 1
        assert run("validate", "--taxonomy", str(tax), str(doc))[0] == 0

    def test_manifest(self, tmp_path):
        (tmp_path / "rules.ig").write_text("ID: one\nFarmers (A) must (D) sell (I) goods (Bdir)\n")
        manifest = tmp_path / "igkit.toml"
        manifest.write_text('profile = "IG Core-O"\ndocuments = ["rules.ig"]\n')
        code, out, _ = run("validate", "--manifest", str(manifest))
        assert code == 0 and "under IG Core-O" in out
        manifest.write_text('profile = "IG Core-I"\ndocuments = ["rules.ig"]\n')
        assert run("validate", "--manifest", str(manifest))[0] == 1

    def test_no_documents_is_usage_error(self):
        code, _, err = run("validate")
        assert code == 2 and "no input documents" in err

    def test_color_only_on_terminals(self, bad_file, monkeypatch):
        monkeypatch.delenv("IGKIT_NO_COLOR", raising=False)
        _, out, _ = run("validate", bad_file, out=Terminal())
        assert "\033[31m" in out
        monkeypatch.setenv("IGKIT_NO_COLOR", "1")
        _, out, _ = run("validate", bad_file, out=Terminal())
        assert "\033[" not in out
        _, out, _ = run("validate", bad_file)
        assert "\033[" not in out


class TestTransforms:
    def test_decompose_producer(self):
        code, out, _ = run("decompose", PRODUCER)
        assert code == 0
        assert out.splitlines() == [
            "ID: producer",
            "The producer of an organic livestock operation (A) must (D) establish (I) year-round livestock "
            "living conditions which accommodate the health and natural behavior of animals (Bdir). [AND] "
            "The producer of an organic livestock operation (A) must (D) maintain (I) year-round livestock "
            "living conditions which accommodate the health and natural behavior of animals (Bdir).",
        ]

    def test_project_core_matches_golden_file(self):
        code, out, _ = run("project", "--level", "core", GOLDEN)
        assert code == 0
        assert out == (DATA / "golden_core.ig").read_text(encoding="utf-8")

    def test_project_output_reparses(self):
        _, out, _ = run("project", "--level", "extended", GOLDEN)
        assert all(r.ok for r in parse_document(out))

    def test_flatten(self):
        code, out, _ = run("flatten", GOLDEN)
        assert code == 0
        assert "vertical-two-level\tdepth 2" in out
        assert out.count("\tdepth ") == 4

    def test_transforms_refuse_broken_input(self, bad_file):
        for command in (["decompose"], ["project", "--level", "core"], ["flatten"]):
            assert run(*command, bad_file)[0] == 1


class TestOtherCommands:
    def test_profile(self):
        code, out, _ = run("profile", "IG Core--IO")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "IG Core-IO"
        assert [l.split()[0] for l in lines[1:]] == ["A", "Bdir", "Bind", "D", "Cac", "Cex", "P", "M", "E", "F"]

    def test_bad_profile_is_usage_error(self):
        code, _, err = run("profile", "IG Core-R")
        assert code == 2 and err.startswith("igkit: ")

    def test_stats(self):
        code, out, _ = run("stats", "--format", "json", PRODUCER)
        assert code == 0
        assert json.loads(out)["components"] == {"A": 1, "Bdir": 1, "D": 1, "I": 1}
        assert "components:" in run("stats", PRODUCER)[1]

    def test_preprocess(self):
        code, out, _ = run("preprocess", str(DATA / "livestock_raw.txt"))
        assert code == 0
        assert out == (DATA / "livestock_expected.txt").read_text(encoding="utf-8")

    def test_export(self, golden_records):
        code, out, _ = run("export", GOLDEN)
        assert code == 0 and len(json.loads(out)["records"]) == len(golden_records)

    def test_missing_file(self, tmp_path):
        code, _, err = run("parse", str(tmp_path / "absent.ig"))
        assert code == 2 and "cannot read" in err

    def test_unknown_command(self):
        assert run("frobnicate")[0] == 2

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "igkit", "profile", "IG Core+R"],
                              capture_output=True, text=True, check=False)
        assert proc.returncode == 0 and proc.stdout.startswith("IG Core+R")

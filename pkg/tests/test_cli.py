from __future__ import annotations

import json
from pathlib import Path

import pytest

from src.zmtforge.cli import main
from src.zmtforge.config import EngineCaps, load_caps
from src.zmtforge.contracts import parse_problem
from src.zmtforge.errors import ConfigError, ParseError, ProblemError
from src.zmtforge.report import emit_report, iter_certificates
from src.zmtforge.ring import is_name
from src.zmtforge.run_manifest import dumps_bundle, load_bundle, write_bundle
from src.zmtforge.tasks import execute, reverify
from src.zmtforge.validators import canonical_task, validate_problem_dict


def _write(path: Path, blob: dict) -> Path:
    path.write_text(json.dumps(blob, indent=2), encoding="utf-8")
    return path


def _run(fixtures_dir: Path, name: str, caps: EngineCaps):
    text = (fixtures_dir / name).read_text(encoding="utf-8")
    return execute(parse_problem(text), caps)


# --- problem files ----------------------------------------------------------------

def test_task_aliases():
    assert canonical_task("hensel") == "mhl"
    assert canonical_task(" GB ") == "gb"
    with pytest.raises(ProblemError, match="unknown task"):
        canonical_task("factor")


@pytest.mark.parametrize("blob,match", [
    ({"task": "gb", "gens": ["x"], "extra": 1}, "unknown top-level keys"),
    ({"gens": ["x"]}, "no task"),
    ({"task": "gb", "gens": ["x", "x"]}, "duplicate"),
    ({"task": "gb", "base": {"vars": ["a"]}, "gens": ["a"]}, "also base variables"),
    ({"task": "gb", "gens": ["x"], "options": {"depth": 3}}, "unknown keys"),
    ({"task": "member", "gens": ["x"], "ideal": ["x"]}, "params.poly"),
    ({"task": "gb", "gens": ["x"], "params": {"poly": "x"}}, "not understood"),
    ({"task": "newton", "base": {"vars": ["a"]}, "gens": ["x"], "relations": [], "ideal": ["a"]},
     "0 equations"),
    ({"task": "newton", "base": {"vars": ["a"]}, "gens": ["x"], "relations": ["x - a"], "ideal": ["a"],
      "params": {"steps": -1}}, "params.steps"),
    ({"task": "mhl", "base": {"vars": ["a"]}, "gens": ["x"], "relations": ["x - a"], "ideal": ["a"],
      "params": {"point": [0, 1]}}, "2 coordinates"),
    ({"task": "integral-cert", "gens": ["x"], "params": {"element": "x", "method": "magic"}}, "params.method"),
])
def test_problem_validation(blob, match):
    with pytest.raises(ProblemError, match=match):
        validate_problem_dict(blob)


def test_command_line_task_must_agree_with_the_file():
    with pytest.raises(ProblemError, match="disagrees"):
        validate_problem_dict({"task": "gb", "gens": ["x"]}, "member")
    assert validate_problem_dict({"task": "hensel", "base": {"vars": ["a"]}, "gens": ["x"],
                                  "relations": ["x - a"], "ideal": ["a"]}, "mhl") == "mhl"


def test_json_errors_keep_their_position():
    with pytest.raises(ParseError) as err:
        parse_problem('{\n  "task": "gb",\n  "gens": [x]\n}')
    assert err.value.line == 3


def test_polynomial_errors_name_the_field():
    text = json.dumps({"task": "gb", "gens": ["x", "y"], "relations": ["x + y", "x**2"]})
    with pytest.raises(ParseError, match=r"relations\[1\]") as err:
        parse_problem(text)
    assert err.value.column == 3


def test_problem_round_trips_through_its_dict(fixtures_dir):
    p = parse_problem((fixtures_dir / "worked_system.json").read_text())
    again = parse_problem(json.dumps(p.to_dict()))
    assert again == p
    assert p.hensel_system().vars == ("x", "y")


# --- config -----------------------------------------------------------------------

def test_caps_layering(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    caps_file = _write(tmp_path / "caps.json", {"exp_cap": 8, "notes": "small"})
    assert load_caps(caps_file).exp_cap == 8
    monkeypatch.setenv("ZMTFORGE_EXP_CAP", "5")
    assert load_caps(caps_file).exp_cap == 5
    assert load_caps(caps_file, exp_cap=3, degree_cap=None).exp_cap == 3
    with pytest.raises(ConfigError):
        load_caps(caps_file, exp_cap=0)
    with pytest.raises(ConfigError, match="unknown cap overrides"):
        load_caps(caps_file, depth=2)
    with pytest.raises(ConfigError, match="not found"):
        load_caps(tmp_path / "missing.json")


# --- bundles ----------------------------------------------------------------------

def test_member_bundle_reverifies(fixtures_dir, caps, tmp_path):
    bundle = _run(fixtures_dir, "member.json", caps)
    assert bundle.passed
    assert bundle.artifacts["member"] is True
    path = write_bundle(tmp_path / "member_bundle.json", bundle)
    loaded = load_bundle(path)
    assert dumps_bundle(loaded) == dumps_bundle(bundle)
    assert all(reverify(loaded, caps).values())


def test_tampered_cofactors_fail(fixtures_dir, caps):
    bundle = _run(fixtures_dir, "member.json", caps)
    bundle.artifacts["cofactors"][0] = "y + 1"
    v = reverify(bundle, caps)["membership"]
    assert not v.ok and v.reason == "NotInIdeal"


def test_non_member_carries_its_basis(caps):
    p = parse_problem(json.dumps({"task": "member", "gens": ["x", "y"], "ideal": ["x^2", "y"],
                                  "params": {"poly": "x + y^2"}}))
    bundle = execute(p, caps)
    assert bundle.passed
    assert bundle.artifacts["remainder"] == "x"
    bundle.artifacts["remainder"] = "x^2"
    assert reverify(bundle, caps)["membership"].reason == "NotInIdeal"


def test_radical_bundle(caps):
    p = parse_problem(json.dumps({"task": "radical", "gens": ["x", "y"], "ideal": ["x^3", "y^2"],
                                  "params": {"poly": "x + y"}}))
    bundle = execute(p, caps)
    assert bundle.passed
    assert bundle.artifacts["exponent"] == 4


def test_integral_cert_tampering(fixtures_dir, caps):
    bundle = _run(fixtures_dir, "integral_cert.json", caps)
    assert bundle.passed
    cert = bundle.artifacts["certs"][0]
    assert cert["provenance"] == ["Elimination"]
    cert["monic"] = "T^2 - 2*a"
    assert reverify(bundle, caps)["cert[0]"].reason == "Annihilation"
    cert["monic"] = "2*T^2 - a"
    assert reverify(bundle, caps)["cert[0]"].reason == "NotMonic"


def test_text_report_lists_provenance(fixtures_dir, caps):
    bundle = _run(fixtures_dir, "integral_cert.json", caps)
    found = list(iter_certificates(bundle.artifacts))
    assert [path for path, _ in found] == ["certs[0]"]
    text = emit_report(bundle, "text")
    assert "[Elimination]" in text
    assert "deg=2" in text
    assert text.rstrip().endswith("status: verified")
    with pytest.raises(ValueError):
        emit_report(bundle, "html")


def test_newton_bundle(fixtures_dir, caps):
    bundle = _run(fixtures_dir, "newton.json", caps)
    assert bundle.passed
    assert sorted(bundle.verdicts) == ["state[0]", "state[1]", "state[2]"]
    bundle.artifacts["states"][2]["point"][0] = "a"
    assert reverify(bundle, caps)["state[2]"].reason == "NotInIdeal"


def test_mhl_bundle_tampering(fixtures_dir, caps):
    bundle = _run(fixtures_dir, "linear.json", caps)
    assert bundle.passed
    mhl = bundle.artifacts["mhl"]
    nu = mhl["nu"][0]
    mhl["nu"][0] = f"{nu} + 1"
    assert reverify(bundle, caps)["mhl"].reason == "RecoveryIdentity"
    mhl["nu"][0] = nu
    mhl["h"] = "2*" + f"({mhl['h']})"
    assert reverify(bundle, caps)["mhl"].reason == "NotMonic"


# --- command line -------------------------------------------------------------------

def test_cli_writes_and_verifies(fixtures_dir, tmp_path, capsys):
    out = tmp_path / "member_bundle.json"
    assert main(["member", str(fixtures_dir / "member.json"), "--out", str(out)]) == 0
    assert "status: verified" in capsys.readouterr().out
    assert main(["verify", str(out)]) == 0

    blob = json.loads(out.read_text())
    blob["artifacts"]["cofactors"][0] = "0"
    tampered = _write(tmp_path / "tampered.json", blob)
    assert main(["verify", str(tampered)]) == 1
    assert "membership" in capsys.readouterr().err


def test_cli_bad_input_exits_2(tmp_path, capsys):
    bad = _write(tmp_path / "bad.json", {"task": "gb", "gens": ["x"], "relations": ["x**2"]})
    out = tmp_path / "bad_bundle.json"
    with pytest.raises(SystemExit) as exc:
        main(["gb", str(bad), "--out", str(out)])
    assert exc.value.code == 2
    assert "ParseError" in capsys.readouterr().err
    failed = load_bundle(out)
    assert failed.error["exit_code"] == 2
    assert not failed.passed


def test_cli_missing_file_exits_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["gb", str(tmp_path / "nope.json")])
    assert exc.value.code == 2


def test_cli_cap_exits_3(tmp_path, capsys):
    prob = _write(tmp_path / "deep.json", {"task": "member", "gens": ["x"], "ideal": ["x"],
                                          "params": {"poly": "x^9"}})
    with pytest.raises(SystemExit) as exc:
        main(["member", str(prob), "--degree-cap", "4", "--out", str(tmp_path / "deep_bundle.json")])
    assert exc.value.code == 3
    assert "DegreeCapExceeded" in capsys.readouterr().err


def test_undecodable_problem_exits_2(tmp_path, capsys):
    raw = tmp_path / "latin1.json"
    raw.write_bytes(b'{"task": "gb",\n "gens": ["\xff"]}')
    with pytest.raises(SystemExit) as exc:
        main(["gb", str(raw)])
    assert exc.value.code == 2
    assert "ParseError" in capsys.readouterr().err


def test_undecodable_bundle_is_a_parse_error(tmp_path):
    raw = tmp_path / "bundle.json"
    raw.write_bytes(b"\xff\xfe{}")
    with pytest.raises(ParseError, match="UTF-8") as err:
        load_bundle(raw)
    assert (err.value.line, err.value.column) == (1, 1)
    with pytest.raises(SystemExit) as exc:
        main(["verify", str(raw)])
    assert exc.value.code == 2


def test_run_manifest_keeps_one_hash_helper():
    from src.zmtforge import run_manifest
    assert not hasattr(run_manifest, "_sha256")
    assert run_manifest.sha256_text("x") == run_manifest.sha256_text("x")


@pytest.mark.parametrize("name", ["_x", "x-1", "é", "1x", ""])
def test_names_follow_the_polynomial_grammar(name):
    assert not is_name(name)
    with pytest.raises(ProblemError):
        validate_problem_dict({"task": "gb", "gens": [name]})


def test_grammar_names_are_accepted():
    assert is_name("x_1") and is_name("Xb2")
    validate_problem_dict({"task": "gb", "gens": ["x_1", "Xb2"]})


# --- bundles are checked against their own problem ---------------------------------

def test_certificate_over_a_foreign_algebra_fails(fixtures_dir, caps):
    bundle = _run(fixtures_dir, "integral_cert.json", caps)
    bundle.artifacts["certs"][0] = {"element": "1", "monic": "T - 1",
                                    "owner": {"vars": ["z"], "relations": []}}
    v = reverify(bundle, caps)["cert[0]"]
    assert not v.ok and v.reason == "CoefficientLocation"


def test_certificate_for_another_element_fails(fixtures_dir, caps):
    bundle = _run(fixtures_dir, "integral_cert.json", caps)
    cert = bundle.artifacts["certs"][0]
    cert.update(element="1", numerator="1", denominator="1", monic="T - 1")
    v = reverify(bundle, caps)["cert[0]"]
    assert not v.ok and v.reason == "Annihilation"


def test_certificate_over_a_wider_ring_fails(fixtures_dir, caps):
    bundle = _run(fixtures_dir, "integral_cert.json", caps)
    cert = bundle.artifacts["certs"][0]
    cert.update(monic="T - x", coeff_vars=["a", "x"])
    assert reverify(bundle, caps)["cert[0]"].reason == "CoefficientLocation"


def test_newton_artifacts_of_another_system_fail(fixtures_dir, caps):
    bundle = _run(fixtures_dir, "newton.json", caps)
    other = parse_problem(json.dumps({
        "task": "newton", "base": {"vars": ["a", "b"], "local_at": {"kind": "one_plus", "gens": ["a", "b"]}},
        "gens": ["x", "y"], "relations": ["x - a", "y - b"], "ideal": ["a", "b"], "params": {"steps": 2}}))
    bundle.artifacts = execute(other, caps).artifacts
    v = reverify(bundle, caps)
    assert not v["system"].ok and v["system"].reason == "NotInIdeal"
    assert not all(v.values())


def test_mhl_artifacts_of_another_system_fail(fixtures_dir, caps):
    bundle = _run(fixtures_dir, "linear.json", caps)
    other = parse_problem(json.dumps({"task": "mhl", "base": {"vars": ["a"]}, "gens": ["x"],
                                      "relations": ["x - 2*a"], "ideal": ["a"]}))
    bundle.artifacts = execute(other, caps).artifacts
    v = reverify(bundle, caps)
    assert v["system"].reason == "NotInIdeal"
    assert v["reduced_system"].reason == "NotInIdeal"


def _swap_artifacts(bundle, blob, caps):
    bundle.artifacts = execute(parse_problem(json.dumps(blob)), caps).artifacts
    return reverify(bundle, caps)


def test_member_artifacts_of_another_problem_fail(fixtures_dir, caps):
    bundle = _run(fixtures_dir, "member.json", caps)
    v = _swap_artifacts(bundle, {"task": "member", "gens": ["x", "y"], "ideal": ["x"],
                                 "params": {"poly": "x*y"}}, caps)["membership"]
    assert not v.ok and v.reason == "NotInIdeal" and "problem" in v.detail


def test_member_artifacts_over_another_ideal_fail(fixtures_dir, caps):
    bundle = _run(fixtures_dir, "member.json", caps)
    v = _swap_artifacts(bundle, {"task": "member", "gens": ["x", "y"], "ideal": ["y"],
                                 "params": {"poly": "y^2"}}, caps)["membership"]
    assert not v.ok and "another ideal" in v.detail


def test_radical_artifacts_of_another_problem_fail(caps):
    blob = {"task": "radical", "gens": ["x", "y"], "ideal": ["x^3", "y^2"], "params": {"poly": "x + y"}}
    bundle = execute(parse_problem(json.dumps(blob)), caps)
    v = _swap_artifacts(bundle, dict(blob, ideal=["x + y"]), caps)["radical"]
    assert not v.ok and v.reason == "NotInIdeal"


def test_gb_artifacts_of_another_ideal_fail(caps):
    blob = {"task": "gb", "gens": ["x", "y"], "ideal": ["x^2 - y", "x*y"]}
    bundle = execute(parse_problem(json.dumps(blob)), caps)
    assert all(reverify(bundle, caps).values())
    v = _swap_artifacts(bundle, dict(blob, ideal=["x"]), caps)["groebner"]
    assert not v.ok and "another ideal" in v.detail

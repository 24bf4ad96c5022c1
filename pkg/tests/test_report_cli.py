import json

import pytest

from stabext.gfmat import GFMatrix
from stabext.groups import cyclic_group, subgroup
from stabext.cli import main
from stabext.report import (
    Problem,
    SpecError,
    load_schreier,
    run,
    run_schreier,
    verify_report,
)
from stabext import corpus


def z4_spec(p, entry, analyses):
    z4 = cyclic_group(4)
    return {
        "schema": "stabext.problem/1",
        "p": p,
        "group": z4.to_json(),
        "normal_generators": [2],
        "rho_generators": [GFMatrix([[entry]], p).to_json()],
        "analyses": analyses,
    }


def pair_spec(pair, analyses):
    return {
        "schema": "stabext.problem/1",
        "p": pair.rho.p,
        "group": pair.G.to_json(),
        "normal_generators": pair.nsub.generator_indices,
        "rho_generators": [pair.rho.mats[pair.nsub.pos[g]].to_json()
                           for g in pair.nsub.generator_indices],
        "v_basis": pair.v_rows.a.tolist(),
        "v_action_generators": [pair.v_action.mats[g].to_json()
                                for g in pair.G.generator_indices],
        "analyses": analyses,
    }


def test_bad_schema_rejected():
    spec = z4_spec(5, 4, ["stability"])
    spec["schema"] = "stabext.problem/999"
    with pytest.raises(SpecError, match="schema"):
        Problem(spec)


def test_bad_field_reported_by_name():
    spec = z4_spec(5, 4, ["stability"])
    spec["normal_generators"] = [99]
    with pytest.raises(SpecError, match="normal_generators"):
        Problem(spec)
    spec = z4_spec(5, 4, ["no-such-analysis"])
    with pytest.raises(SpecError, match="analyses"):
        Problem(spec)


def test_inconsistent_v_action_rejected():
    spec = z4_spec(5, 4, ["stability"])
    # rho sends the N-generator to -1 but the claimed V-action fixes V
    spec["v_basis"] = [[1]]
    spec["v_action_generators"] = [GFMatrix([[1]], 5).to_json()]
    with pytest.raises(SpecError, match="v_action"):
        Problem(spec)


def test_run_and_verify_roundtrip():
    report = run(Problem(z4_spec(5, 4, ["stability", "extension",
                                        "observability"])))
    assert report["results"]["extension"]["trivial"] is True
    assert verify_report(report) == []
    # generator image is the square root of -1
    gen_mat = report["results"]["extension"]["extended_rep"][1]
    assert gen_mat["entries"] == [2]


def test_negative_verdict_survives_verify():
    report = run(Problem(z4_spec(3, 2, ["extension"])))
    assert report["results"]["extension"]["trivial"] is False
    assert verify_report(report) == []


def test_tampered_witness_fails_naming_certificate():
    report = run(Problem(z4_spec(5, 4, ["stability", "extension"])))
    report["results"]["extension"]["extended_rep"][1]["entries"][0] = 3
    fails = verify_report(report)
    assert fails and fails[0].startswith("extension:")


def test_tampered_alpha_fails():
    pair = next(p for p in corpus.stable_pairs()
                if p.name == "heis2_central_gf3_full")
    report = run(Problem(pair_spec(pair, ["stability", "gr"])))
    assert verify_report(report) == []
    report["results"]["gr"]["rep"][1]["entries"][0] = (
        report["results"]["gr"]["rep"][1]["entries"][0] + 1
    ) % 3
    fails = verify_report(report)
    assert any(f.startswith("gr:") for f in fails)


def test_determinism():
    spec = z4_spec(5, 4, ["stability", "extension"])
    r1, r2 = run(Problem(spec)), run(Problem(spec))
    r1.pop("timing"), r2.pop("timing")
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)


def test_cli_exit_codes(tmp_path):
    pos = tmp_path / "pos.json"
    pos.write_text(json.dumps(z4_spec(5, 4, ["extension"])))
    neg = tmp_path / "neg.json"
    neg.write_text(json.dumps(z4_spec(3, 2, ["extension"])))
    bad = tmp_path / "bad.json"
    bad.write_text("{\"schema\": \"nope\"}")
    out = tmp_path / "report.json"
    assert main(["analyze", str(pos), "--out", str(out)]) == 0
    assert main(["verify", str(out)]) == 0
    assert main(["analyze", str(neg), "--out", str(out)]) == 1
    assert main(["verify", str(out)]) == 0
    assert main(["analyze", str(bad)]) == 2


def test_cli_verify_rejects_tamper(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps(z4_spec(5, 4, ["extension"])))
    out = tmp_path / "report.json"
    assert main(["analyze", str(spec), "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    report["results"]["extension"]["extended_rep"][3]["entries"][0] = 1
    out.write_text(json.dumps(report))
    assert main(["verify", str(out)]) == 1


def test_schreier_file_roundtrip(tmp_path):
    case = next(c for c in corpus.schreier_cases() if c.name == "q8")
    f = tmp_path / "sys.json"
    f.write_text(json.dumps({"schema": "stabext.schreier/1",
                             **case.system.to_json()}))
    sys2 = load_schreier(json.loads(f.read_text()))
    out = run_schreier(sys2)
    assert out["valid"] and out["extension_order"] == 8
    assert out["is_split"] is False and out["complement_found"] is False
    assert main(["schreier", str(f)]) == 0


def test_schreier_invalid_file(tmp_path):
    case = next(c for c in corpus.schreier_cases() if c.name == "klein")
    obj = {"schema": "stabext.schreier/1", **case.system.to_json()}
    obj["gamma"][0][0] = 1  # breaks normalization
    f = tmp_path / "sys.json"
    f.write_text(json.dumps(obj))
    assert main(["schreier", str(f)]) == 1

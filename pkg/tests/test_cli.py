"""End-to-end command-line checks: exit-code contract, JSON shape, and
determinism of the output bytes."""

import json

import pytest

from quiver_fmo.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_affine_level_one(capsys):
    code, out, _ = run(capsys, "classify", "--quiver", "affine_sl2",
                       "--w", "1,0", "--v", "1,1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["conical"] is True and data["good"] is False
    assert data["level"] == 1 and data["marks"] == [1, 1]
    assert data["theorem_prediction"] == "conical-not-good"
    assert data["direct"] == "conical-not-good"


def test_classify_good_finite(capsys):
    code, out, _ = run(capsys, "classify", "--quiver", "a1", "--w", "2", "--v", "1", "--json")
    assert code == 0
    assert json.loads(out)["good"] is True


def test_classify_empty_v(capsys):
    code, out, _ = run(capsys, "classify", "--quiver", "a2", "--w", "1,1", "--v", "0,0", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["conical"] is True and data["good"] is True
    assert data["witness"] is None and data["theorem_prediction"] is None


def test_fmo_m_zero_returns_dressing(capsys):
    code, out, _ = run(capsys, "fmo", "--quiver", "a1", "--w", "2", "--v", "2",
                       "--m", "0", "--f", "1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["result"] == {"num": "1", "den": "1"}


def test_fmo_output_shape(capsys):
    code, out, _ = run(capsys, "fmo", "--quiver", "a1", "--w", "2", "--v", "2",
                       "--m", "1", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["result"] == {"num": "u[1,1] - u[1,2]", "den": "w[1,1] - w[1,2]"}


def test_fmo_rejects_asymmetric_dressing(capsys):
    code, _, err = run(capsys, "fmo", "--quiver", "a1", "--w", "2", "--v", "2",
                       "--m", "0", "--f", "w[1,1]")
    assert code == 2
    assert "swapping slots" in err


def test_hilbert_closed_form(capsys):
    code, out, _ = run(capsys, "hilbert", "--quiver", "a1", "--w", "2", "--v", "1",
                       "--order", "8", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["coeffs"] == [1, 0, 3, 0, 5, 0, 7, 0, 9]
    assert data["classification"] == "good"


def test_hilbert_refuses_bad(capsys):
    code, out, _ = run(capsys, "hilbert", "--quiver", "a1", "--w", "2", "--v", "2",
                       "--order", "6", "--json")
    assert code == 2
    assert json.loads(out)["classification"] == "bad"


def test_verify_restriction_pass(capsys):
    code, out, _ = run(capsys, "verify", "restriction", "--quiver", "a1",
                       "--w", "2", "--v", "2", "--vprime", "1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["all_hold"] is True and data["checked"] > 0


def test_verify_involution_single_case(capsys):
    code, out, _ = run(capsys, "verify", "involution", "--quiver", "affine_sl2",
                       "--w", "1,0", "--v", "1,1", "--m", "1,1", "--json")
    assert code == 0
    assert json.loads(out)["all_hold"] is True


def test_verify_km_reports_stages(capsys):
    code, out, _ = run(capsys, "verify", "km-embedding", "--quiver", "a1",
                       "--w", "2", "--v", "2", "--vprime", "1", "--m", "1", "--json")
    assert code == 0
    data = json.loads(out)
    case = data["cases"][0]
    assert [s["stage"] for s in case["stages"]] == \
        ["split", "fourier1", "fourier2", "forget"]


def test_verify_km_skips_nonconical(capsys):
    code, out, _ = run(capsys, "verify", "km-embedding", "--quiver", "affine_sl2",
                       "--w", "0,0", "--v", "1,1", "--vprime", "0,0",
                       "--m", "1,1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["checked"] == 0 and data["skipped"] == len(data["cases"]) > 0


def test_verify_failure_exit_code_and_both_sides(capsys, monkeypatch):
    # force a failure to check the reporting contract
    import quiver_fmo.cli as cli
    from quiver_fmo.defect_embed import VerifyReport
    from quiver_fmo.multipoly import RatFunc, MPoly

    def fake(ctx, v_prime, m, f, sign):
        return VerifyReport(False, RatFunc.one(), RatFunc.zero())

    monkeypatch.setattr(cli, "verify_restriction", fake)
    code, out, _ = run(capsys, "verify", "restriction", "--quiver", "a1",
                       "--w", "2", "--v", "1", "--vprime", "1",
                       "--m", "1", "--f", "1", "--json")
    assert code == 1
    case = json.loads(out)["cases"][0]
    assert case["lhs"] == {"num": "1", "den": "1"}
    assert case["rhs"] == {"num": "0", "den": "1"}


def test_bad_input_exit_code(capsys):
    code, _, err = run(capsys, "classify", "--quiver", "a1", "--w", "2,1", "--v", "1")
    assert code == 2 and "needs 1 entries" in err
    code, _, err = run(capsys, "classify", "--quiver", "/nonexistent.json",
                       "--w", "1", "--v", "1")
    assert code == 2
    code, _, err = run(capsys, "fmo", "--quiver", "a1", "--w", "2", "--v", "1",
                       "--m", "3")
    assert code == 2


def test_quiver_file_input(capsys, tmp_path):
    path = tmp_path / "quiver.json"
    path.write_text(json.dumps({
        "vertices": ["0", "1"],
        "edges": [{"source": "0", "target": "1"}],
    }))
    code, out, _ = run(capsys, "classify", "--quiver", str(path),
                       "--w", "1,1", "--v", "1,1", "--json")
    assert code == 0
    assert json.loads(out)["kind"] == "finite"


def test_output_deterministic(capsys):
    args = ("verify", "adding-defect", "--quiver", "affine_sl2", "--w", "0,0",
            "--v", "1,1", "--vprime", "1,0", "--json")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2

"""The command-line surface: outputs, parity, and the exit-code contract."""

import json
from fractions import Fraction

import pytest

import skpin.cli as cli
from skpin import VerificationError
from skpin.cli import main, render_text


@pytest.fixture()
def k53(tmp_path):
    path = tmp_path / "k53.hg"
    assert main(["gen", "complete-uniform:m=5,t=3", "--out", str(path)]) == 0
    return str(path)


@pytest.fixture()
def disconnected(tmp_path):
    path = tmp_path / "d4.hg"
    assert main(["gen", "disconnected:m=4", "--out", str(path)]) == 0
    return str(path)


def test_analyze_k53_text(k53, capsys):
    assert main(["analyze", k53]) == 0
    out = capsys.readouterr().out
    assert "i_capacity = 5/1 (~ 5.000000)" in out
    assert "r_co = 5/1 (~ 5.000000)" in out
    assert "[[1], [2], [3], [4], [5]]" in out


def test_analyze_json_text_parity(k53, capsys):
    assert main(["analyze", k53, "--lp", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert main(["analyze", k53, "--lp"]) == 0
    text = capsys.readouterr().out.strip()
    # the text report derives losslessly from the JSON payload
    assert render_text("analyze", payload) == text
    # and the rational fields parse back exactly
    assert Fraction(payload["i_capacity"]) == 5
    assert Fraction(payload["lp_value"]) == 5
    assert all(Fraction(v) == Fraction(1, 4) for v in payload["lambda"].values())


def test_analyze_gen_hidden_bit(capsys):
    assert main(["analyze", "example1", "--gen", "example1:m=3,p=0.5", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["i_capacity"] == pytest.approx(1.0, abs=1e-9)
    assert payload["r_co"] == pytest.approx(3.0, abs=1e-9)
    assert payload["minimizer_count"] == 4


def test_analyze_limit_minimizers(capsys):
    assert main(["analyze", "--gen", "hidden-bit:m=3,p=0.5", "--limit-minimizers", "2", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["minimizers"]) == 2
    assert payload["minimizer_count"] == 4
    assert main(["analyze", "--gen", "hidden-bit:m=3,p=0.5", "--limit-minimizers", "0", "--json"]) == 0
    assert len(json.loads(capsys.readouterr().out)["minimizers"]) == 4


def test_typecheck_commands(k53, disconnected, capsys):
    assert main(["typecheck", k53, "--json"]) == 0
    v = json.loads(capsys.readouterr().out)
    assert v["is_minimizer"] and v["is_unique"] and v["worst_b"] is None
    assert main(["typecheck", disconnected, "--json"]) == 0
    v = json.loads(capsys.readouterr().out)
    assert not v["is_minimizer"]
    assert v["worst_b"] == [1, 2]
    assert Fraction(v["margin"]) == Fraction(-1, 6)


def test_typecheck_m2_fallback(tmp_path, capsys):
    path = tmp_path / "m2.hg"
    path.write_text("2\n1 2\n")
    assert main(["typecheck", str(path), "--json"]) == 0
    v = json.loads(capsys.readouterr().out)
    assert v["is_minimizer"] and v["is_unique"]


def test_rsk_k53(k53, capsys):
    assert main(["rsk", k53]) == 0
    out = capsys.readouterr().out
    assert "r_sk = 5/1 (~ 5.000000)" in out


def test_rsk_non_type_s_exits_3_with_witness(disconnected, capsys):
    assert main(["rsk", disconnected]) == 3
    err = capsys.readouterr().err
    assert "{1, 2}" in err


def test_lp_triangle(capsys):
    assert main(["lp", "--gen", "complete-uniform:m=3,t=2", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert Fraction(payload["lp_value"]) == Fraction(3, 2)
    assert payload["lambda"] == {"1,2": "1/2", "1,3": "1/2", "2,3": "1/2"}


def test_conditional_observables(capsys):
    base = ["conditional", "--gen", "complete-uniform:m=3,t=2", "--json"]
    assert main(base + ["--observable", "identity"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(0.0, abs=1e-9)
    assert main(base + ["--observable", "constant"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(1.5, abs=1e-9)
    assert main(base + ["--observable", "edge:1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] == pytest.approx(1.0, abs=1e-9)
    assert payload["uniform_pin_bound"] == pytest.approx(1.0, abs=1e-9)
    assert main(base + ["--observable", "random", "--seed", "9", "--labels", "3"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] >= payload["uniform_pin_bound"] - 1e-9


def test_club_four_cycle(tmp_path, capsys):
    a = tmp_path / "a.hg"
    b = tmp_path / "b.hg"
    assert main(["gen", "disconnected:m=4", "--out", str(a)]) == 0
    assert main(["gen", "disconnected:m=4,stride=2", "--out", str(b)]) == 0
    capsys.readouterr()
    assert main(["club", str(a), str(b), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert Fraction(payload["i_z"]) == Fraction(4, 3)
    assert payload["equality"] is False
    assert payload["shared_minimizer"] is False


def test_club_counterexample_pair(tmp_path, capsys):
    x = tmp_path / "x.pmf"
    y = tmp_path / "y.hg"
    assert main(["gen", "hidden-bit:m=3,p=0.5", "--out", str(x)]) == 0
    assert main(["gen", "complete-uniform:m=3,t=2", "--out", str(y)]) == 0
    capsys.readouterr()
    assert main(["club", str(x), str(y), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["i_z"] == pytest.approx(2.5, abs=1e-9)
    assert payload["equality"] is True and payload["shared_minimizer"] is True


def test_alloc_trace_contains_example_line(capsys):
    assert main(["alloc", "--m", "5", "--t", "3", "--trace"]) == 0
    out = capsys.readouterr().out
    assert "Q_(234) from Q(3) -> R(5)" in out
    assert "Q_(123) from Q(2) -> R(4)" in out
    assert "status: done" in out


def test_alloc_json_allocations(capsys):
    assert main(["alloc", "--m", "3", "--t", "2", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["allocations"] == [
        {"edge": [1, 2], "index": 1, "source_row": 2, "target_row": 3}
    ]
    assert payload["error_free"] and payload["exhaustive"]


def test_mi_bound_and_alias(k53, capsys):
    assert main(["mi-bound", k53, "--trials", "25", "--seed", "4", "--json"]) == 0
    a = json.loads(capsys.readouterr().out)
    assert a["violations"] == 0
    assert main(["lemma2", k53, "--trials", "25", "--seed", "4", "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == a


def test_gen_stdout(capsys):
    assert main(["gen", "cycle:m=4"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[1] == "4"


def test_threads_hint_output_identical(k53, capsys):
    assert main(["analyze", k53, "--threads", "1"]) == 0
    one = capsys.readouterr().out
    assert main(["analyze", k53, "--threads", "4"]) == 0
    four = capsys.readouterr().out
    assert one == four


# -- exit codes -----------------------------------------------------------


def test_exit_2_on_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.hg"
    bad.write_text("3\n1 5\n")
    assert main(["analyze", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_exit_2_on_empty_edge_list(tmp_path, capsys):
    bad = tmp_path / "empty.hg"
    bad.write_text("3\n")
    assert main(["analyze", str(bad)]) == 2


def test_exit_2_on_cap_violation(tmp_path, capsys):
    big = tmp_path / "big.hg"
    big.write_text("13\n" + "\n".join(f"{i} {i + 1}" for i in range(1, 13)))
    assert main(["analyze", str(big)]) == 2
    assert "cap" in capsys.readouterr().err


def test_exit_2_on_unknown_kind(tmp_path):
    f = tmp_path / "data.txt"
    f.write_text("3\n1 2\n")
    assert main(["analyze", str(f)]) == 2


def test_exit_2_on_missing_file():
    assert main(["analyze", "/nonexistent/never.hg"]) == 2


def test_exit_3_on_nonuniform_rsk(tmp_path):
    f = tmp_path / "mix.hg"
    f.write_text("3\n1 2\n1 2 3\n")
    assert main(["rsk", str(f)]) == 3


def test_exit_4_on_internal_mismatch(k53, monkeypatch, capsys):
    import skpin.typecheck as tc

    real = tc._capacity.sk_capacity

    def broken(oracle, **kwargs):
        rep = real(oracle, **kwargs)
        return type(rep)(
            i_capacity=rep.i_capacity,
            r_co=rep.r_co + 1,
            minimizers=rep.minimizers,
            minimizer_count=rep.minimizer_count,
        )

    monkeypatch.setattr(tc._capacity, "sk_capacity", broken)
    assert main(["rsk", k53]) == 4
    assert "internal verification failure" in capsys.readouterr().err


def test_exit_4_on_duality_break(k53, monkeypatch, capsys):
    import skpin.capacity as cap

    real = cap.lp_capacity

    def broken(oracle):
        rep = real(oracle)
        return type(rep)(value=rep.value + 1, witness=rep.witness)

    monkeypatch.setattr(cap, "lp_capacity", broken)
    assert main(["analyze", k53, "--lp"]) == 4


def test_exit_4_on_allocation_claim_break(monkeypatch, capsys):
    import skpin.cli as cli_mod
    from skpin.allocation import AllocationCheck

    monkeypatch.setattr(
        cli_mod, "verify_allocation", lambda state: AllocationCheck(False, False)
    )
    assert main(["alloc", "--m", "4", "--t", "2"]) == 4


def test_argparse_errors_use_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2

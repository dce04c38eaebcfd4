import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from wakimoto.cli import ConfigError, load_config, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_detc_level_one(capsys):
    code, out, _ = run_cli(capsys, "detc", "--k", "1/1", "--degree", "1")
    rec = json.loads(out)
    assert code == 0 and rec["status"] == "pass"
    assert rec["payload"] == {"N": 1, "monic_roots": [{"root": "-1/2", "multiplicity": 1}],
                              "total_degree": 1, "lemma_match": True}


def test_relations_pass(capsys):
    code, out, _ = run_cli(capsys, "relations", "--k", "1/1", "--degree", "2")
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_screening_label_out_of_range(capsys):
    code, _, err = run_cli(capsys, "screening", "--p", "3", "--pprime", "1",
                           "--m", "4", "--mprime", "0")
    assert code == 2 and "outside" in err


def test_screening_undefined_sector(capsys):
    code, out, _ = run_cli(capsys, "screening", "--k", "1", "--j", "0")
    assert code == 3 and json.loads(out)["status"] == "undefined"


def test_screening_instance(capsys):
    code, out, _ = run_cli(capsys, "screening", "--p", "3", "--pprime", "1",
                           "--m", "2", "--degree", "2")
    pay = json.loads(out)["payload"]
    assert code == 0
    assert (pay["source_j"], pay["target_j"], pay["proportionality"]) == ("5/2", "1/2", "1/2")


@pytest.mark.parametrize("argv", [
    ["detc", "--k", "0/1", "--degree", "1"],
    ["detc", "--k", "-2", "--degree", "1"],
    ["detc", "--k", "1", "--p", "3", "--pprime", "1"],
    ["detc", "--p", "4", "--pprime", "2"],
    ["detc", "--degree", "1"],
    ["detc", "--k", "1", "--degree", "-1"],
    ["structure", "--k", "1"],
    ["euler", "--p", "3", "--pprime", "1"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run_cli(capsys, *argv)
    assert code == 2


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["detc", "--kk", "1"])
    assert exc.value.code == 2


def test_singular_reports(capsys):
    code, out, _ = run_cli(capsys, "singular", "--p", "3", "--pprime", "1", "--m", "1",
                           "--degree", "2")
    assert code == 0 and json.loads(out)["payload"]["predicted"][0]["eigenvalue"] == "7/2"
    code, out, _ = run_cli(capsys, "singular", "--k", "1", "--j", "1/2", "--degree", "1")
    assert code == 0 and json.loads(out)["payload"]["singular"][0]["eigenvalue"] == "5/2"


def test_failed_check_exits_one(capsys, monkeypatch):
    import wakimoto.cli as cli

    monkeypatch.setitem(cli.HANDLERS, "detc", lambda cfg: ("fail", {}))
    code, out, _ = run_cli(capsys, "detc", "--k", "1", "--degree", "1")
    assert code == 1 and json.loads(out)["status"] == "fail"


def test_internal_error_exits_one(capsys, monkeypatch):
    import wakimoto.cli as cli

    def boom(cfg):
        raise ArithmeticError("synthetic")

    monkeypatch.setitem(cli.HANDLERS, "euler", boom)
    code, out, _ = run_cli(capsys, "euler", "--p", "3", "--pprime", "1", "--m", "1")
    assert code == 1 and json.loads(out)["status"] == "error"


def test_config_file_and_override(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# level one\np = 3\npprime = 1\norder = 20  # long\n")
    cfg = load_config(str(path), {"order": 10})
    assert cfg.order == 10 and cfg.p == 3 and cfg.params.k == 1


def test_config_rejects_bad_files(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("k = 0/1\n")
    with pytest.raises(ConfigError):
        load_config(str(bad), {})
    bad.write_text("colour = blue\n")
    with pytest.raises(ConfigError, match="unknown key"):
        load_config(str(bad), {})
    bad.write_text("k = 1\np = 3\npprime = 1\n")
    with pytest.raises(ConfigError):
        load_config(str(bad), {})


def test_missing_config_with_full_flags():
    cfg = load_config(None, {"k": "7/5", "degree": 3})
    assert cfg.k == F(7, 5) and cfg.degree == 3


def test_config_file_exit_code(tmp_path, capsys):
    path = tmp_path / "run.cfg"
    path.write_text("k = 0/1\n")
    code, _, _ = run_cli(capsys, "detc", "--config", str(path))
    assert code == 2


@pytest.mark.parametrize("fmt", ["json", "csv", "text"])
def test_formats_carry_fractions(capsys, fmt):
    code, out, _ = run_cli(capsys, "characters", "--p", "3", "--pprime", "1", "--m", "2",
                           "--order", "4", "--format", fmt)
    assert code == 0 and "1/8" in out
    if fmt == "json":
        pay = json.loads(out)["payload"]
        assert pay == {"offset": "1/8", "order": 4,
                       "coefficients": ["1/1", "1/1", "1/1", "2/1", "2/1"]}
        assert all(F(c) for c in pay["coefficients"])


def test_out_file_and_cache(tmp_path, capsys):
    cache, out1, out2 = tmp_path / "c.json", tmp_path / "a.json", tmp_path / "b.json"
    argv = ["euler", "--p", "5", "--pprime", "2", "--m", "2", "--mprime", "1",
            "--order", "8", "--cache", str(cache)]
    assert main(argv + ["--out", str(out1)]) == 0
    stored = json.loads(cache.read_text())
    assert len(stored) == 1
    assert main(argv + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_structure_and_cosingular(capsys):
    code, out, _ = run_cli(capsys, "structure", "--p", "3", "--pprime", "1", "--m", "2",
                           "--degree", "3")
    assert code == 0 and json.loads(out)["payload"]["matches"]["u"] is True
    code, out, _ = run_cli(capsys, "cosingular", "--p", "3", "--pprime", "1", "--m", "1",
                           "--degree", "2")
    pay = json.loads(out)["payload"]
    assert code == 0 and pay["cosingular"][0]["weight"] == "-5/2"


def test_structure_out_of_reach_is_inconclusive(capsys):
    code, out, _ = run_cli(capsys, "structure", "--p", "5", "--pprime", "2", "--m", "1",
                           "--degree", "0")
    assert json.loads(out)["status"] == "inconclusive" and code == 1


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "wakimoto.cli", "detc", "--k", "1/3",
                          "--degree", "1", "--format", "text"], capture_output=True, text=True)
    assert res.returncode == 0 and "-1/6" in res.stdout

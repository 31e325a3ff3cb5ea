import pytest

from unirates.cli import main
from unirates.core import format_mcc, full_class, threshold_class

DIST = "0 0 0.25\n1 0 0.25\n2 1 0.25\n3 1 0.25\n"


@pytest.fixture
def files(tmp_path):
    (tmp_path / "th.mcc").write_text(format_mcc(threshold_class(4)))
    (tmp_path / "full.mcc").write_text(format_mcc(full_class(3, 1)))
    (tmp_path / "th.dist").write_text(DIST)
    (tmp_path / "train.txt").write_text("0 0\n3 1\n")
    (tmp_path / "s3.txt").write_text("0 0\n2 1\n")
    (tmp_path / "bad.txt").write_text("0 1\n3 0\n")
    (tmp_path / "c4.txt").write_text("vertices 4\n0 1\n1 2\n2 3\n3 0\nblock 1: L=0 R=1,3\nblock 2: L=2 R=1,3\n")
    return tmp_path


def run(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, dict(line.split("=", 1) for line in out.out.splitlines() if "=" in line), out


def test_dims(files, capsys):
    code, kv, _ = run(capsys, "dims", "--class", files / "th.mcc", "--trees")
    assert code == 0
    assert (kv["natarajan"], kv["graph"], kv["littlestone_k"], kv["nl_depth"]) == ("1", "1", "2", "1")


def test_game_and_online(files, capsys):
    code, kv, _ = run(capsys, "game", "solve", "--class", files / "full.mcc", "--trace")
    assert code == 0 and kv["value"] == "3" and "round3" in kv
    code, kv, _ = run(capsys, "online", "--class", files / "full.mcc", "--learner", "tournament")
    assert code == 0 and kv["mistakes"] == "3"
    code, kv, _ = run(capsys, "online", "--class", files / "th.mcc", "--adversary", "file", "--stream", files / "train.txt")
    assert code == 0 and kv["rounds"] == "2"


def test_oig(files, capsys):
    code, kv, _ = run(capsys, "oig", "--class", files / "th.mcc", "--train", files / "train.txt", "--test", 2)
    assert code == 0 and kv["prediction"] in ("0", "1")
    code, kv, _ = run(capsys, "oig", "loo", "--class", files / "th.mcc", "--points", "0,1,2,3")
    assert code == 0 and kv["within_bound"] == "True"


def test_learn_and_fit(files, capsys):
    out = files / "curve.csv"
    args = ["learn", "--class", files / "th.mcc", "--dist", files / "th.dist", "--ns", "4,8,16,32", "--trials", 10]
    assert run(capsys, "--seed", 3, *args, "--out", out)[0] == 0
    first = out.read_text()
    assert run(capsys, *args, "--seed", 3, "--out", out)[0] == 0
    assert out.read_text() == first and first.startswith("n,trial,error\n")
    code, kv, _ = run(capsys, "curve", "fit", "--csv", out)
    assert code == 0 and kv["regime"] in ("exponential", "linear", "slower")


def test_patterns_and_partial(files, capsys):
    code, kv, _ = run(capsys, "patterns", "trace", "--class", files / "full.mcc", "--stream", files / "s3.txt")
    assert code == 0 and int(kv["final_length"]) >= 2
    cls_out = files / "b.mcc"
    code, kv, _ = run(capsys, "partial", "biclique", "--instance", files / "c4.txt", "--class-out", cls_out)
    assert code == 0 and kv["min_disambiguation"] == "2" and kv["natarajan"] == "1"
    code, kv, _ = run(capsys, "partial", "ssp", "--class", cls_out)
    assert code == 0 and kv["m2.ok"] == "True"
    code, kv, _ = run(capsys, "partial", "disambiguate", "--class", cls_out)
    assert code == 0 and kv["min_disambiguation"] == "2"


def test_corpus(files, capsys):
    code, kv, _ = run(capsys, "corpus", "gen", "--count", 5, "--out", files / "corpus")
    assert code == 0 and kv["classes"] == "14"
    assert len(list((files / "corpus").glob("*.mcc"))) == 14


def test_exit_codes(files, capsys):
    assert run(capsys, "dims", "--class", files / "th.dist")[0] == 2
    assert run(capsys, "dims", "--class", files / "missing.mcc")[0] == 2
    assert run(capsys, "oig", "--class", files / "th.mcc", "--train", files / "bad.txt", "--test", 1)[0] == 3
    assert run(capsys, "dims", "--class", files / "th.mcc", "--trees", "--max-depth", 9)[0] == 4
    code, _, out = run(capsys, "online", "--class", files / "th.mcc", "--adversary", "file", "--stream", files / "bad.txt")
    assert code == 3 and "round" in out.err
    with pytest.raises(SystemExit) as e:
        main(["dims"])
    assert e.value.code == 2

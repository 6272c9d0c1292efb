import pytest

from stylewarp.cli import main
from test_pipeline import make_tiny_project


@pytest.fixture
def project(tmp_path):
    manifest = make_tiny_project(tmp_path)
    return tmp_path, manifest


def run_cli(*args) -> int:
    return main([str(a) for a in args])


def test_tokenize_reports_counts(tmp_path, capsys):
    book = tmp_path / "book.txt"
    book.write_text("One two three. Four five.")
    assert run_cli("tokenize", "--book", book) == 0
    out = capsys.readouterr().out
    assert "5 words in 2 sentences" in out


def test_tokenize_dump_writes_token_lines(tmp_path):
    book = tmp_path / "book.txt"
    book.write_text("One two three. Four five.")
    out = tmp_path / "tokens.txt"
    assert run_cli("tokenize", "--book", book, "--dump", "--out", out) == 0
    assert out.read_text() == "one two three\nfour five\n"


def test_stagewise_commands_compose(project, capsys):
    tmp_path, _ = project
    corpus = tmp_path / "corpus"
    model = tmp_path / "model.txt"
    anchors = tmp_path / "anchors.csv"
    assert run_cli(
        "train", "--corpus", corpus, "--out", model,
        "--dim", 8, "--window", 3, "--epochs", 2, "--min-count", 2, "--seed", 5,
    ) == 0
    assert run_cli("anchors", "--model", model, "--k", 3, "--seed", 2, "--out", anchors) == 0

    sig_dir = tmp_path / "sigs"
    sig_dir.mkdir()
    for name in ("red", "blue", "gray"):
        assert run_cli(
            "signal", "--book", corpus / f"{name}.txt", "--model", model,
            "--anchors", anchors, "--window", 5, "--sigma", 2,
            "--out", sig_dir / f"{name}.csv",
            "--plot", sig_dir / f"{name}.svg",
        ) == 0
        assert (sig_dir / f"{name}.svg").is_file()

    capsys.readouterr()
    path_csv = tmp_path / "path.csv"
    align = tmp_path / "align.svg"
    assert run_cli(
        "dtw", "--a", sig_dir / "red.csv", "--b", sig_dir / "blue.csv",
        "--exact", "--path", path_csv, "--plot", align,
    ) == 0
    printed = capsys.readouterr().out.strip()
    assert float(printed) >= 0
    lines = path_csv.read_text().splitlines()
    assert lines[0] == "i,j"
    assert lines[1] == "1,1"
    assert align.is_file()

    dist = tmp_path / "dist.csv"
    layout = tmp_path / "layout.csv"
    scatter = tmp_path / "scatter.svg"
    groups = tmp_path / "groups.csv"
    groups.write_text("red,rust\nblue,navy\ngray,slate\n")
    assert run_cli("matrix", "--signals", sig_dir, "--radius", 1, "--out", dist) == 0
    assert run_cli("mds", "--matrix", dist, "--out", layout, "--seed", 1) == 0
    assert run_cli("plot", "--layout", layout, "--groups", groups, "--out", scatter) == 0
    assert scatter.read_text().count("<circle") == 3


def test_run_command_end_to_end(project, capsys):
    tmp_path, manifest = project
    assert run_cli("run", "--manifest", manifest) == 0
    assert (tmp_path / "out" / "run.json").is_file()
    assert run_cli("run", "--manifest", manifest, "--resume") == 0


def test_validation_failures_exit_one(tmp_path, capsys):
    missing = tmp_path / "nope.cfg"
    assert run_cli("run", "--manifest", missing) == 1
    err = capsys.readouterr().err
    assert "error:" in err

    bad = tmp_path / "bad.cfg"
    bad.write_text("[run]\ntraining_corpus = nowhere\noutput_dir = out\n[books]\na = x.txt, a\nb = y.txt, b\n")
    assert run_cli("run", "--manifest", bad) == 1


def test_stage_failure_exits_two(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "one.txt").write_text("1887. 1888.")  # tokenizes to nothing
    (corpus / "two.txt").write_text("2001. 2002.")
    manifest = tmp_path / "run.cfg"
    manifest.write_text(
        "[run]\ntraining_corpus = corpus\noutput_dir = out\n"
        "[books]\none = corpus/one.txt, a\ntwo = corpus/two.txt, b\n"
    )
    assert run_cli("run", "--manifest", manifest) == 2
    assert "train" in capsys.readouterr().err


def test_model_parse_error_exits_one(tmp_path, capsys):
    bad_model = tmp_path / "model.txt"
    bad_model.write_text("not a header\n")
    out = tmp_path / "anchors.csv"
    assert run_cli("anchors", "--model", bad_model, "--k", 2, "--seed", 0, "--out", out) == 1

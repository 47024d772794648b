import io
import subprocess
import sys

import pytest

from archslicer.cli import main
from archslicer.report import load_document


def run(*argv):
    out = io.StringIO()
    code = main(list(map(str, argv)), out)
    return code, out.getvalue()


def test_detect_reports_each_candidate_and_a_summary(corpus):
    fx = corpus["fx-azure"]
    code, text = run("detect", fx.path)
    lines = text.splitlines()
    assert code == 0
    assert len(lines) == 7 and lines[-1] == "4/6 M2M"
    first = lines[0].split()
    assert first == [fx.commits[0].sha, "M2M", "A2A_DELTA,IDSD,MO"]
    assert lines[2].split()[1:] == ["non-M2M", "-"]


def test_detect_skips_non_candidates(corpus):
    fx = corpus["fx-bach"]
    code, text = run("detect", fx.path)
    assert code == 0 and text.splitlines()[-1] == "4/5 M2M"
    shas = {line.split()[0] for line in text.splitlines()[:-1]}
    assert fx.by_label("b2").sha not in shas and fx.by_label("b3").sha not in shas


def test_detect_empty_range(corpus):
    fx = corpus["fx-azure"]
    head = fx.commits[-1].sha
    code, text = run("detect", fx.path, "--range", f"{head}..{head}")
    assert (code, text) == (0, "0/0 M2M\n")


def test_detect_strict_flag_and_config(corpus, tmp_path):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("ambiguity_mode: lenient\n")
    code, text = run("detect", corpus["fx-misc"].path, "--config", cfg, "--strict-ambiguity")
    assert code == 0 and text.endswith("M2M\n")


def test_slice_writes_yaml_and_prints_lines(corpus, tmp_path):
    fx = corpus["fx-azure"]
    cfg = tmp_path / "aliases.yaml"
    cfg.write_text("alias_map:\n" + "".join(f"  {k}: {v}\n" for k, v in fx.alias_map.items()))
    sha = fx.by_label("c2").sha
    code, text = run("slice", fx.path, sha[:10], "--out", tmp_path, "--config", cfg)
    assert code == 0
    assert "ASBC:EBCB=>sasToken<-ASC:STC" in text.splitlines()
    doc = load_document(tmp_path / f"{sha}.yaml")
    assert doc.verdict.is_m2m and doc.instance_count == 1


@pytest.mark.parametrize("argv", [
    ["detect", "/nonexistent/repo"],
    ["slice", "/nonexistent/repo", "HEAD"],
])
def test_missing_repository_exits_1(argv):
    assert run(*argv)[0] == 1


def test_unknown_commit_exits_1(corpus, tmp_path):
    assert run("slice", corpus["fx-azure"].path, "0" * 40, "--out", tmp_path)[0] == 1


def test_bad_config_exits_1(corpus, tmp_path):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("unknown_key: 1\n")
    assert run("detect", corpus["fx-azure"].path, "--config", cfg)[0] == 1


def test_usage_errors_exit_2():
    assert run()[0] == 2
    assert run("detect")[0] == 2
    assert run("eval", "--pred", "x", "--truth", "y", "--granularity", "file")[0] == 2


def test_help_exits_0():
    assert run("--help")[0] == 0


def test_eval_compares_directories(corpus, tmp_path):
    fx = corpus["fx-azure"]
    pred, truth = tmp_path / "pred", tmp_path / "truth"
    for c in fx.commits:
        assert run("slice", fx.path, c.sha, "--out", pred)[0] == 0
        if c.label != "c6":
            assert run("slice", fx.path, c.sha, "--out", truth)[0] == 0
    code, text = run("eval", "--pred", pred, "--truth", truth, "--granularity", "commit")
    lines = text.splitlines()
    assert code == 0
    assert lines[0] == "project | commits | instances | P | R"
    assert lines[1] == "truth | 3 | 14 | 0.750 | 1.000"
    assert lines[2] == "TP=3 FP=1 FN=0"
    assert lines[3] == f"spurious: {fx.by_label('c6').sha}"


def test_eval_rejects_malformed_documents(tmp_path):
    (tmp_path / "bad.yaml").write_text("schema: 1\n")
    assert run("eval", "--pred", tmp_path, "--truth", tmp_path)[0] == 1


def test_console_script_entry_point(corpus):
    proc = subprocess.run([sys.executable, "-m", "archslicer.cli", "detect", str(corpus["fx-azure"].path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.endswith("4/6 M2M\n")

import pytest

from archslicer.analysis import Analyzer, detect_commits
from archslicer.config import ToolConfig
from archslicer.detect import (A2A_DELTA, IDSD, MO, STRICT, EvidenceRecord, classify_m2m,
                               directive_changes)
from archslicer.lexer import parse_module_descriptor

CORE_DESC = "core/src/main/java/module-info.java"
APP_DESC = "app/src/main/java/module-info.java"
CORE = "core/src/main/java/org/core/"
APP = "app/src/main/java/org/app/"

BASE = {
    CORE_DESC: "module org.core {\n    exports org.core;\n}\n",
    APP_DESC: "module org.app {\n    requires org.core;\n}\n",
    CORE + "Engine.java": "package org.core;\n\npublic class Engine {\n    public void run() {}\n}\n",
    CORE + "Clock.java": "package org.core;\n\npublic class Clock {\n    public long now() { return 0; }\n}\n",
    APP + "Helper.java": "package org.app;\n\npublic class Helper {\n}\n",
    APP + "Main.java": ("package org.app;\n\nimport org.core.Engine;\n\npublic class Main {\n"
                        "    public static void main(String[] a) {\n        new Engine().run();\n"
                        "    }\n}\n"),
}


def _main_with(*imports):
    lines = "".join(f"import {i};\n" for i in imports)
    return ("package org.app;\n\n" + lines + "\npublic class Main {\n"
            "    public static void main(String[] a) {\n        new Engine().run();\n    }\n}\n")


def _verdict(git_repo, files=None, delete=(), config=None):
    git_repo(BASE)
    sha = git_repo(files, delete)
    with Analyzer(git_repo.path, config) as analyzer:
        return analyzer.analyze(sha, with_slices=False)[1]


def _kinds(verdict, kind):
    return [e for e in verdict.evidence if e.kind == kind]


# A2A ----------------------------------------------------------------------

def test_new_module_is_an_a2a_delta(git_repo):
    v = _verdict(git_repo, {
        "io/src/main/java/module-info.java": "module org.io {\n}\n",
        "io/src/main/java/org/io/Channel.java": "package org.io;\n\npublic class Channel {}\n",
    })
    changes = {e.get("change") for e in _kinds(v, A2A_DELTA)}
    assert {"module_added", "class_added"} <= changes
    assert v.is_m2m


def test_in_place_edit_is_not_a2a(git_repo):
    v = _verdict(git_repo, {CORE + "Engine.java": BASE[CORE + "Engine.java"].replace(
        "run() {}", "run(int times) {}")})
    assert _kinds(v, A2A_DELTA) == [] and not v.is_m2m


def test_class_moved_across_modules(git_repo):
    moved = BASE[CORE + "Clock.java"].replace("package org.core;", "package org.app;")
    v = _verdict(git_repo, {APP + "Clock.java": moved}, delete=[CORE + "Clock.java"])
    (ev,) = _kinds(v, A2A_DELTA)
    assert (ev.get("change"), ev.get("old_module"), ev.get("new_module")) == (
        "class_moved", "org.core", "org.app")


# IDSD ---------------------------------------------------------------------

def test_cross_module_import_is_idsd(git_repo):
    v = _verdict(git_repo, {APP + "Main.java": _main_with("org.core.Engine", "org.core.Clock")})
    (ev,) = _kinds(v, IDSD)
    assert (ev.get("source_module"), ev.get("target_module"), ev.get("target")) == (
        "org.app", "org.core", "org.core.Clock")
    assert v.criteria == (IDSD,)


def test_same_module_import_is_not_idsd(git_repo):
    v = _verdict(git_repo, {APP + "Main.java": _main_with("org.core.Engine", "org.app.Helper")})
    assert _kinds(v, IDSD) == [] and not v.is_m2m


def test_external_import_is_not_idsd(git_repo):
    v = _verdict(git_repo, {APP + "Main.java": _main_with("org.core.Engine", "java.util.List")})
    assert not v.is_m2m


def test_shrinking_to_a_wildcard_is_not_idsd(git_repo):
    git_repo(BASE)
    git_repo({APP + "Main.java": _main_with("org.core.Engine", "org.core.Clock")})
    sha = git_repo({APP + "Main.java": _main_with("org.core.*")})
    with Analyzer(git_repo.path) as analyzer:
        assert not analyzer.analyze(sha, with_slices=False)[1].is_m2m


def test_ambiguous_target_depends_on_mode(git_repo):
    files = {
        "util/src/main/java/module-info.java": "module org.util {\n}\n",
        "util/src/main/java/org/shared/Box.java": "package org.shared;\n\npublic class Box {}\n",
        CORE + "../shared/Box.java": "package org.shared;\n\npublic class Box {}\n",
    }
    git_repo(BASE)
    git_repo(files)
    sha = git_repo({APP + "Main.java": _main_with("org.core.Engine", "org.shared.Box")})
    with Analyzer(git_repo.path) as analyzer:
        lenient = analyzer.analyze(sha, with_slices=False)[1]
    with Analyzer(git_repo.path, ToolConfig(ambiguity_mode=STRICT)) as analyzer:
        strict = analyzer.analyze(sha, with_slices=False)[1]
    assert [e.get("ambiguous") for e in _kinds(lenient, IDSD)] == [True]
    assert _kinds(strict, IDSD) == []


# MO -----------------------------------------------------------------------

def test_requires_added_is_mo(git_repo):
    v = _verdict(git_repo, {APP_DESC: "module org.app {\n    requires org.core;\n    requires c.d;\n}\n"})
    (ev,) = _kinds(v, MO)
    assert (ev.get("change"), ev.get("op"), ev.get("target")) == ("added", "requires", "c.d")
    assert v.criteria == (MO,)


def test_reformatted_descriptor_is_not_mo(git_repo):
    v = _verdict(git_repo, {CORE_DESC: "// core\nmodule org.core\n{\n  exports\n    org.core;\n}\n"})
    assert not v.is_m2m


def test_qualified_opens_is_a_modification():
    pre = parse_module_descriptor("module m { opens p; }")
    post = parse_module_descriptor("module m { opens p to n; }")
    (ch,) = directive_changes(pre, post)
    assert (ch.change, ch.op, ch.target) == ("modified", "opens", "p")


def test_transitive_upgrade_and_open_module():
    pre = parse_module_descriptor("module m { requires k; }")
    post = parse_module_descriptor("open module m { requires transitive k; }")
    changes = {(c.change, c.op) for c in directive_changes(pre, post)}
    assert changes == {("modified", "requires_transitive"), ("added", "open")}


def test_renamed_module_moves_every_directive():
    pre = parse_module_descriptor("module a { requires k; }")
    post = parse_module_descriptor("module b { requires k; }")
    assert [(c.change, c.module) for c in directive_changes(pre, post)] == [
        ("removed", "a"), ("added", "b")]


# verdicts -----------------------------------------------------------------

def test_classification_follows_criteria_order():
    evidence = [EvidenceRecord(MO, "", "f"), EvidenceRecord(A2A_DELTA, "", "f")]
    v = classify_m2m("c", evidence)
    assert v.is_m2m and v.criteria == (A2A_DELTA, MO)
    assert classify_m2m("c", []).is_m2m is False


def test_descriptor_only_commit_is_mo_only(git_repo):
    v = _verdict(git_repo, {CORE_DESC: "module org.core {\n    exports org.core;\n    uses org.core.Engine;\n}\n"})
    assert v.is_m2m and v.criteria == (MO,)


def test_credential_builder_commit_is_idsd(corpus):
    fx = corpus["fx-azure"]
    with Analyzer(fx.path) as analyzer:
        v = analyzer.analyze(fx.by_label("c2").sha, with_slices=False)[1]
    assert v.is_m2m and IDSD in v.criteria


def test_every_criterion_has_evidence(corpus):
    for fx in corpus.values():
        for _, v in detect_commits(fx.path):
            assert v.is_m2m == bool(v.criteria)
            for c in v.criteria:
                assert any(e.kind == c for e in v.evidence)


@pytest.mark.parametrize("label", ["b2", "b3"])
def test_non_structural_commits_are_filtered(corpus, label):
    fx = corpus["fx-bach"]
    with Analyzer(fx.path) as analyzer:
        candidate, v, _ = analyzer.analyze(fx.by_label(label).sha, with_slices=False)
    assert not candidate and not v.is_m2m

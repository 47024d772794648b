"""Turn raw import/file diffs into true dependency deltas.

Three hazards make the raw diff lie about dependencies: package or class
renames show up as a removed plus an added import, wildcard imports can
replace (or be replaced by) explicit ones, and moved files show up as a
deletion plus an addition. Each is undone here before anything is counted.
"""

from __future__ import annotations

import logging
import posixpath
import re
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from . import lexer
from .lexer import WILDCARD, ImportRecord
from .modules import ClassIndex, Resolution, resolve_qualified
from .vcs import ADDED, DELETED, RENAMED, CommitDelta, FileDelta, is_source_path, language_of

logger = logging.getLogger(__name__)

DEFAULT_MOVE_THRESHOLD = 0.8
SHRUNK = "shrunk"
EXPANDED = "expanded"


@dataclass(frozen=True, order=True)
class Dependency:
    """A resolved dependency target: a class, or a whole package."""

    target: str
    module: Optional[str] = None
    granularity: str = "class"
    ambiguous: bool = False
    external: bool = False
    candidates: tuple = ()

    @property
    def simple_name(self) -> str:
        return self.target.rsplit(".", 1)[-1]

    @property
    def module_label(self) -> Optional[str]:
        """Module name for display; ambiguous targets list their candidates."""
        if self.ambiguous:
            return "|".join(self.candidates) if self.candidates else "?"
        return self.module


def _dependency(res: Resolution, fallback: str) -> Dependency:
    return Dependency(
        target=res.qualified or fallback,
        module=None if res.ambiguous else res.module,
        granularity=res.granularity,
        ambiguous=res.ambiguous,
        external=res.external or (res.module is None and not res.ambiguous),
        candidates=res.candidates,
    )


def resolve_record(index: ClassIndex, record: ImportRecord) -> Resolution:
    if record.kind == WILDCARD:
        return resolve_qualified(index, record.target, package_target=True)
    return resolve_qualified(index, record.target)


def expand_record(index: ClassIndex, record: ImportRecord) -> frozenset:
    """Dependencies contributed by one import statement."""
    if record.kind == WILDCARD:
        pkg = record.target
        classes = index.classes_by_package.get(pkg)
        if classes:
            return frozenset(_dependency(resolve_qualified(index, q), q) for q in classes)
        res = resolve_qualified(index, pkg, package_target=True)
        return frozenset({_dependency(res, pkg)})
    res = resolve_qualified(index, record.target)
    return frozenset({_dependency(res, record.target)})


@dataclass(frozen=True)
class NormalizedImportDelta:
    file: str
    pre_file: Optional[str] = None
    added_deps: frozenset = frozenset()
    removed_deps: frozenset = frozenset()
    renames: tuple = ()
    wildcard_events: tuple = ()
    unresolved: tuple = ()
    raw_removed: tuple = ()
    raw_added: tuple = ()
    absorbed: tuple = ()
    residual: tuple = ()

    @property
    def is_empty(self) -> bool:
        return not (self.added_deps or self.removed_deps)

    def conservation_holds(self) -> bool:
        lhs = len(self.raw_removed) + len(self.raw_added)
        return lhs == 2 * len(self.renames) + len(self.absorbed) + len(self.residual)


# ---------------------------------------------------------------------------
# renames


def _rename_module(res: Resolution) -> Optional[str]:
    if res.ambiguous:
        return None
    if res.module is not None:
        return res.module
    return "<external>" if res.external else None


def pair_renames(removed: Sequence[ImportRecord], added: Sequence[ImportRecord],
                 pre_index: ClassIndex, post_index: ClassIndex,
                 moved_files: Optional[Mapping[str, str]] = None):
    """Pair removed/added imports that are the same dependency under a new path.

    A pair is a rename when the terminal segments match and both sides
    resolve to the same module in their snapshots, or when the two classes
    live in files the commit moved/renamed into one another within one module.

    Returns ``(renames, residual_removed, residual_added)``.
    """
    moved_files = moved_files or {}
    taken: set[int] = set()
    renames = []
    residual_removed = []
    added = list(added)
    post_res = [resolve_record(post_index, a) for a in added]
    for r in removed:
        r_res = resolve_record(pre_index, r)
        r_mod = _rename_module(r_res)
        r_entry = pre_index.by_qualified_name.get(r_res.qualified or "")
        match = None
        for i, a in enumerate(added):
            if i in taken or a.kind == WILDCARD and r.kind != WILDCARD \
                    or r.kind == WILDCARD and a.kind != WILDCARD:
                continue
            a_res = post_res[i]
            same_module = r_mod is not None and r_mod == _rename_module(a_res)
            if r.terminal == a.terminal and same_module:
                match = i
                break
            a_entry = post_index.by_qualified_name.get(a_res.qualified or "")
            if (r_entry and a_entry and moved_files.get(r_entry.path) == a_entry.path
                    and r_entry.module == a_entry.module):
                match = i
                break
        if match is None:
            residual_removed.append(r)
        else:
            taken.add(match)
            renames.append((r, added[match]))
    residual_added = [a for i, a in enumerate(added) if i not in taken]
    return renames, residual_removed, residual_added


# ---------------------------------------------------------------------------
# wildcards


@dataclass(frozen=True)
class WildcardReconciliation:
    events: tuple
    added_deps: frozenset
    removed_deps: frozenset
    absorbed: tuple
    residual: tuple


def _package_of(record: ImportRecord) -> str:
    if record.kind == WILDCARD:
        return record.target
    return record.target.rsplit(".", 1)[0] if "." in record.target else ""


def reconcile_wildcards(removed: Sequence[ImportRecord], added: Sequence[ImportRecord],
                        post_index: ClassIndex,
                        pre_index: Optional[ClassIndex] = None) -> WildcardReconciliation:
    """Net dependency change of the residual imports, with wildcard events.

    Removed records expand against the pre-snapshot index (defaulting to the
    post index), added ones against the post index; a wildcard contributes
    every indexed class of its package. Cancellation is by target name.
    """
    pre_index = pre_index or post_index
    rem_exp = [(r, expand_record(pre_index, r)) for r in removed]
    add_exp = [(a, expand_record(post_index, a)) for a in added]
    rem_targets = {d.target for _, deps in rem_exp for d in deps}
    add_targets = {d.target for _, deps in add_exp for d in deps}
    removed_deps = frozenset(d for _, deps in rem_exp for d in deps if d.target not in add_targets)
    added_deps = frozenset(d for _, deps in add_exp for d in deps if d.target not in rem_targets)

    absorbed, residual = [], []
    for r, deps in rem_exp:
        (residual if any(d.target not in add_targets for d in deps) else absorbed).append(r)
    for a, deps in add_exp:
        (residual if any(d.target not in rem_targets for d in deps) else absorbed).append(a)

    events = set()
    explicit_removed = {_package_of(r) for r in removed if r.kind != WILDCARD}
    explicit_added = {_package_of(a) for a in added if a.kind != WILDCARD}
    for a in added:
        if a.kind == WILDCARD and a.target in explicit_removed:
            events.add((a.target, SHRUNK))
    for r in removed:
        if r.kind == WILDCARD and r.target in explicit_added:
            events.add((r.target, EXPANDED))
    return WildcardReconciliation(tuple(sorted(events)), added_deps, removed_deps,
                                  tuple(absorbed), tuple(residual))


# ---------------------------------------------------------------------------
# file moves


@dataclass(frozen=True)
class FileMove:
    class_name: str
    old_module: Optional[str]
    new_module: Optional[str]
    old_path: str
    new_path: str
    similarity: float

    @property
    def cross_module(self) -> bool:
        return self.old_module != self.new_module


_HEADER_LINE = re.compile(r"^\s*(?:package|import)\b")


def _line_set(text: Optional[str], language: str) -> set:
    stripped = lexer.strip_comments(text or "", language)
    return {" ".join(line.split()) for line in stripped.split("\n")
            if line.strip() and not _HEADER_LINE.match(line)}


def line_similarity(a: Optional[str], b: Optional[str], language: str = lexer.JAVA) -> float:
    """Jaccard ratio of the non-blank, comment-free, whitespace-normalized lines.

    Package and import lines are left out: a move across packages always
    rewrites them, and they say nothing about whether the class is the same.
    """
    sa, sb = _line_set(a, language), _line_set(b, language)
    if not sa and not sb:
        return 1.0
    return len(sa & sb) / len(sa | sb)


def _stem(path: str) -> str:
    return posixpath.splitext(posixpath.basename(path))[0]


def detect_file_moves(commit: CommitDelta, pre_index: ClassIndex, post_index: ClassIndex,
                      threshold: float = DEFAULT_MOVE_THRESHOLD) -> list[FileMove]:
    """Pair deleted/added (or git-renamed) files that are the same class.

    Candidates are git renames, and deleted/added files sharing a class
    name; a candidate is a move when its line similarity reaches
    ``threshold``. Each file takes part in at most one move.
    """
    sources = [f for f in commit.files if is_source_path(f.path) and not f.is_descriptor]
    deleted = [f for f in sources if f.change_kind == DELETED]
    added = [f for f in sources if f.change_kind == ADDED]
    candidates = []
    for f in sources:
        if f.change_kind == RENAMED:
            sim = line_similarity(f.pre_image, f.post_image, language_of(f.path))
            candidates.append((sim, f.old_path, f.path))
    for d in deleted:
        for a in added:
            if _stem(d.path) == _stem(a.path):
                sim = line_similarity(d.pre_image, a.post_image, language_of(a.path))
                candidates.append((sim, d.path, a.path))
    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
    used_old, used_new = set(), set()
    moves = []
    for sim, old, new in candidates:
        if sim < threshold or old in used_old or new in used_new:
            continue
        used_old.add(old)
        used_new.add(new)
        moves.append(FileMove(_stem(new), pre_index.module_of_file(old),
                              post_index.module_of_file(new), old, new, sim))
    moves.sort(key=lambda m: (m.old_path, m.new_path))
    return moves


# ---------------------------------------------------------------------------
# composition


def _raw_import_diff(pre: Sequence[ImportRecord], post: Sequence[ImportRecord]):
    pre_count = Counter(r.key() for r in pre)
    post_count = Counter(r.key() for r in post)
    removed, added = [], []
    budget = pre_count - post_count
    for r in pre:
        if budget[r.key()] > 0:
            budget[r.key()] -= 1
            removed.append(r)
    budget = post_count - pre_count
    for a in post:
        if budget[a.key()] > 0:
            budget[a.key()] -= 1
            added.append(a)
    return removed, added


def image_imports(text: Optional[str], path: str) -> list[ImportRecord]:
    if text is None:
        return []
    language = language_of(path)
    return lexer.extract_imports(lexer.strip_comments(text, language), language, path)


def normalize_import_delta(file_delta: FileDelta, pre_index: ClassIndex, post_index: ClassIndex,
                           moved_files: Optional[Mapping[str, str]] = None,
                           pre_image: Optional[str] = None,
                           post_image: Optional[str] = None,
                           pre_path: Optional[str] = None) -> NormalizedImportDelta:
    """Full pipeline for one source file.

    The image/path overrides let callers compare a deleted file against the
    added file it was moved to.
    """
    pre_file = pre_path or file_delta.source_path
    if file_delta.is_descriptor:
        return NormalizedImportDelta(file_delta.path, pre_file)
    pre_text = pre_image if pre_image is not None else file_delta.pre_image
    post_text = post_image if post_image is not None else file_delta.post_image
    pre_imports = image_imports(pre_text, pre_file)
    post_imports = image_imports(post_text, file_delta.path)
    raw_removed, raw_added = _raw_import_diff(pre_imports, post_imports)
    renames, rem, add = pair_renames(raw_removed, raw_added, pre_index, post_index, moved_files)
    rec = reconcile_wildcards(rem, add, post_index, pre_index)
    unresolved = tuple(r for r in rec.residual
                       if resolve_record(pre_index if r in rem else post_index, r).rule is None)
    return NormalizedImportDelta(
        file=file_delta.path,
        pre_file=pre_file,
        added_deps=rec.added_deps,
        removed_deps=rec.removed_deps,
        renames=tuple(renames),
        wildcard_events=rec.events,
        unresolved=unresolved,
        raw_removed=tuple(raw_removed),
        raw_added=tuple(raw_added),
        absorbed=rec.absorbed,
        residual=rec.residual,
    )


# ---------------------------------------------------------------------------
# class-level view of a commit


@dataclass(frozen=True)
class ClassChange:
    """One changed source class after move pairing.

    Same-module moves collapse into a single ``modified`` change; moves
    across modules (and renames below the similarity threshold) split into
    a ``deleted`` change and an ``added`` one.
    """

    kind: str  # added | deleted | modified
    path: str
    pre_path: Optional[str]
    pre_image: Optional[str]
    post_image: Optional[str]
    delta: FileDelta

    @property
    def language(self) -> str:
        return language_of(self.path)


def class_changes(commit: CommitDelta, moves: Sequence[FileMove]) -> list[ClassChange]:
    by_new = {m.new_path: m for m in moves}
    by_old = {m.old_path: m for m in moves}
    pre_images = {f.source_path: f.pre_image for f in commit.files}
    out = []
    for f in commit.files:
        if f.is_descriptor or not is_source_path(f.path):
            continue
        if f.change_kind == ADDED:
            m = by_new.get(f.path)
            if m is not None and not m.cross_module:
                out.append(ClassChange("modified", f.path, m.old_path,
                                       pre_images.get(m.old_path), f.post_image, f))
            else:
                out.append(ClassChange("added", f.path, None, None, f.post_image, f))
        elif f.change_kind == DELETED:
            m = by_old.get(f.path)
            if m is None or m.cross_module:
                out.append(ClassChange("deleted", f.path, f.path, f.pre_image, None, f))
        elif f.change_kind == RENAMED:
            m = by_new.get(f.path)
            if m is not None and m.old_path == f.old_path and not m.cross_module:
                out.append(ClassChange("modified", f.path, f.old_path, f.pre_image,
                                       f.post_image, f))
            else:
                out.append(ClassChange("deleted", f.old_path, f.old_path, f.pre_image, None, f))
                out.append(ClassChange("added", f.path, None, None, f.post_image, f))
        else:
            out.append(ClassChange("modified", f.path, f.path, f.pre_image, f.post_image, f))
    out.sort(key=lambda c: (c.path, c.kind))
    return out


def normalize_class_change(change: ClassChange, pre_index: ClassIndex, post_index: ClassIndex,
                           moved_files: Optional[Mapping[str, str]] = None) -> NormalizedImportDelta:
    if change.kind == "added":
        delta = FileDelta(change.path, ADDED, None, (), None, change.post_image)
        return normalize_import_delta(delta, pre_index, post_index, moved_files)
    if change.kind == "deleted":
        delta = FileDelta(change.path, DELETED, None, (), change.pre_image, None)
        return normalize_import_delta(delta, pre_index, post_index, moved_files)
    return normalize_import_delta(change.delta, pre_index, post_index, moved_files,
                                  pre_image=change.pre_image, post_image=change.post_image,
                                  pre_path=change.pre_path)

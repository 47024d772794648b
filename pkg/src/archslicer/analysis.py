"""Per-commit pipeline: snapshots, M2M verdict, slice document."""

from __future__ import annotations

import logging
import posixpath
from dataclasses import dataclass
from typing import Iterator, Optional

from . import lexer
from .config import ToolConfig
from .detect import (M2MVerdict, classify_m2m, descriptor_diffs, detect_a2a_delta,
                     detect_idsd, detect_mo, parse_descriptor_or_none)
from .lexer import ModuleDescriptor
from .modules import ClassIndex, ModuleLayout, build_class_index, discover_modules
from .normalize import class_changes, detect_file_moves, normalize_class_change
from .slices import SliceDocument, generate_slices
from .vcs import (CommitDelta, GitRepo, is_descriptor_path, is_source_path,
                  is_structural_candidate, language_of, load_commit)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Snapshot:
    """Module layouts and class index of one revision."""

    revision: Optional[str]
    listing: tuple
    descriptors: dict
    layouts: tuple
    index: ClassIndex


@dataclass(frozen=True)
class _BlobFacts:
    package: Optional[str]
    types: tuple
    descriptor: Optional[ModuleDescriptor]


def _kotlin_names(path: str, text: str) -> tuple:
    types, top_level = lexer.extract_types(text, lexer.KOTLIN)
    names = [t.name for t in types if t.depth == 0]
    stem = posixpath.splitext(posixpath.basename(path))[0]
    if top_level or not names:
        names.append(stem)
    return tuple(dict.fromkeys(names))


class Analyzer:
    """Runs the pipeline against one repository, caching parsed blobs."""

    def __init__(self, repo_path, config: Optional[ToolConfig] = None):
        self.config = config or ToolConfig()
        self.repo = GitRepo(repo_path)
        self._facts: dict[tuple, _BlobFacts] = {}
        self._snapshots: dict[Optional[str], Snapshot] = {}

    def close(self) -> None:
        self.repo.close()

    def __enter__(self) -> "Analyzer":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    # ------------------------------------------------------------------

    def _wanted(self, path: str) -> bool:
        if is_descriptor_path(path):
            return True
        return is_source_path(path) and language_of(path) in self.config.language_filter

    def _blob_facts(self, path: str, oid: str) -> _BlobFacts:
        language = language_of(path)
        key = (oid, language, is_descriptor_path(path), posixpath.basename(path))
        facts = self._facts.get(key)
        if facts is None:
            text = self.repo.read_blob(oid) or ""
            if is_descriptor_path(path):
                facts = _BlobFacts(None, (), parse_descriptor_or_none(text, path))
            else:
                stripped = lexer.strip_comments(text, language)
                package = lexer.extract_package(stripped, language)
                types = _kotlin_names(path, stripped) if language == lexer.KOTLIN else ()
                facts = _BlobFacts(package, types, None)
            self._facts[key] = facts
        return facts

    def snapshot(self, revision: Optional[str]) -> Snapshot:
        if revision in self._snapshots:
            return self._snapshots[revision]
        tree = {p: oid for p, oid in self.repo.ls_tree(revision).items() if self._wanted(p)}
        descriptors, packages, types = {}, {}, {}
        for path in sorted(tree):
            facts = self._blob_facts(path, tree[path])
            if is_descriptor_path(path):
                if facts.descriptor is not None:
                    descriptors[path] = facts.descriptor
                continue
            packages[path] = facts.package
            if facts.types:
                types[path] = facts.types
        listing = tuple(sorted(tree))
        layouts = tuple(discover_modules(listing, descriptors, self.config.extra_layouts))
        index = build_class_index(layouts, listing, packages, types, descriptors)
        snap = Snapshot(revision, listing, descriptors, layouts, index)
        self._snapshots[revision] = snap
        return snap

    # ------------------------------------------------------------------

    def load(self, commit_id: str) -> CommitDelta:
        commit = load_commit(self.repo, commit_id)
        files = tuple(f for f in commit.files
                      if self._wanted(f.path) and self._wanted(f.source_path))
        return CommitDelta(commit.commit_id, commit.parent_id, commit.timestamp,
                           commit.message, files)

    def analyze(self, commit_id: str, with_slices: bool = True) -> tuple[bool, M2MVerdict, Optional[SliceDocument]]:
        """Return ``(is_candidate, verdict, document)`` for one commit.

        Commits that fail the structural pre-filter are never M2M; their
        changed classes still show up as category-5 records.
        """
        commit = self.load(commit_id)
        candidate = is_structural_candidate(commit)
        pre = self.snapshot(commit.parent_id)
        post = self.snapshot(commit.commit_id) if candidate or with_slices else None
        if not candidate:
            verdict = M2MVerdict(commit.commit_id, False)
            if not with_slices:
                return False, verdict, None
            changes = class_changes(commit, [])
            doc = generate_slices(commit.commit_id, verdict, changes, {}, pre.index,
                                  post.index, descriptor_diffs(commit))
            return False, verdict, doc

        moves = detect_file_moves(commit, pre.index, post.index,
                                  self.config.move_similarity_threshold)
        changes = class_changes(commit, moves)
        moved_files = {m.old_path: m.new_path for m in moves}
        normalized = {c.path: normalize_class_change(c, pre.index, post.index, moved_files)
                      for c in changes}
        diffs = descriptor_diffs(commit)
        evidence = (detect_a2a_delta(commit, pre.layouts, post.layouts, moves)
                    + detect_idsd(normalized.values(), post.index, pre.index,
                                  self.config.ambiguity_mode)
                    + detect_mo(commit, diffs))
        verdict = classify_m2m(commit.commit_id, evidence)
        if not with_slices:
            return True, verdict, None
        modified = {c.path: normalized[c.path] for c in changes if c.kind == "modified"}
        doc = generate_slices(commit.commit_id, verdict, changes, modified, pre.index,
                              post.index, diffs)
        return True, verdict, doc

    def commits(self, rev_range: Optional[str] = None, since: Optional[str] = None,
                until: Optional[str] = None) -> list[str]:
        return self.repo.rev_list(rev_range, since, until)


def detect_commits(repo_path, rev_range: Optional[str] = None, since: Optional[str] = None,
                   until: Optional[str] = None,
                   config: Optional[ToolConfig] = None) -> Iterator[tuple[bool, M2MVerdict]]:
    """Yield ``(is_candidate, verdict)`` for each commit, oldest first."""
    with Analyzer(repo_path, config) as analyzer:
        for commit_id in analyzer.commits(rev_range, since, until):
            candidate, verdict, _ = analyzer.analyze(commit_id, with_slices=False)
            yield candidate, verdict


def slice_commit(repo_path, commit_id: str, config: Optional[ToolConfig] = None) -> SliceDocument:
    with Analyzer(repo_path, config) as analyzer:
        return analyzer.analyze(commit_id)[2]

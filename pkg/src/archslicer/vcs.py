"""Git history access: commit walking, per-commit diffs and snapshot reads.

Everything goes through the ``git`` executable so that no native bindings
are required. Commit deltas are immutable value objects and can be handed
to worker threads freely.
"""

from __future__ import annotations

import logging
import os
import re
import subprocess
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import PurePosixPath
from typing import Iterator, Optional, Sequence

from . import lexer

logger = logging.getLogger(__name__)

EMPTY_TREE = "4b825dc642cb6eb9a060e54bf8d69288fbee4904"
SOURCE_SUFFIXES = (".java", ".kt")
DESCRIPTOR_NAME = "module-info.java"

ADDED = "added"
DELETED = "deleted"
MODIFIED = "modified"
RENAMED = "renamed"


class VcsError(Exception):
    """Base class for repository access failures."""


class RepositoryError(VcsError):
    def __init__(self, path, detail: str = ""):
        self.path = str(path)
        msg = f"not a readable git repository: {self.path}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class RevisionError(VcsError):
    def __init__(self, revision: str, detail: str = ""):
        self.revision = revision
        msg = f"cannot resolve revision or range: {revision}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


@dataclass(frozen=True)
class Hunk:
    old_start: int
    old_lines: int
    new_start: int
    new_lines: int
    removed: tuple[tuple[int, str], ...] = ()
    added: tuple[tuple[int, str], ...] = ()


@dataclass(frozen=True)
class FileDelta:
    path: str
    change_kind: str
    old_path: Optional[str] = None
    hunks: tuple[Hunk, ...] = ()
    pre_image: Optional[str] = None
    post_image: Optional[str] = None

    @property
    def source_path(self) -> str:
        """Path of the file in the parent revision."""
        return self.old_path or self.path

    @property
    def is_descriptor(self) -> bool:
        return is_descriptor_path(self.path) or (
            self.old_path is not None and is_descriptor_path(self.old_path))


@dataclass(frozen=True)
class CommitDelta:
    commit_id: str
    parent_id: Optional[str]
    timestamp: datetime
    message: str
    files: tuple[FileDelta, ...] = field(default_factory=tuple)


def is_descriptor_path(path: str) -> bool:
    return PurePosixPath(path).name == DESCRIPTOR_NAME


def is_source_path(path: str, suffixes: Sequence[str] = SOURCE_SUFFIXES) -> bool:
    return path.endswith(tuple(suffixes))


def language_of(path: str) -> str:
    return "kotlin" if path.endswith(".kt") else "java"


class GitRepo:
    """Thin wrapper over the git CLI for one repository.

    Blob reads go through a long-lived ``git cat-file --batch`` process;
    call :meth:`close` (or use as a context manager) to release it.
    """

    def __init__(self, path):
        self.path = os.fspath(path)
        if not os.path.isdir(self.path):
            raise RepositoryError(self.path, "no such directory")
        try:
            out = self._git("rev-parse", "--is-inside-work-tree", "--git-dir")
        except subprocess.CalledProcessError as exc:
            raise RepositoryError(self.path, exc.stderr.decode(errors="replace").strip()) from None
        except OSError as exc:
            raise RepositoryError(self.path, str(exc)) from None
        if not out.strip():
            raise RepositoryError(self.path)
        self._batch: Optional[subprocess.Popen] = None
        self._lock = threading.Lock()

    def __enter__(self) -> "GitRepo":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def close(self) -> None:
        if self._batch is not None:
            self._batch.stdin.close()
            self._batch.wait()
            self._batch.stdout.close()
            self._batch = None

    def _git(self, *args: str, check: bool = True) -> str:
        proc = subprocess.run(
            ["git", "-c", "core.quotepath=off", *args],
            cwd=self.path,
            capture_output=True,
            check=check,
        )
        return proc.stdout.decode("utf-8", errors="replace")

    # revisions ---------------------------------------------------------

    def resolve(self, revision: str) -> str:
        try:
            return self._git("rev-parse", "--verify", "--quiet",
                             revision + "^{commit}").strip()
        except subprocess.CalledProcessError:
            raise RevisionError(revision) from None

    def has_commits(self) -> bool:
        proc = subprocess.run(["git", "rev-parse", "--verify", "--quiet", "HEAD"],
                              cwd=self.path, capture_output=True)
        if proc.returncode == 0:
            return True
        return bool(self._git("for-each-ref", "--count=1", "refs/").strip())

    def rev_list(self, rev_range: Optional[str] = None,
                 since: Optional[str] = None,
                 until: Optional[str] = None) -> list[str]:
        args = ["rev-list", "--topo-order", "--reverse"]
        if since:
            args.append(f"--since={since}")
        if until:
            args.append(f"--until={until}")
        if rev_range in (None, "", "all"):
            if not self.has_commits():
                return []
            args.append("--all")
        else:
            args.extend(rev_range.split())
        args.append("--")
        try:
            out = self._git(*args)
        except subprocess.CalledProcessError as exc:
            raise RevisionError(rev_range or "all",
                                exc.stderr.decode(errors="replace").strip()) from None
        return [line for line in out.splitlines() if line]

    def commit_header(self, commit_id: str) -> tuple[list[str], datetime, str]:
        out = self._git("show", "-s", "--format=%P%x00%ct%x00%B", commit_id)
        parents, ts, message = out.split("\x00", 2)
        stamp = datetime.fromtimestamp(int(ts), tz=timezone.utc)
        return parents.split(), stamp, message.rstrip("\n")

    # trees and blobs ---------------------------------------------------

    def ls_tree(self, revision: Optional[str]) -> dict[str, str]:
        """Map of path -> blob id for every file at ``revision``."""
        if revision is None:
            return {}
        try:
            out = self._git("ls-tree", "-r", "-z", "--full-tree", revision)
        except subprocess.CalledProcessError:
            raise RevisionError(revision) from None
        entries = {}
        for item in out.split("\x00"):
            if not item:
                continue
            meta, path = item.split("\t", 1)
            _mode, kind, oid = meta.split()
            if kind == "blob":
                entries[path] = oid
        return entries

    def read_blob(self, spec: str) -> Optional[str]:
        """Read an object by ``<rev>:<path>`` or blob id; None if missing."""
        with self._lock:
            if self._batch is None:
                self._batch = subprocess.Popen(
                    ["git", "cat-file", "--batch"], cwd=self.path,
                    stdin=subprocess.PIPE, stdout=subprocess.PIPE)
            self._batch.stdin.write(spec.encode("utf-8") + b"\n")
            self._batch.stdin.flush()
            header = self._batch.stdout.readline().decode("utf-8")
            parts = header.split()
            if len(parts) != 3 or parts[1] == "missing":
                return None
            size = int(parts[2])
            data = self._batch.stdout.read(size + 1)[:size]
        return data.decode("utf-8", errors="replace")

    def read_file(self, revision: Optional[str], path: str) -> Optional[str]:
        if revision is None:
            return None
        return self.read_blob(f"{revision}:{path}")

    # diffs -------------------------------------------------------------

    def diff(self, parent: Optional[str], commit: str,
             suffixes: Sequence[str] = SOURCE_SUFFIXES) -> str:
        base = parent or EMPTY_TREE
        pathspecs = [f"*{s}" for s in suffixes]
        return self._git("diff", "-U0", "--no-color", "--no-ext-diff", "-M",
                         "--src-prefix=a/", "--dst-prefix=b/",
                         base, commit, "--", *pathspecs)


_HUNK_RE = re.compile(r"^@@ -(\d+)(?:,(\d+))? \+(\d+)(?:,(\d+))? @@")


@dataclass
class _PatchBuilder:
    old_path: Optional[str] = None
    new_path: Optional[str] = None
    kind: str = MODIFIED
    binary: bool = False
    hunks: list = field(default_factory=list)


def _strip_prefix(raw: str, prefix: str) -> Optional[str]:
    raw = raw.rstrip("\n")
    if raw == "/dev/null":
        return None
    if raw.startswith(prefix):
        return raw[len(prefix):]
    return raw


def parse_patch(text: str) -> list[_PatchBuilder]:
    """Parse ``git diff -U0`` output into per-file patch records."""
    patches: list[_PatchBuilder] = []
    cur: Optional[_PatchBuilder] = None
    hunk = None
    lines = text.split("\n")
    for line in lines:
        if line.startswith("diff --git "):
            cur = _PatchBuilder()
            patches.append(cur)
            hunk = None
            m = re.match(r"diff --git a/(.*) b/(.*)$", line)
            if m:
                cur.old_path, cur.new_path = m.group(1), m.group(2)
            continue
        if cur is None:
            continue
        if hunk is None:
            if line.startswith("new file mode"):
                cur.kind = ADDED
            elif line.startswith("deleted file mode"):
                cur.kind = DELETED
            elif line.startswith("rename from "):
                cur.kind = RENAMED
                cur.old_path = line[len("rename from "):]
            elif line.startswith("rename to "):
                cur.new_path = line[len("rename to "):]
            elif line.startswith("Binary files "):
                cur.binary = True
            elif line.startswith("--- "):
                path = _strip_prefix(line[4:], "a/")
                if path is not None:
                    cur.old_path = path
            elif line.startswith("+++ "):
                path = _strip_prefix(line[4:], "b/")
                if path is not None:
                    cur.new_path = path
        m = _HUNK_RE.match(line)
        if m:
            old_start, old_n, new_start, new_n = m.groups()
            hunk = {
                "old_start": int(old_start),
                "old_lines": 1 if old_n is None else int(old_n),
                "new_start": int(new_start),
                "new_lines": 1 if new_n is None else int(new_n),
                "removed": [], "added": [],
            }
            cur.hunks.append(hunk)
            continue
        if hunk is None:
            continue
        if line.startswith("-"):
            n = hunk["old_start"] + len(hunk["removed"])
            hunk["removed"].append((n, line[1:]))
        elif line.startswith("+"):
            n = hunk["new_start"] + len(hunk["added"])
            hunk["added"].append((n, line[1:]))
    return patches


def _build_file_delta(repo: GitRepo, parent: Optional[str], commit: str,
                      patch: _PatchBuilder) -> FileDelta:
    hunks = tuple(
        Hunk(h["old_start"], h["old_lines"], h["new_start"], h["new_lines"],
             tuple(h["removed"]), tuple(h["added"]))
        for h in patch.hunks)
    if patch.kind == ADDED:
        return FileDelta(patch.new_path, ADDED, None, hunks, None,
                         repo.read_file(commit, patch.new_path))
    if patch.kind == DELETED:
        return FileDelta(patch.old_path, DELETED, None, hunks,
                         repo.read_file(parent, patch.old_path), None)
    if patch.kind == RENAMED:
        return FileDelta(patch.new_path, RENAMED, patch.old_path, hunks,
                         repo.read_file(parent, patch.old_path),
                         repo.read_file(commit, patch.new_path))
    return FileDelta(patch.new_path, MODIFIED, None, hunks,
                     repo.read_file(parent, patch.new_path),
                     repo.read_file(commit, patch.new_path))


def load_commit(repo: GitRepo, commit_id: str,
                suffixes: Sequence[str] = SOURCE_SUFFIXES) -> CommitDelta:
    """Materialize one commit diffed against its first parent."""
    commit_id = repo.resolve(commit_id)
    parents, stamp, message = repo.commit_header(commit_id)
    parent = parents[0] if parents else None
    patches = parse_patch(repo.diff(parent, commit_id, suffixes))
    files = []
    for patch in patches:
        if patch.binary:
            logger.debug("skipping binary file %s", patch.new_path)
            continue
        files.append(_build_file_delta(repo, parent, commit_id, patch))
    files.sort(key=lambda f: f.path)
    return CommitDelta(commit_id, parent, stamp, message, tuple(files))


def walk_commits(repo_path, rev_range: Optional[str] = None,
                 since: Optional[str] = None, until: Optional[str] = None,
                 suffixes: Sequence[str] = SOURCE_SUFFIXES) -> Iterator[CommitDelta]:
    """Yield commits oldest-first, each diffed against its first parent.

    ``rev_range`` accepts anything ``git rev-list`` does (``A..B``, a single
    revision, ...); ``None`` or ``"all"`` walks every ref. Root commits are
    diffed against the empty tree. Only files with the given suffixes are
    materialized.
    """
    with GitRepo(repo_path) as repo:
        for commit_id in repo.rev_list(rev_range, since, until):
            yield load_commit(repo, commit_id, suffixes)


def load_snapshot_listing(repo_path, commit_id: str) -> list[str]:
    with GitRepo(repo_path) as repo:
        return sorted(repo.ls_tree(repo.resolve(commit_id)))


def apply_hunks(pre_image: Optional[str], hunks: Sequence[Hunk]) -> list[str]:
    """Replay hunks over the pre-image; returns the post-image lines."""
    old = [] if pre_image is None else pre_image.splitlines()
    out: list[str] = []
    cursor = 0  # index into old
    for h in sorted(hunks, key=lambda h: h.old_start):
        # with zero removed lines, old_start names the line *before* the insert
        start = h.old_start - 1 if h.old_lines else h.old_start
        out.extend(old[cursor:start])
        cursor = start + h.old_lines
        out.extend(text for _, text in h.added)
    out.extend(old[cursor:])
    return out


def _touched_lines(stripped: str, numbers: Sequence[int]) -> Iterator[str]:
    lines = stripped.split("\n")
    for n in numbers:
        if 1 <= n <= len(lines):
            yield lines[n - 1]


def is_structural_candidate(delta: CommitDelta) -> bool:
    """Cheap pre-filter for commits that may carry an architectural change.

    True when a descriptor is touched, a source file is added, deleted or
    renamed, or a modified source file has a package, import, or
    type/method signature line among its changed lines.
    """
    for f in delta.files:
        if f.is_descriptor:
            return True
        if not is_source_path(f.path):
            continue
        if f.change_kind != MODIFIED:
            return True
        language = language_of(f.path)
        pre = lexer.strip_comments(f.pre_image or "", language)
        post = lexer.strip_comments(f.post_image or "", language)
        for h in f.hunks:
            touched = list(_touched_lines(pre, [n for n, _ in h.removed]))
            touched += _touched_lines(post, [n for n, _ in h.added])
            if any(lexer.is_structural_line(line, language) for line in touched):
                return True
    return False

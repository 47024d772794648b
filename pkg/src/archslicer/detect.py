"""M2M verdicts: a commit is a module-level architectural change when it has
an A2A delta, a cross-module import delta (IDSD) or a module-operation (MO)
change in a descriptor."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import lexer
from .lexer import DescriptorError, Directive, ModuleDescriptor
from .modules import ClassIndex, ModuleLayout, module_of_source
from .normalize import FileMove, NormalizedImportDelta
from .vcs import ADDED, DELETED, RENAMED, CommitDelta, is_source_path

logger = logging.getLogger(__name__)

A2A_DELTA = "A2A_DELTA"
IDSD = "IDSD"
MO = "MO"
CRITERIA = (A2A_DELTA, IDSD, MO)

LENIENT = "lenient"
STRICT = "strict"


@dataclass(frozen=True)
class EvidenceRecord:
    kind: str
    description: str
    file: str
    detail: tuple = ()

    def get(self, key: str, default=None):
        return dict(self.detail).get(key, default)


@dataclass(frozen=True)
class M2MVerdict:
    commit_id: str
    is_m2m: bool
    criteria: tuple = ()
    evidence: tuple = ()


def _ev(kind: str, description: str, file: str, **detail) -> EvidenceRecord:
    return EvidenceRecord(kind, description, file, tuple(sorted(detail.items())))


# ---------------------------------------------------------------------------
# A2A


def detect_a2a_delta(commit: CommitDelta, pre_layouts: Sequence[ModuleLayout],
                     post_layouts: Sequence[ModuleLayout],
                     moves: Sequence[FileMove]) -> list[EvidenceRecord]:
    """Modules or classes added, deleted, or moved across modules."""
    out = []
    pre_mods = {lay.module_name: lay for lay in pre_layouts}
    post_mods = {lay.module_name: lay for lay in post_layouts}
    for name in sorted(post_mods.keys() - pre_mods.keys()):
        lay = post_mods[name]
        out.append(_ev(A2A_DELTA, f"module {name} added", lay.descriptor_path,
                       change="module_added", module=name))
    for name in sorted(pre_mods.keys() - post_mods.keys()):
        lay = pre_mods[name]
        out.append(_ev(A2A_DELTA, f"module {name} deleted", lay.descriptor_path,
                       change="module_deleted", module=name))
    for name in sorted(pre_mods.keys() & post_mods.keys()):
        if pre_mods[name].root_dir != post_mods[name].root_dir:
            out.append(_ev(A2A_DELTA, f"module {name} moved", post_mods[name].descriptor_path,
                           change="module_moved", module=name,
                           old_root=pre_mods[name].root_dir, new_root=post_mods[name].root_dir))

    moved_old = {m.old_path for m in moves}
    moved_new = {m.new_path for m in moves}
    for f in commit.files:
        if f.is_descriptor or not is_source_path(f.path):
            continue
        deleted_path = added_path = None
        if f.change_kind == ADDED:
            added_path = f.path
        elif f.change_kind == DELETED:
            deleted_path = f.path
        elif f.change_kind == RENAMED:
            deleted_path, added_path = f.old_path, f.path
        if added_path and added_path not in moved_new:
            mod = module_of_source(post_layouts, added_path)
            if mod:
                out.append(_ev(A2A_DELTA, f"class added to {mod}", added_path,
                               change="class_added", module=mod))
        if deleted_path and deleted_path not in moved_old:
            mod = module_of_source(pre_layouts, deleted_path)
            if mod:
                out.append(_ev(A2A_DELTA, f"class deleted from {mod}", deleted_path,
                               change="class_deleted", module=mod))
    for m in moves:
        if m.cross_module and (m.old_module or m.new_module):
            out.append(_ev(A2A_DELTA, f"class {m.class_name} moved {m.old_module} -> {m.new_module}",
                           m.new_path, change="class_moved", old_module=m.old_module or "",
                           new_module=m.new_module or "", old_path=m.old_path))
    return out


# ---------------------------------------------------------------------------
# IDSD


def detect_idsd(normalized_deltas: Iterable[NormalizedImportDelta], post_index: ClassIndex,
                pre_index: ClassIndex, mode: str = LENIENT) -> list[EvidenceRecord]:
    """Added or removed dependencies whose target lives in another module.

    Dependencies on modules outside the repository never count here.
    Ambiguous targets yield evidence flagged ``ambiguous`` unless ``mode``
    is strict.
    """
    out = []
    for delta in normalized_deltas:
        sides = (
            ("added", delta.added_deps, post_index.module_of_file(delta.file), delta.file),
            ("removed", delta.removed_deps,
             pre_index.module_of_file(delta.pre_file or delta.file), delta.pre_file or delta.file),
        )
        for change, deps, source, path in sides:
            if source is None:
                continue
            for dep in sorted(deps):
                if dep.external:
                    continue
                if dep.ambiguous:
                    if mode == STRICT:
                        continue
                    out.append(_ev(IDSD, f"{change} ambiguous dependency on {dep.target}", path,
                                   change=change, source_module=source,
                                   target_module=dep.module_label, target=dep.target,
                                   ambiguous=True))
                elif dep.module != source:
                    out.append(_ev(IDSD, f"{change} dependency {source} -> {dep.module} ({dep.target})",
                                   path, change=change, source_module=source,
                                   target_module=dep.module, target=dep.target, ambiguous=False))
    return out


# ---------------------------------------------------------------------------
# MO


@dataclass(frozen=True)
class DescriptorDiff:
    path: str
    pre: Optional[ModuleDescriptor]
    post: Optional[ModuleDescriptor]
    old_path: Optional[str] = None


@dataclass(frozen=True)
class DirectiveChange:
    change: str  # added | removed | modified
    op: str
    target: str
    module: str
    before: Optional[Directive] = None
    after: Optional[Directive] = None

    @property
    def line(self) -> int:
        d = self.after or self.before
        return d.line if d else 0


def parse_descriptor_or_none(text: Optional[str], path: str) -> Optional[ModuleDescriptor]:
    if text is None:
        return None
    try:
        return lexer.parse_module_descriptor(lexer.strip_comments(text))
    except DescriptorError:
        logger.warning("%s: unparseable module descriptor; treating as empty", path)
        return None


def descriptor_diffs(commit: CommitDelta) -> list[DescriptorDiff]:
    out = []
    for f in commit.files:
        if f.is_descriptor:
            out.append(DescriptorDiff(f.path, parse_descriptor_or_none(f.pre_image, f.source_path),
                                      parse_descriptor_or_none(f.post_image, f.path), f.old_path))
    return out


def _keyed(desc: Optional[ModuleDescriptor]) -> dict:
    if desc is None:
        return {}
    keyed = {}
    for d in desc.directives:
        keyed.setdefault((d.family, d.target), d)
    return keyed


def directive_changes(pre: Optional[ModuleDescriptor],
                      post: Optional[ModuleDescriptor]) -> list[DirectiveChange]:
    """Directive-level diff of two descriptor versions.

    Directives are matched on (family, target), where ``requires`` and
    ``requires transitive`` share a family; a matched pair whose op or
    qualifier list differs is a modification. A changed module name means
    every directive moved from the old module to the new one.
    """
    if pre is not None and post is not None and pre.module_name != post.module_name:
        return directive_changes(pre, None) + directive_changes(None, post)
    before, after = _keyed(pre), _keyed(post)
    out = []
    for key in sorted(before.keys() | after.keys()):
        b, a = before.get(key), after.get(key)
        if b is None:
            out.append(DirectiveChange("added", a.op, a.target, post.module_name, None, a))
        elif a is None:
            out.append(DirectiveChange("removed", b.op, b.target, pre.module_name, b, None))
        elif (b.op, b.qualifier) != (a.op, a.qualifier):
            out.append(DirectiveChange("modified", a.op, a.target, post.module_name, b, a))
    pre_open = bool(pre and pre.is_open)
    post_open = bool(post and post.is_open)
    if pre_open != post_open:
        name = (post or pre).module_name
        line = (post or pre).line
        d = Directive("open", name, None, line)
        out.append(DirectiveChange("added" if post_open else "removed", "open", name, name,
                                   None if not post_open else d, d if not post_open else None))
    return out


def detect_mo(commit: CommitDelta, diffs: Sequence[DescriptorDiff]) -> list[EvidenceRecord]:
    out = []
    for diff in diffs:
        for ch in directive_changes(diff.pre, diff.post):
            qualifier = (ch.after or ch.before).qualifier
            out.append(_ev(MO, f"{ch.change} {ch.op} {ch.target} in {ch.module}", diff.path,
                           change=ch.change, op=ch.op, target=ch.target, module=ch.module,
                           qualifier=",".join(qualifier) if qualifier else ""))
    return out


def classify_m2m(commit_id: str, evidence: Iterable[EvidenceRecord]) -> M2MVerdict:
    evidence = tuple(evidence)
    kinds = {e.kind for e in evidence}
    criteria = tuple(c for c in CRITERIA if c in kinds)
    return M2MVerdict(commit_id, bool(criteria), criteria, evidence)

"""Structural semantic slices of an M2M commit.

Slice categories:

1. descriptor directive added / removed / modified (module level)
2. added class: its cross-module dependencies, attributed to new methods
3. deleted class: the dependencies it drops, attributed to deleted methods
4. modified class: net dependency changes, attributed to the using methods
5. changed class with no cross-module relation (non-M2M marker)

Crossing {descriptor changed, class added, class deleted, class modified}
with {connected, disconnected} and {member-attributed, class-level} gives
the sixteen relation kinds of :data:`RELATION_KINDS`. Some never occur in
practice (an added class cannot disconnect), but the schema names them all.
"""

from __future__ import annotations

import logging
import posixpath
import re
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Optional, Sequence

from . import lexer
from .detect import DescriptorDiff, M2MVerdict, directive_changes
from .lexer import WILDCARD, MethodSpan
from .modules import ClassIndex
from .normalize import (ClassChange, Dependency, NormalizedImportDelta, expand_record,
                        image_imports)

logger = logging.getLogger(__name__)

CONNECTED = "connected"
DISCONNECTED = "disconnected"
CONTEXT_ADDED = "added"
CONTEXT_DELETED = "deleted"
CONTEXT_MODIFIED = "modified"
CONTEXT_NONE = "none"
DESCRIPTOR_CLASS = "module-info"

REL_TEXT = {CONNECTED: "<-", DISCONNECTED: "-x-"}

RELATION_KINDS = tuple(
    (entity, relation, attribution)
    for entity in ("descriptor_changed", "class_added", "class_deleted", "class_modified")
    for relation in (CONNECTED, DISCONNECTED)
    for attribution in ("member", "class")
)


def relation_kind(record: "SliceRecord") -> Optional[tuple]:
    """The kind a category 1-4 record belongs to; None for category 5."""
    entity = {1: "descriptor_changed", 2: "class_added", 3: "class_deleted",
              4: "class_modified"}.get(record.category)
    if entity is None:
        return None
    return (entity, record.relation, "member" if record.member else "class")


@dataclass(frozen=True)
class SliceRecord:
    category: int
    source_module: Optional[str]
    source_class: Optional[str]
    member: Optional[str] = None
    member_context: str = CONTEXT_NONE
    relation: Optional[str] = None
    target_module: Optional[str] = None
    target_class: Optional[str] = None
    ambiguity: bool = False
    evidence_lines: tuple = ()
    operation: Optional[str] = None

    def instance_key(self) -> tuple:
        return (self.source_module, self.source_class, self.member,
                self.target_module, self.target_class)


@dataclass(frozen=True)
class SliceDocument:
    commit_id: str
    verdict: M2MVerdict
    slices: tuple = ()
    non_m2m_classes: tuple = ()

    def instances(self) -> set:
        return {r.instance_key() for r in self.slices if r.category != 5}

    @property
    def instance_count(self) -> int:
        return len(self.instances())


# ---------------------------------------------------------------------------
# member usage search


def _word(name: str) -> re.Pattern:
    return re.compile(rf"(?<![\w$]){re.escape(name)}(?![\w$])")


@dataclass
class _Statement:
    text: str
    first_line: int
    last_line: int


def _statements(text: str, language: str) -> list[_Statement]:
    """Split masked source into statement-ish chunks with their line range."""
    seps = ";{}\n" if language == lexer.KOTLIN else ";{}"
    out = []
    line = 1
    start_line = 1
    buf = []
    for ch in text:
        if ch in seps:
            chunk = "".join(buf)
            if chunk.strip():
                lead = chunk[: len(chunk) - len(chunk.lstrip())].count("\n")
                out.append(_Statement(chunk, start_line + lead, line))
            buf = []
            if ch == "\n":
                line += 1
            start_line = line
            continue
        buf.append(ch)
        if ch == "\n":
            line += 1
    chunk = "".join(buf)
    if chunk.strip():
        lead = chunk[: len(chunk) - len(chunk.lstrip())].count("\n")
        out.append(_Statement(chunk, start_line + lead, line))
    return out


_KT_DECL = re.compile(r"\b(?:val|var)\s+(\w+)")
_DECL_ONLY = re.compile(r"^[\w$.<>\[\]?,\s@]+?\s([A-Za-z_$][\w$]*)\s*$")
_NOT_RECEIVERS = frozenset(
    "return new throw if else for while do switch case this super class interface "
    "enum record package import".split())


def _receiver(stmt: str, language: str) -> Optional[str]:
    """Name of the variable a statement assigns or declares, if any."""
    flat = " ".join(stmt.split())
    if language == lexer.KOTLIN:
        m = _KT_DECL.search(flat)
        if m:
            return m.group(1)
    for i, ch in enumerate(flat):
        if ch != "=":
            continue
        prev = flat[i - 1] if i else ""
        nxt = flat[i + 1] if i + 1 < len(flat) else ""
        if prev in "=!<>" or nxt in "=>":
            continue
        lhs = re.findall(r"[A-Za-z_$][\w$]*", flat[:i])
        lhs = [t for t in lhs if t not in _NOT_RECEIVERS]
        return lhs[-1] if lhs else None
    if language == lexer.JAVA and "(" not in flat:
        m = _DECL_ONLY.match(flat)
        if m and m.group(1) not in _NOT_RECEIVERS and len(flat.split()) >= 2:
            return m.group(1)
    return None


def _innermost(methods: Sequence[MethodSpan], line: int) -> Optional[int]:
    best = None
    for i, m in enumerate(methods):
        if m.contains(line) and (best is None or
                                 m.end_line - m.start_line < methods[best].end_line - methods[best].start_line):
            best = i
    return best


def find_member_usages(class_text: str, methods: Sequence[MethodSpan], target: str,
                       language: str = lexer.JAVA) -> list[tuple[str, tuple[int, ...]]]:
    """Methods whose body uses ``target`` directly or through a derived variable.

    A method uses the target when, inside its span, the target name appears
    (construction, generic argument, parameter/return/local type), or a
    variable appears whose value was derived from it. Variables assigned at
    class level, or fields assigned inside a method, propagate file-wide;
    method locals propagate forward within their method only.
    """
    simple = target.rsplit(".", 1)[-1]
    text = lexer.mask_literals(class_text, language)
    lines = text.split("\n")
    stmts = _statements(text, language)
    owner = [_innermost(methods, s.first_line) for s in stmts]
    target_re = _word(simple)

    def mentions(stmt_text: str, names: Iterable[str]) -> bool:
        return any(_word(n).search(stmt_text) for n in names)

    fields = {(_receiver(s.text, language)) for s, o in zip(stmts, owner) if o is None} - {None}
    tracked = {simple}
    changed = True
    while changed:
        changed = False
        for s, o in zip(stmts, owner):
            recv = _receiver(s.text, language)
            if recv is None or recv in tracked:
                continue
            field_target = o is None or recv in fields or re.search(
                rf"\bthis\s*\.\s*{re.escape(recv)}\b", s.text)
            if field_target and mentions(s.text, tracked):
                tracked.add(recv)
                changed = True

    results = []
    for idx, m in enumerate(methods):
        local = set()
        names = set(tracked)
        hit_lines = set()
        for s, o in zip(stmts, owner):
            if o != idx:
                continue
            recv = _receiver(s.text, language)
            if recv and recv not in names and mentions(s.text, names | local):
                local.add(recv)
        active_from: dict[str, int] = {}
        for s, o in zip(stmts, owner):
            if o != idx:
                continue
            recv = _receiver(s.text, language)
            if recv in local and recv not in active_from:
                active_from[recv] = s.first_line
        for line_no in range(m.start_line, m.end_line + 1):
            if _innermost(methods, line_no) != idx:
                continue
            line = lines[line_no - 1] if line_no - 1 < len(lines) else ""
            if target_re.search(line) or any(_word(n).search(line) for n in names):
                hit_lines.add(line_no)
                continue
            if any(line_no >= start and _word(n).search(line) for n, start in active_from.items()):
                hit_lines.add(line_no)
        if hit_lines:
            results.append((m.name, tuple(sorted(hit_lines))))
    return results


# ---------------------------------------------------------------------------
# generation


@dataclass(frozen=True)
class _ImageDeps:
    """Dependencies of one file image, keyed by target, with how they were imported."""

    deps: Mapping[str, Dependency]
    wildcard_only: frozenset
    static_only: frozenset
    names: Mapping[str, frozenset]

    def names_of(self, dep: Dependency) -> list[str]:
        """Names the code uses for ``dep``: its simple name plus import terminals and aliases."""
        return sorted({dep.simple_name} | set(self.names.get(dep.target, ())))


def image_dependencies(text: Optional[str], path: str, index: ClassIndex) -> _ImageDeps:
    deps: dict[str, Dependency] = {}
    kinds: dict[str, set] = {}
    names: dict[str, set] = {}
    for rec in image_imports(text, path):
        static = rec.is_static or rec.kind == lexer.STATIC_MEMBER
        for dep in expand_record(index, rec):
            deps.setdefault(dep.target, dep)
            kind = "wildcard" if rec.kind == WILDCARD else ("static" if static else "plain")
            kinds.setdefault(dep.target, set()).add(kind)
            if kind == "plain":
                names.setdefault(dep.target, set()).add(rec.alias or rec.terminal)
    return _ImageDeps(
        deps,
        frozenset(t for t, k in kinds.items() if k == {"wildcard"}),
        frozenset(t for t, k in kinds.items() if k == {"static"}),
        {t: frozenset(n) for t, n in names.items()},
    )


def is_cross_module(dep: Dependency, source_module: Optional[str]) -> bool:
    if source_module is None:
        return False
    if dep.ambiguous:
        return True
    if dep.module is None:
        return False
    return dep.module != source_module


def _stem(path: str) -> str:
    return posixpath.splitext(posixpath.basename(path))[0]


@dataclass
class _Side:
    text: str  # comment-stripped
    methods: list
    method_names: set
    info: _ImageDeps


def _side(text: Optional[str], path: str, index: ClassIndex) -> Optional[_Side]:
    if text is None:
        return None
    language = lexer.KOTLIN if path.endswith(".kt") else lexer.JAVA
    stripped = lexer.strip_comments(text, language)
    methods = lexer.extract_methods(stripped, language)
    return _Side(stripped, methods, {m.name for m in methods},
                 image_dependencies(text, path, index))


def _usages(side: _Side, dep: Dependency, language: str) -> list[tuple[str, tuple[int, ...]]]:
    merged: dict[str, set] = {}
    for name in side.info.names_of(dep):
        for method, lines in find_member_usages(side.text, side.methods, name, language):
            merged.setdefault(method, set()).update(lines)
    order = [m.name for m in side.methods]
    return [(m, tuple(sorted(merged[m]))) for m in sorted(merged, key=order.index)]


def _dep_records(category: int, relation: str, source_module: str, source_class: str,
                 deps: Iterable[Dependency], side: _Side, other: Optional[_Side],
                 language: str) -> list[SliceRecord]:
    out = []
    masked = lexer.mask_literals(side.text, language)
    body = "\n".join("" if lexer._IMPORT_HEAD.match(l) or l.lstrip().startswith("package ")
                     else l for l in masked.split("\n"))
    for dep in sorted(deps):
        if not is_cross_module(dep, source_module):
            continue
        from_wildcard = dep.target in side.info.wildcard_only
        if from_wildcard and dep.granularity == "class" and not _word(dep.simple_name).search(body):
            continue
        target_class = None if (from_wildcard and dep.granularity == "package") else dep.simple_name
        base = SliceRecord(category, source_module, source_class, None, CONTEXT_NONE, relation,
                           dep.module_label, target_class, dep.ambiguous)
        usages = []
        if target_class is not None and dep.target not in side.info.static_only:
            usages = _usages(side, dep, language)
        if not usages:
            out.append(base)
            continue
        for name, lines in usages:
            if category == 2:
                ctx = CONTEXT_ADDED
            elif category == 3:
                ctx = CONTEXT_DELETED
            elif other is None or name not in other.method_names:
                ctx = CONTEXT_ADDED if relation == CONNECTED else CONTEXT_DELETED
            else:
                ctx = CONTEXT_MODIFIED
            out.append(replace(base, member=name, member_context=ctx, evidence_lines=lines))
    return out


def _dedupe(records: Sequence[SliceRecord]) -> list[SliceRecord]:
    seen: dict[tuple, int] = {}
    out: list[SliceRecord] = []
    for r in records:
        key = (r.category == 5,) + r.instance_key()
        if key in seen:
            prev = out[seen[key]]
            lines = tuple(sorted(set(prev.evidence_lines) | set(r.evidence_lines)))
            out[seen[key]] = replace(prev, evidence_lines=lines)
            continue
        seen[key] = len(out)
        out.append(r)
    return out


def _sort_key(item: tuple[str, SliceRecord]) -> tuple:
    path, r = item
    return (r.category, path, r.target_module or "", r.target_class or "", r.member or "",
            r.relation or "", r.operation or "")


def generate_slices(commit_id: str, verdict: M2MVerdict, changes: Sequence[ClassChange],
                    normalized: Mapping[str, NormalizedImportDelta],
                    pre_index: ClassIndex, post_index: ClassIndex,
                    descriptor_diffs: Sequence[DescriptorDiff]) -> SliceDocument:
    """Assemble the slice document for one commit.

    ``normalized`` maps each modified change's path to its normalized
    import delta. Records are sorted by category, source path, then target.
    """
    items: list[tuple[str, SliceRecord]] = []
    covered: set[str] = set()
    all_paths: list[tuple[str, Optional[str], str]] = []

    for diff in descriptor_diffs:
        module = (diff.post or diff.pre).module_name if (diff.post or diff.pre) else None
        all_paths.append((diff.path, module, DESCRIPTOR_CLASS))
        if not verdict.is_m2m:
            continue
        for ch in directive_changes(diff.pre, diff.post):
            relation = DISCONNECTED if ch.change == "removed" else CONNECTED
            items.append((diff.path, SliceRecord(
                1, ch.module, DESCRIPTOR_CLASS, None, CONTEXT_NONE, relation, ch.target, None,
                False, (ch.line,) if ch.line else (), ch.op)))
            covered.add(diff.path)

    for change in changes:
        language = change.language
        if change.kind == "deleted":
            source = pre_index.module_of_file(change.path)
        else:
            source = post_index.module_of_file(change.path)
        all_paths.append((change.path, source, _stem(change.path)))
        if not verdict.is_m2m:
            continue
        cls = _stem(change.path)
        records: list[SliceRecord] = []
        if change.kind == "added":
            post = _side(change.post_image, change.path, post_index)
            records = _dep_records(2, CONNECTED, source, cls, post.info.deps.values(), post,
                                   None, language)
        elif change.kind == "deleted":
            pre = _side(change.pre_image, change.path, pre_index)
            records = _dep_records(3, DISCONNECTED, source, cls, pre.info.deps.values(), pre,
                                   None, language)
        else:
            delta = normalized[change.path]
            pre = _side(change.pre_image, change.pre_path or change.path, pre_index)
            post = _side(change.post_image, change.path, post_index)
            pre_source = pre_index.module_of_file(change.pre_path or change.path)
            records = _dep_records(4, CONNECTED, source, cls, delta.added_deps, post, pre,
                                   language)
            records += _dep_records(4, DISCONNECTED, pre_source, cls, delta.removed_deps, pre,
                                    post, language)
        for r in records:
            items.append((change.path, r))
        if records:
            covered.add(change.path)

    non_m2m = []
    for path, module, cls in all_paths:
        if path in covered:
            continue
        non_m2m.append(path)
        items.append((path, SliceRecord(5, module, cls)))

    items.sort(key=_sort_key)
    slices = _dedupe([r for _, r in items])
    return SliceDocument(commit_id, verdict, tuple(slices), tuple(sorted(set(non_m2m))))


# ---------------------------------------------------------------------------
# text form


def _alias(name: Optional[str], alias_map: Optional[Mapping[str, str]]) -> str:
    if name is None:
        return "?"
    return (alias_map or {}).get(name, name)


def render_slice_text(record: SliceRecord, alias_map: Optional[Mapping[str, str]] = None) -> str:
    """One-line form, e.g. ``ASBC:EBCB=>sasToken<-ASC:STC``.

    Connected relations use ``<-``, disconnected ones ``-x-``; descriptor
    changes render as ``MODULE=>MO(op,target)<-TARGET``.
    """
    a = lambda n: _alias(n, alias_map)  # noqa: E731
    if record.category == 1:
        return (f"{a(record.source_module)}=>MO({record.operation},{record.target_module})"
                f"{REL_TEXT[record.relation]}{a(record.target_module)}")
    text = f"{a(record.source_module)}:{a(record.source_class)}"
    if record.category == 5:
        return text
    if record.member:
        text += f"=>{record.member}"
    text += REL_TEXT[record.relation] + a(record.target_module)
    if record.target_class:
        text += f":{a(record.target_class)}"
    return text


@dataclass(frozen=True)
class SliceText:
    """The fields a rendered slice line carries."""

    kind: str  # mo | dep | none
    source_module: Optional[str]
    source_class: Optional[str] = None
    member: Optional[str] = None
    relation: Optional[str] = None
    target_module: Optional[str] = None
    target_class: Optional[str] = None
    operation: Optional[str] = None


def text_view(record: SliceRecord) -> SliceText:
    if record.category == 1:
        return SliceText("mo", record.source_module, None, None, record.relation,
                         record.target_module, None, record.operation)
    if record.category == 5:
        return SliceText("none", record.source_module, record.source_class)
    return SliceText("dep", record.source_module, record.source_class, record.member,
                     record.relation, record.target_module, record.target_class)


_REL = r"(?P<rel><-|-x-)"
_MO_RE = re.compile(rf"^(?P<sm>[^:=]+?)=>MO\((?P<op>\w+),(?P<tgt>[^)]*)\){_REL}(?P<tm>.+)$")
_DEP_RE = re.compile(
    rf"^(?P<sm>[^:]+):(?P<sc>[^=<\-]+?)(?:=>(?P<mem>[^<\-]+?))?{_REL}(?P<tm>[^:]+)(?::(?P<tc>.+))?$")
# tried after _DEP_RE, so a hyphen here (module-info) cannot be a relation
_NONE_RE = re.compile(r"^(?P<sm>[^:]+):(?P<sc>[^=<]+)$")


def parse_slice_text(text: str, alias_map: Optional[Mapping[str, str]] = None) -> SliceText:
    """Inverse of :func:`render_slice_text` (aliases are expanded back)."""
    reverse = {v: k for k, v in (alias_map or {}).items()}
    un = lambda s: None if s in (None, "?") else reverse.get(s, s)  # noqa: E731
    rel = {"<-": CONNECTED, "-x-": DISCONNECTED}
    m = _MO_RE.match(text)
    if m:
        return SliceText("mo", un(m.group("sm")), None, None, rel[m.group("rel")],
                         m.group("tgt"), None, m.group("op"))
    m = _DEP_RE.match(text)
    if m:
        return SliceText("dep", un(m.group("sm")), un(m.group("sc")), m.group("mem"),
                         rel[m.group("rel")], un(m.group("tm")), un(m.group("tc")))
    m = _NONE_RE.match(text)
    if m:
        return SliceText("none", un(m.group("sm")), un(m.group("sc")))
    raise ValueError(f"not a slice line: {text!r}")

"""Line-oriented lexical extraction for Java and Kotlin sources.

No grammar is parsed here. Comments and literals are found with a single
forward scan; everything else is regular expressions plus brace counting.
All functions are pure and keep line numbers of surviving text intact.
"""

from __future__ import annotations

import bisect
import logging
import re
from dataclasses import dataclass, field
from typing import Iterator, Optional

logger = logging.getLogger(__name__)

JAVA = "java"
KOTLIN = "kotlin"

PLAIN = "plain"
WILDCARD = "wildcard"
STATIC_MEMBER = "static_member"
INNER_CLASS = "inner_class"

IDENT = r"[A-Za-z_$][\w$]*"
DOTTED = rf"{IDENT}(?:\s*\.\s*{IDENT})*"
_IDENT_RE = re.compile(rf"^{IDENT}$")


class DescriptorError(ValueError):
    """Raised when a text holds no module declaration."""


# ---------------------------------------------------------------------------
# comments and literals


def _literal_spans(source: str, language: str = JAVA) -> Iterator[tuple[str, int, int]]:
    """Yield ``(kind, start, end)`` for comments and string/char literals."""
    i, n = 0, len(source)
    nested = language == KOTLIN
    while i < n:
        c = source[i]
        if c == "/" and i + 1 < n and source[i + 1] == "/":
            end = source.find("\n", i)
            end = n if end < 0 else end
            yield "comment", i, end
            i = end
            continue
        if c == "/" and i + 1 < n and source[i + 1] == "*":
            depth, j = 1, i + 2
            while j < n and depth:
                if source.startswith("*/", j):
                    depth -= 1
                    j += 2
                elif nested and source.startswith("/*", j):
                    depth += 1
                    j += 2
                else:
                    j += 1
            if depth:
                logger.warning("unterminated block comment at offset %d; "
                               "stripping to end of file", i)
                j = n
            yield "comment", i, j
            i = j
            continue
        if c == '"' and source.startswith('"""', i):
            j = i + 3
            while True:
                j = source.find('"""', j)
                if j < 0:
                    j = n
                    break
                if language == JAVA and source[j - 1] == "\\":
                    j += 1
                    continue
                j += 3
                while j < n and source[j] == '"':
                    j += 1
                break
            yield "string", i, j
            i = j
            continue
        if c in "\"'":
            j = i + 1
            while j < n and source[j] != c and source[j] != "\n":
                j += 2 if source[j] == "\\" else 1
            j = min(j + 1, n)
            yield "string", i, j
            i = j
            continue
        i += 1


def _blank(text: str) -> str:
    return re.sub(r"[^\n\r]", " ", text)


def _replace_spans(source: str, kinds: set[str], language: str, keep_quotes: bool = False) -> str:
    out = []
    last = 0
    for kind, start, end in _literal_spans(source, language):
        if kind not in kinds:
            continue
        out.append(source[last:start])
        chunk = source[start:end]
        if keep_quotes and kind == "string" and len(chunk) >= 2:
            out.append(chunk[0] + _blank(chunk[1:-1]) + chunk[-1])
        else:
            out.append(_blank(chunk))
        last = end
    out.append(source[last:])
    return "".join(out)


def strip_comments(source: str, language: str = JAVA) -> str:
    """Blank out ``//`` and ``/* */`` comments, leaving string literals alone.

    Comment characters become spaces, newlines survive, so every remaining
    token keeps its line and column.
    """
    return _replace_spans(source, {"comment"}, language)


def mask_literals(source: str, language: str = JAVA) -> str:
    """Blank comments and the contents of string/char literals."""
    return _replace_spans(source, {"comment", "string"}, language, keep_quotes=True)


# ---------------------------------------------------------------------------
# imports


@dataclass(frozen=True)
class ImportRecord:
    raw: str
    kind: str
    segments: tuple[str, ...]
    file: str = ""
    line: int = 0
    is_static: bool = False
    alias: Optional[str] = None

    @property
    def dotted(self) -> str:
        return ".".join(self.segments)

    @property
    def target(self) -> str:
        """The class (or package, for wildcards) this import depends on."""
        if self.kind == WILDCARD or self.kind == STATIC_MEMBER:
            return ".".join(self.segments[:-1])
        return self.dotted

    @property
    def terminal(self) -> str:
        if self.segments[-1] == "*":
            return self.segments[-2] if len(self.segments) > 1 else "*"
        return self.segments[-1]

    def key(self) -> tuple:
        return (self.is_static, self.segments, self.alias)

    def render(self, language: str = JAVA) -> str:
        static = "static " if self.is_static else ""
        alias = f" as {self.alias}" if self.alias else ""
        end = ";" if language == JAVA else ""
        return f"import {static}{self.dotted}{alias}{end}"


def _is_upper(segment: str) -> bool:
    return segment[:1].isupper()


def classify_import(segments: tuple[str, ...], is_static: bool, language: str) -> str:
    if segments[-1] == "*":
        return STATIC_MEMBER if is_static else WILDCARD
    if is_static:
        return STATIC_MEMBER
    penultimate = segments[-2] if len(segments) > 1 else ""
    if language == KOTLIN and not _is_upper(segments[-1]) and _is_upper(penultimate):
        return STATIC_MEMBER
    if _is_upper(penultimate) and _is_upper(segments[-1]):
        return INNER_CLASS
    return PLAIN


_IMPORT_HEAD = re.compile(r"^\s*import\b")
_IMPORT_BODY = re.compile(
    rf"^\s*import\s+(?P<static>static\s+)?(?P<name>(?:{IDENT}|`[^`]+`)"
    rf"(?:\s*\.\s*(?:{IDENT}|`[^`]+`))*(?:\s*\.\s*\*)?)"
    rf"(?:\s+as\s+(?P<alias>{IDENT}|`[^`]+`))?\s*$")


def extract_imports(source: str, language: str = JAVA, file: str = "") -> list[ImportRecord]:
    """Return one record per import statement, in source order."""
    masked = mask_literals(source, language)
    raw_lines = source.split("\n")
    records = []
    for lineno, line in enumerate(masked.split("\n"), 1):
        if "import" not in line:
            continue
        pieces = line.split(";")
        for idx, piece in enumerate(pieces):
            if not _IMPORT_HEAD.match(piece):
                continue
            terminated = idx < len(pieces) - 1
            m = _IMPORT_BODY.match(piece)
            if m is None or (language == JAVA and not terminated):
                logger.warning("%s:%d: malformed import skipped: %s",
                               file or "<source>", lineno, piece.strip())
                continue
            if language == KOTLIN and m.group("static"):
                logger.warning("%s:%d: 'static' in Kotlin import skipped",
                               file or "<source>", lineno)
                continue
            name = re.sub(r"\s+", "", m.group("name"))
            segments = tuple(s.strip("`") for s in name.split("."))
            is_static = bool(m.group("static"))
            alias = m.group("alias")
            raw = raw_lines[lineno - 1].strip()
            records.append(ImportRecord(
                raw=raw,
                kind=classify_import(segments, is_static, language),
                segments=segments,
                file=file,
                line=lineno,
                is_static=is_static,
                alias=alias.strip("`") if alias else None,
            ))
    return records


# ---------------------------------------------------------------------------
# packages


_PACKAGE_RE = re.compile(rf"(?m)^[ \t]*package[ \t]+({DOTTED})[ \t]*;?")


def extract_package(source: str, language: str = JAVA) -> Optional[str]:
    masked = mask_literals(source, language)
    found = [re.sub(r"\s+", "", m.group(1)) for m in _PACKAGE_RE.finditer(masked)]
    if len(found) > 1:
        logger.warning("multiple package declarations (%s); using %s",
                       ", ".join(found), found[0])
    return found[0] if found else None


# ---------------------------------------------------------------------------
# module descriptors


REQUIRES = "requires"
REQUIRES_TRANSITIVE = "requires_transitive"
EXPORTS = "exports"
OPENS = "opens"
PROVIDES = "provides"
USES = "uses"


@dataclass(frozen=True)
class Directive:
    op: str
    target: str
    qualifier: Optional[tuple[str, ...]] = None
    line: int = field(default=0, compare=False)

    @property
    def family(self) -> str:
        return REQUIRES if self.op == REQUIRES_TRANSITIVE else self.op


@dataclass(frozen=True)
class ModuleDescriptor:
    module_name: str
    is_open: bool = False
    directives: tuple[Directive, ...] = ()
    line: int = field(default=0, compare=False)


_MODULE_RE = re.compile(rf"(?<![\w$.])(?P<open>open\s+)?module\s+(?P<name>{DOTTED})\s*\{{")
_NAMES = rf"{DOTTED}(?:\s*,\s*{DOTTED})*"
_REQUIRES_RE = re.compile(rf"^requires\s+(?P<mods>(?:(?:transitive|static)\s+)*)(?P<name>{DOTTED})$")
_EXPORTS_RE = re.compile(rf"^(?P<op>exports|opens)\s+(?P<name>{DOTTED})(?:\s+to\s+(?P<to>{_NAMES}))?$")
_USES_RE = re.compile(rf"^uses\s+(?P<name>{DOTTED})$")
_PROVIDES_RE = re.compile(rf"^provides\s+(?P<name>{DOTTED})\s+with\s+(?P<with>{_NAMES})$")


def _dotted(text: str) -> str:
    return re.sub(r"\s+", "", text)


def _names(text: str) -> tuple[str, ...]:
    return tuple(_dotted(t) for t in text.split(","))


def parse_module_descriptor(source: str) -> ModuleDescriptor:
    """Parse a ``module-info.java`` body into its directives."""
    masked = mask_literals(source)
    m = _MODULE_RE.search(masked)
    if m is None:
        raise DescriptorError("no module declaration found")
    lines = _LineIndex(masked)
    body_start = m.end()
    close = masked.rfind("}")
    if close < body_start:
        logger.warning("module %s: missing closing brace", m.group("name"))
        close = len(masked)
    directives = []
    pos = body_start
    for stmt in masked[body_start:close].split(";"):
        offset = pos + (len(stmt) - len(stmt.lstrip()))
        pos += len(stmt) + 1
        text = " ".join(stmt.split())
        if not text:
            continue
        line = lines.line_of(offset)
        d = None
        if (r := _REQUIRES_RE.match(text)):
            op = REQUIRES_TRANSITIVE if "transitive" in r.group("mods").split() else REQUIRES
            d = Directive(op, _dotted(r.group("name")), None, line)
        elif (r := _EXPORTS_RE.match(text)):
            to = _names(r.group("to")) if r.group("to") else None
            d = Directive(r.group("op"), _dotted(r.group("name")), to, line)
        elif (r := _USES_RE.match(text)):
            d = Directive(USES, _dotted(r.group("name")), None, line)
        elif (r := _PROVIDES_RE.match(text)):
            d = Directive(PROVIDES, _dotted(r.group("name")), _names(r.group("with")), line)
        if d is None:
            logger.warning("line %d: unrecognized module directive: %s", line, text)
            continue
        directives.append(d)
    return ModuleDescriptor(_dotted(m.group("name")), bool(m.group("open")),
                            tuple(directives), lines.line_of(m.start("name")))


# ---------------------------------------------------------------------------
# methods and types


@dataclass(frozen=True)
class MethodSpan:
    name: str
    start_line: int
    end_line: int
    signature_text: str = ""

    def contains(self, line: int) -> bool:
        return self.start_line <= line <= self.end_line


@dataclass(frozen=True)
class TypeDecl:
    name: str
    line: int
    depth: int


class _LineIndex:
    def __init__(self, text: str):
        self.starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def line_of(self, offset: int) -> int:
        return bisect.bisect_right(self.starts, offset)


_JAVA_MODIFIERS = (
    "public|protected|private|static|final|abstract|synchronized|native|"
    "default|strictfp|transient|volatile|sealed|non-sealed")
_NOT_NAMES = frozenset(
    "if for while switch catch synchronized return new else try do throw case "
    "assert yield when finally this super".split())
_JAVA_TYPE_RE = re.compile(
    rf"^(?:(?:{_JAVA_MODIFIERS}|static)\s+)*(?:class|interface|enum|record|@\s*interface)\s+(?P<name>{IDENT})")
_JAVA_METHOD_RE = re.compile(
    rf"^(?:(?:{_JAVA_MODIFIERS})\s+)*(?:<[^;{{}}]*?>\s*)?"
    rf"(?:(?P<ret>[\w$.]+(?:\s*<[^;{{}}]*>)?(?:\s*\[\s*\])*)\s+)?"
    rf"(?P<name>{IDENT})\s*\((?P<params>[^;{{}}]*)\)\s*(?:\[\s*\]\s*)*"
    rf"(?:throws\s+[\w$.,\s<>?]+)?$", re.S)
_ANON_NEW_RE = re.compile(rf"\bnew\s+{IDENT}(?:\s*\.\s*{IDENT})*\s*(?:<[^;{{}}]*>)?\s*\(")

_KT_MODIFIERS = (
    "public|private|protected|internal|open|abstract|override|final|data|sealed|"
    "inner|enum|annotation|companion|inline|suspend|operator|infix|tailrec|external|"
    "const|lateinit|actual|expect|value|noinline|crossinline|reified")
_KT_DECL_START = re.compile(
    rf"^(?:@|(?:{_KT_MODIFIERS}|fun|val|var|class|interface|object|init|constructor|"
    rf"typealias|get|set)\b)")
_KT_FUN_RE = re.compile(
    rf"^(?:@\S+\s+)*(?:(?:{_KT_MODIFIERS})\s+)*fun\s+(?:<[^>]*>\s*)?"
    rf"(?:[\w$.<>?,*\s]+?\.)?(?P<name>{IDENT}|`[^`]+`)\s*\(")
_KT_TYPE_RE = re.compile(
    rf"^(?:@\S+\s+)*(?:(?:{_KT_MODIFIERS})\s+)*(?P<kw>class|interface|object)\b\s*(?P<name>{IDENT})?")
_KT_CTOR_RE = re.compile(rf"^(?:(?:{_KT_MODIFIERS})\s+)*constructor\s*\(")


def _blank_annotations(header: str) -> str:
    """Replace annotations (with balanced argument lists) by spaces."""
    out = list(header)
    i, n = 0, len(header)
    while i < n:
        if header[i] == "@":
            m = re.match(rf"@\s*(?!interface\b){IDENT}(?:\s*\.\s*{IDENT})*", header[i:])
            if m:
                j = i + m.end()
                k = j
                while k < n and header[k] in " \t\r\n":
                    k += 1
                if k < n and header[k] == "(":
                    depth = 0
                    while k < n:
                        if header[k] == "(":
                            depth += 1
                        elif header[k] == ")":
                            depth -= 1
                            if depth == 0:
                                k += 1
                                break
                        k += 1
                    j = k
                for p in range(i, j):
                    if out[p] not in "\r\n":
                        out[p] = " "
                i = j
                continue
        i += 1
    return "".join(out)


def _blank_leading_junk(header: str) -> str:
    """Drop text up to the last unmatched ')' left over from an earlier block."""
    depth = 0
    cut = -1
    for i, ch in enumerate(header):
        if ch == "(":
            depth += 1
        elif ch == ")":
            if depth == 0:
                cut = i
            else:
                depth -= 1
    if cut < 0:
        return header
    return _blank(header[: cut + 1]) + header[cut + 1:]


def _balanced(text: str) -> bool:
    depth = 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                return False
    return depth == 0


def _clean_header(header: str) -> str:
    return _blank_leading_junk(_blank_annotations(header))


def _java_method_name(header: str, enclosing: Optional[str]) -> Optional[str]:
    text = " ".join(header.split())
    m = _JAVA_METHOD_RE.match(text)
    if not m or not _balanced(m.group("params")):
        return None
    name = m.group("name")
    if name in _NOT_NAMES:
        return None
    ret = m.group("ret")
    if ret is None:
        return name if name == enclosing else None
    if ret.split("<")[0].strip() in _NOT_NAMES:
        return None
    return name


def _java_is_anonymous(header: str) -> bool:
    text = header.rstrip()
    if not text.endswith(")"):
        return False
    for m in _ANON_NEW_RE.finditer(text):
        if _balanced(text[m.end() - 1:]):
            return True
    return False


@dataclass
class _Frame:
    kind: str  # top | type | method | anon | other
    name: Optional[str] = None
    start_line: int = 0
    signature: str = ""


@dataclass
class _Structure:
    methods: list[MethodSpan] = field(default_factory=list)
    types: list[TypeDecl] = field(default_factory=list)
    top_level_functions: bool = False


class _Scanner:
    def __init__(self, source: str, language: str):
        self.language = language
        self.text = mask_literals(source, language)
        self.lines = _LineIndex(self.text)
        self.n_lines = self.text.count("\n") + 1
        self.stack = [_Frame("top")]
        self.out = _Structure()

    def enclosing_type(self) -> Optional[str]:
        for frame in reversed(self.stack):
            if frame.kind == "type":
                return frame.name
        return None

    def _first_line(self, header: str, base: int) -> int:
        stripped = len(header) - len(header.lstrip())
        return self.lines.line_of(base + stripped)

    def _last_line(self, header: str, base: int) -> int:
        return self.lines.line_of(base + len(header.rstrip()) - 1)

    def _add_method(self, name: str, start: int, end: int, signature: str) -> None:
        self.out.methods.append(MethodSpan(name, start, end, signature))
        if len(self.stack) == 1:
            self.out.top_level_functions = True

    # java ------------------------------------------------------------

    def _java_open(self, header: str, base: int) -> _Frame:
        ctx = self.stack[-1].kind
        clean = _clean_header(header)
        first = self._first_line(clean, base) if clean.strip() else self.lines.line_of(base)
        flat = " ".join(clean.split())
        m = _JAVA_TYPE_RE.match(flat)
        if m and "=" not in flat.split(m.group(0))[0]:
            self.out.types.append(TypeDecl(m.group("name"), first, self._type_depth()))
            return _Frame("type", m.group("name"))
        if _java_is_anonymous(clean):
            return _Frame("anon")
        if ctx in ("type", "top") and "=" not in flat and "->" not in flat:
            name = _java_method_name(clean, self.enclosing_type())
            if name:
                return _Frame("method", name, first, flat)
        return _Frame("other")

    def _java_statement(self, header: str, base: int) -> None:
        if self.stack[-1].kind not in ("type", "top"):
            return
        clean = _clean_header(header)
        flat = " ".join(clean.split())
        if not flat or "=" in flat:
            return
        name = _java_method_name(clean, self.enclosing_type())
        if name:
            self._add_method(name, self._first_line(clean, base),
                             self._last_line(clean, base), flat)

    # kotlin ----------------------------------------------------------

    def _kt_chunks(self, header: str, base: int) -> list[tuple[str, int]]:
        chunks: list[tuple[str, int]] = []
        cur_start = 0
        pos = 0
        for line in header.split("\n"):
            if _KT_DECL_START.match(line.strip()) and header[cur_start:pos].strip():
                chunks.append((header[cur_start:pos], base + cur_start))
                cur_start = pos
            pos += len(line) + 1
        chunks.append((header[cur_start:], base + cur_start))
        return [(c, b) for c, b in chunks if c.strip()]

    def _kt_complete_chunk(self, chunk: str, base: int) -> None:
        if self.stack[-1].kind not in ("type", "top"):
            return
        flat = " ".join(chunk.split())
        m = _KT_FUN_RE.match(flat)
        if m:
            self._add_method(m.group("name").strip("`"), self._first_line(chunk, base),
                             self._last_line(chunk, base), flat)
            return
        # bodiless declarations: "interface Marker", "object Empty", "class Id(val v: Int)"
        m = _KT_TYPE_RE.match(flat)
        if m and m.group("name"):
            self.out.types.append(TypeDecl(m.group("name"), self._first_line(chunk, base),
                                           self._type_depth()))

    def _kotlin_open(self, header: str, base: int) -> _Frame:
        ctx = self.stack[-1].kind
        chunks = self._kt_chunks(header, base) or [("", base)]
        for chunk, cbase in chunks[:-1]:
            self._kt_complete_chunk(chunk, cbase)
        chunk, cbase = chunks[-1]
        clean = _blank_leading_junk(chunk)
        flat = " ".join(clean.split())
        first = self._first_line(clean, cbase) if flat else self.lines.line_of(base)
        if ctx in ("type", "top"):
            m = _KT_FUN_RE.match(flat)
            if m:
                return _Frame("method", m.group("name").strip("`"), first, flat)
            if _KT_CTOR_RE.match(flat):
                return _Frame("method", self.enclosing_type() or "constructor", first, flat)
        if re.search(r"(=|\breturn|\(|,)\s*object\b", flat) or flat.startswith("object :") \
                or flat.startswith("object:"):
            return _Frame("anon")
        m = _KT_TYPE_RE.match(flat)
        if m:
            name = m.group("name")
            if name is None:
                name = "Companion" if "companion" in flat.split() else None
            if name is None:
                return _Frame("anon")
            self.out.types.append(TypeDecl(name, first, self._type_depth()))
            return _Frame("type", name)
        return _Frame("other")

    def _kotlin_flush(self, header: str, base: int) -> None:
        for chunk, cbase in self._kt_chunks(header, base):
            self._kt_complete_chunk(_blank_leading_junk(chunk), cbase)

    def _kotlin_top_level_property(self, header: str) -> None:
        if len(self.stack) == 1 and re.search(r"(?m)^\s*(?:(?:%s)\s+)*(?:val|var)\b" % _KT_MODIFIERS, header):
            self.out.top_level_functions = True

    # driver ----------------------------------------------------------

    def _type_depth(self) -> int:
        return sum(1 for f in self.stack if f.kind == "type")

    def run(self) -> _Structure:
        text = self.text
        header_start = 0
        for i, ch in enumerate(text):
            if ch not in "{};":
                continue
            header = text[header_start:i]
            if ch == "{":
                if self.language == KOTLIN:
                    self._kotlin_top_level_property(header)
                    frame = self._kotlin_open(header, header_start)
                else:
                    frame = self._java_open(header, header_start)
                self.stack.append(frame)
            elif ch == "}":
                if self.language == KOTLIN:
                    self._kotlin_flush(header, header_start)
                if len(self.stack) == 1:
                    logger.warning("line %d: unbalanced closing brace ignored",
                                   self.lines.line_of(i))
                else:
                    frame = self.stack.pop()
                    if frame.kind == "method":
                        self._add_method(frame.name, frame.start_line,
                                         self.lines.line_of(i), frame.signature)
            else:
                if self.language == KOTLIN:
                    self._kotlin_top_level_property(header)
                    self._kotlin_flush(header, header_start)
                else:
                    self._java_statement(header, header_start)
            header_start = i + 1
        tail = text[header_start:]
        if self.language == KOTLIN:
            self._kotlin_top_level_property(tail)
            self._kotlin_flush(tail, header_start)
        if len(self.stack) > 1:
            logger.warning("unbalanced braces: %d block(s) still open at end of file",
                           len(self.stack) - 1)
            for frame in self.stack[1:]:
                if frame.kind == "method":
                    self._add_method(frame.name, frame.start_line, self.n_lines,
                                     frame.signature)
        self.out.methods.sort(key=lambda m: (m.start_line, -m.end_line, m.name))
        return self.out


def extract_methods(source: str, language: str = JAVA) -> list[MethodSpan]:
    """Method and constructor spans, brace-balanced, ordered by start line.

    Bodies of anonymous classes (``new X() { ... }``, Kotlin ``object :``
    expressions) are skipped, as are local functions inside method bodies.
    """
    return _Scanner(source, language).run().methods


def extract_types(source: str, language: str = JAVA) -> tuple[list[TypeDecl], bool]:
    """Declared types and whether the file has top-level functions/properties."""
    out = _Scanner(source, language).run()
    return out.types, out.top_level_functions


# ---------------------------------------------------------------------------
# structural lines


_STRUCT_PACKAGE = re.compile(rf"^\s*package\s+{DOTTED}")
_STRUCT_TYPE = re.compile(
    rf"(?:^|\s)(?:class|interface|enum|record|object|@interface)\s+{IDENT}")
_STRUCT_JAVA_SIG = re.compile(
    rf"^\s*(?:@\S+\s+)*(?:(?:{_JAVA_MODIFIERS})\s+)*(?:<[^;{{}}]*?>\s*)?"
    rf"(?P<ret>[\w$.]+(?:\s*<[^;{{}}=]*>)?(?:\s*\[\s*\])*)\s+(?P<name>{IDENT})\s*\(")
_STRUCT_JAVA_CTOR = re.compile(rf"^\s*(?:@\S+\s+)*(?:public|protected|private)\s+(?P<name>{IDENT})\s*\(")


def is_structural_line(line: str, language: str = JAVA) -> bool:
    """Does a single (comment-stripped) line carry a package, import or signature?"""
    text = line.strip()
    if not text:
        return False
    if _STRUCT_PACKAGE.match(text) or _IMPORT_HEAD.match(text):
        return True
    if _STRUCT_TYPE.search(text) and "=" not in text.split("(")[0] and "new " not in text:
        return True
    if language == KOTLIN:
        return re.search(r"(?:^|\s)fun\s", " " + text) is not None
    m = _STRUCT_JAVA_SIG.match(text)
    if m and m.group("name") not in _NOT_NAMES and m.group("ret").split("<")[0] not in _NOT_NAMES:
        return True
    return _STRUCT_JAVA_CTOR.match(text) is not None


def is_identifier(text: str) -> bool:
    return bool(_IDENT_RE.match(text))

"""Module discovery and the qualified-class -> module index for one snapshot."""

from __future__ import annotations

import logging
import posixpath
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .lexer import WILDCARD, ImportRecord, ModuleDescriptor, REQUIRES, REQUIRES_TRANSITIVE
from .vcs import DESCRIPTOR_NAME, is_source_path

logger = logging.getLogger(__name__)

DEFAULT_LAYOUTS = ("src/main/java", "src/main/kotlin", "main/java", "src")
AMBIGUOUS = "<ambiguous>"

# resolution rules, in the order they are tried
RULE_QUALIFIED = "qualified"
RULE_EXPLICIT_IMPORT = "explicit_import"
RULE_WILDCARD_IMPORT = "wildcard_import"
RULE_SAME_PACKAGE = "same_package"
RULE_PACKAGE = "package"
RULE_MODULE_NAME = "module_name"
RULE_API_MODULE = "api_module"


def _segments(path: str) -> list[str]:
    return [s for s in path.split("/") if s]


def is_under(path: str, directory: str) -> bool:
    """Segment-wise prefix test; the empty directory contains everything."""
    if not directory:
        return True
    return path == directory or path.startswith(directory.rstrip("/") + "/")


def validate_layout_pattern(pattern: str) -> None:
    segs = pattern.split("/")
    if not pattern or pattern.startswith("/") or any(s in ("", ".", "..") for s in segs):
        raise ValueError(f"invalid layout pattern: {pattern!r}")


def _match_pattern(dir_segs: list[str], pattern: str) -> Optional[str]:
    """Return the module root when the pattern is a suffix of the directory.

    A ``*`` segment stands for a module-named directory; it belongs to the
    root, so the root ends at the last ``*``.
    """
    pat = pattern.split("/")
    if len(pat) > len(dir_segs):
        return None
    tail = dir_segs[len(dir_segs) - len(pat):]
    if any(p != "*" and p != d for p, d in zip(pat, tail)):
        return None
    if "*" in pat:
        last_star = len(pat) - 1 - pat[::-1].index("*")
        keep = len(dir_segs) - len(pat) + last_star + 1
    else:
        keep = len(dir_segs) - len(pat)
    return "/".join(dir_segs[:keep])


@dataclass(frozen=True)
class ModuleLayout:
    module_name: str
    root_dir: str
    source_roots: tuple[str, ...]
    descriptor_path: str
    pattern: Optional[str] = None


def discover_modules(listing: Iterable[str],
                     descriptors: Mapping[str, ModuleDescriptor],
                     extra_layouts: Sequence[str] = ()) -> list[ModuleLayout]:
    """One layout per parsed descriptor, with source roots recognized by pattern."""
    paths = sorted(listing)
    patterns = list(DEFAULT_LAYOUTS) + [p for p in extra_layouts if p not in DEFAULT_LAYOUTS]
    plain_patterns = [p for p in patterns if "*" not in p]
    layouts = []
    for desc_path in sorted(descriptors):
        desc = descriptors[desc_path]
        desc_dir = posixpath.dirname(desc_path)
        dir_segs = _segments(desc_dir)
        best: Optional[tuple[int, str, str]] = None
        for idx, pattern in enumerate(patterns):
            root = _match_pattern(dir_segs, pattern)
            if root is None:
                continue
            rank = len(pattern.split("/"))
            if best is None or rank > best[0]:
                best = (rank, pattern, root)
        if best is None:
            logger.warning("%s: directory matches no layout pattern; "
                           "using the descriptor directory as module root", desc_path)
            layouts.append(ModuleLayout(desc.module_name, desc_dir, (desc_dir,), desc_path))
            continue
        _, pattern, root = best
        roots = [desc_dir]
        for p in plain_patterns:
            cand = posixpath.join(root, p) if root else p
            if cand == desc_dir or any(is_under(cand, r) or is_under(r, cand) for r in roots):
                continue
            if any(is_under(f, cand) and is_source_path(f) for f in paths):
                roots.append(cand)
        layouts.append(ModuleLayout(desc.module_name, root, tuple(roots), desc_path, pattern))
    seen: dict[str, str] = {}
    for lay in layouts:
        if lay.root_dir in seen:
            logger.warning("modules %s and %s share root directory %r",
                           seen[lay.root_dir], lay.module_name, lay.root_dir)
        seen.setdefault(lay.root_dir, lay.module_name)
    return layouts


def layout_of_path(layouts: Sequence[ModuleLayout], path: str) -> Optional[ModuleLayout]:
    best = None
    for lay in layouts:
        if not is_under(path, lay.root_dir):
            continue
        depth = len(_segments(lay.root_dir))
        if best is None or depth > best[0] or (depth == best[0] and lay.module_name < best[1].module_name):
            best = (depth, lay)
    return best[1] if best else None


def resolve_module_of_path(layouts: Sequence[ModuleLayout], path: str) -> Optional[str]:
    """Module whose root is the deepest segment-wise prefix of ``path``."""
    lay = layout_of_path(layouts, path)
    return lay.module_name if lay else None


def source_root_of(layout: ModuleLayout, path: str) -> Optional[str]:
    roots = [r for r in layout.source_roots if is_under(path, r)]
    return max(roots, key=lambda r: len(_segments(r))) if roots else None


def module_of_source(layouts: Sequence[ModuleLayout], path: str) -> Optional[str]:
    """Like :func:`resolve_module_of_path` but only for files under a source root."""
    lay = layout_of_path(layouts, path)
    if lay is None or source_root_of(lay, path) is None:
        return None
    return lay.module_name


# ---------------------------------------------------------------------------
# class index


@dataclass(frozen=True)
class ClassEntry:
    qualified: str
    module: str
    path: str
    consistent: bool = True


@dataclass(frozen=True)
class ClassIndex:
    by_qualified_name: Mapping[str, ClassEntry] = field(default_factory=dict)
    ambiguous_simple_names: Mapping[str, frozenset] = field(default_factory=dict)
    package_to_module: Mapping[str, str] = field(default_factory=dict)
    classes_by_package: Mapping[str, tuple] = field(default_factory=dict)
    simple_names: Mapping[str, tuple] = field(default_factory=dict)
    collisions: Mapping[str, frozenset] = field(default_factory=dict)
    modules: frozenset = frozenset()
    api_modules: frozenset = frozenset()
    orphans: tuple = ()
    by_path: Mapping[str, str] = field(default_factory=dict)

    def module_of_file(self, path: str) -> Optional[str]:
        return self.by_path.get(path)

    def module_of_package(self, package: str) -> Optional[str]:
        return self.package_to_module.get(package)

    def package_modules(self, package: str) -> frozenset:
        return frozenset(self.by_qualified_name[q].module
                         for q in self.classes_by_package.get(package, ()))


def _stem(path: str) -> str:
    return posixpath.splitext(posixpath.basename(path))[0]


def build_class_index(layouts: Sequence[ModuleLayout], listing: Iterable[str],
                      package_decls: Mapping[str, Optional[str]],
                      type_decls: Optional[Mapping[str, Sequence[str]]] = None,
                      descriptors: Optional[Mapping[str, ModuleDescriptor]] = None) -> ClassIndex:
    """Index every source file under a module source root by qualified class name.

    ``type_decls`` optionally gives the top-level type names of a file
    (used for Kotlin); otherwise the file stem is the class name.
    """
    type_decls = type_decls or {}
    by_q: dict[str, ClassEntry] = {}
    collisions: dict[str, set] = {}
    pkg_modules: dict[str, set] = {}
    by_pkg: dict[str, list] = {}
    simple: dict[str, set] = {}
    by_path: dict[str, str] = {}
    orphans = []
    for path in sorted(listing):
        if not is_source_path(path) or posixpath.basename(path) == DESCRIPTOR_NAME:
            continue
        lay = layout_of_path(layouts, path)
        root = source_root_of(lay, path) if lay else None
        if root is None:
            orphans.append(path)
            continue
        by_path[path] = lay.module_name
        package = package_decls.get(path)
        rel_dir = posixpath.dirname(path[len(root):].lstrip("/")) if root else posixpath.dirname(path)
        consistent = rel_dir.replace("/", ".") == (package or "")
        names = list(type_decls.get(path) or ()) or [_stem(path)]
        for name in names:
            q = f"{package}.{name}" if package else name
            if q in by_q:
                if by_q[q].module != lay.module_name:
                    collisions.setdefault(q, {by_q[q].module}).add(lay.module_name)
                continue
            by_q[q] = ClassEntry(q, lay.module_name, path, consistent)
            pkg_modules.setdefault(package or "", set()).add(lay.module_name)
            by_pkg.setdefault(package or "", []).append(q)
            simple.setdefault(name, set()).add(q)
    package_to_module = {
        pkg: (next(iter(mods)) if len(mods) == 1 else AMBIGUOUS)
        for pkg, mods in pkg_modules.items()
    }
    ambiguous = {}
    for name, qs in simple.items():
        mods = frozenset(by_q[q].module for q in qs)
        if len(mods) >= 2:
            ambiguous[name] = mods
    modules = frozenset(lay.module_name for lay in layouts)
    required = set()
    for desc in (descriptors or {}).values():
        required.update(d.target for d in desc.directives
                        if d.op in (REQUIRES, REQUIRES_TRANSITIVE))
    return ClassIndex(
        by_qualified_name=by_q,
        ambiguous_simple_names=ambiguous,
        package_to_module=package_to_module,
        classes_by_package={p: tuple(sorted(qs)) for p, qs in by_pkg.items()},
        simple_names={n: tuple(sorted(qs)) for n, qs in simple.items()},
        collisions={q: frozenset(m) for q, m in collisions.items()},
        modules=modules,
        api_modules=frozenset(required - modules),
        orphans=tuple(orphans),
        by_path=by_path,
    )


# ---------------------------------------------------------------------------
# name resolution


@dataclass(frozen=True)
class Resolution:
    """Outcome of resolving a class (or package) name to its module.

    ``module`` is None when the name is ambiguous or unknown; ``rule`` names
    the evidence that fired. ``external`` marks targets outside the
    repository (named API modules or entirely unknown roots).
    """

    module: Optional[str]
    rule: Optional[str] = None
    qualified: Optional[str] = None
    granularity: str = "class"
    ambiguous: bool = False
    candidates: tuple = ()
    external: bool = False

    @property
    def resolved(self) -> bool:
        return self.module is not None and not self.ambiguous


@dataclass(frozen=True)
class ImportContext:
    imports: tuple = ()
    package: Optional[str] = None


def package_part(segments: Sequence[str]) -> str:
    """Leading package segments of a dotted name (up to the first capitalized one)."""
    for i, seg in enumerate(segments):
        if seg[:1].isupper():
            return ".".join(segments[:i])
    return ".".join(segments[:-1])


def _module_prefix(name: str, modules: Iterable[str]) -> Optional[str]:
    best = None
    for m in modules:
        if (name == m or name.startswith(m + ".")) and (best is None or len(m) > len(best)):
            best = m
    return best


def _class_resolution(index: ClassIndex, q: str, rule: str) -> Resolution:
    if q in index.collisions:
        return Resolution(None, rule, q, ambiguous=True,
                          candidates=tuple(sorted(index.collisions[q])))
    return Resolution(index.by_qualified_name[q].module, rule, q)


def resolve_qualified(index: ClassIndex, name: str, package_target: bool = False) -> Resolution:
    """Resolve a dotted name; ``package_target`` for wildcard imports."""
    segs = name.split(".")
    if not package_target:
        for cut in range(len(segs), 0, -1):
            q = ".".join(segs[:cut])
            if q in index.by_qualified_name:
                return _class_resolution(index, q, RULE_QUALIFIED)
    pkg = name if package_target else package_part(segs)
    owner = index.package_to_module.get(pkg)
    if owner is not None:
        if owner == AMBIGUOUS:
            return Resolution(None, RULE_PACKAGE, pkg, "package", ambiguous=True,
                              candidates=tuple(sorted(index.package_modules(pkg))))
        return Resolution(owner, RULE_PACKAGE, pkg if package_target else name, "package")
    mod = _module_prefix(name, index.modules)
    if mod is not None:
        return Resolution(mod, RULE_MODULE_NAME, name, "package" if package_target else "class")
    api = _module_prefix(name, index.api_modules)
    if api is not None:
        return Resolution(api, RULE_API_MODULE, name, "package" if package_target else "class",
                          external=True)
    return Resolution(None, None, name, "package" if package_target else "class", external=True)


def resolve_class_module(index: ClassIndex, name: str,
                         context: ImportContext = ImportContext()) -> Resolution:
    """Resolve a referenced class name to its owning module.

    Qualified names go straight to the index. Simple names try, in order,
    an explicit import, wildcard imports, then same-package siblings; if
    none fires the result is an ambiguity verdict rather than a guess.
    """
    if "." in name:
        return resolve_qualified(index, name)
    for rec in context.imports:
        if rec.kind == WILDCARD:
            continue
        visible = rec.alias or (rec.segments[-2] if rec.is_static and rec.segments[-1] == "*"
                                else rec.segments[-1])
        if visible == name:
            res = resolve_qualified(index, rec.dotted)
            return Resolution(res.module, RULE_EXPLICIT_IMPORT, res.qualified, res.granularity,
                              res.ambiguous, res.candidates, res.external)
    hits = {}
    for rec in context.imports:
        if rec.kind != WILDCARD:
            continue
        q = f"{rec.target}.{name}"
        if q in index.by_qualified_name:
            hits[q] = _class_resolution(index, q, RULE_WILDCARD_IMPORT)
    if len(hits) == 1:
        res = next(iter(hits.values()))
        logger.debug("%s resolved through wildcard import to %s", name, res.qualified)
        return res
    if len(hits) > 1:
        mods = sorted({m for r in hits.values() for m in ([r.module] if r.module else r.candidates)})
        if len(mods) == 1:
            return Resolution(mods[0], RULE_WILDCARD_IMPORT, sorted(hits)[0])
        return Resolution(None, RULE_WILDCARD_IMPORT, None, ambiguous=True, candidates=tuple(mods))
    q = f"{context.package}.{name}" if context.package else name
    if q in index.by_qualified_name:
        logger.debug("%s resolved as same-package sibling %s", name, q)
        return _class_resolution(index, q, RULE_SAME_PACKAGE)
    candidates = tuple(sorted({index.by_qualified_name[q].module
                               for q in index.simple_names.get(name, ())}))
    return Resolution(None, None, None, ambiguous=True, candidates=candidates)

"""In-memory class indexes for property tests, no git involved."""

from archslicer.lexer import JAVA, extract_imports
from archslicer.modules import ModuleLayout, build_class_index
from archslicer.vcs import FileDelta, MODIFIED

SRC = "src/main/java"


def layout(module: str, root: str) -> ModuleLayout:
    return ModuleLayout(module, root, (f"{root}/{SRC}",), f"{root}/{SRC}/module-info.java")


def index_of(classes):
    """Build an index from ``{module: {package: [ClassName, ...]}}``.

    Each module's root directory is its own name.
    """
    layouts, listing, packages = [], [], {}
    for module, pkgs in classes.items():
        layouts.append(layout(module, module))
        for package, names in pkgs.items():
            for name in names:
                path = f"{module}/{SRC}/{package.replace('.', '/')}/{name}.java"
                listing.append(path)
                packages[path] = package
    return build_class_index(layouts, listing, packages)


def java_file(package: str, imports, body: str = "class Client {}\n") -> str:
    lines = [f"package {package};", ""]
    lines += [f"import {i};" for i in imports]
    return "\n".join(lines) + "\n\n" + body


def modified(path: str, pre: str, post: str) -> FileDelta:
    return FileDelta(path, MODIFIED, None, (), pre, post)


def imports_of(text: str):
    return extract_imports(text, JAVA)

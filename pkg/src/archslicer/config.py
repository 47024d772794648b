"""Tool configuration loaded from a YAML file."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

import yaml

from .detect import LENIENT, STRICT
from .lexer import JAVA, KOTLIN
from .modules import validate_layout_pattern
from .normalize import DEFAULT_MOVE_THRESHOLD


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ToolConfig:
    extra_layouts: tuple = ()
    move_similarity_threshold: float = DEFAULT_MOVE_THRESHOLD
    ambiguity_mode: str = LENIENT
    language_filter: frozenset = frozenset({JAVA, KOTLIN})
    alias_map: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        t = self.move_similarity_threshold
        if isinstance(t, bool) or not isinstance(t, (int, float)) or not 0.0 <= t <= 1.0:
            raise ConfigError(f"move_similarity_threshold must be in [0, 1], got {t!r}")
        if self.ambiguity_mode not in (LENIENT, STRICT):
            raise ConfigError(f"ambiguity_mode must be lenient or strict, got {self.ambiguity_mode!r}")
        unknown = set(self.language_filter) - {JAVA, KOTLIN}
        if unknown or not self.language_filter:
            raise ConfigError(f"language_filter must be a non-empty subset of java, kotlin")
        for pattern in self.extra_layouts:
            try:
                validate_layout_pattern(pattern)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None

    @property
    def suffixes(self) -> tuple:
        out = []
        if JAVA in self.language_filter:
            out.append(".java")
        if KOTLIN in self.language_filter:
            out.append(".kt")
        # descriptors are .java files and always matter
        if ".java" not in out:
            out.append("module-info.java")
        return tuple(out)


_KEYS = {"extra_layouts", "move_similarity_threshold", "ambiguity_mode", "language_filter",
         "alias_map"}


def config_from_mapping(data: Optional[Mapping]) -> ToolConfig:
    if data is None:
        return ToolConfig()
    if not isinstance(data, Mapping):
        raise ConfigError("configuration must be a mapping")
    unknown = set(data) - _KEYS
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
    kwargs = {}
    if "extra_layouts" in data:
        layouts = data["extra_layouts"] or []
        if not isinstance(layouts, list) or not all(isinstance(p, str) for p in layouts):
            raise ConfigError("extra_layouts must be a list of strings")
        kwargs["extra_layouts"] = tuple(layouts)
    if "move_similarity_threshold" in data:
        kwargs["move_similarity_threshold"] = data["move_similarity_threshold"]
    if "ambiguity_mode" in data:
        kwargs["ambiguity_mode"] = data["ambiguity_mode"]
    if "language_filter" in data:
        langs = data["language_filter"]
        if isinstance(langs, str):
            langs = [langs]
        if not isinstance(langs, list):
            raise ConfigError("language_filter must be a list")
        kwargs["language_filter"] = frozenset(str(x).lower() for x in langs)
    if "alias_map" in data:
        aliases = data["alias_map"] or {}
        if not isinstance(aliases, Mapping):
            raise ConfigError("alias_map must be a mapping")
        kwargs["alias_map"] = {str(k): str(v) for k, v in aliases.items()}
    return ToolConfig(**kwargs)


def load_config(path) -> ToolConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from None
    return config_from_mapping(data)

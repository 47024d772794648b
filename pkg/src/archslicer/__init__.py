"""Module-level architectural change detection and structural slicing for JPMS repositories."""

from .analysis import Analyzer, detect_commits, slice_commit
from .config import ConfigError, ToolConfig, load_config
from .detect import M2MVerdict
from .report import EvalReport, emit_yaml, evaluate, load_document
from .slices import SliceDocument, SliceRecord, parse_slice_text, render_slice_text

__all__ = [
    "Analyzer", "ConfigError", "EvalReport", "M2MVerdict", "SliceDocument", "SliceRecord",
    "ToolConfig", "detect_commits", "emit_yaml", "evaluate", "load_config", "load_document",
    "parse_slice_text", "render_slice_text", "slice_commit",
]
__version__ = "0.1.0"

"""YAML emission of slice documents and the precision/recall harness."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional

import yaml

from .detect import CRITERIA, M2MVerdict
from .slices import (CONNECTED, DISCONNECTED, SliceDocument, SliceRecord)

SCHEMA_VERSION = 1
COMMIT = "commit"
SLICE = "slice"

_RECORD_KEYS = ("category", "source_module", "source_class", "member", "member_context",
                "relation", "target_module", "target_class", "ambiguity", "evidence_lines",
                "operation")
_TOP_KEYS = ("schema", "commit", "m2m", "criteria", "slices", "non_m2m_classes")


class SchemaError(ValueError):
    def __init__(self, source, detail: str):
        super().__init__(f"{source}: {detail}")
        self.source = source


def record_to_mapping(r: SliceRecord) -> dict:
    return {
        "category": r.category,
        "source_module": r.source_module,
        "source_class": r.source_class,
        "member": r.member,
        "member_context": r.member_context,
        "relation": r.relation,
        "target_module": r.target_module,
        "target_class": r.target_class,
        "ambiguity": bool(r.ambiguity),
        "evidence_lines": list(r.evidence_lines),
        "operation": r.operation,
    }


def document_to_mapping(doc: SliceDocument) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "commit": doc.commit_id,
        "m2m": bool(doc.verdict.is_m2m),
        "criteria": list(doc.verdict.criteria),
        "slices": [record_to_mapping(r) for r in doc.slices],
        "non_m2m_classes": list(doc.non_m2m_classes),
    }


def emit_yaml(doc: SliceDocument) -> str:
    """Canonical YAML text: fixed key order, LF endings, no locale dependence."""
    text = yaml.safe_dump(document_to_mapping(doc), sort_keys=False, allow_unicode=False,
                          default_flow_style=False, width=4096, line_break="\n")
    return text


def _optional_str(value, source, key):
    if value is None or isinstance(value, str):
        return value
    raise SchemaError(source, f"{key} must be a string or null")


def record_from_mapping(data, source="<document>") -> SliceRecord:
    if not isinstance(data, Mapping):
        raise SchemaError(source, "slice entry is not a mapping")
    missing = [k for k in _RECORD_KEYS[:10] if k not in data]
    if missing:
        raise SchemaError(source, f"slice entry lacks {', '.join(missing)}")
    category = data["category"]
    if isinstance(category, bool) or category not in (1, 2, 3, 4, 5):
        raise SchemaError(source, f"bad category {category!r}")
    relation = data["relation"]
    if relation not in (CONNECTED, DISCONNECTED, None):
        raise SchemaError(source, f"bad relation {relation!r}")
    lines = data["evidence_lines"] or []
    if not isinstance(lines, list) or not all(isinstance(n, int) for n in lines):
        raise SchemaError(source, "evidence_lines must be a list of integers")
    return SliceRecord(
        category=category,
        source_module=_optional_str(data["source_module"], source, "source_module"),
        source_class=_optional_str(data["source_class"], source, "source_class"),
        member=_optional_str(data["member"], source, "member"),
        member_context=_optional_str(data["member_context"], source, "member_context") or "none",
        relation=relation,
        target_module=_optional_str(data["target_module"], source, "target_module"),
        target_class=_optional_str(data["target_class"], source, "target_class"),
        ambiguity=bool(data["ambiguity"]),
        evidence_lines=tuple(lines),
        operation=_optional_str(data.get("operation"), source, "operation"),
    )


def document_from_mapping(data, source="<document>") -> SliceDocument:
    if not isinstance(data, Mapping):
        raise SchemaError(source, "document is not a mapping")
    if data.get("schema") != SCHEMA_VERSION:
        raise SchemaError(source, f"unsupported schema {data.get('schema')!r}")
    for key in _TOP_KEYS:
        if key not in data:
            raise SchemaError(source, f"missing key {key}")
    commit = data["commit"]
    if not isinstance(commit, str) or not commit:
        raise SchemaError(source, "commit must be a non-empty string")
    if not isinstance(data["m2m"], bool):
        raise SchemaError(source, "m2m must be a boolean")
    criteria = data["criteria"] or []
    if not isinstance(criteria, list) or any(c not in CRITERIA for c in criteria):
        raise SchemaError(source, f"bad criteria {criteria!r}")
    slices = data["slices"] or []
    if not isinstance(slices, list):
        raise SchemaError(source, "slices must be a list")
    classes = data["non_m2m_classes"] or []
    if not isinstance(classes, list) or not all(isinstance(c, str) for c in classes):
        raise SchemaError(source, "non_m2m_classes must be a list of strings")
    verdict = M2MVerdict(commit, data["m2m"], tuple(criteria))
    return SliceDocument(commit, verdict,
                         tuple(record_from_mapping(s, source) for s in slices),
                         tuple(classes))


def parse_yaml(text: str, source="<document>") -> SliceDocument:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SchemaError(source, f"invalid YAML: {exc}") from None
    return document_from_mapping(data, source)


def load_document(path) -> SliceDocument:
    return parse_yaml(Path(path).read_text(encoding="utf-8"), os.fspath(path))


def load_documents(directory) -> list[SliceDocument]:
    directory = Path(directory)
    if not directory.is_dir():
        raise SchemaError(os.fspath(directory), "not a directory")
    docs = [load_document(p) for p in sorted(directory.iterdir())
            if p.suffix in (".yaml", ".yml") and p.is_file()]
    return docs


def write_document(doc: SliceDocument, out_dir) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{doc.commit_id}.yaml"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(emit_yaml(doc))
    return path


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class EvalReport:
    true_positives: int
    false_positives: int
    false_negatives: int
    precision: Optional[float]
    recall: Optional[float]
    missing: tuple = ()
    spurious: tuple = ()
    granularity: str = SLICE
    commits: int = 0
    instances: int = 0


def _ratio(num: int, den: int) -> Optional[float]:
    return num / den if den else None


def evaluate(predicted: Iterable, truth: Iterable, granularity: str = SLICE) -> EvalReport:
    """Set-based TP/FP/FN; 0/0 precision or recall is reported as None."""
    predicted, truth = set(predicted), set(truth)
    tp = len(predicted & truth)
    fp = len(predicted - truth)
    fn = len(truth - predicted)
    commits = len({item[0] for item in truth}) if granularity == SLICE else len(truth)
    instances = len(truth) if granularity == SLICE else 0
    return EvalReport(tp, fp, fn, _ratio(tp, tp + fp), _ratio(tp, tp + fn),
                      tuple(sorted(truth - predicted, key=repr)),
                      tuple(sorted(predicted - truth, key=repr)),
                      granularity, commits, instances)


def commit_items(docs: Iterable[SliceDocument]) -> set:
    return {d.commit_id for d in docs if d.verdict.is_m2m}


def slice_items(docs: Iterable[SliceDocument]) -> set:
    return {(d.commit_id,) + key for d in docs for key in d.instances()}


def items_for(docs: Iterable[SliceDocument], granularity: str) -> set:
    if granularity == COMMIT:
        return commit_items(docs)
    if granularity == SLICE:
        return slice_items(docs)
    raise ValueError(f"unknown granularity {granularity!r}")


def evaluate_documents(predicted: Iterable[SliceDocument], truth: Iterable[SliceDocument],
                       granularity: str) -> EvalReport:
    truth = list(truth)
    report = evaluate(items_for(predicted, granularity), items_for(truth, granularity),
                      granularity)
    instances = len(slice_items(truth))
    return EvalReport(report.true_positives, report.false_positives, report.false_negatives,
                      report.precision, report.recall, report.missing, report.spurious,
                      granularity, len(commit_items(truth)), instances)


def format_value(value: Optional[float]) -> str:
    return "NA" if value is None else f"{value:.3f}"


def format_row(project: str, report: EvalReport) -> str:
    """One row in the ``project | commits | instances | P | R`` layout."""
    return " | ".join([project, str(report.commits), str(report.instances),
                       format_value(report.precision), format_value(report.recall)])


TABLE_HEADER = "project | commits | instances | P | R"

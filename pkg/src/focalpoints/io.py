"""Evidence files and representation outputs.

Evidence is JSON with a ``frame`` (list of labels) and ``masses`` (list of
``{"set": [...labels], "mass": number}``), plus optional ``source`` and
``timestamp``.  Sets are written with labels, so bit positions only come
from the frame order of the file being read.
"""

from __future__ import annotations

import json
import logging
import math
import os
import tempfile
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .dst import MassFunction
from .engines import MASS_KINDS, Result
from .errors import ParseError, ValidationError
from .lattice import Frame, SetFunction

log = logging.getLogger(__name__)

FILE_TOL = 1e-6
OUTPUT_DECIMALS = 10


@dataclass(frozen=True)
class EvidenceFile:
    mass: MassFunction
    source: str | None = None
    timestamp: str | None = None

    @property
    def frame(self) -> Frame:
        return self.mass.frame


def _field(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise ParseError(f"{where}: missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}, got {type(value).__name__}")
    return value


def parse_evidence(text: str, name: str = "<input>") -> EvidenceFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{name}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{name}: top level must be an object")
    labels = _field(doc, "frame", list, name)
    if not all(isinstance(label, str) for label in labels):
        raise ParseError(f"{name}.frame: labels must be strings")
    frame = Frame(labels)
    entries = _field(doc, "masses", list, name)
    masses: dict[int, float] = {}
    for i, entry in enumerate(entries):
        where = f"{name}.masses[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: expected an object")
        members = _field(entry, "set", list, where)
        value = _field(entry, "mass", (int, float), where)
        if not math.isfinite(value):
            raise ValidationError(f"{where}.mass: not finite")
        if value < 0:
            raise ValidationError(f"{where}.mass: negative mass {value}")
        try:
            mask = frame.mask(members)
        except ValidationError as exc:
            raise ValidationError(f"{where}.set: {exc}") from None
        if mask in masses:
            warnings.warn(f"{where}: duplicate set {frame.format(mask)}, masses summed", stacklevel=2)
        masses[mask] = masses.get(mask, 0.0) + float(value)
    total = math.fsum(masses.values())
    if abs(total - 1.0) > FILE_TOL:
        raise ValidationError(f"{name}: masses sum to {total!r}, not 1 (tolerance {FILE_TOL})")
    if abs(total - 1.0) > 1e-9:
        log.info("%s: renormalizing masses that summed to %r", name, total)
    mass = MassFunction(frame, masses, normalize=True)
    source = doc.get("source")
    timestamp = doc.get("timestamp")
    return EvidenceFile(mass, None if source is None else str(source), None if timestamp is None else str(timestamp))


def load_evidence(path: str | os.PathLike) -> MassFunction:
    return load_evidence_file(path).mass


def load_evidence_file(path: str | os.PathLike) -> EvidenceFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_evidence(text, str(path))


def _labels(frame: Frame, mask: int) -> list[str]:
    return list(frame.labels_of(mask))


def _rounded(value: float) -> float:
    return round(value, OUTPUT_DECIMALS) + 0.0


def evidence_document(m: SetFunction, source: str | None = None, timestamp: str | None = None, *, rounded: bool = False) -> dict[str, Any]:
    doc: dict[str, Any] = {"frame": list(m.frame.labels)}
    if source is not None:
        doc["source"] = source
    if timestamp is not None:
        doc["timestamp"] = timestamp
    items = [(s, _rounded(v) if rounded else v) for s, v in m.items()]
    doc["masses"] = [{"set": _labels(m.frame, s), "mass": v} for s, v in items if v != 0.0]
    return doc


def dumps(doc: dict[str, Any]) -> str:
    """JSON with one line per top-level key and one line per list entry."""
    lines = []
    for key, value in doc.items():
        head = f"  {json.dumps(key)}: "
        if isinstance(value, list) and value and isinstance(value[0], dict):
            body = ",\n".join(f"    {json.dumps(v, ensure_ascii=False)}" for v in value)
            lines.append(f"{head}[\n{body}\n  ]")
        else:
            lines.append(head + json.dumps(value, ensure_ascii=False))
    return "{\n" + ",\n".join(lines) + "\n}\n"


def atomic_write(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_evidence(path: str | os.PathLike, m: SetFunction, source: str | None = None, timestamp: str | None = None) -> None:
    """Write ``m`` at full precision; ``load_evidence`` gives it back unchanged."""
    atomic_write(path, dumps(evidence_document(m, source, timestamp)))


def representation_document(result: Result) -> dict[str, Any]:
    """Output of a transform, rounded so that agreeing engines print the same bytes."""
    if result.kind in MASS_KINDS:
        return evidence_document(SetFunction(result.frame, result.as_dict()), rounded=True)
    return {
        "frame": list(result.frame.labels),
        "kind": result.kind,
        "values": [
            {"set": _labels(result.frame, p), "value": _rounded(v)} for p, v in zip(result.points, result.values.tolist())
        ],
    }


def align(m: MassFunction, frame: Frame) -> MassFunction:
    """Re-express ``m`` on ``frame``, which must hold the same labels in any order."""
    if m.frame == frame:
        return m
    if set(m.frame.labels) != set(frame.labels):
        raise ValidationError(f"frames differ: {list(m.frame.labels)} vs {list(frame.labels)}")
    return MassFunction(frame, [(frame.mask(m.frame.labels_of(s)), v) for s, v in m.items()])

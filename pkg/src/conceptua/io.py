"""Context file formats: Burmeister .cxt, CSV, and the JSON relation mirror.

The .cxt grammar accepted is exactly:

    B
    [optional name line]
    <blank>
    |G|
    |M|
    <blank>
    |G| object-name lines
    |M| attribute-name lines
    |G| incidence rows of length |M| over {'.', 'X'}

with the trailing newline optional.  The writer emits the canonical form,
which has no name line, so canonical files round-trip byte-identically.
"""

import json
from dataclasses import dataclass

from .errors import ParseError
from .finrel import FinSet, Relation, relation_from_json, relation_to_json
from .clsn import Classification

__all__ = [
    "ContextFile",
    "read_cxt",
    "write_cxt",
    "read_csv",
    "write_csv",
    "read_context_json",
    "write_context_json",
    "read_context",
    "write_context",
    "detect_format",
]


def read_cxt(text: str) -> Classification:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    def get(i: int) -> str:
        if i >= len(lines):
            raise ParseError("unexpected end of file", line=i + 1)
        return lines[i]

    if get(0) != "B":
        raise ParseError('expected header "B"', line=1)
    idx = 1
    if get(idx) != "":
        idx += 1  # optional name line
    if get(idx) != "":
        raise ParseError("expected blank line after the header", line=idx + 1)
    idx += 1
    try:
        n_obj = int(get(idx))
        n_att = int(get(idx + 1))
    except ValueError:
        raise ParseError("expected object/attribute counts", line=idx + 1) from None
    if n_obj < 0 or n_att < 0:
        raise ParseError("negative carrier size", line=idx + 1)
    idx += 2
    if get(idx) != "":
        raise ParseError("expected blank line after the counts", line=idx + 1)
    idx += 1
    objects = [get(idx + i) for i in range(n_obj)]
    idx += n_obj
    attributes = [get(idx + i) for i in range(n_att)]
    idx += n_att
    rows = []
    for i in range(n_obj):
        row = get(idx + i)
        if len(row) != n_att:
            raise ParseError(f"row has length {len(row)}, expected {n_att}", line=idx + i + 1)
        mask = 0
        for j, ch in enumerate(row):
            if ch == "X":
                mask |= 1 << j
            elif ch != ".":
                raise ParseError(f"unexpected cell {ch!r}", line=idx + i + 1)
        rows.append(mask)
    idx += n_obj
    if idx != len(lines):
        raise ParseError("trailing content after the incidence rows", line=idx + 1)
    instances = FinSet(tuple(objects))
    types = FinSet(tuple(attributes))
    return Classification(instances, types, Relation(instances, types, tuple(rows)))


def write_cxt(a: Classification) -> str:
    out = ["B", "", str(a.instances.size), str(a.types.size), ""]
    out.extend(a.instances.elements)
    out.extend(a.types.elements)
    for row in a.incidence.rows:
        out.append("".join("X" if row >> j & 1 else "." for j in range(a.types.size)))
    return "\n".join(out) + "\n"


def read_csv(text: str) -> Classification:
    lines = [ln for ln in text.split("\n") if ln != ""]
    if not lines:
        raise ParseError("empty CSV", line=1)
    header = lines[0].split(",")
    attributes = header[1:]
    objects = []
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        cells = ln.split(",")
        if len(cells) != len(attributes) + 1:
            raise ParseError(f"expected {len(attributes) + 1} cells, got {len(cells)}", line=lineno)
        objects.append(cells[0])
        mask = 0
        for j, cell in enumerate(cells[1:]):
            if cell in ("1", "X"):
                mask |= 1 << j
            elif cell not in ("0", "."):
                raise ParseError(f"unexpected cell {cell!r}", line=lineno)
        rows.append(mask)
    instances = FinSet(tuple(objects))
    types = FinSet(tuple(attributes))
    return Classification(instances, types, Relation(instances, types, tuple(rows)))


def write_csv(a: Classification) -> str:
    out = ["," + ",".join(a.types.elements)]
    for i, obj in enumerate(a.instances.elements):
        row = a.incidence.rows[i]
        cells = ["1" if row >> j & 1 else "0" for j in range(a.types.size)]
        out.append(obj + "," + ",".join(cells))
    return "\n".join(out) + "\n"


def read_context_json(text: str) -> Classification:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", line=exc.lineno) from exc
    if not isinstance(data, dict) or not {"source", "target", "pairs"} <= set(data):
        raise ParseError("context JSON needs 'source', 'target', and 'pairs' keys")
    rel = relation_from_json(data)
    return Classification(rel.source, rel.target, rel)


def write_context_json(a: Classification) -> str:
    return json.dumps(relation_to_json(a.incidence), indent=2) + "\n"


_READERS = {"cxt": read_cxt, "csv": read_csv, "json": read_context_json}
_WRITERS = {"cxt": write_cxt, "csv": write_csv, "json": write_context_json}


@dataclass(frozen=True)
class ContextFile:
    """A parsed context together with the format it arrived in."""

    format: str
    classification: Classification

    @classmethod
    def loads(cls, text: str, fmt: str) -> "ContextFile":
        return cls(fmt, read_context(text, fmt))

    def dumps(self) -> str:
        return write_context(self.classification, self.format)


def detect_format(path: str) -> str:
    lowered = path.lower()
    for ext in ("cxt", "csv", "json"):
        if lowered.endswith("." + ext):
            return ext
    raise ParseError(f"cannot infer context format from {path!r}; use .cxt, .csv, or .json")


def read_context(text: str, fmt: str) -> Classification:
    if fmt not in _READERS:
        raise ParseError(f"unknown context format {fmt!r}")
    return _READERS[fmt](text)


def write_context(a: Classification, fmt: str) -> str:
    if fmt not in _WRITERS:
        raise ParseError(f"unknown context format {fmt!r}")
    return _WRITERS[fmt](a)

"""Text documents for programs.

A document is a JSON object with a ``"format": 1`` header. Two kinds exist:

``"kind": "k-qobdd"``
    ``n``, ``k``, ``width``, ``ordering`` (1-based), ``accepting`` (0-based),
    and ``layers``: ``k`` lists of ``n`` objects ``{"t0": M, "t1": M}``, each
    ``M`` a list of rows, each row a list of ``[re, im]`` pairs.

``"kind": "det-obdd"``
    ``n``, ``width``, ``ordering``, ``accepting`` and ``transitions``: ``n``
    objects ``{"d0": [...], "d1": [...]}`` of successor states.

Both accept optional ``name`` and ``comment`` strings. :func:`serialize_program`
writes a canonical layout (fixed key order, one matrix row per line, floats
with 17 significant digits) so that parsing reproduces every double bit for
bit.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .classical import DetObdd, validate_det
from .errors import ParseError, ValidationError
from .program import KQobddProgram, TransformationPair, validate

FORMAT_VERSION = 1
KIND_QOBDD = "k-qobdd"
KIND_DET = "det-obdd"


def format_float(x: float) -> str:
    """17 significant digits, always readable back as a float."""
    x = float(x)
    if not np.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    text = format(x, ".17g")
    if not any(c in text for c in ".e"):
        text += ".0"
    return text


def _header(kind: str, name, comment) -> list[str]:
    lines = ["{", f'  "format": {FORMAT_VERSION},', f'  "kind": {json.dumps(kind)},']
    if name is not None:
        lines.append(f'  "name": {json.dumps(name)},')
    if comment is not None:
        lines.append(f'  "comment": {json.dumps(comment)},')
    return lines


def _matrix_lines(m: np.ndarray, indent: str) -> list[str]:
    rows = []
    for r in range(m.shape[0]):
        entries = ", ".join(
            f"[{format_float(z.real)}, {format_float(z.imag)}]" for z in m[r]
        )
        rows.append(f"{indent}  [{entries}]")
    return [f"{indent}["] + [row + "," for row in rows[:-1]] + [rows[-1], f"{indent}]"]


def serialize_program(p: KQobddProgram) -> str:
    lines = _header(KIND_QOBDD, p.name, p.comment)
    lines += [
        f'  "n": {p.n},',
        f'  "k": {p.k},',
        f'  "width": {p.width},',
        f'  "ordering": {json.dumps(list(p.ordering))},',
        f'  "accepting": {json.dumps(sorted(p.accepting))},',
        '  "layers": [',
    ]
    for lam, layer in enumerate(p.layers):
        lines.append("    [")
        for pos, pr in enumerate(layer):
            lines.append("      {")
            t0 = _matrix_lines(pr.t0, "        ")
            t1 = _matrix_lines(pr.t1, "        ")
            lines.append('        "t0":')
            lines += t0[:-1] + [t0[-1] + ","]
            lines.append('        "t1":')
            lines += t1
            lines.append("      }" + ("," if pos < len(layer) - 1 else ""))
        lines.append("    ]" + ("," if lam < len(p.layers) - 1 else ""))
    lines += ["  ]", "}"]
    return "\n".join(lines) + "\n"


def serialize_det(d: DetObdd) -> str:
    lines = _header(KIND_DET, d.name, None)
    lines += [
        f'  "n": {d.n},',
        f'  "width": {d.width},',
        f'  "ordering": {json.dumps(list(d.ordering))},',
        f'  "accepting": {json.dumps(sorted(d.accepting))},',
        '  "transitions": [',
    ]
    for i, (d0, d1) in enumerate(d.transitions):
        sep = "," if i < len(d.transitions) - 1 else ""
        lines.append(f'    {{"d0": {json.dumps(list(d0))}, "d1": {json.dumps(list(d1))}}}{sep}')
    lines += ["  ]", "}"]
    return "\n".join(lines) + "\n"


# -- parsing ---------------------------------------------------------------

def _load(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    if doc.get("format") != FORMAT_VERSION:
        raise ParseError(f'unsupported or missing "format" (expected {FORMAT_VERSION}), got {doc.get("format")!r}')
    return doc


def document_kind(text: str) -> str:
    return _load(text).get("kind", KIND_QOBDD)


def _int(doc: dict, key: str, where: str = "") -> int:
    if key not in doc:
        raise ParseError(f"{where}missing field {key!r}")
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{where}field {key!r} must be an integer, got {v!r}")
    return v


def _int_list(doc: dict, key: str) -> list[int]:
    v = doc.get(key)
    if not isinstance(v, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in v):
        raise ParseError(f"field {key!r} must be a list of integers")
    return v


def _optional_str(doc: dict, key: str) -> str | None:
    v = doc.get(key)
    if v is not None and not isinstance(v, str):
        raise ParseError(f"field {key!r} must be a string")
    return v


def _number(x: Any, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{where}: expected a number, got {x!r}")
    return float(x)


def _matrix(rows: Any, width: int, where: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != width:
        got = len(rows) if isinstance(rows, list) else type(rows).__name__
        raise ParseError(f"{where}: expected {width} rows, got {got}")
    m = np.zeros((width, width), dtype=np.complex128)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != width:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise ParseError(f"{where} row {r}: expected {width} entries, got {got}")
        for c, entry in enumerate(row):
            if not isinstance(entry, list) or len(entry) != 2:
                raise ParseError(f"{where} row {r} entry {c}: expected [re, im], got {entry!r}")
            m[r, c] = complex(_number(entry[0], f"{where} row {r} entry {c}"),
                              _number(entry[1], f"{where} row {r} entry {c}"))
    return m


def parse_program(text: str) -> KQobddProgram:
    """Parse and validate a ``k-qobdd`` document.

    Raises:
        ParseError: malformed syntax or structure; the message names the field.
        ValidationError: the program parses but is not well-formed.
    """
    doc = _load(text)
    kind = doc.get("kind", KIND_QOBDD)
    if kind != KIND_QOBDD:
        raise ParseError(f"expected a {KIND_QOBDD!r} document, got kind {kind!r}")
    n, k, width = _int(doc, "n"), _int(doc, "k"), _int(doc, "width")
    if n < 1 or k < 1 or width < 1:
        raise ParseError(f"n, k and width must be positive, got n={n}, k={k}, width={width}")
    ordering = _int_list(doc, "ordering")
    accepting = _int_list(doc, "accepting")
    layers_doc = doc.get("layers")
    if not isinstance(layers_doc, list) or len(layers_doc) != k:
        raise ParseError(f"field 'layers' must hold {k} layers")
    layers = []
    for lam, layer in enumerate(layers_doc):
        if not isinstance(layer, list) or len(layer) != n:
            raise ParseError(f"layers[{lam}] must hold {n} pairs")
        pairs = []
        for pos, pr in enumerate(layer):
            where = f"layers[{lam}][{pos}]"
            if not isinstance(pr, dict) or set(pr) != {"t0", "t1"}:
                raise ParseError(f"{where} must be an object with keys 't0' and 't1'")
            pairs.append(TransformationPair(_matrix(pr["t0"], width, f"{where}.t0"),
                                            _matrix(pr["t1"], width, f"{where}.t1")))
        layers.append(tuple(pairs))
    p = KQobddProgram(n, k, width, tuple(ordering), tuple(layers), frozenset(accepting),
                      _optional_str(doc, "name"), _optional_str(doc, "comment"))
    diags = validate(p)
    if diags:
        raise ValidationError("; ".join(diags), diags)
    return p


def parse_det(text: str) -> DetObdd:
    doc = _load(text)
    if doc.get("kind") != KIND_DET:
        raise ParseError(f"expected a {KIND_DET!r} document, got kind {doc.get('kind')!r}")
    n, width = _int(doc, "n"), _int(doc, "width")
    trans_doc = doc.get("transitions")
    if not isinstance(trans_doc, list):
        raise ParseError("field 'transitions' must be a list")
    transitions = []
    for i, t in enumerate(trans_doc):
        if not isinstance(t, dict) or set(t) != {"d0", "d1"}:
            raise ParseError(f"transitions[{i}] must be an object with keys 'd0' and 'd1'")
        transitions.append((_int_list(t, "d0"), _int_list(t, "d1")))
    d = DetObdd(n, width, tuple(_int_list(doc, "ordering")), tuple(transitions),
                frozenset(_int_list(doc, "accepting")), _optional_str(doc, "name"))
    diags = validate_det(d)
    if diags:
        raise ValidationError("; ".join(diags), diags)
    return d


def read_program(path) -> KQobddProgram:
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read())


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)

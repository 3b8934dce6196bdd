"""JSON algebra files: loading with located errors, canonical saving.

File layout::

    {
      "field": "Q" | {"GF": p},
      "dim": n,
      "basis": ["e1", ...],              # optional
      "products": [[i, j, k, "v"], ...], # 0-based, e_i * e_j has coefficient v at e_k
      "alpha": [["a11", ...], ...],      # optional, row-major, alpha(x) = M x
      "unit": ["1", "0", ...],           # optional
      "metadata": {...}                  # optional
    }

A file without ``alpha`` loads as a plain :class:`Algebra`.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .algebra import Algebra, AlgebraError, HomAlgebra
from .fixtures import DEFAULT_DEGREE_BOUND, FIXTURES, fixture
from .linalg import Field

KEYS = ("field", "dim", "basis", "products", "alpha", "unit", "metadata")


class FileFormatError(ValueError):
    """Unreadable or invalid algebra file; ``where`` is a line/column or a field path."""

    def __init__(self, message: str, where: str | None = None, source: str | None = None):
        self.message = message
        self.where = where
        self.source = source
        parts = [p for p in (source, where) if p]
        super().__init__(f"{': '.join(parts)}: {message}" if parts else message)


# -- reading ------------------------------------------------------------------


def _field(doc) -> Field:
    raw = doc.get("field")
    if raw == "Q":
        return Field.rationals()
    if isinstance(raw, dict) and set(raw) == {"GF"}:
        p = raw["GF"]
        if isinstance(p, bool) or not isinstance(p, int):
            raise FileFormatError("GF characteristic must be an integer", "field.GF")
        try:
            return Field.gf(p)
        except ValueError as exc:
            raise FileFormatError(str(exc), "field.GF") from None
    raise FileFormatError('expected "Q" or {"GF": p}', "field")


def _scalar(F: Field, v, where: str):
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise FileFormatError(f"scalar must be a string, got {type(v).__name__}", where)
    try:
        return F(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise FileFormatError(str(exc), where) from None


def _index(v, n: int, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise FileFormatError("index must be an integer", where)
    if not 0 <= v < n:
        raise FileFormatError(f"index {v} out of range 0..{n - 1}", where)
    return v


def from_dict(doc) -> Algebra | HomAlgebra:
    if not isinstance(doc, dict):
        raise FileFormatError("top level must be an object")
    unknown = sorted(set(doc) - set(KEYS))
    if unknown:
        raise FileFormatError(f"unknown key {unknown[0]!r}", unknown[0])
    F = _field(doc)
    n = doc.get("dim")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FileFormatError("dim must be a positive integer", "dim")

    names = doc.get("basis")
    if names is not None:
        if not isinstance(names, list) or len(names) != n or not all(isinstance(s, str) for s in names):
            raise FileFormatError(f"basis must be a list of {n} strings", "basis")
        if len(set(names)) != n:
            raise FileFormatError("basis names must be distinct", "basis")

    sc = F.zeros((n, n, n))
    prods = doc.get("products", [])
    if not isinstance(prods, list):
        raise FileFormatError("products must be a list", "products")
    seen = set()
    for r, entry in enumerate(prods):
        where = f"products[{r}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise FileFormatError("entry must be [i, j, k, value]", where)
        i, j, k = (_index(entry[c], n, f"{where}[{c}]") for c in range(3))
        if (i, j, k) in seen:
            raise FileFormatError(f"duplicate entry for ({i}, {j}, {k})", where)
        seen.add((i, j, k))
        sc[i, j, k] = _scalar(F, entry[3], f"{where}[3]")

    unit = None
    if doc.get("unit") is not None:
        u = doc["unit"]
        if not isinstance(u, list) or len(u) != n:
            raise FileFormatError(f"unit must be a list of {n} scalars", "unit")
        unit = [_scalar(F, v, f"unit[{c}]") for c, v in enumerate(u)]

    meta = doc.get("metadata") or {}
    if not isinstance(meta, dict):
        raise FileFormatError("metadata must be an object", "metadata")

    a = Algebra(F, sc, names, unit=unit, metadata=meta)
    if doc.get("alpha") is None:
        return a
    rows = doc["alpha"]
    if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
        raise FileFormatError("alpha must be a list of rows", "alpha")
    if len(rows) != n or any(len(row) != n for row in rows):
        widths = sorted({len(row) for row in rows})
        raise FileFormatError(f"alpha must be {n} x {n}, got {len(rows)} rows of width {widths}", "alpha")
    A = F.array([[_scalar(F, v, f"alpha[{r}][{c}]") for c, v in enumerate(row)] for r, row in enumerate(rows)])
    return HomAlgebra(a, A)


def loads(text: str, source: str | None = None) -> Algebra | HomAlgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(exc.msg, f"line {exc.lineno}, column {exc.colno}", source) from None
    try:
        return from_dict(doc)
    except FileFormatError as exc:
        raise FileFormatError(exc.message, exc.where, source) from None
    except AlgebraError as exc:
        raise FileFormatError(str(exc), None, source) from None


def load(path) -> Algebra | HomAlgebra:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(exc.strerror or str(exc), None, str(path)) from None
    except UnicodeDecodeError:
        raise FileFormatError("file is not valid UTF-8", None, str(path)) from None
    return loads(text, str(path))


def resolve(spec: str, degree_bound: int = DEFAULT_DEGREE_BOUND) -> Algebra | HomAlgebra:
    """Load ``spec`` as a file path, or build it as a built-in fixture id."""
    if os.path.exists(spec):
        return load(spec)
    if spec in FIXTURES:
        return fixture(spec, degree_bound)
    raise FileFormatError(f"no such file or fixture (fixtures: {', '.join(FIXTURES)})", None, spec)


# -- writing ------------------------------------------------------------------


def _algebra_of(obj) -> Algebra:
    return obj.algebra if isinstance(obj, HomAlgebra) else obj


def to_dict(obj) -> dict:
    """Canonical document: nonzero products in (i, j, k) order, scalars in lowest terms."""
    a = _algebra_of(obj)
    F, n = a.field, a.dim
    doc: dict = {"field": "Q" if F.is_rational else {"GF": F.p}, "dim": n}
    if a.basis_names is not None:
        doc["basis"] = list(a.basis_names)
    doc["products"] = [
        [int(i), int(j), int(k), F.format(a.sc[i, j, k])] for i, j, k in zip(*np.nonzero(a.sc != 0))
    ]
    if isinstance(obj, HomAlgebra):
        doc["alpha"] = [[F.format(v) for v in row] for row in obj.alpha_matrix]
    if a.unit is not None:
        doc["unit"] = [F.format(v) for v in a.unit]
    if a.metadata:
        doc["metadata"] = a.metadata
    return doc


def hom_algebra_to_dict(h) -> dict:
    return to_dict(h)


def dumps(obj) -> str:
    """Canonical text: one product entry or matrix row per line."""
    return format_document(to_dict(obj))


def format_document(doc: dict) -> str:
    lines = []
    for key, value in doc.items():
        if key in ("products", "alpha") and value:
            rows = ",\n".join("    " + json.dumps(row, ensure_ascii=False) for row in value)
            text = "[\n" + rows + "\n  ]"
        else:
            text = json.dumps(value, ensure_ascii=False, sort_keys=key == "metadata")
        lines.append(f"  {json.dumps(key)}: {text}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


def save(obj, path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def canonical(obj) -> str:
    return dumps(obj)


__all__ = [
    "FileFormatError",
    "canonical",
    "dumps",
    "format_document",
    "from_dict",
    "hom_algebra_to_dict",
    "load",
    "loads",
    "resolve",
    "save",
    "to_dict",
]

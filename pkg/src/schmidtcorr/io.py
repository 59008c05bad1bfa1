"""File formats: numeric CSV matrices, axis sidecars, reports and sweep tables.

Floats are written with 12 significant digits and a ``.`` decimal
separator regardless of locale.  Output files are written atomically.
"""

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .distributions import axis_from_json
from .errors import InvalidInputError

__all__ = [
    "format_float",
    "read_matrix_csv",
    "matrix_to_csv",
    "read_axes_json",
    "write_atomic",
    "ReportDocument",
    "sweep_to_csv",
    "mode_to_csv",
]


def format_float(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".12g")


def _round12(x):
    x = float(x)
    return float(format(x, ".12g")) if math.isfinite(x) else None


def read_matrix_csv(path):
    """Read a plain numeric CSV (no header) into a 2-D float array."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror or exc}") from None
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            rows.append([float(cell) for cell in row])
        except ValueError:
            raise InvalidInputError(f"{path}:{lineno}: non-numeric CSV entry") from None
    if not rows:
        raise InvalidInputError(f"{path}: empty matrix")
    if len({len(r) for r in rows}) != 1:
        raise InvalidInputError(f"{path}: rows have unequal lengths")
    m = np.array(rows)
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{path}: matrix contains non-finite values")
    return m


def matrix_to_csv(m):
    return "".join(",".join(format_float(v) for v in row) + "\n" for row in np.atleast_2d(m))


def read_axes_json(path):
    """Read the two-axis sidecar.

    Accepts ``{"a": {...}, "b": {...}}`` or a two-element list; each axis is
    ``{label, lower, upper, cells}`` or ``{lattice: true, k_max}``.
    """
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: invalid JSON ({exc.msg})") from None
    if isinstance(obj, dict) and "a" in obj and "b" in obj:
        parts = [obj["a"], obj["b"]]
    elif isinstance(obj, list) and len(obj) == 2:
        parts = obj
    else:
        raise InvalidInputError(f"{path}: expected an object with keys 'a' and 'b' or a list of two axes")
    return axis_from_json(parts[0], "a"), axis_from_json(parts[1], "b")


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _clean(obj, warnings):
    if isinstance(obj, dict):
        return {k: _clean(v, warnings) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v, warnings) for v in obj]
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = _round12(obj)
        if value is None:
            warnings.append(f"non-finite value {obj!r} replaced by null")
        return value
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist(), warnings)
    return str(obj)


@dataclass
class ReportDocument:
    """JSON analysis report with a fixed key order.

    ``extra`` holds kind-specific fields and is emitted after ``weights``;
    ``metadata`` is omitted entirely in deterministic mode.
    """

    analysis_kind: str
    inputs_echo: dict
    schmidt_number: float
    correlation_sq: float
    pearson: float = None
    weights: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    modes_written_to: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    metadata: dict = None

    def to_dict(self):
        warnings = list(self.warnings)
        doc = {
            "analysis_kind": self.analysis_kind,
            "inputs_echo": self.inputs_echo,
            "schmidt_number": self.schmidt_number,
            "correlation_sq": self.correlation_sq,
            "pearson": self.pearson,
            "weights": list(self.weights),
        }
        doc.update(self.extra)
        doc["modes_written_to"] = [str(p) for p in self.modes_written_to]
        cleaned = _clean(doc, warnings)
        cleaned["warnings"] = warnings
        if self.metadata is not None:
            cleaned["metadata"] = _clean(self.metadata, [])
        return cleaned

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def sweep_to_csv(rows, columns):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(format_float(v) for v in row.values()))
    return "\n".join(lines) + "\n"


def mode_to_csv(coordinates, amplitude, labels):
    """Tabulate a sampled mode: one coordinate column per variable plus ``amplitude``.

    ``coordinates`` is a list of 1-D center arrays; ``amplitude`` has the
    matching grid shape.
    """
    amp = np.asarray(amplitude, dtype=float)
    mesh = np.meshgrid(*coordinates, indexing="ij")
    cols = [g.ravel() for g in mesh] + [amp.ravel()]
    out = [",".join(list(labels) + ["amplitude"])]
    for values in zip(*cols):
        out.append(",".join(format_float(v) for v in values))
    return "\n".join(out) + "\n"

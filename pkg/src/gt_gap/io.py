"""File formats for tensors, scalar functions and reports.

Complex numbers are stored as ``[re, im]`` pairs. Python's ``json`` writes
floats with their shortest round-trip representation, so reading back a
written tensor reproduces it bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import GapError, InvalidArgumentError, ParseError
from .gowers import ScalarFunction
from .groups import FiniteAbelianGroup
from .trilinear import TrilinearForm

REPORT_FORMATS = ("json", "csv")


def _location(text, pos):
    line = text.count("\n", 0, pos) + 1
    offset = pos - (text.rfind("\n", 0, pos) + 1)
    return line, offset


def tensor_to_json(T: TrilinearForm) -> dict:
    out = {"n": T.n}
    if T.group is not None:
        out["group"] = T.group.descriptor
    flat = T.entries.ravel()
    out["entries"] = [[float(re), float(im)] for re, im in zip(flat.real, flat.imag)]
    return out


def write_tensor(T: TrilinearForm, path) -> None:
    Path(path).write_text(json.dumps(tensor_to_json(T)), encoding="utf-8")


def parse_tensor(text: str) -> TrilinearForm:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed tensor JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    where = _location(text, max(text.find('"entries"'), 0))
    if not isinstance(obj, dict) or "n" not in obj or "entries" not in obj:
        raise ParseError('tensor JSON needs keys "n" and "entries"', 1, 0)
    n = obj["n"]
    if not isinstance(n, int) or n < 1:
        raise ParseError(f"tensor size must be a positive integer, got {n!r}", *_location(text, text.find('"n"')))
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != n**3:
        count = len(entries) if isinstance(entries, list) else "no"
        raise ParseError(f"expected {n**3} entries for n = {n}, found {count}", *where)
    try:
        arr = np.array(entries, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"entries must be [re, im] number pairs ({exc})", *where) from exc
    if arr.shape != (n**3, 2):
        raise ParseError("entries must be [re, im] number pairs", *where)
    group = None
    if "group" in obj:
        try:
            group = FiniteAbelianGroup.parse(obj["group"])
        except GapError as exc:
            raise ParseError(str(exc), *_location(text, text.find('"group"'))) from exc
    # assign parts separately so signed zeros survive
    values = np.empty(n**3, dtype=complex)
    values.real = arr[:, 0]
    values.imag = arr[:, 1]
    values = values.reshape(n, n, n)
    try:
        return TrilinearForm(values, group)
    except InvalidArgumentError as exc:
        raise ParseError(str(exc), *where) from exc


def read_tensor(path) -> TrilinearForm:
    return parse_tensor(Path(path).read_text(encoding="utf-8"))


def write_function(f: ScalarFunction, path) -> None:
    Path(path).write_text(json.dumps(f.to_json()), encoding="utf-8")


def read_function(path) -> ScalarFunction:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return ScalarFunction.from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed function JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad function file: {exc}") from exc


# -- reports -----------------------------------------------------------------

def _as_list(report):
    return list(report) if isinstance(report, (list, tuple)) else [report]


def render_report(report, fmt: str = "json", timestamp: bool = True) -> str:
    """Serialise one report (or a list of same-kind reports) to text.

    With ``timestamp=False`` the output carries no wall-clock data at all
    (no timestamp, no timings), so identical runs give identical bytes.
    """
    if fmt not in REPORT_FORMATS:
        raise InvalidArgumentError(f"unknown report format {fmt!r}; choose from {REPORT_FORMATS}")
    reports = _as_list(report)
    if fmt == "json":
        dicts = [r.to_dict(timings=timestamp) for r in reports]
        if timestamp:
            stamp = datetime.now(timezone.utc).isoformat()
            for d in dicts:
                d["timestamp"] = stamp
        payload = dicts if isinstance(report, (list, tuple)) else dicts[0]
        return json.dumps(payload, indent=2) + "\n"

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(reports[0].CSV_COLUMNS)
    for r in reports:
        for row in r.csv_rows():
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def write_report(report, fmt: str = "json", path=None, timestamp: bool = True) -> None:
    text = render_report(report, fmt, timestamp)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


class RecordReport:
    """A flat key/value report for single-shot CLI results."""

    def __init__(self, record: dict, passed: bool = True):
        self.record = dict(record)
        self.passed = passed
        self.CSV_COLUMNS = tuple(self.record)

    def to_dict(self, timings: bool = True) -> dict:
        out = dict(self.record)
        if not timings:
            out.pop("timings", None)
        return out

    def csv_rows(self):
        return [[self.record[c] for c in self.CSV_COLUMNS]]

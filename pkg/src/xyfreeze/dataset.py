"""
Self-describing dataset files.

CSV layout::

    # xyfreeze dataset
    # version = 0.1.0
    # command = sweep
    # <config key> = <value>       (sorted, one per line)
    record,<col>,<col>,...
    point,...
    summary,...

Every row carries a ``record`` tag.  ``point`` rows hold per-grid-point data
and ``summary`` rows hold detector output; both share one header, so
columns a record does not use are left empty.  Floats are written with
``repr`` so equal inputs give byte-identical files.  The JSON mirror has
keys ``version``, ``command``, ``config``, ``columns`` and ``records``.
"""

from __future__ import annotations

import csv
import io
import json
import math

from . import __version__


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


class Dataset:
    """Ordered rows plus the config that produced them."""

    def __init__(self, command: str, config_items):
        self.command = command
        self.config = sorted(config_items)
        self.records: list[dict] = []
        self._columns: list[str] = []
        #: set when a check embedded in the run did not pass
        self.failed = False

    def add(self, record: str, **values):
        row = {"record": record}
        for k, v in values.items():
            if hasattr(v, "item"):
                v = v.item()
            row[k] = v
            if k not in self._columns:
                self._columns.append(k)
        self.records.append(row)

    def point(self, **values):
        self.add("point", **values)

    def summary(self, **values):
        self.add("summary", **values)

    @property
    def columns(self) -> list[str]:
        return ["record"] + self._columns

    def summaries(self) -> list[dict]:
        return [r for r in self.records if r["record"] == "summary"]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# xyfreeze dataset\n")
        buf.write(f"# version = {__version__}\n")
        buf.write(f"# command = {self.command}\n")
        for k, v in self.config:
            buf.write(f"# {k} = {_fmt(v)}\n")
        w = csv.writer(buf, lineterminator="\n")
        cols = self.columns
        w.writerow(cols)
        for r in self.records:
            w.writerow([_fmt(r.get(c)) for c in cols])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "version": __version__,
            "command": self.command,
            "config": {k: _json_value(v) for k, v in self.config},
            "columns": self.columns,
            "records": [{k: _json_value(v) for k, v in r.items()} for r in self.records],
        }
        return json.dumps(doc, indent=1, sort_keys=False) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()

    def write(self, path, fmt: str = "csv") -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.render(fmt))


def read_csv(path) -> tuple[dict, list[dict]]:
    """Header config (as raw strings) and rows (as raw strings) of a dataset CSV."""
    header, lines = {}, []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = (s.strip() for s in body.split("=", 1))
                    header[k] = v
            else:
                lines.append(line)
    rows = list(csv.DictReader(lines))
    return header, rows

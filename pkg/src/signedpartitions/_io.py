"""CSV / JSON / whitespace emission shared by the report producers and the CLI."""

from __future__ import annotations

import csv
import json
import math
from fractions import Fraction
from typing import Iterable, Sequence, TextIO


def fmt(v) -> str:
    """Deterministic text form: ints in full, floats with 12 significant digits."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return float(fmt(v)) if math.isfinite(v) else None
    return v


def write_rows(out: TextIO, header: Sequence[str], rows: Iterable[Sequence], form: str = "csv") -> None:
    rows = list(rows)
    if form == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])
    elif form == "json":
        recs = [{k: _jsonable(v) for k, v in zip(header, r)} for r in rows]
        out.write(json.dumps(recs, indent=1, sort_keys=False) + "\n")
    elif form == "plot":
        out.write("# " + " ".join(header) + "\n")
        for r in rows:
            out.write(" ".join(fmt(v).replace(" ", "_") or "nan" for v in r) + "\n")
    else:
        raise ValueError(f"unknown format {form!r}")

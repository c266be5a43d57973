"""
Plain-text germ files.

::

    # comment
    order 5
    xi1 1 1 1
    xi2 0 2 -3/2
    xi2 4 0 24

Each data line gives a derivative coefficient ``p_jk`` (``xi1``) or ``q_jk``
(``xi2``).  Unlisted slots are zero.  The JSON variant is
``{"order": 5, "xi1": [[1, 1, "1"]], "xi2": [[0, 2, "-3/2"], [4, 0, "24"]]}``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .congruence import CongruenceGerm, germ_from_derivatives

__all__ = ["GermFileError", "parse_germ", "parse_germ_json", "read_germ", "format_germ", "format_germ_json"]

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class GermFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f"line {line}" + (f", column {column}" if column else "") + ": " if line else ""
        super().__init__(where + message)


def parse_rational(text: str) -> Fraction:
    if not _RATIONAL.match(text):
        raise ValueError(f"not a rational: {text!r}")
    value = Fraction(text)
    return value


def _build(order: int, entries: dict) -> CongruenceGerm:
    return germ_from_derivatives(entries["xi1"], entries["xi2"], order)


def _add(entries, comp, j, k, value, order, line=None, column=None):
    if j < 0 or k < 0:
        raise GermFileError(f"negative index ({j}, {k})", line, column)
    if j + k > order:
        raise GermFileError(f"index ({j}, {k}) exceeds order {order}", line, column)
    if (j, k) in entries[comp]:
        raise GermFileError(f"duplicate {comp} entry ({j}, {k})", line, column)
    entries[comp][(j, k)] = value


def parse_germ(text: str) -> CongruenceGerm:
    order = None
    entries = {"xi1": {}, "xi2": {}}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        fields = body.split()
        if not fields:
            continue
        cols = [m.start() + 1 for m in re.finditer(r"\S+", body)]
        head = fields[0]
        if head == "order":
            if order is not None:
                raise GermFileError("order given twice", lineno, cols[0])
            if len(fields) != 2 or not fields[1].isdigit():
                raise GermFileError("expected 'order N'", lineno, cols[-1])
            order = int(fields[1])
            continue
        if head not in entries:
            raise GermFileError(f"unknown keyword {head!r}", lineno, cols[0])
        if order is None:
            raise GermFileError("'order N' must precede coefficient lines", lineno, cols[0])
        if len(fields) != 4:
            raise GermFileError(f"expected '{head} j k value'", lineno, cols[0])
        for pos in (1, 2):
            if not fields[pos].isdigit():
                raise GermFileError(f"index must be a non-negative integer, got {fields[pos]!r}", lineno, cols[pos])
        try:
            value = parse_rational(fields[3])
        except (ValueError, ZeroDivisionError) as exc:
            raise GermFileError(str(exc), lineno, cols[3]) from None
        _add(entries, head, int(fields[1]), int(fields[2]), value, order, lineno, cols[1])
    if order is None:
        raise GermFileError("missing 'order N' line")
    return _build(order, entries)


def parse_germ_json(text: str) -> CongruenceGerm:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GermFileError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or not isinstance(data.get("order"), int) or data["order"] < 0:
        raise GermFileError("JSON germ needs a non-negative integer 'order'")
    order = data["order"]
    entries = {"xi1": {}, "xi2": {}}
    for comp in entries:
        for item in data.get(comp, []):
            if not (isinstance(item, list) and len(item) == 3 and all(isinstance(i, int) for i in item[:2])):
                raise GermFileError(f"{comp} entries must be [j, k, \"num/den\"], got {item!r}")
            try:
                value = parse_rational(str(item[2]))
            except (ValueError, ZeroDivisionError) as exc:
                raise GermFileError(str(exc)) from None
            _add(entries, comp, item[0], item[1], value, order)
    return _build(order, entries)


def read_germ(path, as_json: bool | None = None) -> CongruenceGerm:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if as_json is None:
        as_json = str(path).endswith(".json")
    return parse_germ_json(text) if as_json else parse_germ(text)


def _entries(germ: CongruenceGerm, keep=frozenset()):
    for comp, series in (("xi1", germ.xi1), ("xi2", germ.xi2)):
        cap = series.cap
        for n in range(cap + 1):
            for j in range(n, -1, -1):
                v = series.deriv(j, n - j)
                if v != 0 or (comp, j, n - j) in keep:
                    yield comp, j, n - j, v


def format_germ(germ: CongruenceGerm, comments=(), keep=frozenset()) -> str:
    """Text form; zero coefficients are omitted unless listed in ``keep`` as ``(comp, j, k)``."""
    lines = [f"# {c}" for c in comments]
    lines.append(f"order {germ.cap}")
    lines += [f"{comp} {j} {k} {v}" for comp, j, k, v in _entries(germ, keep)]
    return "\n".join(lines) + "\n"


def format_germ_json(germ: CongruenceGerm, keep=frozenset()) -> str:
    data = {"order": germ.cap, "xi1": [], "xi2": []}
    for comp, j, k, v in _entries(germ, keep):
        data[comp].append([j, k, str(v)])
    return json.dumps(data, indent=1) + "\n"

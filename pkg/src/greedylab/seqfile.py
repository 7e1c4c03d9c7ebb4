"""Reading and writing sequences as text.

Two encodings are accepted: a line format with one ``index value`` pair per
line (``#`` starts a comment), and a JSON object ``{"entries": [[i, "p/q"], ...]}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Union

from .seq import FinSeq


class SeqFileError(ValueError):
    pass


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_value(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise SeqFileError(f"bad value {text!r}") from None


def _build(pairs) -> FinSeq:
    last = 0
    for n, _ in pairs:
        if n <= last:
            raise SeqFileError(f"indices must be positive and strictly increasing (at {n})")
        last = n
    return FinSeq(pairs)


def loads_lines(text: str) -> FinSeq:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SeqFileError(f"line {lineno}: expected 'index value'")
        try:
            n = int(parts[0])
        except ValueError:
            raise SeqFileError(f"line {lineno}: bad index {parts[0]!r}") from None
        pairs.append((n, parse_value(parts[1])))
    return _build(pairs)


def loads_json(text: str) -> FinSeq:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SeqFileError(f"invalid JSON: {exc}") from None
    entries = obj.get("entries") if isinstance(obj, dict) else None
    if not isinstance(entries, list):
        raise SeqFileError('expected an object with an "entries" list')
    pairs = []
    for e in entries:
        if not (isinstance(e, list) and len(e) == 2 and isinstance(e[0], int) and not isinstance(e[0], bool)):
            raise SeqFileError(f"bad entry {e!r}")
        v = e[1]
        if isinstance(v, bool) or not isinstance(v, (str, int)):
            raise SeqFileError(f"bad value {v!r}")
        pairs.append((e[0], parse_value(str(v))))
    return _build(pairs)


def loads(text: str) -> FinSeq:
    """Parse either encoding, chosen by the first non-blank character."""
    return loads_json(text) if text.lstrip().startswith("{") else loads_lines(text)


def dumps_lines(f: FinSeq) -> str:
    return "".join(f"{n} {frac_str(v)}\n" for n, v in f)


def to_entries(f: FinSeq) -> list:
    return [[n, frac_str(v)] for n, v in f]


def dumps_json(f: FinSeq) -> str:
    return json.dumps({"entries": to_entries(f)})


def read(path: Union[str, Path]) -> FinSeq:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise SeqFileError(f"cannot read {path}: {exc}") from None
    return loads(text)


def write(path: Union[str, Path], f: FinSeq, fmt: str = "lines") -> None:
    text = dumps_json(f) + "\n" if fmt == "json" else dumps_lines(f)
    Path(path).write_text(text, encoding="utf-8")

"""Shared helpers for the toolkit's CSV dialect.

UTF-8, LF line endings, '.' decimal separator, '#'-prefixed comment lines,
floats printed with 17 significant digits so values round-trip exactly.
"""

import sys
from pathlib import Path
from typing import Dict, Iterator, List, Tuple, Union

from app.core.exceptions import ParseError

PathLike = Union[str, Path]
STDOUT = "-"


def fmt(value: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    return format(float(value), ".17g")


def parse_float(text: str, line: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"not a number: {text!r}", line=line) from None


def write_lines(destination: PathLike, lines: List[str]) -> None:
    """Write LF-terminated lines; ``-`` writes to standard output."""
    if str(destination) == STDOUT:
        sys.stdout.write("\n".join(lines) + "\n")
        sys.stdout.flush()
        return
    path = Path(destination)
    try:
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines))
            fh.write("\n")
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e


def read_records(source: PathLike) -> Tuple[Dict[str, str], List[Tuple[int, List[str]]]]:
    """Split a file into ``# key=value`` comments and (line number, fields) rows."""
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise OSError(f"cannot read {path}: {e.strerror or e}") from e
    meta: Dict[str, str] = {}
    rows: List[Tuple[int, List[str]]] = []
    for number, raw in _numbered(text):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                if "=" in token:
                    key, _, value = token.partition("=")
                    meta[key.strip()] = value.strip()
            continue
        rows.append((number, [field.strip() for field in line.split(",")]))
    return meta, rows


def _numbered(text: str) -> Iterator[Tuple[int, str]]:
    for index, line in enumerate(text.split("\n"), start=1):
        yield index, line.rstrip("\r")

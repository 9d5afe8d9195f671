from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, Union

from lafs.core.types import QueryScriptError

QueryKind = Literal["LA", "FS"]


@dataclass(frozen=True)
class ScriptQuery:
    line: int
    kind: QueryKind
    first: int
    second: int


def parse_query_line(line_number: int, line: str) -> ScriptQuery:
    tokens = line.split()
    if len(tokens) != 3 or tokens[0].upper() not in ("LA", "FS"):
        raise QueryScriptError(
            line_number, f"expected 'LA <node> <hops>' or 'FS <pos> <x>', got {line!r}"
        )
    try:
        first, second = int(tokens[1]), int(tokens[2])
    except ValueError as exception:
        raise QueryScriptError(
            line_number, f"non-integer argument in {line!r}"
        ) from exception
    return ScriptQuery(
        line=line_number, kind=tokens[0].upper(), first=first, second=second
    )


def iter_queries(lines: Iterable[Union[str, bytes]]) -> Iterator[ScriptQuery]:
    """
    Yield queries lazily so a caller can answer the valid prefix of a script
    before the first bad line raises. Byte lines are decoded as UTF-8.
    """
    for line_number, raw in enumerate(lines, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as exception:
                raise QueryScriptError(
                    line_number, f"invalid UTF-8 byte 0x{raw[exception.start]:02x}"
                ) from exception
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield parse_query_line(line_number, line)

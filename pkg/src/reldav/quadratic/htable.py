"""Bundled class numbers of quadratic fields, keyed by fundamental discriminant."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..errors import InvalidArgumentError
from .arith import fundamental_discriminant

TABLE_NAME = "htable.txt"


def parse_table(text: str) -> dict[int, int]:
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            dk, h = (int(x) for x in line.split())
        except ValueError:
            raise InvalidArgumentError(f"h-table line {lineno} is malformed: {line!r}") from None
        out[dk] = h
    return out


@lru_cache(maxsize=1)
def bundled_table() -> dict[int, int]:
    return parse_table(resources.files(__package__).joinpath(TABLE_NAME).read_text())


def lookup_class_number(d: int) -> int | None:
    return bundled_table().get(fundamental_discriminant(d))

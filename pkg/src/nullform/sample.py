"""Univariate sample container used by the test modules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DomainError


@dataclass(frozen=True)
class Sample:
    """An ordered collection of finite real observations."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) == 0:
            raise DomainError("a sample needs at least one observation")
        for i, v in enumerate(self.values):
            if not math.isfinite(v):
                raise DomainError(f"observation {i + 1} is not finite: {v!r}")

    @classmethod
    def from_iterable(cls, values: Iterable[float]) -> "Sample":
        return cls(tuple(float(v) for v in values))

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

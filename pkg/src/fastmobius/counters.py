"""Operation counters threaded through the transform kernels.

An addition is one ``a + b`` (or ``a - b``) whatever the operand values; sign
flips and absolute values are free.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field


@dataclass(frozen=True)
class StageCount:
    section: str | None
    label: str
    additions: int
    multiplications: int


@dataclass
class OpCounter:
    additions: int = 0
    multiplications: int = 0
    per_stage: list[StageCount] = field(default_factory=list)
    _section: str | None = field(default=None, repr=False)

    def record(self, label: str, additions: int = 0, multiplications: int = 0) -> None:
        self.additions += additions
        self.multiplications += multiplications
        self.per_stage.append(StageCount(self._section, label, additions, multiplications))

    @contextmanager
    def section(self, name: str):
        """Tag every record made inside the block with ``name``."""
        outer, self._section = self._section, name
        try:
            yield self
        finally:
            self._section = outer

    def by_section(self) -> dict[str | None, tuple[int, int]]:
        totals: dict[str | None, tuple[int, int]] = {}
        for s in self.per_stage:
            a, m = totals.get(s.section, (0, 0))
            totals[s.section] = (a + s.additions, m + s.multiplications)
        return totals


def record(counter: OpCounter | None, label: str, additions: int = 0, multiplications: int = 0) -> None:
    if counter is not None:
        counter.record(label, additions, multiplications)

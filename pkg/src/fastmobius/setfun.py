"""Frames of discernment, subset bitmasks and dense set-function vectors.

Element ``frame.elements[i]`` is bit ``i`` of a subset code (least significant
bit first), so a set function over a frame of size ``n`` is a vector of
``2**n`` floats indexed by bitmask.
"""

from __future__ import annotations

import enum
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    CapacityExceeded,
    DimensionMismatch,
    DuplicateMember,
    ElementNotInFrame,
    FormatError,
)

MAX_N = 30
WARN_N = 22
CAP_ENV = "FASTMOBIUS_MAX_N"
SUM_TOL = 1e-9


class Kind(str, enum.Enum):
    MASS = "mass"
    BELIEF = "belief"
    COMMONALITY = "commonality"
    PLAUSIBILITY = "plausibility"
    RAW = "raw"


def capacity_limit() -> int:
    """Largest admissible frame size, lowered by ``$FASTMOBIUS_MAX_N`` if set."""
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return MAX_N
    try:
        cap = int(raw)
    except ValueError:
        raise FormatError(f"{CAP_ENV}={raw!r} is not an integer") from None
    return max(1, min(cap, MAX_N))


def check_capacity(n: int) -> None:
    cap = capacity_limit()
    if not 1 <= n <= cap:
        raise CapacityExceeded(f"frame size {n} outside 1..{cap}")


@dataclass(frozen=True)
class Frame:
    elements: tuple[str, ...]

    def __init__(self, elements: Iterable[str]):
        elements = tuple(elements)
        for e in elements:
            if not isinstance(e, str) or not e:
                raise FormatError(f"frame labels must be non-empty strings, got {e!r}")
        if len(set(elements)) != len(elements):
            dup = next(e for e in elements if elements.count(e) > 1)
            raise DuplicateMember(f"label {dup!r} repeated in frame")
        if not 1 <= len(elements) <= MAX_N:
            raise CapacityExceeded(f"frame size {len(elements)} outside 1..{MAX_N}")
        object.__setattr__(self, "elements", elements)

    @classmethod
    def of_size(cls, n: int) -> Frame:
        """Frame ``a, b, c, ...`` (falling back to ``e0, e1, ...`` past 26)."""
        if n <= 26:
            return cls(chr(ord("a") + i) for i in range(n))
        return cls(f"e{i}" for i in range(n))

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def size(self) -> int:
        """Number of subsets, ``2**n``."""
        return 1 << len(self.elements)

    @property
    def full(self) -> int:
        return (1 << len(self.elements)) - 1

    def index(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise ElementNotInFrame(f"element {label!r} not in frame {list(self.elements)}") from None

    def encode(self, members: Iterable[str]) -> int:
        return encode_subset(self, members)

    def decode(self, mask: int) -> list[str]:
        return decode_subset(self, mask)

    def permuted(self, order: Sequence[int]) -> Frame:
        return Frame(self.elements[i] for i in order)


def encode_subset(frame: Frame, members: Iterable[str]) -> int:
    mask = 0
    for label in members:
        bit = 1 << frame.index(label)
        if mask & bit:
            raise DuplicateMember(f"element {label!r} listed twice")
        mask |= bit
    return mask


def decode_subset(frame: Frame, mask: int) -> list[str]:
    if not 0 <= mask <= frame.full:
        raise DimensionMismatch(f"mask {mask} out of range for n={frame.n}")
    return [e for i, e in enumerate(frame.elements) if mask >> i & 1]


def is_subset(x: int, y: int) -> bool:
    return x & y == x


def popcounts(n: int) -> np.ndarray:
    """Cardinality of every subset of an ``n``-element frame, indexed by mask."""
    counts = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        counts[1 << i : 1 << (i + 1)] = counts[: 1 << i] + 1
    return counts


@dataclass(frozen=True, eq=False)
class SetFunction:
    """Immutable dense function on the powerset of ``frame``."""

    frame: Frame
    values: np.ndarray
    kind: Kind = Kind.RAW

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (self.frame.size,):
            raise DimensionMismatch(
                f"expected {self.frame.size} values for n={self.frame.n}, got shape {values.shape}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "kind", Kind(self.kind))

    @classmethod
    def zeros(cls, frame: Frame, kind: Kind | str = Kind.RAW) -> SetFunction:
        return cls(frame, np.zeros(frame.size), kind)

    @classmethod
    def from_subsets(
        cls, frame: Frame, entries: Mapping[Iterable[str] | str, float], kind: Kind | str = Kind.MASS
    ) -> SetFunction:
        """Build from ``{members: value}``; a string key is split on commas."""
        values = np.zeros(frame.size)
        for members, v in entries.items():
            if isinstance(members, str):
                members = _split_key(members)
            values[encode_subset(frame, members)] += v
        return cls(frame, values, kind)

    @classmethod
    def vacuous(cls, frame: Frame) -> SetFunction:
        """Mass function with all mass on the whole frame."""
        values = np.zeros(frame.size)
        values[frame.full] = 1.0
        return cls(frame, values, Kind.MASS)

    @property
    def n(self) -> int:
        return self.frame.n

    def __getitem__(self, members: Iterable[str] | str) -> float:
        if isinstance(members, str):
            members = _split_key(members)
        return float(self.values[encode_subset(self.frame, members)])

    def with_values(self, values: np.ndarray, kind: Kind | str | None = None) -> SetFunction:
        return SetFunction(self.frame, values, self.kind if kind is None else kind)

    def allclose(self, other: SetFunction, atol: float = 1e-12) -> bool:
        return self.frame == other.frame and bool(np.allclose(self.values, other.values, rtol=0, atol=atol))

    def items(self, skip_zero: bool = True):
        """Yield ``(members, value)`` in mask order."""
        for mask, v in enumerate(self.values):
            if skip_zero and v == 0.0:
                continue
            yield decode_subset(self.frame, mask), float(v)

    def __repr__(self):
        return f"SetFunction(kind={self.kind.value}, frame={list(self.frame.elements)}, values={self.values.tolist()})"


@dataclass
class BBAReport:
    violations: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid


def validate_bba(f: SetFunction, exclude_empty: bool = False, tol: float = SUM_TOL) -> BBAReport:
    """List the ways ``f`` fails to be a basic belief assignment."""
    report = BBAReport()
    if f.kind is not Kind.MASS:
        report.violations.append(f"kind is {f.kind.value}, not mass")
    neg = np.flatnonzero(f.values < 0)
    if neg.size:
        sets = ", ".join("{" + ",".join(decode_subset(f.frame, int(m))) + "}" for m in neg[:5])
        report.violations.append(f"negative mass on {neg.size} subset(s): {sets}")
    total = math.fsum(f.values)
    if abs(total - 1.0) > tol:
        report.violations.append(f"masses sum to {total!r}, not 1")
    if exclude_empty and f.values[0] != 0.0:
        report.violations.append(f"m(∅)≠0 (m(∅)={f.values[0]!r})")
    return report


# -- JSON exchange format ---------------------------------------------------


def _split_key(key: str) -> list[str]:
    key = key.strip()
    if not key:
        return []
    return [part.strip() for part in key.split(",")]


def subset_key(frame: Frame, mask: int) -> str:
    return ",".join(decode_subset(frame, mask))


def _round_sig(v: float, digits: int) -> float:
    return float(f"{v:.{digits}g}")


def setfunction_to_json(f: SetFunction, dense: bool = False, digits: int = 12) -> dict:
    """Serialise to the sparse (default) or dense JSON layout."""
    for label in f.frame.elements:
        if "," in label:
            raise FormatError(f"label {label!r} contains a comma and cannot be written as a subset key")
    doc: dict = {"frame": list(f.frame.elements), "kind": f.kind.value}
    if dense:
        doc["dense"] = [_round_sig(float(v), digits) for v in f.values]
    else:
        doc["values"] = {
            subset_key(f.frame, mask): _round_sig(float(v), digits)
            for mask, v in enumerate(f.values)
            if v != 0.0
        }
    return doc


def setfunction_from_json(doc: Mapping) -> SetFunction:
    if not isinstance(doc, Mapping):
        raise FormatError("top-level JSON value must be an object")
    try:
        frame_labels = doc["frame"]
    except KeyError:
        raise FormatError("missing key 'frame'") from None
    if not isinstance(frame_labels, list):
        raise FormatError("key 'frame': expected a list of labels")
    frame = Frame(frame_labels)
    kind_name = doc.get("kind", "raw")
    try:
        kind = Kind(kind_name)
    except ValueError:
        raise FormatError(f"key 'kind': unknown kind {kind_name!r}") from None
    if ("values" in doc) == ("dense" in doc):
        raise FormatError("exactly one of 'values' or 'dense' is required")
    if "dense" in doc:
        dense = doc["dense"]
        if not isinstance(dense, list) or len(dense) != frame.size:
            got = len(dense) if isinstance(dense, list) else type(dense).__name__
            raise FormatError(f"key 'dense': expected {frame.size} numbers, got {got}")
        try:
            return SetFunction(frame, np.asarray(dense, dtype=np.float64), kind)
        except (TypeError, ValueError) as exc:
            raise FormatError(f"key 'dense': {exc}") from None
    values = np.zeros(frame.size)
    entries = doc["values"]
    if not isinstance(entries, Mapping):
        raise FormatError("key 'values': expected an object keyed by subset")
    seen: dict[int, str] = {}
    for key, v in entries.items():
        try:
            mask = encode_subset(frame, _split_key(key))
        except (ElementNotInFrame, DuplicateMember) as exc:
            raise FormatError(f"values[{key!r}]: {exc}") from None
        if mask in seen:
            raise FormatError(f"values[{key!r}]: same subset as values[{seen[mask]!r}]")
        seen[mask] = key
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise FormatError(f"values[{key!r}]: expected a number, got {v!r}")
        values[mask] = float(v)
    return SetFunction(frame, values, kind)


def load_setfunction(path: str | Path) -> SetFunction:
    return setfunction_from_json(read_json(path))


def save_setfunction(f: SetFunction, path: str | Path, dense: bool = False, digits: int = 12) -> None:
    Path(path).write_text(json.dumps(setfunction_to_json(f, dense, digits), indent=2) + "\n")


def read_json(path: str | Path):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None

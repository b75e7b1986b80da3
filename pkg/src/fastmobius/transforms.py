"""Fast Möbius transforms on the powerset lattice, their inverses, and naive oracles.

Every fast kernel is ``n`` in-place passes over a ``2**n`` buffer. Pass ``i``
pairs each subset lacking element ``i`` with the subset that adds it; the
buffer is viewed as ``(2**(n-i-1), 2, 2**i)`` so the middle axis is bit ``i``
and one pass is a single vectorised update. Arrays may carry leading batch
axes; the last axis is always the subset index.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from typing import Sequence

import numpy as np

from .counters import OpCounter, record
from .errors import DimensionMismatch
from .graph import FiniteSet, Graph, MAlgorithm
from .setfun import Frame, Kind, SetFunction, popcounts


class TransformKind(str, enum.Enum):
    MASS_TO_BEL = "mass_to_bel"
    MASS_TO_BEL_FULL = "mass_to_bel_full"
    BEL_TO_MASS = "bel_to_mass"
    MASS_TO_Q = "mass_to_q"
    Q_TO_MASS = "q_to_mass"
    Q_TO_PL = "q_to_pl"

    @property
    def source_kind(self) -> Kind:
        return _KINDS[self][0]

    @property
    def target_kind(self) -> Kind:
        return _KINDS[self][1]


_KINDS = {
    TransformKind.MASS_TO_BEL: (Kind.MASS, Kind.BELIEF),
    TransformKind.MASS_TO_BEL_FULL: (Kind.MASS, Kind.BELIEF),
    TransformKind.BEL_TO_MASS: (Kind.BELIEF, Kind.MASS),
    TransformKind.MASS_TO_Q: (Kind.MASS, Kind.COMMONALITY),
    TransformKind.Q_TO_MASS: (Kind.COMMONALITY, Kind.MASS),
    TransformKind.Q_TO_PL: (Kind.COMMONALITY, Kind.PLAUSIBILITY),
}


def _frame_bits(values: np.ndarray) -> int:
    size = values.shape[-1]
    n = size.bit_length() - 1
    if size < 2 or 1 << n != size:
        raise DimensionMismatch(f"last axis must have length 2**n with n >= 1, got {size}")
    return n


def _pass_order(n: int, order: Sequence[int] | None) -> list[int]:
    if order is None:
        return list(range(n))
    order = [int(i) for i in order]
    if sorted(order) != list(range(n)):
        raise ValueError(f"order must be a permutation of range({n}), got {order}")
    return order


def _batch(values: np.ndarray) -> int:
    return int(np.prod(values.shape[:-1], dtype=np.int64))


def _pass(buf: np.ndarray, n: int, i: int, upward: bool, sign: float, skip_empty: bool) -> int:
    """One in-place pass along bit ``i``; returns additions per vector.

    ``upward``: every Y containing element i receives Y minus i (subset sums).
    Otherwise every Y lacking i receives Y plus i (superset sums).
    ``skip_empty`` leaves out the single upward addition whose source is the
    empty set.
    """
    v = buf.reshape(buf.shape[:-1] + (1 << (n - i - 1), 2, 1 << i))
    half = 1 << (n - 1)
    if not upward:
        if sign > 0:
            v[..., 0, :] += v[..., 1, :]
        else:
            v[..., 0, :] -= v[..., 1, :]
        return half
    if skip_empty:
        # block 0 holds the empty set at column 0
        if sign > 0:
            v[..., 0, 1, 1:] += v[..., 0, 0, 1:]
            v[..., 1:, 1, :] += v[..., 1:, 0, :]
        else:
            v[..., 0, 1, 1:] -= v[..., 0, 0, 1:]
            v[..., 1:, 1, :] -= v[..., 1:, 0, :]
        return half - 1
    if sign > 0:
        v[..., 1, :] += v[..., 0, :]
    else:
        v[..., 1, :] -= v[..., 0, :]
    return half


def _run_passes(
    values, upward: bool, sign: float, skip_empty: bool, counter: OpCounter | None, order, label: str
) -> np.ndarray:
    buf = np.array(values, dtype=np.float64, copy=True)
    n = _frame_bits(buf)
    if skip_empty:
        buf[..., 0] = 0.0
    batch = _batch(buf)
    for i in _pass_order(n, order):
        adds = _pass(buf, n, i, upward, sign, skip_empty)
        record(counter, f"{label} pass {i}", additions=adds * batch)
    return buf


def fast_array(
    kind: TransformKind | str, values, counter: OpCounter | None = None, order: Sequence[int] | None = None
) -> np.ndarray:
    """Apply a fast transform to an array whose last axis has length ``2**n``."""
    kind = TransformKind(kind)
    label = kind.value
    if kind is TransformKind.MASS_TO_BEL:
        return _run_passes(values, True, 1.0, True, counter, order, label)
    if kind is TransformKind.MASS_TO_BEL_FULL:
        return _run_passes(values, True, 1.0, False, counter, order, label)
    if kind is TransformKind.BEL_TO_MASS:
        return _run_passes(values, True, -1.0, False, counter, order, label)
    if kind is TransformKind.MASS_TO_Q:
        return _run_passes(values, False, 1.0, False, counter, order, label)
    if kind is TransformKind.Q_TO_MASS:
        return _run_passes(values, False, -1.0, False, counter, order, label)
    # Q -> Pl: alternating subset sums over nonempty X, then |.|
    out = _run_passes(values, True, -1.0, True, counter, order, label)
    np.abs(out, out=out)
    return out


def _wrap(kind: TransformKind, f: SetFunction, values: np.ndarray) -> SetFunction:
    return SetFunction(f.frame, values, kind.target_kind)


def fast_transform(kind, f: SetFunction, counter: OpCounter | None = None, order=None) -> SetFunction:
    kind = TransformKind(kind)
    return _wrap(kind, f, fast_array(kind, f.values, counter, order))


def fmt_mass_to_bel(f: SetFunction, include_empty: bool = False, counter: OpCounter | None = None, order=None):
    """Belief from mass. By default the empty set's mass is not counted, so
    ``bel(∅) = 0``; ``include_empty`` gives the plain subset-sum transform."""
    kind = TransformKind.MASS_TO_BEL_FULL if include_empty else TransformKind.MASS_TO_BEL
    return fast_transform(kind, f, counter, order)


def fmt_bel_to_mass(f: SetFunction, counter: OpCounter | None = None, order=None) -> SetFunction:
    """Mass from belief; exact inverse of ``fmt_mass_to_bel(include_empty=True)``."""
    return fast_transform(TransformKind.BEL_TO_MASS, f, counter, order)


def fmt_mass_to_q(f: SetFunction, counter: OpCounter | None = None, order=None) -> SetFunction:
    return fast_transform(TransformKind.MASS_TO_Q, f, counter, order)


def fmt_q_to_mass(f: SetFunction, counter: OpCounter | None = None, order=None) -> SetFunction:
    return fast_transform(TransformKind.Q_TO_MASS, f, counter, order)


def q_to_pl(f: SetFunction, counter: OpCounter | None = None, order=None) -> SetFunction:
    """Plausibility from commonality.

    The alternating sum is taken in absolute value, which is only right when
    the commonality comes from a nonnegative mass function.
    """
    return fast_transform(TransformKind.Q_TO_PL, f, counter, order)


# -- naive oracles ----------------------------------------------------------


def submasks(mask: int) -> np.ndarray:
    """Every subset of ``mask``, in increasing order."""
    out = np.zeros(1, dtype=np.int64)
    bit = 1
    while bit <= mask:
        if mask & bit:
            out = np.concatenate([out, out | bit])
        bit <<= 1
    return out


@lru_cache(maxsize=8)
def _parity(n: int) -> np.ndarray:
    par = popcounts(n) & 1
    par.setflags(write=False)
    return par


def _naive_terms(kind: TransformKind, n: int, y: int) -> tuple[np.ndarray, np.ndarray | None]:
    """Source subsets feeding target ``y`` and their signs (``None`` = all +1)."""
    full = (1 << n) - 1
    par = _parity(n)
    if kind in (TransformKind.MASS_TO_BEL, TransformKind.MASS_TO_BEL_FULL, TransformKind.BEL_TO_MASS):
        xs = submasks(y)
        if kind is TransformKind.MASS_TO_BEL:
            xs = xs[1:]
        if kind is TransformKind.BEL_TO_MASS:
            return xs, np.where(par[y ^ xs] == 1, -1.0, 1.0)
        return xs, None
    if kind in (TransformKind.MASS_TO_Q, TransformKind.Q_TO_MASS):
        xs = y | submasks(full & ~y)
        if kind is TransformKind.Q_TO_MASS:
            return xs, np.where(par[xs ^ y] == 1, -1.0, 1.0)
        return xs, None
    # Q -> Pl: sum over nonempty X ⊆ A of (-1)**(#X + 1) Q(X)
    xs = submasks(y)[1:]
    return xs, np.where(par[xs] == 1, 1.0, -1.0)


def naive_array(kind: TransformKind | str, values, counter: OpCounter | None = None) -> np.ndarray:
    """Evaluate the defining sum of ``kind`` target by target.

    Each target with ``k`` contributing terms costs ``k - 1`` additions.
    """
    kind = TransformKind(kind)
    values = np.asarray(values, dtype=np.float64)
    n = _frame_bits(values)
    out = np.zeros_like(values)
    adds = 0
    for y in range(1 << n):
        xs, signs = _naive_terms(kind, n, y)
        if xs.size == 0:
            continue
        terms = values[..., xs]
        if signs is not None:
            terms = terms * signs
        out[..., y] = terms.sum(axis=-1)
        adds += xs.size - 1
    record(counter, f"naive {kind.value}", additions=adds * _batch(values))
    return out


def naive_transform(kind, f: SetFunction, counter: OpCounter | None = None) -> SetFunction:
    kind = TransformKind(kind)
    return _wrap(kind, f, naive_array(kind, f.values, counter))


def naive_plausibility_array(masses, counter: OpCounter | None = None) -> np.ndarray:
    """Plausibility straight from mass: ``Pl(A) = b(Ω) - b(Ω - A)``.

    ``b`` is the plain subset sum, evaluated naively. Only those additions are
    counted; the final complement subtraction is not.
    """
    b = naive_array(TransformKind.MASS_TO_BEL_FULL, masses, counter)
    full = b.shape[-1] - 1
    comp = full ^ np.arange(b.shape[-1])
    return b[..., full : full + 1] - b[..., comp]


def naive_plausibility(m: SetFunction, counter: OpCounter | None = None) -> SetFunction:
    return SetFunction(m.frame, naive_plausibility_array(m.values, counter), Kind.PLAUSIBILITY)


def plausibility_by_definition(m: SetFunction) -> SetFunction:
    """``Pl(A) = sum of m(X) over X meeting A``; uncounted, for tests."""
    size = m.frame.size
    idx = np.arange(size)
    meets = (idx[:, None] & idx[None, :]) != 0
    return SetFunction(m.frame, m.values @ meets, Kind.PLAUSIBILITY)


# -- explicit stage graphs --------------------------------------------------


def powerset(n: int) -> FiniteSet:
    return FiniteSet(1 << n, name=f"P({n})")


def _n_of(frame: Frame | int) -> int:
    return frame.n if isinstance(frame, Frame) else int(frame)


def hasse_stage(n: int, i: int, relation: str = "subset", exclude_empty: bool = False) -> Graph:
    """Stage graph for element ``i``: ``Y = X`` or ``Y = X + a_i`` (subset),
    ``Y = X`` or ``Y = X - a_i`` (superset); sources restricted to X≠∅ if asked."""
    ps = powerset(n)
    xs = np.arange(1 << n, dtype=np.int64)
    bit = 1 << i
    if relation == "subset":
        movers = xs[(xs & bit) == 0]
        src = np.concatenate([xs, movers])
        dst = np.concatenate([xs, movers | bit])
    elif relation == "superset":
        movers = xs[(xs & bit) != 0]
        src = np.concatenate([xs, movers])
        dst = np.concatenate([xs, movers & ~bit])
    else:
        raise ValueError(f"relation must be 'subset' or 'superset', got {relation!r}")
    if exclude_empty:
        keep = src != 0
        src, dst = src[keep], dst[keep]
    return Graph.from_arrays(ps, ps, src, dst)


def hasse_sequence(
    frame: Frame | int, relation: str = "subset", exclude_empty: bool = False, order: Sequence[int] | None = None
) -> MAlgorithm:
    """The ``n``-stage Hasse M-algorithm; ``order`` picks the element per stage."""
    n = _n_of(frame)
    return MAlgorithm([hasse_stage(n, i, relation, exclude_empty) for i in _pass_order(n, order)])


def _ternary_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All ``(X, Y)`` with ``X ⊆ Y``: each element is in neither, Y only, or both."""
    xs = np.zeros(1, dtype=np.int64)
    ys = np.zeros(1, dtype=np.int64)
    for i in range(n):
        bit = 1 << i
        xs = np.concatenate([xs, xs, xs | bit])
        ys = np.concatenate([ys, ys | bit, ys | bit])
    return xs, ys


def obvious_graph(frame: Frame | int, relation: str = "subset", exclude_empty: bool = False) -> Graph:
    """The whole relation as a single graph (the one-stage M-algorithm)."""
    n = _n_of(frame)
    small, big = _ternary_pairs(n)
    if relation == "subset":
        src, dst = small, big
    elif relation == "superset":
        src, dst = big, small
    else:
        raise ValueError(f"relation must be 'subset' or 'superset', got {relation!r}")
    if exclude_empty:
        keep = src != 0
        src, dst = src[keep], dst[keep]
    ps = powerset(n)
    return Graph.from_arrays(ps, ps, src, dst)

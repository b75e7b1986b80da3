"""Dempster's rule of combination, naive and through commonalities.

Combination is unnormalised: mass landing on the empty set is kept and
reported as ``conflict``. :func:`normalize` is the explicit opt-in.
"""

from __future__ import annotations

from contextlib import nullcontext
from dataclasses import dataclass

import numpy as np

from .counters import OpCounter, record
from .errors import FrameMismatch, InvalidBBA, TotalConflict
from .setfun import Kind, SetFunction, validate_bba
from .transforms import TransformKind, fast_array, naive_plausibility_array

TOTAL_CONFLICT_TOL = 1e-12


@dataclass(frozen=True)
class CombinationResult:
    combined: SetFunction
    conflict: float
    normalized: bool = False

    @classmethod
    def unnormalized(cls, combined: SetFunction) -> CombinationResult:
        return cls(combined, float(combined.values[0]))


def _section(counter: OpCounter | None, name: str):
    return counter.section(name) if counter is not None else nullcontext()


def _check_pair(m1: SetFunction, m2: SetFunction, strict: bool) -> None:
    if m1.frame != m2.frame:
        raise FrameMismatch(f"frames differ: {list(m1.frame.elements)} vs {list(m2.frame.elements)}")
    if strict:
        for name, m in (("m1", m1), ("m2", m2)):
            report = validate_bba(m)
            if not report:
                raise InvalidBBA(f"{name}: " + "; ".join(report.violations))


def dempster_naive_array(v1: np.ndarray, v2: np.ndarray, counter: OpCounter | None = None) -> np.ndarray:
    """Every product ``m1(X) m2(Y)`` accumulated on ``X ∩ Y``."""
    size = v1.shape[-1]
    idx = np.arange(size)
    meet = (idx[:, None] & idx[None, :]).ravel()
    products = np.multiply.outer(v1, v2).ravel()
    out = np.bincount(meet, weights=products, minlength=size)
    terms = np.bincount(meet, minlength=size)
    record(
        counter,
        "pairwise products",
        additions=int(terms.sum() - np.count_nonzero(terms)),
        multiplications=int(products.size),
    )
    return out


def dempster_naive(
    m1: SetFunction, m2: SetFunction, strict: bool = False, counter: OpCounter | None = None
) -> CombinationResult:
    _check_pair(m1, m2, strict)
    with _section(counter, "A"):
        out = dempster_naive_array(m1.values, m2.values, counter)
    return CombinationResult.unnormalized(SetFunction(m1.frame, out, Kind.MASS))


def _commonality_product(m1: SetFunction, m2: SetFunction, counter: OpCounter | None) -> np.ndarray:
    with _section(counter, "X"):
        q1 = fast_array(TransformKind.MASS_TO_Q, m1.values, counter)
        q2 = fast_array(TransformKind.MASS_TO_Q, m2.values, counter)
    with _section(counter, "Y"):
        q = q1 * q2
        record(counter, "pointwise product", multiplications=int(q.size))
    return q


def dempster_fast(
    m1: SetFunction, m2: SetFunction, strict: bool = False, counter: OpCounter | None = None
) -> CombinationResult:
    """Combine through commonalities: ``Q12 = Q1 * Q2`` then back to mass."""
    _check_pair(m1, m2, strict)
    q = _commonality_product(m1, m2, counter)
    with _section(counter, "inverse"):
        out = fast_array(TransformKind.Q_TO_MASS, q, counter)
    return CombinationResult.unnormalized(SetFunction(m1.frame, out, Kind.MASS))


def dempster(m1: SetFunction, m2: SetFunction, algo: str = "fast", **kwargs) -> CombinationResult:
    if algo == "fast":
        return dempster_fast(m1, m2, **kwargs)
    if algo == "naive":
        return dempster_naive(m1, m2, **kwargs)
    raise ValueError(f"algo must be 'fast' or 'naive', got {algo!r}")


def combine_to_plausibility(
    m1: SetFunction, m2: SetFunction, algo: str = "fast", counter: OpCounter | None = None
) -> SetFunction:
    """Plausibility of ``m1 ⊗ m2``.

    ``fast``: commonalities (X), pointwise product (Y), commonality to
    plausibility (Z). ``naive``: pairwise combination (A), then plausibility
    from the combined mass (B). Counter sections are named after those steps.
    """
    _check_pair(m1, m2, strict=False)
    if algo == "fast":
        q = _commonality_product(m1, m2, counter)
        with _section(counter, "Z"):
            pl = fast_array(TransformKind.Q_TO_PL, q, counter)
    elif algo == "naive":
        combined = dempster_naive(m1, m2, counter=counter).combined
        with _section(counter, "B"):
            pl = naive_plausibility_array(combined.values, counter)
    else:
        raise ValueError(f"algo must be 'fast' or 'naive', got {algo!r}")
    return SetFunction(m1.frame, pl, Kind.PLAUSIBILITY)


def normalize(r: CombinationResult) -> CombinationResult:
    """Zero the empty-set cell and divide the rest by ``1 - conflict``."""
    k = r.conflict
    if abs(1.0 - k) <= TOTAL_CONFLICT_TOL or k > 1.0:
        raise TotalConflict(f"conflict {k!r}: sources are completely contradictory")
    values = np.array(r.combined.values)
    values[0] = 0.0
    values /= 1.0 - k
    return CombinationResult(r.combined.with_values(values), k, normalized=True)

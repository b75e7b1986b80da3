"""Möbius transforms of finite graphs and weighted graphs.

A :class:`Graph` ``S -> T`` is a set of arrows ``(s, t)``; its Möbius
transform pushes a vector over ``S`` along the arrows and sums at each target.
A :class:`WeightedGraph` is a sparse ``#S x #T`` matrix and acts on vectors by
the vector-matrix product. Arrows are kept as sorted, de-duplicated index
arrays so that relations with millions of arrows stay cheap; products and
compositions go through :mod:`scipy.sparse`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product as iproduct
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, FormatError, NotAPartialOrder, SetMismatch


@dataclass(frozen=True)
class FiniteSet:
    """Index set ``0..size-1``; equality ignores labels."""

    size: int
    name: str = ""
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("size must be non-negative")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.size:
                raise ValueError(f"{len(self.labels)} labels for a set of size {self.size}")

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)


def _as_set(s: FiniteSet | int) -> FiniteSet:
    return s if isinstance(s, FiniteSet) else FiniteSet(int(s))


class Graph:
    """Finite directed graph (binary relation) from ``source`` to ``target``."""

    __slots__ = ("source", "target", "src", "dst")

    def __init__(self, source: FiniteSet | int, target: FiniteSet | int, arrows: Iterable[tuple[int, int]] = ()):
        arrows = list(arrows)
        pairs = np.asarray(arrows, dtype=np.int64).reshape(-1, 2)
        self._init(_as_set(source), _as_set(target), pairs[:, 0], pairs[:, 1], unique=False)

    def _init(self, source, target, src, dst, unique):
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        if src.size and (src.min() < 0 or src.max() >= source.size or dst.min() < 0 or dst.max() >= target.size):
            raise DimensionMismatch(f"arrow index outside {source.size}x{target.size}")
        if not unique:
            keys = np.unique(src * max(target.size, 1) + dst)
            src, dst = np.divmod(keys, max(target.size, 1))
        self.source, self.target, self.src, self.dst = source, target, src, dst

    @classmethod
    def from_arrays(cls, source, target, src, dst, unique: bool = False) -> Graph:
        """Build from parallel index arrays. ``unique=True`` skips de-duplication."""
        g = cls.__new__(cls)
        g._init(_as_set(source), _as_set(target), src, dst, unique)
        return g

    @classmethod
    def from_matrix(cls, source, target, matrix) -> Graph:
        coo = sp.coo_array(matrix)
        keep = coo.data != 0
        return cls.from_arrays(source, target, coo.row[keep], coo.col[keep])

    @classmethod
    def identity(cls, s: FiniteSet | int) -> Graph:
        s = _as_set(s)
        idx = np.arange(s.size)
        return cls.from_arrays(s, s, idx, idx, unique=True)

    @classmethod
    def empty(cls, source, target) -> Graph:
        return cls.from_arrays(source, target, [], [], unique=True)

    def __len__(self):
        return int(self.src.size)

    def __iter__(self):
        return zip(self.src.tolist(), self.dst.tolist())

    def __contains__(self, arrow):
        s, t = arrow
        return bool(np.any((self.src == s) & (self.dst == t)))

    @property
    def arrows(self) -> frozenset[tuple[int, int]]:
        return frozenset(self)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
        )

    def __hash__(self):
        return hash((self.source, self.target, self.src.tobytes(), self.dst.tobytes()))

    def __repr__(self):
        return f"Graph({self.source.size}->{self.target.size}, {len(self)} arrows)"

    def matrix(self, dtype=np.int64) -> sp.csr_array:
        data = np.ones(self.src.size, dtype=dtype)
        return sp.csr_array((data, (self.src, self.dst)), shape=(self.source.size, self.target.size))

    def dense(self) -> np.ndarray:
        m = np.zeros((self.source.size, self.target.size), dtype=bool)
        m[self.src, self.dst] = True
        return m

    def preimage_sizes(self) -> np.ndarray:
        """``#G^-1(t)`` for every target ``t``."""
        return np.bincount(self.dst, minlength=self.target.size)

    def image(self) -> np.ndarray:
        return np.unique(self.dst)

    def union(self, other: Graph) -> Graph:
        _check_same_sets(self, other)
        return Graph.from_arrays(
            self.source, self.target, np.concatenate([self.src, other.src]), np.concatenate([self.dst, other.dst])
        )

    def issubset(self, other: Graph) -> bool:
        _check_same_sets(self, other)
        return len(self.union(other)) == len(other)


class WeightedGraph:
    """Sparse incidence function ``S x T -> R``; absent entries are zero."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FiniteSet | int, target: FiniteSet | int, weights=None):
        """``weights`` is a mapping ``{(s, t): w}``, an iterable of ``(s, t, w)``
        triples, or anything :mod:`scipy.sparse` accepts as a matrix."""
        source, target = _as_set(source), _as_set(target)
        shape = (source.size, target.size)
        if weights is None:
            mat = sp.csr_array(shape, dtype=np.int64)
        elif isinstance(weights, dict) or (isinstance(weights, (list, tuple)) and _looks_like_triples(weights)):
            triples = [(s, t, w) for (s, t), w in weights.items()] if isinstance(weights, dict) else list(weights)
            if triples:
                rows, cols, vals = zip(*triples)
            else:
                rows, cols, vals = (), (), ()
            vals = np.asarray(vals)
            if vals.dtype.kind not in "iuf":
                vals = vals.astype(np.float64)
            rows, cols = np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64)
            if rows.size and (rows.min() < 0 or rows.max() >= shape[0] or cols.min() < 0 or cols.max() >= shape[1]):
                raise DimensionMismatch(f"weight index outside {shape[0]}x{shape[1]}")
            mat = sp.csr_array((vals, (rows, cols)), shape=shape)
        else:
            mat = sp.csr_array(weights)
            if mat.shape != shape:
                raise DimensionMismatch(f"matrix shape {mat.shape} != {shape}")
        mat.sum_duplicates()
        mat.eliminate_zeros()
        self.source, self.target, self.matrix = source, target, mat

    @classmethod
    def kronecker(cls, s: FiniteSet | int) -> WeightedGraph:
        """Identity weighted graph (Kronecker delta) on ``s``."""
        s = _as_set(s)
        return cls(s, s, sp.identity(s.size, dtype=np.int64, format="csr"))

    def weight(self, s: int, t: int):
        return self.matrix[s, t].item()

    def entries(self) -> dict[tuple[int, int], float]:
        coo = self.matrix.tocoo()
        return {(int(r), int(c)): v.item() for r, c, v in zip(coo.row, coo.col, coo.data)}

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def support(self) -> Graph:
        return Graph.from_matrix(self.source, self.target, self.matrix)

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and (self.matrix != other.matrix).nnz == 0
        )

    def __mul__(self, other: WeightedGraph) -> WeightedGraph:
        return product_weighted(self, other)

    def __repr__(self):
        return f"WeightedGraph({self.source.size}->{self.target.size}, {self.matrix.nnz} entries)"


def _looks_like_triples(seq) -> bool:
    return all(isinstance(x, (list, tuple)) and len(x) == 3 for x in seq)


Stage = Union[Graph, WeightedGraph]


@dataclass
class MAlgorithm:
    """Sequence of queueing graphs ``S0 -> S1 -> ... -> Sn``."""

    stages: list[Stage]

    def __post_init__(self):
        self.stages = list(self.stages)
        if not self.stages:
            raise ValueError("an M-algorithm needs at least one stage")
        for i, (a, b) in enumerate(zip(self.stages, self.stages[1:])):
            if a.target != b.source:
                raise SetMismatch(f"stage {i} target {a.target} does not queue into stage {i + 1} source {b.source}")

    def __len__(self):
        return len(self.stages)

    def __iter__(self):
        return iter(self.stages)

    @property
    def source(self) -> FiniteSet:
        return self.stages[0].source

    @property
    def target(self) -> FiniteSet:
        return self.stages[-1].target

    @property
    def weighted(self) -> bool:
        return any(isinstance(g, WeightedGraph) for g in self.stages)

    def composite(self) -> Graph:
        """Relational composite of the stages (plain graphs only)."""
        self._require_graphs()
        out = self.stages[0]
        for g in self.stages[1:]:
            out = compose(out, g)
        return out

    def _require_graphs(self):
        if self.weighted:
            raise TypeError("operation requires plain graph stages")


def _check_same_sets(a, b):
    if a.source != b.source or a.target != b.target:
        raise SetMismatch("graphs are not over the same source and target")


def _check_vector(f, size: int) -> np.ndarray:
    f = np.asarray(f)
    if f.ndim != 1 or f.shape[0] != size:
        raise DimensionMismatch(f"expected a vector of length {size}, got shape {f.shape}")
    return f


# -- transforms -------------------------------------------------------------


def mobius_transform(g: Graph, f) -> np.ndarray:
    """Sum ``f`` over the preimage of every target; empty preimages give 0."""
    f = _check_vector(f, g.source.size)
    return np.bincount(g.dst, weights=f[g.src].astype(np.float64), minlength=g.target.size)


def mobius_transform_weighted(w: WeightedGraph, f) -> np.ndarray:
    f = _check_vector(f, w.source.size)
    return w.matrix.T @ f


def apply_malgorithm(alg: MAlgorithm, f) -> np.ndarray:
    """Run the stage transforms one after the other."""
    out = _check_vector(f, alg.source.size)
    for g in alg.stages:
        out = mobius_transform(g, out) if isinstance(g, Graph) else mobius_transform_weighted(g, out)
    return out


def compose(g1: Graph, g2: Graph) -> Graph:
    """``g2 ∘ g1``: ``(s, u)`` iff some ``t`` has ``(s, t) ∈ g1`` and ``(t, u) ∈ g2``."""
    if g1.target != g2.source:
        raise SetMismatch(f"cannot compose {g1} with {g2}: {g1.target} != {g2.source}")
    return Graph.from_matrix(g1.source, g2.target, g1.matrix() @ g2.matrix())


def product_weighted(a: WeightedGraph, b: WeightedGraph) -> WeightedGraph:
    if a.target != b.source:
        raise SetMismatch(f"cannot multiply {a} by {b}: {a.target} != {b.source}")
    return WeightedGraph(a.source, b.target, a.matrix @ b.matrix)


def zeta(g: Graph) -> WeightedGraph:
    """Characteristic (0/1) incidence function of ``g``."""
    return WeightedGraph(g.source, g.target, g.matrix())


# -- decomposition ----------------------------------------------------------


def path_counts(alg: MAlgorithm) -> sp.csr_array:
    """Matrix of path counts ``#P(s, t)`` through every stage."""
    alg._require_graphs()
    out = alg.stages[0].matrix()
    for g in alg.stages[1:]:
        out = out @ g.matrix()
    return sp.csr_array(out)


def count_paths(alg: MAlgorithm, s: int, t: int) -> int:
    """Number of paths from ``s`` to ``t``, by forward accumulation over the stages."""
    alg._require_graphs()
    if not 0 <= s < alg.source.size or not 0 <= t < alg.target.size:
        raise IndexError(f"({s}, {t}) outside {alg.source.size}x{alg.target.size}")
    counts = np.zeros(alg.source.size, dtype=np.int64)
    counts[s] = 1
    for g in alg.stages:
        counts = g.matrix().T @ counts
    return int(counts[t])


@dataclass
class DecompositionReport:
    valid: bool
    witness: tuple[int, int] | None = None
    paths: int | None = None

    def __bool__(self):
        return self.valid


def verify_decomposition(alg: MAlgorithm) -> DecompositionReport:
    """Check that every arrow of the composite has exactly one factorisation.

    Pairs outside the composite have no path by construction, so the sequence
    computes the transform of its composite iff every nonzero path count is 1.
    The witness is the smallest ``(s, t)`` with more than one path.
    """
    counts = path_counts(alg).tocoo()
    bad = counts.data != 1
    if not bad.any():
        return DecompositionReport(True)
    rows, cols, vals = counts.row[bad], counts.col[bad], counts.data[bad]
    i = np.lexsort((cols, rows))[0]
    return DecompositionReport(False, (int(rows[i]), int(cols[i])), int(vals[i]))


# -- partial orders ---------------------------------------------------------


def check_partial_order(poset: Graph) -> np.ndarray:
    """Return the dense ``<=`` matrix, or raise naming the first violated axiom."""
    if poset.source != poset.target:
        raise NotAPartialOrder("an endorelation", "source and target sets differ")
    r = poset.dense()
    if not r.diagonal().all():
        x = int(np.flatnonzero(~r.diagonal())[0])
        raise NotAPartialOrder("reflexive", f"({x}, {x}) missing")
    both = r & r.T
    np.fill_diagonal(both, False)
    if both.any():
        a, b = (int(v) for v in np.argwhere(both)[0])
        raise NotAPartialOrder("antisymmetric", f"both ({a}, {b}) and ({b}, {a}) present")
    rr = _bool_matmul(r, r)
    if (rr & ~r).any():
        a, c = (int(v) for v in np.argwhere(rr & ~r)[0])
        raise NotAPartialOrder("transitive", f"({a}, {c}) missing")
    return r


def _bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.float64) @ b.astype(np.float64)) > 0


def transitive_closure(g: Graph, reflexive: bool = False) -> Graph:
    if g.source != g.target:
        raise SetMismatch("closure needs an endorelation")
    r = g.dense()
    if reflexive:
        np.fill_diagonal(r, True)
    while True:
        nxt = r | _bool_matmul(r, r)
        if (nxt == r).all():
            break
        r = nxt
    return Graph.from_matrix(g.source, g.target, r)


def _linear_extension(le: np.ndarray) -> np.ndarray:
    # x < y implies x has strictly fewer elements below it
    return np.argsort(le.sum(axis=0), kind="stable")


def mobius_function(poset: Graph, method: str = "recursive") -> WeightedGraph:
    """Inverse of the zeta function of a partial order, as an integer weighted graph.

    ``recursive`` fills ``mu(s, t) = -sum_{s <= x < t} mu(s, x)`` column by column
    in a linear extension. ``chains`` sums ``(-1)**i`` times the number of chains
    of length ``i``; the strict order is nilpotent, so the series stops at the
    longest chain.
    """
    le = check_partial_order(poset)
    k = le.shape[0]
    strict = le.copy()
    np.fill_diagonal(strict, False)
    if method == "recursive":
        mu = np.zeros((k, k), dtype=np.int64)
        below = strict.astype(np.int64)
        for t in _linear_extension(le):
            mu[:, t] = -(mu @ below[:, t])
            mu[t, t] = 1
    elif method == "chains":
        step = strict.astype(np.int64)
        power = np.eye(k, dtype=np.int64)
        mu = np.zeros((k, k), dtype=np.int64)
        sign = 1
        while power.any():
            mu += sign * power
            power = power @ step
            sign = -sign
    else:
        raise ValueError(f"unknown method {method!r}; expected 'recursive' or 'chains'")
    return WeightedGraph(poset.source, poset.target, mu)


def hasse_graph(poset: Graph, reflexive: bool = False) -> Graph:
    """Covering relation of a partial order, with loops when ``reflexive``."""
    le = check_partial_order(poset)
    strict = le.copy()
    np.fill_diagonal(strict, False)
    covers = strict & ~_bool_matmul(strict, strict)
    if reflexive:
        np.fill_diagonal(covers, True)
    return Graph.from_matrix(poset.source, poset.target, covers)


# -- brute-force oracles ----------------------------------------------------


def enumerate_paths(alg: MAlgorithm, s: int, t: int) -> list[tuple[tuple[int, int], ...]]:
    """All arrow tuples ``(g1, ..., gn)`` forming a path from ``s`` to ``t``.

    Exponential; intended as an independent oracle for tiny algorithms.
    """
    alg._require_graphs()
    found = []
    for combo in iproduct(*(list(g) for g in alg.stages)):
        if combo[0][0] != s or combo[-1][1] != t:
            continue
        if all(a[1] == b[0] for a, b in zip(combo, combo[1:])):
            found.append(combo)
    return found


# -- JSON exchange format ---------------------------------------------------


def _set_to_json(s: FiniteSet) -> dict:
    doc: dict = {"size": s.size}
    if s.name:
        doc["name"] = s.name
    if s.labels is not None:
        doc["labels"] = list(s.labels)
    return doc


def _set_from_json(doc, where: str) -> FiniteSet:
    if not isinstance(doc, dict) or "size" not in doc:
        raise FormatError(f"{where}: expected an object with a 'size' key")
    try:
        return FiniteSet(int(doc["size"]), doc.get("name", ""), doc.get("labels"))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: {exc}") from None


def graph_to_json(g: Stage) -> dict:
    doc = {"source": _set_to_json(g.source), "target": _set_to_json(g.target)}
    if isinstance(g, Graph):
        doc["arrows"] = [[s, t] for s, t in g]
    else:
        doc["weights"] = [[s, t, w] for (s, t), w in sorted(g.entries().items())]
    return doc


def graph_from_json(doc, where: str = "graph") -> Stage:
    if not isinstance(doc, dict):
        raise FormatError(f"{where}: expected an object")
    source = _set_from_json(doc.get("source"), f"{where}.source")
    target = _set_from_json(doc.get("target"), f"{where}.target")
    try:
        if "weights" in doc:
            triples = [tuple(x) for x in doc["weights"]]
            if not _looks_like_triples(triples):
                raise FormatError(f"{where}.weights: expected [s, t, w] triples")
            return WeightedGraph(source, target, triples)
        arrows = doc.get("arrows")
        if not isinstance(arrows, list) or not all(isinstance(a, list) and len(a) == 2 for a in arrows):
            raise FormatError(f"{where}.arrows: expected a list of [s, t] pairs")
        return Graph(source, target, [tuple(a) for a in arrows])
    except DimensionMismatch as exc:
        raise FormatError(f"{where}: {exc}") from None


def malgorithm_to_json(alg: MAlgorithm) -> list:
    return [graph_to_json(g) for g in alg.stages]


def malgorithm_from_json(doc) -> MAlgorithm:
    if isinstance(doc, dict):
        doc = [doc]
    if not isinstance(doc, list) or not doc:
        raise FormatError("M-algorithm file must be a non-empty array of stage objects")
    return MAlgorithm([graph_from_json(d, f"stage[{i}]") for i, d in enumerate(doc)])


def load_graph(path: str | Path) -> Stage:
    from .setfun import read_json

    return graph_from_json(read_json(path))


def load_malgorithm(path: str | Path) -> MAlgorithm:
    from .setfun import read_json

    return malgorithm_from_json(read_json(path))


def save_malgorithm(alg: MAlgorithm, path: str | Path) -> None:
    Path(path).write_text(json.dumps(malgorithm_to_json(alg)) + "\n")


def chain(k: int) -> Graph:
    """Total order ``0 < 1 < ... < k-1`` as a reflexive relation."""
    s = FiniteSet(k)
    return Graph(s, s, [(i, j) for i in range(k) for j in range(i, k)])


def antichain(k: int) -> Graph:
    return Graph.identity(FiniteSet(k))


def relation(k: int, pairs: Sequence[tuple[int, int]]) -> Graph:
    s = FiniteSet(k)
    return Graph(s, s, pairs)

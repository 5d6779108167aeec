"""Symmetric digraphs, the standard graph families, and the executive product.

Arcs are stored as parallel integer arrays (``origin``, ``terminus``,
``inverse``).  A self-loop ``(v, v)`` is a single arc that is its own
inverse and contributes one to ``deg(v)``; with this convention the complete
graph with loops on ``n`` vertices has ``n**2`` arcs and every degree is ``n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidGraphError, InvalidSizeError, VertexIndexError

__all__ = [
    "SymmetricDigraph",
    "ExecutiveGraph",
    "build_complete_with_loops",
    "build_complete_bipartite",
    "build_from_edges",
    "build_executive",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SymmetricDigraph:
    """Directed graph in which every arc ``(u, v)`` has its reverse ``(v, u)``.

    Arc ``k`` runs from ``origin[k]`` to ``terminus[k]``; ``inverse[k]`` is the
    index of the reversed arc.  The arc order is whatever the caller passed in;
    the public builders sort by ``(origin, terminus)``.

    Derived attributes
    ------------------
    degree : int array
        ``deg(v) = |T(v)|``.
    in_ptr, in_arcs : int arrays
        CSR layout of ``T(v)``, the arcs terminating at ``v``: the arcs of
        ``T(v)`` are ``in_arcs[in_ptr[v]:in_ptr[v + 1]]``, in ascending arc
        index.
    """

    num_vertices: int
    origin: np.ndarray
    terminus: np.ndarray
    inverse: np.ndarray
    degree: np.ndarray = field(init=False, repr=False)
    in_ptr: np.ndarray = field(init=False, repr=False)
    in_arcs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = int(self.num_vertices)
        if n < 1:
            raise InvalidSizeError(f"graph needs at least one vertex, got {n}")
        origin = np.ascontiguousarray(self.origin, dtype=np.intp)
        terminus = np.ascontiguousarray(self.terminus, dtype=np.intp)
        inverse = np.ascontiguousarray(self.inverse, dtype=np.intp)
        m = origin.shape[0]
        if origin.ndim != 1 or terminus.shape != (m,) or inverse.shape != (m,):
            raise InvalidGraphError("origin, terminus and inverse must be 1-D arrays of equal length")
        if m and (min(origin.min(), terminus.min()) < 0 or max(origin.max(), terminus.max()) >= n):
            raise VertexIndexError(f"arc endpoint outside 0..{n - 1}")
        if m and (inverse.min() < 0 or inverse.max() >= m):
            raise InvalidGraphError("inverse holds an out-of-range arc index")
        if not np.array_equal(inverse[inverse], np.arange(m)):
            raise InvalidGraphError("inverse is not an involution")
        if not (np.array_equal(origin[inverse], terminus) and np.array_equal(terminus[inverse], origin)):
            raise InvalidGraphError("inverse does not reverse arcs")
        if np.unique(origin * n + terminus).shape[0] != m:
            raise InvalidGraphError("duplicate arcs")

        degree = np.bincount(terminus, minlength=n)
        isolated = np.flatnonzero(degree == 0)
        if isolated.size:
            raise InvalidGraphError(f"isolated vertices: {isolated.tolist()}")
        in_ptr = np.zeros(n + 1, dtype=np.intp)
        np.cumsum(degree, out=in_ptr[1:])
        in_arcs = np.argsort(terminus, kind="stable").astype(np.intp)

        object.__setattr__(self, "num_vertices", n)
        object.__setattr__(self, "origin", _frozen(origin))
        object.__setattr__(self, "terminus", _frozen(terminus))
        object.__setattr__(self, "inverse", _frozen(inverse))
        object.__setattr__(self, "degree", _frozen(degree.astype(np.intp)))
        object.__setattr__(self, "in_ptr", _frozen(in_ptr))
        object.__setattr__(self, "in_arcs", _frozen(in_arcs))

    @classmethod
    def from_arcs(cls, num_vertices: int, arcs: Iterable[tuple[int, int]]) -> "SymmetricDigraph":
        """Build from an arc list; arcs are sorted by ``(origin, terminus)``.

        Every reverse arc must be present in ``arcs``.
        """
        n = int(num_vertices)
        if n < 1:
            raise InvalidSizeError(f"graph needs at least one vertex, got {n}")
        pairs = np.asarray(list(arcs), dtype=np.intp).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise VertexIndexError(f"arc endpoint outside 0..{n - 1}")
        keys = np.unique(pairs[:, 0] * n + pairs[:, 1])
        origin, terminus = np.divmod(keys, n)
        pos = np.searchsorted(keys, terminus * n + origin)
        pos = np.minimum(pos, keys.size - 1)
        if keys.size and not np.array_equal(keys[pos], terminus * n + origin):
            raise InvalidGraphError("arc set is not symmetric")
        return cls(n, origin, terminus, pos)

    @property
    def num_arcs(self) -> int:
        return int(self.origin.shape[0])

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return list(zip(self.origin.tolist(), self.terminus.tolist()))

    def arc_index(self, u: int, v: int) -> int:
        hits = np.flatnonzero((self.origin == u) & (self.terminus == v))
        if hits.size == 0:
            raise KeyError((u, v))
        return int(hits[0])

    def in_arcs_of(self, v: int) -> np.ndarray:
        """Arcs of ``T(v)`` in ascending index order."""
        return self.in_arcs[self.in_ptr[v]:self.in_ptr[v + 1]]

    def neighbors(self, v: int) -> np.ndarray:
        return np.sort(self.origin[self.in_arcs_of(v)])

    def relabeled(self, perm: Sequence[int]) -> "SymmetricDigraph":
        """Same graph with vertex ``v`` renamed ``perm[v]``."""
        perm = np.asarray(perm, dtype=np.intp)
        if sorted(perm.tolist()) != list(range(self.num_vertices)):
            raise InvalidGraphError("relabeling must be a permutation of the vertices")
        return SymmetricDigraph.from_arcs(self.num_vertices, zip(perm[self.origin].tolist(), perm[self.terminus].tolist()))

    def adjacency_matrix(self) -> np.ndarray:
        adj = np.zeros((self.num_vertices, self.num_vertices), dtype=np.int64)
        adj[self.origin, self.terminus] = 1
        return adj


@dataclass(frozen=True, eq=False)
class ExecutiveGraph:
    """Direct product ``G x K_S`` (``K_S`` complete with loops on the states).

    Product vertex ``(v, s)`` has index ``v * num_env_states + s``.  Arc
    ``(e, s, s2)``, joining ``(origin(e), s)`` to ``(terminus(e), s2)``, has
    index ``(e * S + s) * S + s2`` where ``e`` indexes the arcs of ``arm_graph``.
    """

    arm_graph: SymmetricDigraph
    num_env_states: int
    base: SymmetricDigraph

    @property
    def num_arms(self) -> int:
        return self.arm_graph.num_vertices

    @property
    def num_arcs(self) -> int:
        return self.base.num_arcs

    def index_of(self, arm: int, state: int) -> int:
        if not (0 <= arm < self.num_arms and 0 <= state < self.num_env_states):
            raise VertexIndexError(f"pair ({arm}, {state}) out of range")
        return arm * self.num_env_states + state

    def pair_of(self, vertex: int) -> tuple[int, int]:
        if not 0 <= vertex < self.base.num_vertices:
            raise VertexIndexError(f"product vertex {vertex} out of range")
        return divmod(int(vertex), self.num_env_states)

    @property
    def arc_origin_arm(self) -> np.ndarray:
        return self.base.origin // self.num_env_states

    @property
    def arc_terminus_arm(self) -> np.ndarray:
        return self.base.terminus // self.num_env_states

    @property
    def arc_origin_state(self) -> np.ndarray:
        return self.base.origin % self.num_env_states

    @property
    def arc_terminus_state(self) -> np.ndarray:
        return self.base.terminus % self.num_env_states


def build_complete_with_loops(n: int) -> SymmetricDigraph:
    """Complete graph with a self-loop at every vertex (adjacency all ones)."""
    n = int(n)
    if n < 1:
        raise InvalidSizeError(f"complete graph needs n >= 1, got {n}")
    origin, terminus = np.divmod(np.arange(n * n, dtype=np.intp), n)
    inverse = terminus * n + origin
    return SymmetricDigraph(n, origin, terminus, inverse)


def build_complete_bipartite(n1: int, n2: int) -> SymmetricDigraph:
    """``K_{n1,n2}``: vertices ``0..n1-1`` form cluster 1, the rest cluster 2."""
    n1, n2 = int(n1), int(n2)
    if n1 < 1 or n2 < 1:
        raise InvalidSizeError(f"both clusters need at least one vertex, got ({n1}, {n2})")
    left = np.arange(n1)
    right = np.arange(n1, n1 + n2)
    forward = [(u, v) for u in left.tolist() for v in right.tolist()]
    return SymmetricDigraph.from_arcs(n1 + n2, forward + [(v, u) for u, v in forward])


def build_from_edges(n: int, edges: Sequence[Sequence[int]]) -> SymmetricDigraph:
    """Graph from undirected edges; ``(v, v)`` is a loop, duplicates collapse."""
    n = int(n)
    if n < 1:
        raise InvalidSizeError(f"graph needs n >= 1, got {n}")
    arcs = set()
    for edge in edges:
        if len(edge) != 2:
            raise InvalidGraphError(f"edge {edge!r} is not a vertex pair")
        u, v = int(edge[0]), int(edge[1])
        if not (0 <= u < n and 0 <= v < n):
            raise VertexIndexError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        arcs.add((u, v))
        arcs.add((v, u))
    return SymmetricDigraph.from_arcs(n, sorted(arcs))


def build_executive(g: SymmetricDigraph, num_env_states: int) -> ExecutiveGraph:
    S = int(num_env_states)
    if S < 1:
        raise InvalidSizeError(f"need at least one environment state, got {S}")
    m = g.num_arcs
    e, s, s2 = np.unravel_index(np.arange(m * S * S, dtype=np.intp), (m, S, S))
    origin = g.origin[e] * S + s
    terminus = g.terminus[e] * S + s2
    inverse = (g.inverse[e] * S + s2) * S + s
    base = SymmetricDigraph(g.num_vertices * S, origin, terminus, inverse)
    return ExecutiveGraph(g, S, base)

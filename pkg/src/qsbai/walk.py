"""Arc-space quantum walks: states, the Szegedy and Grover coins, the oracle.

A walk step is ``U = U0 R``: ``R`` flips the sign of every arc whose
terminus is marked, and ``U0`` applies at each vertex ``v`` a reflection over
the arcs ``T(v)`` ending there, writing the result onto the reversed arcs.
Both coins used here are rank-one reflections ``2 x x^T - I`` over ``T(v)``,
so an operator is stored as one weight per arc (the entries of ``x``) plus
one sign per arc; :meth:`WalkOperator.to_dense` materializes the matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _backend
from .environment import EnvironmentModel
from .errors import DimensionError, VertexIndexError
from .graph import ExecutiveGraph, SymmetricDigraph

__all__ = [
    "WalkState",
    "WalkOperator",
    "initial_state",
    "uniform_state",
    "build_szegedy_coin",
    "build_grover_coin",
    "coin_blocks",
    "build_oracle",
    "build_walk_operator",
    "build_search_operator",
    "apply",
    "evolve",
    "vertex_probabilities",
    "vertex_probability",
    "recommendation",
    "recommendation_distribution",
    "marked_vertex_probability",
    "transition_probabilities",
    "reversible_distribution",
    "probability_flow",
]

NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class WalkState:
    """Unit vector of complex amplitudes, one per arc."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1:
            raise DimensionError("amplitudes must be a 1-D vector")
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise DimensionError(f"state is not normalized: squared norm {norm_sq!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def __len__(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True, eq=False)
class WalkOperator:
    """Matrix-free form of ``U0 R`` on the arcs of ``graph``.

    ``coin_weights[a]`` is the entry of the reflection vector for arc ``a``
    within the block of its terminus; ``oracle_signs[a]`` is ``-1`` when the
    terminus of ``a`` is marked and ``+1`` otherwise.
    """

    graph: SymmetricDigraph
    coin_weights: np.ndarray
    oracle_signs: np.ndarray

    def __post_init__(self) -> None:
        m = self.graph.num_arcs
        weights = np.ascontiguousarray(self.coin_weights, dtype=np.float64)
        signs = np.ascontiguousarray(self.oracle_signs, dtype=np.float64)
        if weights.shape != (m,) or signs.shape != (m,):
            raise DimensionError(f"need one coin weight and one sign per arc ({m})")
        if not np.all(np.abs(signs) == 1.0):
            raise DimensionError("oracle signs must be +1 or -1")
        weights.setflags(write=False)
        signs.setflags(write=False)
        object.__setattr__(self, "coin_weights", weights)
        object.__setattr__(self, "oracle_signs", signs)

    @property
    def dimension(self) -> int:
        return self.graph.num_arcs

    @property
    def arc_permutation(self) -> np.ndarray:
        return self.graph.inverse

    def coin_blocks(self) -> list[np.ndarray]:
        return coin_blocks(self.graph, self.coin_weights)

    def kernel_args(self) -> tuple:
        g = self.graph
        return (self.oracle_signs, self.coin_weights, g.in_ptr, g.in_arcs, g.inverse)

    def to_dense(self) -> np.ndarray:
        """Dense ``U0 R`` built from the coin blocks (test oracle, O(|A|^2) memory)."""
        g = self.graph
        dense = np.zeros((g.num_arcs, g.num_arcs), dtype=np.complex128)
        for v, block in enumerate(self.coin_blocks()):
            arcs = g.in_arcs_of(v)
            # column a, row inverse(b): gamma_ab, times the sign of a
            dense[np.ix_(g.inverse[arcs], arcs)] = block.T * self.oracle_signs[arcs][None, :]
        return dense


def _check_pair(ex: ExecutiveGraph, env: EnvironmentModel) -> None:
    if ex.num_arms != env.num_arms or ex.num_env_states != env.num_env_states:
        raise DimensionError(
            f"executive graph is {ex.num_arms} arms x {ex.num_env_states} states, "
            f"environment is {env.num_arms} x {env.num_env_states}"
        )


def initial_state(ex: ExecutiveGraph, env: EnvironmentModel) -> WalkState:
    """Flow-weighted start state; arc ``((v,s),(v2,s2))`` gets ``sqrt(eta_v(s) eta_v2(s2) / |A|)``.

    ``|A|`` counts arcs of the arm graph, not of the product.
    """
    _check_pair(ex, env)
    eta = env.eta
    flow = eta[ex.arc_origin_arm, ex.arc_origin_state] * eta[ex.arc_terminus_arm, ex.arc_terminus_state]
    return WalkState(np.sqrt(flow / ex.arm_graph.num_arcs))


def uniform_state(g: SymmetricDigraph) -> WalkState:
    return WalkState(np.full(g.num_arcs, 1.0 / np.sqrt(g.num_arcs)))


def build_szegedy_coin(ex: ExecutiveGraph, env: EnvironmentModel) -> np.ndarray:
    """Reflection weights ``x[a] = sqrt(eta_v(s) / deg(v2))`` for ``a = ((v,s),(v2,s2))``.

    The block at ``(v2, s2)`` is ``2 x x^T - I`` restricted to its incoming
    arcs, i.e. ``2 sqrt(eta_v(s) eta_v3(s3)) / deg(v2) - [v=v3][s=s3]``.
    """
    _check_pair(ex, env)
    deg = ex.arm_graph.degree
    return np.sqrt(env.eta[ex.arc_origin_arm, ex.arc_origin_state] / deg[ex.arc_terminus_arm])


def build_grover_coin(g: SymmetricDigraph) -> np.ndarray:
    """Grover weights ``1/sqrt(deg)``: blocks ``2/deg - delta``."""
    return 1.0 / np.sqrt(g.degree[g.terminus].astype(np.float64))


def coin_blocks(g: SymmetricDigraph, weights: np.ndarray) -> list[np.ndarray]:
    """Dense per-vertex blocks; rows and columns follow ``g.in_arcs_of(v)``."""
    blocks = []
    for v in range(g.num_vertices):
        x = weights[g.in_arcs_of(v)]
        blocks.append(2.0 * np.outer(x, x) - np.eye(x.shape[0]))
    return blocks


def build_oracle(ex: ExecutiveGraph, env: EnvironmentModel) -> np.ndarray:
    """``-1`` on arcs whose terminus pair is winning, ``+1`` elsewhere."""
    _check_pair(ex, env)
    wins = env.win_table()[ex.arc_terminus_arm, ex.arc_terminus_state]
    return np.where(wins, -1.0, 1.0)


def build_walk_operator(ex: ExecutiveGraph, env: EnvironmentModel) -> WalkOperator:
    return WalkOperator(ex.base, build_szegedy_coin(ex, env), build_oracle(ex, env))


def build_search_operator(g: SymmetricDigraph, marked: Iterable[int]) -> WalkOperator:
    """Grover-coin spatial search on ``g`` with the given marked vertices."""
    is_marked = np.zeros(g.num_vertices, dtype=bool)
    for v in marked:
        if not 0 <= v < g.num_vertices:
            raise VertexIndexError(f"marked vertex {v} out of range")
        is_marked[v] = True
    return WalkOperator(g, build_grover_coin(g), np.where(is_marked[g.terminus], -1.0, 1.0))


def _kernels(backend: str | None):
    return _backend.kernels if backend is None else _backend.load_backend(backend)


def _check_dims(op: WalkOperator, state: WalkState) -> None:
    if len(state) != op.dimension:
        raise DimensionError(f"state has {len(state)} amplitudes, operator acts on {op.dimension} arcs")


def apply(op: WalkOperator, state: WalkState, *, backend: str | None = None) -> WalkState:
    _check_dims(op, state)
    return WalkState(_kernels(backend).apply_step(state.amplitudes, *op.kernel_args()))


def evolve(op: WalkOperator, state: WalkState, t: int, *, backend: str | None = None) -> WalkState:
    """``U**t`` applied to ``state``; ``t = 0`` returns ``state`` itself."""
    if t < 0:
        raise ValueError(f"step count must be non-negative, got {t}")
    _check_dims(op, state)
    if t == 0:
        return state
    return WalkState(_kernels(backend).evolve(state.amplitudes, int(t), *op.kernel_args()))


def _graph_of(g: SymmetricDigraph | ExecutiveGraph) -> SymmetricDigraph:
    return g.base if isinstance(g, ExecutiveGraph) else g


def vertex_probabilities(g: SymmetricDigraph | ExecutiveGraph, state: WalkState) -> np.ndarray:
    """Probability of finding the walker at each vertex (squared amplitudes of incoming arcs)."""
    g = _graph_of(g)
    if len(state) != g.num_arcs:
        raise DimensionError(f"state has {len(state)} amplitudes, graph has {g.num_arcs} arcs")
    amps = state.amplitudes
    return np.bincount(g.terminus, weights=amps.real**2 + amps.imag**2, minlength=g.num_vertices)


def vertex_probability(g: SymmetricDigraph | ExecutiveGraph, state: WalkState, vertex: int) -> float:
    base = _graph_of(g)
    if not 0 <= vertex < base.num_vertices:
        raise VertexIndexError(f"vertex {vertex} out of range")
    return float(vertex_probabilities(base, state)[vertex])


def recommendation_distribution(ex: ExecutiveGraph, state: WalkState) -> np.ndarray:
    """``P(w)`` for every arm: probability mass on ``(w, s)`` summed over states ``s``."""
    return vertex_probabilities(ex, state).reshape(ex.num_arms, ex.num_env_states).sum(axis=1)


def recommendation(ex: ExecutiveGraph, state: WalkState, arm: int) -> float:
    if not 0 <= arm < ex.num_arms:
        raise VertexIndexError(f"arm {arm} out of range")
    return float(recommendation_distribution(ex, state)[arm])


def marked_vertex_probability(g: SymmetricDigraph, marked: Iterable[int], state: WalkState) -> float:
    probs = vertex_probabilities(g, state)
    marked = sorted(set(int(v) for v in marked))
    if marked and (marked[0] < 0 or marked[-1] >= g.num_vertices):
        raise VertexIndexError("marked vertex out of range")
    return float(probs[marked].sum())


def transition_probabilities(ex: ExecutiveGraph, env: EnvironmentModel) -> np.ndarray:
    """Per product arc ``((v,s),(v2,s2))``: ``eta_v2(s2) / deg(v)``."""
    _check_pair(ex, env)
    deg = ex.arm_graph.degree
    return env.eta[ex.arc_terminus_arm, ex.arc_terminus_state] / deg[ex.arc_origin_arm]


def reversible_distribution(ex: ExecutiveGraph, env: EnvironmentModel) -> np.ndarray:
    """``pi(v, s) = deg(v) eta_v(s) / |A|`` indexed by product vertex."""
    _check_pair(ex, env)
    deg = ex.arm_graph.degree.astype(np.float64)
    return (deg[:, None] * env.eta / ex.arm_graph.num_arcs).reshape(-1)


def probability_flow(ex: ExecutiveGraph, env: EnvironmentModel) -> np.ndarray:
    """``m(a) = pi(origin(a)) p(a)`` per product arc."""
    return reversible_distribution(ex, env)[ex.base.origin] * transition_probabilities(ex, env)

"""Bandit environment: state distributions per arm and the winning set."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AmbiguousBestArmError,
    InvalidEnvironmentError,
    VertexIndexError,
)

__all__ = [
    "EnvironmentModel",
    "ArmStatistics",
    "winning_probability",
    "winning_probabilities",
    "best_arm",
    "cluster_mean_q",
    "arm_statistics",
    "two_state_environment",
]

ROW_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class EnvironmentModel:
    """Per-arm environment-state distributions ``eta`` and winning pairs.

    ``eta[v, s]`` is the probability that state ``s`` arises after arm ``v`` is
    played.  Rows are checked to sum to one within ``1e-12`` and then divided
    by their sum.  ``winning`` holds the ``(arm, state)`` pairs that pay out.
    """

    eta: np.ndarray
    winning: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        eta = np.array(self.eta, dtype=np.float64)
        if eta.ndim != 2 or eta.shape[0] < 1 or eta.shape[1] < 1:
            raise InvalidEnvironmentError(f"eta must be a non-empty 2-D table, got shape {eta.shape}")
        if not np.all(np.isfinite(eta)) or np.any(eta < 0):
            raise InvalidEnvironmentError("eta entries must be finite and non-negative")
        sums = np.array([math.fsum(row) for row in eta])
        bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)
        if bad.size:
            raise InvalidEnvironmentError(
                f"eta rows {bad.tolist()} do not sum to 1 (sums {sums[bad].tolist()})"
            )
        eta /= sums[:, None]
        eta.setflags(write=False)

        n, S = eta.shape
        pairs = set()
        for pair in self.winning:
            v, s = (int(x) for x in pair)
            if not (0 <= v < n and 0 <= s < S):
                raise VertexIndexError(f"winning pair ({v}, {s}) outside {n} arms x {S} states")
            pairs.add((v, s))
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "winning", frozenset(pairs))

    @property
    def num_arms(self) -> int:
        return self.eta.shape[0]

    @property
    def num_env_states(self) -> int:
        return self.eta.shape[1]

    def win_table(self) -> np.ndarray:
        """Boolean ``(arms, states)`` table of the classical oracle."""
        table = np.zeros(self.eta.shape, dtype=bool)
        for v, s in self.winning:
            table[v, s] = True
        return table

    def relabeled(self, arm_perm: Sequence[int], state_perm: Sequence[int] | None = None) -> "EnvironmentModel":
        """Environment with arm ``v`` renamed ``arm_perm[v]`` (likewise states)."""
        arm_perm = np.asarray(arm_perm, dtype=np.intp)
        state_perm = np.arange(self.num_env_states) if state_perm is None else np.asarray(state_perm, dtype=np.intp)
        if sorted(arm_perm.tolist()) != list(range(self.num_arms)) or sorted(state_perm.tolist()) != list(range(self.num_env_states)):
            raise InvalidEnvironmentError("relabeling must permute arms and states")
        eta = np.empty_like(self.eta)
        eta[np.ix_(arm_perm, state_perm)] = self.eta
        eta.setflags(write=False)
        # already validated and normalized: bypass __post_init__ so values are moved, not recomputed
        out = object.__new__(EnvironmentModel)
        object.__setattr__(out, "eta", eta)
        object.__setattr__(out, "winning", frozenset((int(arm_perm[v]), int(state_perm[s])) for v, s in self.winning))
        return out


@dataclass(frozen=True)
class ArmStatistics:
    q: np.ndarray
    best_arm: int
    q_bar: float
    subset: tuple[int, ...]


def winning_probability(env: EnvironmentModel, v: int) -> float:
    if not 0 <= v < env.num_arms:
        raise VertexIndexError(f"arm {v} out of range")
    # fsum is exactly rounded, so the result ignores state ordering
    return math.fsum(env.eta[v, env.win_table()[v]])


def winning_probabilities(env: EnvironmentModel) -> np.ndarray:
    win = env.win_table()
    return np.array([math.fsum(env.eta[v, win[v]]) for v in range(env.num_arms)])


def best_arm(env: EnvironmentModel) -> int:
    q = winning_probabilities(env)
    top = np.flatnonzero(q == q.max())
    if top.size > 1:
        raise AmbiguousBestArmError(f"arms {top.tolist()} share the top winning probability {q.max()}")
    return int(top[0])


def cluster_mean_q(env: EnvironmentModel, subset: Iterable[int]) -> float:
    """Unweighted mean of the winning probabilities over ``subset``."""
    subset = sorted(set(int(v) for v in subset))
    if not subset:
        raise InvalidEnvironmentError("cannot average over an empty vertex set")
    q = winning_probabilities(env)
    if subset[0] < 0 or subset[-1] >= env.num_arms:
        raise VertexIndexError("subset holds an arm outside the environment")
    return math.fsum(q[subset]) / len(subset)


def arm_statistics(env: EnvironmentModel, subset: Iterable[int] | None = None) -> ArmStatistics:
    """Winning probabilities, the best arm, and the mean over ``subset``.

    ``subset`` defaults to every arm.
    """
    subset = tuple(range(env.num_arms)) if subset is None else tuple(sorted(set(int(v) for v in subset)))
    q = winning_probabilities(env)
    q.setflags(write=False)
    return ArmStatistics(q=q, best_arm=best_arm(env), q_bar=cluster_mean_q(env, subset), subset=subset)


def two_state_environment(q: Sequence[float]) -> EnvironmentModel:
    """Two states, state 0 wins for every arm, ``eta_v(0) = q[v]``.

    This is the recipe used for the worked examples: each arm's winning
    probability equals the weight it puts on the winning state.
    """
    q = np.asarray(q, dtype=np.float64)
    eta = np.stack([q, 1.0 - q], axis=1)
    return EnvironmentModel(eta, frozenset((v, 0) for v in range(q.shape[0])))

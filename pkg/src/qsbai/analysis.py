"""Theorem bounds, the measurement schedule, sweeps, and arm sampling."""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from . import _backend
from .environment import ArmStatistics, EnvironmentModel, arm_statistics, best_arm
from .errors import (
    AmbiguousBestArmError,
    ClusterMismatchError,
    DegenerateEnvironmentError,
    FamilyError,
    InvalidDistributionError,
)
from .graph import SymmetricDigraph, build_executive
from .walk import build_walk_operator, initial_state

__all__ = [
    "FAMILIES",
    "TheoremReport",
    "SweepResult",
    "timing",
    "bound_complete",
    "bound_bipartite",
    "first_peak",
    "run_sweep",
    "bipartite_clusters",
    "check_family",
    "verify_theorem",
    "sample_arm",
]

log = logging.getLogger(__name__)

FAMILIES = ("complete", "complete_bipartite")
PLATEAU_TOL = 1e-12
FLOOR_SNAP = 1e-12
BOUND_SLACK = 1e-9
DIST_SUM_TOL = 1e-9
NEGATIVE_TOL = 1e-12


@dataclass(frozen=True)
class TheoremReport:
    family: str
    q_bar: float
    theta: float
    s: int
    t_star: int
    bound_rhs: float
    p_observed: float
    bound_satisfied: bool
    best_arm: int
    cluster: tuple[int, ...]
    first_max_step: int

    def to_dict(self) -> dict:
        record = asdict(self)
        record["cluster"] = list(self.cluster)
        return record


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Recommendation distribution ``curve[t, w] = P_t(w)`` for ``t = 0..horizon``.

    ``best_arm`` and ``first_max_step`` are ``None`` when no arm has a strictly
    highest winning probability.
    """

    horizon: int
    curve: np.ndarray
    best_arm: int | None
    first_max_step: int | None

    def best_arm_curve(self) -> np.ndarray:
        if self.best_arm is None:
            raise AmbiguousBestArmError("sweep has no unique best arm")
        return self.curve[:, self.best_arm]


def timing(q_bar: float) -> tuple[float, int, int]:
    """``(theta, s, t_star)`` with ``theta = asin(sqrt(q_bar))``, ``s = floor(pi / 4 theta)``, ``t_star = 2 s``."""
    if not 0.0 < q_bar < 1.0:
        raise DegenerateEnvironmentError(f"mean winning probability must lie in (0, 1), got {q_bar}")
    theta = math.asin(math.sqrt(q_bar))
    ratio = math.pi / (4.0 * theta)
    # asin(sqrt(1/2)) rounds one ulp above pi/4; snap near-integer ratios before flooring
    nearest = round(ratio)
    s = nearest if abs(ratio - nearest) <= FLOOR_SNAP else math.floor(ratio)
    return theta, s, 2 * s


def _bound_core(stats: ArmStatistics) -> float:
    qb = stats.q_bar
    if not 0.0 < qb < 1.0:
        raise DegenerateEnvironmentError(f"mean winning probability must lie in (0, 1), got {qb}")
    q_best = float(stats.q[stats.best_arm])
    return 1.0 + (q_best - qb) * (1.0 - 2.0 * qb) / (qb * (1.0 - qb))


def bound_complete(stats: ArmStatistics, n: int) -> float:
    """Lower bound on ``P_{2s}(v*)`` for the complete graph with loops on ``n`` vertices."""
    return _bound_core(stats) / n


def bound_bipartite(stats: ArmStatistics, ni: int) -> float:
    """Lower bound on ``P_{2s}(v*)`` on a complete bipartite graph.

    ``stats`` must be computed over the cluster (of size ``ni``) that holds
    the best arm.
    """
    if stats.best_arm not in stats.subset:
        raise ClusterMismatchError(f"best arm {stats.best_arm} is not in the given cluster")
    return _bound_core(stats) / (2 * ni)


def first_peak(values: Sequence[float], tol: float = PLATEAU_TOL) -> int:
    """Index of the first local maximum of a sampled curve.

    The curve is scanned for the first strict drop (by more than ``tol``);
    the peak is the start of the plateau preceding it.  A curve that never
    drops returns the first index within ``tol`` of its maximum.
    """
    c = np.asarray(values, dtype=np.float64)
    if c.size == 0:
        raise ValueError("empty curve")
    drops = np.flatnonzero(c[1:] < c[:-1] - tol)
    if drops.size == 0:
        return int(np.flatnonzero(c >= c.max() - tol)[0])
    t = int(drops[0])
    while t > 0 and c[t - 1] >= c[drops[0]] - tol:
        t -= 1
    return t


def run_sweep(g: SymmetricDigraph, env: EnvironmentModel, horizon: int, *, backend: str | None = None) -> SweepResult:
    """Evolve the walk for ``horizon`` steps and record ``P_t`` at every step."""
    if horizon < 0:
        raise ValueError(f"horizon must be non-negative, got {horizon}")
    ex = build_executive(g, env.num_env_states)
    op = build_walk_operator(ex, env)
    psi0 = initial_state(ex, env)
    kernels = _backend.kernels if backend is None else _backend.load_backend(backend)
    arm_of_arc = np.ascontiguousarray(ex.arc_terminus_arm, dtype=np.intp)
    curve, _ = kernels.sweep(psi0.amplitudes, int(horizon), *op.kernel_args(), arm_of_arc, ex.num_arms)
    curve.setflags(write=False)
    try:
        v_best = best_arm(env)
    except AmbiguousBestArmError:
        return SweepResult(int(horizon), curve, None, None)
    return SweepResult(int(horizon), curve, v_best, first_peak(curve[:, v_best]))


def bipartite_clusters(g: SymmetricDigraph) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """The two sides if ``g`` is a complete bipartite graph, else ``None``.

    The side containing vertex 0 comes first.
    """
    adj = g.adjacency_matrix()
    if np.any(np.diag(adj)):
        return None
    side1 = np.flatnonzero(adj[0] == 0)
    side2 = np.flatnonzero(adj[0] == 1)
    if side2.size == 0:
        return None
    expected = np.zeros_like(adj)
    expected[np.ix_(side1, side2)] = 1
    expected[np.ix_(side2, side1)] = 1
    if not np.array_equal(adj, expected):
        return None
    return tuple(side1.tolist()), tuple(side2.tolist())


def check_family(g: SymmetricDigraph, family: str) -> tuple[int, ...] | tuple[tuple[int, ...], tuple[int, ...]]:
    if family == "complete":
        if not np.all(g.adjacency_matrix() == 1):
            raise FamilyError("graph is not a complete graph with self-loops")
        return tuple(range(g.num_vertices))
    if family == "complete_bipartite":
        clusters = bipartite_clusters(g)
        if clusters is None:
            raise FamilyError("graph is not complete bipartite")
        return clusters
    raise FamilyError(f"unknown family {family!r}; expected one of {FAMILIES}")


def verify_theorem(g: SymmetricDigraph, env: EnvironmentModel, family: str, *, backend: str | None = None) -> TheoremReport:
    """Simulate ``P_{2s}(v*)`` and compare it with the family's lower bound."""
    shape = check_family(g, family)
    v_best = best_arm(env)
    if family == "complete":
        cluster = shape
    else:
        cluster = shape[0] if v_best in shape[0] else shape[1]
    stats = arm_statistics(env, cluster)
    theta, s, t_star = timing(stats.q_bar)
    if family == "complete":
        rhs = bound_complete(stats, g.num_vertices)
    else:
        rhs = bound_bipartite(stats, len(cluster))

    # run past the peak so the first-maximum scan can see the curve fall
    sweep = run_sweep(g, env, 2 * t_star + 4, backend=backend)
    p_observed = float(sweep.curve[t_star, v_best])
    report = TheoremReport(
        family=family,
        q_bar=stats.q_bar,
        theta=theta,
        s=s,
        t_star=t_star,
        bound_rhs=rhs,
        p_observed=p_observed,
        bound_satisfied=bool(p_observed >= rhs - BOUND_SLACK),
        best_arm=v_best,
        cluster=tuple(cluster),
        first_max_step=int(sweep.first_max_step),
    )
    if report.first_max_step != t_star:
        log.info("first maximum at t=%d, schedule predicts t=%d", report.first_max_step, t_star)
    return report


def sample_arm(dist: Sequence[float], seed: int) -> int:
    """Draw one arm from ``dist`` by inverse CDF with a seeded generator."""
    p = np.array(dist, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise InvalidDistributionError("distribution must be a non-empty vector")
    if not np.all(np.isfinite(p)) or np.any(p < -NEGATIVE_TOL):
        raise InvalidDistributionError("distribution has negative or non-finite entries")
    total = p.sum()
    if abs(total - 1.0) > DIST_SUM_TOL:
        raise InvalidDistributionError(f"distribution sums to {total}, not 1")
    p = np.clip(p, 0.0, None)
    cdf = np.cumsum(p / p.sum())
    u = np.random.default_rng(seed).random()
    idx = int(np.searchsorted(cdf, u, side="right"))
    # rounding can leave u past the last cdf value; fall back to the last arm with mass
    if idx >= p.size:
        idx = int(np.flatnonzero(p > 0)[-1])
    return idx

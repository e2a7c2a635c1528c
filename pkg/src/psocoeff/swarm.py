"""Particle swarm engine.

The update is synchronous: every particle moves and is evaluated using the
social attractors of the previous iteration, then personal bests and the
neighbourhood bests are refreshed in one pass. Objectives are minimised.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import streams
from .formulations import (
    ConstrictedParams,
    FormulationConfig,
    SampledAcceleration,
    as_general,
    formulation_from_dict,
    formulation_to_dict,
)
from .objectives import EvaluationError
from .topology import InformerGraph, TopologySpec, build, topology_from_dict

__all__ = [
    "IterationLog",
    "ParticleState",
    "RunRecord",
    "SwarmConfig",
    "SwarmState",
    "UndefinedAttractor",
    "clamp_velocity",
    "initialize",
    "overall_attractor",
    "run",
    "state_from_arrays",
    "step",
    "velocity_update",
]

Objective = Callable[[np.ndarray], float]


class UndefinedAttractor(ZeroDivisionError):
    """Both acceleration coefficients are zero, so no attractor is defined."""


@dataclass(frozen=True)
class ParticleState:
    x: np.ndarray
    v: np.ndarray
    pbest_x: np.ndarray
    pbest_f: float


def velocity_update(p, lbest_x, coeffs: SampledAcceleration, w: float) -> np.ndarray:
    """Inertia plus individual and social attraction, without clamping.

    ``p`` is anything with ``x``, ``v`` and ``pbest_x`` arrays of one shape:
    a single :class:`ParticleState` or a whole :class:`SwarmState`.
    """
    x, v, pbest = np.asarray(p.x), np.asarray(p.v), np.asarray(p.pbest_x)
    lbest = np.asarray(lbest_x)
    if not (x.shape == v.shape == pbest.shape == lbest.shape):
        raise ValueError(
            f"dimension mismatch: x{x.shape}, v{v.shape}, pbest{pbest.shape}, lbest{lbest.shape}"
        )
    return w * v + coeffs.phi_i * (pbest - x) + coeffs.phi_s * (lbest - x)


def clamp_velocity(v, vmax) -> np.ndarray:
    """Limit each component to ``[-vmax_j, vmax_j]``, keeping its sign."""
    vmax = np.asarray(vmax, dtype=float)
    if np.any(vmax <= 0):
        raise ValueError("vmax must be positive in every dimension")
    return np.clip(v, -vmax, vmax)


def overall_attractor(pbest_j, lbest_j, phi_i, phi_s):
    """Acceleration-weighted average of the two attractors."""
    total = phi_i + phi_s
    if np.any(np.asarray(total) == 0):
        raise UndefinedAttractor("phi_i + phi_s = 0: attraction must be skipped this step")
    # interpolation form is exact when pbest_j == lbest_j
    return pbest_j + (phi_s / total) * (lbest_j - pbest_j)


@dataclass(frozen=True)
class SwarmConfig:
    swarm_size: int
    dimensions: int
    bounds: tuple[tuple[float, float], ...]
    formulation: FormulationConfig
    topology: TopologySpec = field(default_factory=TopologySpec)
    vmax_fraction: float | None = 0.5
    max_iterations: int = 1000
    target_tolerance: float | None = None
    seed: int = 0
    velocity_init: str = "zero"
    feasible_pbest_only: bool = False

    def __post_init__(self) -> None:
        for name in ("swarm_size", "dimensions"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if not isinstance(self.max_iterations, int) or self.max_iterations < 0:
            raise ValueError(f"max_iterations must be a non-negative integer, got {self.max_iterations!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError(f"seed must be an unsigned integer, got {self.seed!r}")
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        if len(bounds) != self.dimensions:
            raise ValueError(f"expected {self.dimensions} bound pairs, got {len(bounds)}")
        for j, (lo, hi) in enumerate(bounds):
            if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
                raise ValueError(f"degenerate bounds in dimension {j}: [{lo}, {hi}]")
        object.__setattr__(self, "bounds", bounds)
        if self.vmax_fraction is not None and not 0.0 < self.vmax_fraction <= 1.0:
            raise ValueError(f"vmax_fraction must lie in (0, 1], got {self.vmax_fraction}")
        if self.velocity_init not in ("zero", "random"):
            raise ValueError(f"velocity_init must be 'zero' or 'random', got {self.velocity_init!r}")
        # catches infeasible topologies before any evaluation
        if self.topology.kind != "random":
            build(self.topology, self.swarm_size)
        elif self.topology.out_degree > self.swarm_size - 1:
            raise ValueError("random topology out_degree must be below swarm_size")

    @property
    def lower(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.bounds])

    @property
    def upper(self) -> np.ndarray:
        return np.array([hi for _, hi in self.bounds])

    @property
    def vmax(self) -> np.ndarray | None:
        if self.vmax_fraction is None:
            return None
        return self.vmax_fraction * (self.upper - self.lower)

    def to_dict(self) -> dict:
        return {
            "swarm_size": self.swarm_size,
            "dimensions": self.dimensions,
            "bounds": [list(b) for b in self.bounds],
            "formulation": formulation_to_dict(self.formulation),
            "topology": self.topology.to_dict(),
            "vmax_fraction": self.vmax_fraction,
            "max_iterations": self.max_iterations,
            "target_tolerance": self.target_tolerance,
            "seed": self.seed,
            "velocity_init": self.velocity_init,
            "feasible_pbest_only": self.feasible_pbest_only,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SwarmConfig":
        """Parse the JSON form. ``bounds`` may be one ``[lo, hi]`` pair for all dimensions."""
        data = dict(data)
        allowed = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - allowed)
        if unknown:
            raise ValueError(f"unknown config field(s): {', '.join(unknown)}")
        if "formulation" not in data:
            raise ValueError("config needs a 'formulation' section")
        form, form_seed = formulation_from_dict(data["formulation"])
        if form_seed is not None:
            if "seed" in data and data["seed"] != form_seed:
                raise ValueError("conflicting seeds in config and formulation section")
            data.setdefault("seed", form_seed)
        data["formulation"] = form
        data["topology"] = topology_from_dict(data.get("topology", {"kind": "global"}))
        bounds = data.get("bounds")
        if bounds is None:
            raise ValueError("config needs 'bounds'")
        if len(bounds) == 2 and all(isinstance(b, (int, float)) for b in bounds):
            data["bounds"] = [bounds] * int(data.get("dimensions", 1))
        try:
            return cls(**data)
        except TypeError as exc:
            raise ValueError(f"incomplete config: {exc}") from None


@dataclass
class SwarmState:
    x: np.ndarray
    v: np.ndarray
    pbest_x: np.ndarray
    pbest_f: np.ndarray
    lbest_idx: np.ndarray
    iteration: int = 0
    evals: int = 0

    @property
    def best_index(self) -> int:
        return int(np.argmin(self.pbest_f))

    @property
    def best_f(self) -> float:
        return float(self.pbest_f[self.best_index])

    @property
    def best_x(self) -> np.ndarray:
        return self.pbest_x[self.best_index]

    @property
    def lbest_x(self) -> np.ndarray:
        return self.pbest_x[self.lbest_idx]

    @property
    def lbest_f(self) -> np.ndarray:
        return self.pbest_f[self.lbest_idx]

    def particle(self, i: int) -> ParticleState:
        return ParticleState(self.x[i].copy(), self.v[i].copy(), self.pbest_x[i].copy(), float(self.pbest_f[i]))


def _refresh_lbest(pbest_f: np.ndarray, graph: InformerGraph) -> np.ndarray:
    idx = graph.index_matrix()
    pick = np.argmin(pbest_f[idx], axis=1)
    return idx[np.arange(idx.shape[0]), pick]


def _sequential(fn: Objective, xs: Sequence[np.ndarray]) -> list:
    return [fn(x) for x in xs]


def _evaluate_all(objective: Objective, X: np.ndarray, evaluator, iteration: int) -> np.ndarray:
    def guarded(i: int) -> float:
        try:
            value = float(objective(X[i]))
        except Exception as exc:
            err = EvaluationError(f"objective failed for particle {i} at iteration {iteration}: {exc}")
            err.diagnostic = {"iteration": iteration, "particle": i, "x": X[i].tolist(), "error": str(exc)}
            raise err from exc
        if math.isnan(value):
            err = EvaluationError(f"objective returned NaN for particle {i} at iteration {iteration}")
            err.diagnostic = {"iteration": iteration, "particle": i, "x": X[i].tolist(), "error": "NaN"}
            raise err
        return value

    return np.array((evaluator or _sequential)(guarded, range(X.shape[0])), dtype=float)


def state_from_arrays(x, v, objective: Objective, graph: InformerGraph, evaluator=None) -> SwarmState:
    """Evaluate explicit initial positions; personal bests start at them."""
    x = np.array(x, dtype=float, ndmin=2)
    v = np.array(v, dtype=float, ndmin=2)
    if x.shape != v.shape:
        raise ValueError(f"position and velocity shapes differ: {x.shape} vs {v.shape}")
    if graph.size != x.shape[0]:
        raise ValueError(f"topology has {graph.size} particles, positions have {x.shape[0]}")
    f = _evaluate_all(objective, x, evaluator, 0)
    return SwarmState(
        x=x,
        v=v,
        pbest_x=x.copy(),
        pbest_f=f,
        lbest_idx=_refresh_lbest(f, graph),
        iteration=0,
        evals=x.shape[0],
    )


def initialize(config: SwarmConfig, objective: Objective, graph: InformerGraph, evaluator=None) -> SwarmState:
    rng = streams.stream(config.seed, streams.INIT)
    lo, hi = config.lower, config.upper
    x = lo + (hi - lo) * rng.random((config.swarm_size, config.dimensions))
    if config.velocity_init == "zero":
        v = np.zeros_like(x)
    else:
        half = config.vmax if config.vmax is not None else 0.5 * (hi - lo)
        v = half * (2.0 * rng.random(x.shape) - 1.0)
    return state_from_arrays(x, v, objective, graph, evaluator)


def step(
    state: SwarmState,
    objective: Objective,
    graph: InformerGraph,
    formulation: FormulationConfig,
    rngs: Sequence[np.random.Generator],
    vmax=None,
    evaluator=None,
    feasible: tuple[np.ndarray, np.ndarray] | None = None,
) -> SwarmState:
    """Advance the swarm by one iteration and return the new state.

    ``rngs`` holds one stream per particle. When ``feasible`` is a
    ``(lower, upper)`` pair, only in-box positions may become personal bests.
    """
    n, d = state.x.shape
    if isinstance(formulation, ConstrictedParams):
        formulation = as_general(formulation)
    u = np.stack([rngs[i].random((2, d)) for i in range(n)])
    coeffs = formulation.coefficients(u[:, 0], u[:, 1])

    v = velocity_update(state, state.lbest_x, coeffs, formulation.w)
    if vmax is not None:
        v = clamp_velocity(v, vmax)
    x = state.x + v

    iteration = state.iteration + 1
    f = _evaluate_all(objective, x, evaluator, iteration)

    improved = f < state.pbest_f
    if feasible is not None:
        lo, hi = feasible
        improved &= np.all((x >= lo) & (x <= hi), axis=1)
    pbest_x = np.where(improved[:, None], x, state.pbest_x)
    pbest_f = np.where(improved, f, state.pbest_f)

    return replace(
        state,
        x=x,
        v=v,
        pbest_x=pbest_x,
        pbest_f=pbest_f,
        lbest_idx=_refresh_lbest(pbest_f, graph),
        iteration=iteration,
        evals=state.evals + n,
    )


@dataclass(frozen=True)
class IterationLog:
    t: int
    best_f: float
    best_x: tuple[float, ...]
    evals: int

    def to_json(self) -> str:
        return json.dumps({"t": self.t, "best_f": self.best_f, "best_x": list(self.best_x), "evals": self.evals})


@dataclass(frozen=True)
class RunRecord:
    config: dict
    history: tuple[IterationLog, ...]
    best_x: tuple[float, ...]
    best_f: float
    evaluations: int
    wall_time: float = field(default=0.0, compare=False)

    @property
    def trace(self) -> list[float]:
        return [h.best_f for h in self.history]

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "best_f": self.best_f,
            "best_x": list(self.best_x),
            "evaluations": self.evaluations,
            "iterations": len(self.history) - 1,
            "wall_time": self.wall_time,
        }

    def jsonl(self) -> str:
        return "".join(h.to_json() + "\n" for h in self.history)


def _log_entry(state: SwarmState) -> IterationLog:
    return IterationLog(state.iteration, state.best_f, tuple(state.best_x.tolist()), state.evals)


def run(
    config: SwarmConfig,
    objective: Objective,
    workers: int = 1,
    on_iteration: Callable[[IterationLog], None] | None = None,
) -> RunRecord:
    """Optimise ``objective`` under ``config``.

    Stops after ``max_iterations`` steps, or as soon as the best value drops
    below ``target_tolerance``. ``workers > 1`` evaluates particles on a
    thread pool; results do not depend on it.
    """
    started = time.perf_counter()
    graph = build(config.topology, config.swarm_size, streams.stream(config.seed, streams.TOPOLOGY))
    rngs = streams.particle_streams(config.seed, config.swarm_size)
    formulation = as_general(config.formulation) if isinstance(config.formulation, ConstrictedParams) else config.formulation
    feasible = (config.lower, config.upper) if config.feasible_pbest_only else None

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    evaluator = (lambda fn, idx: list(pool.map(fn, idx))) if pool else None
    try:
        state = initialize(config, objective, graph, evaluator)
        history = [_log_entry(state)]
        if on_iteration:
            on_iteration(history[-1])
        target = config.target_tolerance
        while state.iteration < config.max_iterations and not (target is not None and state.best_f < target):
            state = step(state, objective, graph, formulation, rngs, config.vmax, evaluator, feasible)
            history.append(_log_entry(state))
            if on_iteration:
                on_iteration(history[-1])
    finally:
        if pool:
            pool.shutdown()

    return RunRecord(
        config=config.to_dict(),
        history=tuple(history),
        best_x=tuple(state.best_x.tolist()),
        best_f=state.best_f,
        evaluations=state.evals,
        wall_time=time.perf_counter() - started,
    )

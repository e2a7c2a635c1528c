"""Test objectives for validation runs, plus an external black-box adapter."""

from __future__ import annotations

import shlex
import subprocess
import threading
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "EvaluationError",
    "ObjectiveSpec",
    "SubprocessObjective",
    "evaluate",
    "get_objective",
    "REGISTRY",
]


class EvaluationError(RuntimeError):
    """The objective could not produce a value."""


def sphere(x: np.ndarray) -> float:
    return float(np.sum(x * x))


def rosenbrock(x: np.ndarray) -> float:
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def rastrigin(x: np.ndarray) -> float:
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def ackley(x: np.ndarray) -> float:
    n = x.size
    a = -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x * x) / n))
    b = -np.exp(np.sum(np.cos(2.0 * np.pi * x)) / n)
    return float(a + b + 20.0 + np.e)


def griewank(x: np.ndarray) -> float:
    i = np.arange(1, x.size + 1)
    return float(1.0 + np.sum(x * x) / 4000.0 - np.prod(np.cos(x / np.sqrt(i))))


# name -> (function, per-dimension bounds, optimum coordinate)
REGISTRY: dict[str, tuple[Callable[[np.ndarray], float], tuple[float, float], float]] = {
    "sphere": (sphere, (-5.12, 5.12), 0.0),
    "rosenbrock": (rosenbrock, (-5.0, 10.0), 1.0),
    "rastrigin": (rastrigin, (-5.12, 5.12), 0.0),
    "ackley": (ackley, (-32.768, 32.768), 0.0),
    "griewank": (griewank, (-600.0, 600.0), 0.0),
}


@dataclass(frozen=True)
class ObjectiveSpec:
    name: str
    dimensions: int
    bounds: tuple[tuple[float, float], ...]
    known_optimum: tuple[tuple[float, ...], float] | None = None
    function: Callable[[np.ndarray], float] | None = None

    def __post_init__(self) -> None:
        if self.dimensions < 1:
            raise ValueError(f"dimensions must be positive, got {self.dimensions}")
        if len(self.bounds) != self.dimensions:
            raise ValueError("need one (low, high) pair per dimension")
        if self.known_optimum is not None:
            pos, _ = self.known_optimum
            if len(pos) != self.dimensions or any(
                not lo <= xi <= hi for xi, (lo, hi) in zip(pos, self.bounds)
            ):
                raise ValueError("known optimum lies outside the bounds")

    def __call__(self, x) -> float:
        return evaluate(self, x)


def get_objective(name: str, dimensions: int) -> ObjectiveSpec:
    try:
        fn, (lo, hi), opt = REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown objective {name!r}; available: {', '.join(sorted(REGISTRY))}") from None
    return ObjectiveSpec(
        name=name,
        dimensions=dimensions,
        bounds=((lo, hi),) * dimensions,
        known_optimum=((opt,) * dimensions, 0.0),
        function=fn,
    )


def evaluate(spec: ObjectiveSpec, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.dimensions,):
        raise ValueError(f"{spec.name} expects a vector of length {spec.dimensions}, got shape {x.shape}")
    if spec.function is None:
        raise EvaluationError(f"objective {spec.name!r} has no function attached")
    return spec.function(x)


class SubprocessObjective:
    """Evaluate an external program, one request per line.

    Each request is the position as space-separated decimals; the program
    answers with a single decimal per line. Calls are serialised.
    """

    def __init__(self, command: str | list[str]):
        self.command = shlex.split(command) if isinstance(command, str) else list(command)
        self._proc: subprocess.Popen | None = None
        self._lock = threading.Lock()

    def _start(self) -> subprocess.Popen:
        if self._proc is None:
            try:
                self._proc = subprocess.Popen(
                    self.command,
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                    text=True,
                    bufsize=1,
                )
            except OSError as exc:
                raise EvaluationError(f"cannot start objective {self.command!r}: {exc}") from exc
        return self._proc

    def __call__(self, x) -> float:
        line = " ".join(format(float(v), ".17g") for v in np.ravel(x))
        with self._lock:
            proc = self._start()
            try:
                proc.stdin.write(line + "\n")
                proc.stdin.flush()
                reply = proc.stdout.readline()
            except (BrokenPipeError, OSError):
                reply = ""
            if not reply:
                code = proc.wait()
                raise EvaluationError(f"objective process exited with status {code}")
        try:
            return float(reply)
        except ValueError:
            raise EvaluationError(f"objective replied with a non-number: {reply.strip()!r}") from None

    def close(self) -> None:
        if self._proc is not None:
            if self._proc.stdin:
                self._proc.stdin.close()
            self._proc.wait(timeout=10)
            if self._proc.stdout:
                self._proc.stdout.close()
            self._proc = None

    def __enter__(self):
        return self

    def __exit__(self, *exc) -> None:
        self.close()

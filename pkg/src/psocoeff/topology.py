"""Static neighbourhood topologies.

A topology is stored as an informer graph: ``informers[i]`` lists the
particles whose personal bests particle ``i`` may adopt as its social
attractor. Neighbourhoods are defined on particle indices, not on positions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["InformerGraph", "TopologySpec", "build", "lbest_of", "topology_from_dict"]

KINDS = ("global", "ring", "wheel", "random", "forward", "von_neumann")


@dataclass(frozen=True)
class TopologySpec:
    """Which graph to build.

    ``k`` is used by ``ring`` (total neighbours, even) and ``forward``
    (particles informed downstream); ``out_degree`` by ``random``;
    ``rows`` and ``cols`` by ``von_neumann``.
    """

    kind: str = "global"
    k: int | None = None
    out_degree: int | None = None
    rows: int | None = None
    cols: int | None = None
    include_self: bool = True

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown topology kind {self.kind!r}; expected one of {KINDS}")
        needed = {"ring": ("k",), "forward": ("k",), "random": ("out_degree",), "von_neumann": ("rows", "cols")}
        for name in needed.get(self.kind, ()):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"{self.kind} topology needs a positive integer {name!r}, got {value!r}")
        if self.kind == "ring" and self.k % 2:
            raise ValueError(f"ring topology needs an even k, got {self.k}")

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for name in ("k", "out_degree", "rows", "cols"):
            if getattr(self, name) is not None:
                out[name] = getattr(self, name)
        out["include_self"] = self.include_self
        return out


def topology_from_dict(data: dict) -> TopologySpec:
    allowed = {"kind", "k", "out_degree", "rows", "cols", "include_self"}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ValueError(f"unknown topology field(s): {', '.join(unknown)}")
    if "include_self" in data and not isinstance(data["include_self"], bool):
        raise ValueError("include_self must be a boolean")
    return TopologySpec(**data)


@dataclass(frozen=True)
class InformerGraph:
    informers: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.informers)

    def degree(self, i: int) -> int:
        return len(self.informers[i])

    def is_symmetric(self) -> bool:
        edges = {(i, j) for i, row in enumerate(self.informers) for j in row}
        return all((j, i) in edges for i, j in edges)

    def index_matrix(self) -> np.ndarray:
        """Informer lists padded to equal length by repeating the last entry.

        Rows are sorted, so ``argmin`` over a row picks the lowest index on ties.
        """
        width = max(len(row) for row in self.informers)
        return np.array([row + (row[-1],) * (width - len(row)) for row in self.informers], dtype=np.intp)


def build(spec: TopologySpec, swarm_size: int, rng: np.random.Generator | None = None) -> InformerGraph:
    """Build the informer graph for ``swarm_size`` particles.

    ``rng`` is only consulted by the ``random`` kind, once, at build time.
    """
    n = swarm_size
    if n < 1:
        raise ValueError(f"swarm_size must be positive, got {n}")
    kind = spec.kind
    if kind == "global":
        neigh = [set(range(n)) for _ in range(n)]
    elif kind == "ring":
        if spec.k >= n:
            raise ValueError(f"ring with k={spec.k} needs more than {spec.k} particles, got {n}")
        half = spec.k // 2
        neigh = [{(i + d) % n for d in range(-half, half + 1) if d} for i in range(n)]
    elif kind == "wheel":
        if n < 2:
            raise ValueError("wheel topology needs at least 2 particles")
        # hub is particle 0
        neigh = [set(range(1, n))] + [{0} for _ in range(1, n)]
    elif kind == "forward":
        if spec.k >= n:
            raise ValueError(f"forward with k={spec.k} needs more than {spec.k} particles, got {n}")
        # i informs i+1..i+k, so j is informed by j-1..j-k
        neigh = [{(j - d) % n for d in range(1, spec.k + 1)} for j in range(n)]
    elif kind == "random":
        if spec.out_degree > n - 1:
            raise ValueError(f"random topology with out_degree={spec.out_degree} needs at least {spec.out_degree + 1} particles")
        if rng is None:
            raise ValueError("random topology needs a random stream")
        neigh = []
        for i in range(n):
            others = np.array([j for j in range(n) if j != i], dtype=np.intp)
            neigh.append(set(rng.choice(others, size=spec.out_degree, replace=False).tolist()))
    else:
        rows, cols = spec.rows, spec.cols
        if rows * cols != n:
            raise ValueError(f"von Neumann lattice {rows}x{cols} does not hold {n} particles")
        neigh = []
        for i in range(n):
            r, c = divmod(i, cols)
            lattice = {
                ((r - 1) % rows) * cols + c,
                ((r + 1) % rows) * cols + c,
                r * cols + (c - 1) % cols,
                r * cols + (c + 1) % cols,
            }
            neigh.append(lattice)

    rows_out = []
    for i, s in enumerate(neigh):
        s = set(s)
        if spec.include_self:
            s.add(i)
        else:
            s.discard(i)
        if not s:
            raise ValueError(f"particle {i} has no informers")
        rows_out.append(tuple(sorted(s)))
    return InformerGraph(tuple(rows_out))


def lbest_of(graph: InformerGraph, i: int, pbest_f, pbest_x):
    """Best informer of particle ``i``: ``(index, value, position)``.

    Minimisation; ties go to the lowest index.
    """
    best = None
    for j in graph.informers[i]:
        if best is None or pbest_f[j] < pbest_f[best]:
            best = j
    return best, pbest_f[best], pbest_x[best]

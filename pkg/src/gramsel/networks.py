"""Random network instance generation.

Four ensembles: Erdos-Renyi, Barabasi-Albert, an L-shaped mesh, and dense
random stable matrices. Graph structure defines the off-diagonal nonzero
pattern; every structural nonzero receives an independent standard-normal
weight (or one shared weight per undirected edge in symmetric mode); the
structural diagonal is zero. The matrix is then shifted by ``sigma * I``
with ``sigma = spectral_abscissa(A_raw) + 0.05`` so the rightmost
eigenvalues land at real part -0.05, the minimal diagonal change achieving
stability at that margin. Generation is deterministic per seed, bit for bit.
"""

import math
import warnings
from collections import deque
from dataclasses import dataclass

import numpy as np

from .linalg import spectral_abscissa
from .system import LinearSystem

#: Real part of the rightmost eigenvalues after stabilization.
TARGET_ABSCISSA = -0.05

GRAPH_KINDS = ("er", "ba", "lmesh", "rss")


@dataclass(frozen=True)
class GraphSpec:
    """Recipe for one random network instance.

    kind: "er" (Erdos-Renyi, edge probability ``p``), "ba"
    (Barabasi-Albert, ``m_attach`` edges per new node), "lmesh" (L-shaped
    grid mesh with ``arm_len`` x ``arm_width`` arms), or "rss" (dense random
    stable). ``symmetric=True`` gives each undirected edge one shared weight
    instead of two independent ones.
    """

    kind: str
    n: int
    seed: int
    p: float | None = None
    m_attach: int | None = None
    arm_len: int | None = None
    arm_width: int | None = None
    symmetric: bool = False

    def __post_init__(self):
        if self.kind not in GRAPH_KINDS:
            raise ValueError(f"kind must be one of {GRAPH_KINDS}, got {self.kind!r}")
        min_n = 1 if self.kind == "rss" else 2
        if self.n < min_n:
            raise ValueError(f"n must be >= {min_n} for kind {self.kind!r}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.kind == "er":
            p = 0.08 if self.p is None else float(self.p)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"p must lie in [0, 1], got {p}")
            object.__setattr__(self, "p", p)
        if self.kind == "ba":
            m_attach = 2 if self.m_attach is None else int(self.m_attach)
            if m_attach < 1:
                raise ValueError(f"m_attach must be >= 1, got {m_attach}")
            if self.n < max(m_attach + 1, 3):
                raise ValueError(
                    f"n = {self.n} too small for attachment count {m_attach}"
                )
            object.__setattr__(self, "m_attach", m_attach)
        if self.kind == "lmesh":
            if self.arm_width is not None and self.arm_width < 1:
                raise ValueError("arm_width must be >= 1")
            if self.arm_len is not None and self.arm_len < 1:
                raise ValueError("arm_len must be >= 1")


@dataclass(frozen=True)
class WeightedNetwork:
    """A stabilized weighted instance plus its structural edge list.

    ``edges`` holds undirected pairs (i < j); the off-diagonal support of
    ``a`` equals this set exactly. ``shift`` records the applied diagonal
    shift sigma.
    """

    a: np.ndarray
    edges: tuple[tuple[int, int], ...]
    shift: float
    spec: GraphSpec

    @property
    def n(self):
        return self.a.shape[0]

    def to_system(self, epsilon=0.0, candidates="standard_basis", base=None):
        """Wrap the stabilized matrix as a selection instance."""
        return LinearSystem(a=self.a, candidates=candidates, base=base, epsilon=epsilon)


def _stabilize(a_raw):
    shift = spectral_abscissa(a_raw) - TARGET_ABSCISSA
    return a_raw - shift * np.eye(a_raw.shape[0]), float(shift)


def _er_edges(rng, n, p):
    uniforms = rng.random((n, n))
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if uniforms[i, j] < p:
                edges.append((i, j))
    return edges


def _ba_edges(rng, n, m_attach):
    seed_size = max(m_attach + 1, 3)
    edges = [(i, j) for i in range(seed_size) for j in range(i + 1, seed_size)]
    # stubs holds each node once per incident edge, so uniform draws from it
    # realize degree-proportional preferential attachment.
    stubs = [node for edge in edges for node in edge]
    for new in range(seed_size, n):
        chosen = set()
        while len(chosen) < m_attach:
            chosen.add(int(stubs[int(rng.integers(0, len(stubs)))]))
        for target in sorted(chosen):
            edges.append((target, new))
            stubs.extend((target, new))
    return edges


def _lmesh_cells(arm_len, arm_width):
    cells = {(r, c) for r in range(arm_len) for c in range(arm_width)}
    cells |= {(r, c) for r in range(arm_width) for c in range(arm_len)}
    return cells


def _lmesh_edges(n, arm_len, arm_width):
    """Grid graph on an L-shaped domain, trimmed or padded to n nodes.

    The domain is the union of a vertical arm_len x arm_width arm and a
    horizontal one sharing the corner square. If it has fewer than n cells
    the horizontal arm is extended column by column; if more, cells farthest
    from the corner in breadth-first order are dropped (a BFS prefix of a
    connected graph stays connected).
    """
    width = arm_width or 4
    length = arm_len or max(width, math.ceil((n + width * width) / (2 * width)))
    cells = _lmesh_cells(length, width)
    extra_col = length
    while len(cells) < n:
        cells |= {(r, extra_col) for r in range(width)}
        extra_col += 1

    order = []
    seen = {(0, 0)}
    queue = deque([(0, 0)])
    while queue:
        cell = queue.popleft()
        order.append(cell)
        r, c = cell
        for nb in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if nb in cells and nb not in seen:
                seen.add(nb)
                queue.append(nb)
    kept = sorted(order[:n])
    ids = {cell: i for i, cell in enumerate(kept)}
    edges = []
    for cell in kept:
        r, c = cell
        for nb in ((r, c + 1), (r + 1, c)):
            if nb in ids:
                edges.append((ids[cell], ids[nb]))
    return sorted(tuple(sorted(e)) for e in edges)


def _is_connected(n, edges):
    if n <= 1:
        return True
    adjacency = [[] for _ in range(n)]
    for i, j in edges:
        adjacency[i].append(j)
        adjacency[j].append(i)
    seen = {0}
    queue = deque([0])
    while queue:
        node = queue.popleft()
        for nb in adjacency[node]:
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return len(seen) == n


def _weight_pattern(rng, n, edges, symmetric):
    normals = rng.standard_normal((n, n))
    a = np.zeros((n, n))
    for i, j in edges:
        a[i, j] = normals[i, j]
        a[j, i] = normals[i, j] if symmetric else normals[j, i]
    return a


def generate(spec):
    """Generate a stabilized weighted instance from a :class:`GraphSpec`."""
    rng = np.random.default_rng(spec.seed)
    n = spec.n

    if spec.kind == "rss":
        a_raw = rng.standard_normal((n, n))
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
        a, shift = _stabilize(a_raw)
        return WeightedNetwork(a=a, edges=tuple(edges), shift=shift, spec=spec)

    if spec.kind == "er":
        edges = _er_edges(rng, n, spec.p)
        if not _is_connected(n, edges):
            warnings.warn(
                f"Erdos-Renyi sample is disconnected (p = {spec.p:g}, "
                f"connectivity threshold ln(n)/n = {math.log(n) / n:.4f})",
                stacklevel=2,
            )
    elif spec.kind == "ba":
        edges = _ba_edges(rng, n, spec.m_attach)
    else:
        edges = _lmesh_edges(n, spec.arm_len, spec.arm_width)

    a_raw = _weight_pattern(rng, n, edges, spec.symmetric)
    a, shift = _stabilize(a_raw)
    return WeightedNetwork(a=a, edges=tuple(edges), shift=shift, spec=spec)


def random_stable(n, seed):
    """Dense random stable matrix: standard-normal entries shifted to -0.05."""
    return generate(GraphSpec(kind="rss", n=n, seed=seed))

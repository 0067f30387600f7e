"""MaxCut problem instances and the exact brute-force cut oracle.

Graphs are undirected, unweighted, simple. Cut assignments are bitstrings
``z_0 z_1 ... z_{n-1}`` where ``z_i`` is the side of vertex ``i``; the same
convention maps a computational-basis index ``k`` to bits via
``z_i = (k >> i) & 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceededError, GenerationFailureError, InvalidInstanceError

BRUTE_FORCE_QUBIT_BUDGET = 24
REGULAR_GENERATION_ATTEMPTS = 10_000


@dataclass(frozen=True)
class Graph:
    """Undirected unweighted graph on vertices ``0..n-1``.

    ``degree`` optionally declares regularity, which is then enforced.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    degree: int | None = field(default=None)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInstanceError(f"vertex count must be >= 1, got {self.n}")
        canon = []
        seen = set()
        for e in self.edges:
            if len(e) != 2:
                raise InvalidInstanceError(f"edge {e!r} is not a pair")
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise InvalidInstanceError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvalidInstanceError(f"edge ({i},{j}) out of range for n={self.n}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise InvalidInstanceError(f"duplicate edge {key}")
            seen.add(key)
            canon.append(key)
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        if self.degree is not None:
            seq = self.degree_sequence()
            if any(d != self.degree for d in seq):
                raise InvalidInstanceError(
                    f"declared {self.degree}-regular but degree sequence is {seq}"
                )

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree_sequence(self) -> list[int]:
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg


def ring_graph(n: int) -> Graph:
    """Cycle graph ``v_0 - v_1 - ... - v_{n-1} - v_0``; 2-regular."""
    if n < 3:
        raise InvalidInstanceError(f"ring graph needs n >= 3, got {n}")
    edges = tuple((i, (i + 1) % n) for i in range(n))
    return Graph(n=n, edges=edges, degree=2)


def random_regular_graph(n: int, d: int, seed: int) -> Graph:
    """Simple d-regular graph on n vertices via the pairing model.

    Stubs are shuffled and paired; any attempt producing a self-loop or a
    repeated edge is rejected wholesale and redrawn. Deterministic for a
    fixed ``(n, d, seed)``.
    """
    if d >= n:
        raise InvalidInstanceError(f"regularity d={d} must be < n={n}")
    if (n * d) % 2 != 0:
        raise InvalidInstanceError(f"n*d must be even, got n={n}, d={d}")
    if d < 1:
        raise InvalidInstanceError(f"regularity must be >= 1, got d={d}")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(REGULAR_GENERATION_ATTEMPTS):
        perm = rng.permutation(stubs)
        pairs = perm.reshape(-1, 2)
        edges = set()
        ok = True
        for a, b in pairs:
            i, j = int(min(a, b)), int(max(a, b))
            if i == j or (i, j) in edges:
                ok = False
                break
            edges.add((i, j))
        if ok:
            return Graph(n=n, edges=tuple(sorted(edges)), degree=d)
    raise GenerationFailureError(
        f"no simple {d}-regular graph on {n} vertices found in "
        f"{REGULAR_GENERATION_ATTEMPTS} pairing attempts"
    )


def cut_value(g: Graph, bits) -> int:
    """Number of edges cut by an assignment (sequence of 0/1 per vertex)."""
    return sum(1 for i, j in g.edges if bits[i] != bits[j])


def _assignment_cuts(g: Graph) -> np.ndarray:
    """Vector of cut values for all 2^n assignments, indexed little-endian."""
    z = np.arange(1 << g.n, dtype=np.int64)
    cuts = np.zeros(1 << g.n, dtype=np.int64)
    for i, j in g.edges:
        cuts += ((z >> i) ^ (z >> j)) & 1
    return cuts


def brute_force_maxcut(g: Graph) -> tuple[int, str]:
    """Exact MaxCut via full enumeration.

    Returns ``(max_cut_value, witness)`` where the witness is the
    lexicographically smallest maximizing bitstring ``z_0...z_{n-1}``.
    """
    if g.n > BRUTE_FORCE_QUBIT_BUDGET:
        raise BudgetExceededError(
            f"brute force capped at n <= {BRUTE_FORCE_QUBIT_BUDGET}, got {g.n}"
        )
    cuts = _assignment_cuts(g)
    best = int(cuts.max())
    candidates = np.flatnonzero(cuts == best)
    # Lexicographic order of the string z_0...z_{n-1} equals numeric order of
    # the big-endian reinterpretation of the little-endian basis index.
    keys = np.zeros(len(candidates), dtype=np.int64)
    for i in range(g.n):
        keys |= ((candidates >> i) & 1) << (g.n - 1 - i)
    winner = int(candidates[np.argmin(keys)])
    witness = "".join(str((winner >> i) & 1) for i in range(g.n))
    return best, witness


def write_edge_list(g: Graph, path) -> None:
    """Write the plain edge-list format: ``n m`` then one ``i j`` per edge."""
    lines = [f"{g.n} {g.num_edges}"]
    lines.extend(f"{i} {j}" for i, j in g.edges)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_edge_list(path) -> Graph:
    """Parse the edge-list format, rejecting self-loops and duplicates."""
    with open(path) as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise InvalidInstanceError(f"{path}: missing 'n m' header")
    n, m = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != 2 * m:
        raise InvalidInstanceError(f"{path}: expected {m} edges, found {len(body) // 2}")
    edges = tuple((int(body[2 * k]), int(body[2 * k + 1])) for k in range(m))
    return Graph(n=n, edges=edges)

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import networkx as nx

from .errors import InvalidGraphError, ResourceGuardError
from .exactmat import IntMatrix, determinant

logger = logging.getLogger(__name__)

MAX_ENUMERATION_VERTICES = 7

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Simple connected graph on vertices 1..n."""

    n: int
    edges: frozenset[Edge]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise InvalidGraphError(f"a graph needs at least 2 vertices, got {self.n}")
        for u, v in self.edges:
            if not 1 <= u < v <= self.n:
                raise InvalidGraphError(f"edge {{{u},{v}}} is not a valid edge on vertices 1..{self.n}")
        if not nx.is_connected(to_networkx(self)):
            raise InvalidGraphError(f"graph {self.label} is not connected")

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[Sequence[int]], name: str = "") -> "Graph":
        normalized = set()
        for edge in edges:
            u, v = edge
            if u == v:
                raise InvalidGraphError(f"loop at vertex {u}")
            pair = (min(u, v), max(u, v))
            if pair in normalized:
                raise InvalidGraphError(f"multi-edge {{{pair[0]},{pair[1]}}}")
            normalized.add(pair)
        return cls(n, frozenset(normalized), name)

    @property
    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def label(self) -> str:
        return self.name or f"G({self.n}; {self.edge_list})"

    def degree(self, vertex: int) -> int:
        return sum(1 for edge in self.edges if vertex in edge)

    def neighbors(self, vertex: int) -> list[int]:
        return sorted(u if v == vertex else v for u, v in self.edges if vertex in (u, v))


def to_networkx(g: Graph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(1, g.n + 1))
    graph.add_edges_from(g.edges)
    return graph


def write_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edge_list)
    return "\n".join(lines) + "\n"


def laplacian(g: Graph) -> IntMatrix:
    rows = [[0] * g.n for _ in range(g.n)]
    for u, v in g.edges:
        rows[u - 1][v - 1] = rows[v - 1][u - 1] = -1
        rows[u - 1][u - 1] += 1
        rows[v - 1][v - 1] += 1
    return IntMatrix.from_rows(rows)


def spanning_tree_count(g: Graph) -> int:
    """(1,1)-cofactor of the Laplacian."""
    rows = laplacian(g).to_rows()
    minor = [row[1:] for row in rows[1:]]
    return determinant(IntMatrix.from_rows(minor))


def complete(n: int) -> Graph:
    if n < 2:
        raise InvalidGraphError(f"K{n} is out of range (n >= 2)")
    return Graph.from_edges(n, itertools.combinations(range(1, n + 1), 2), f"K{n}")


def cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidGraphError(f"C{n} is out of range (n >= 3)")
    edges = [(i, i + 1) for i in range(1, n)] + [(1, n)]
    return Graph.from_edges(n, edges, f"C{n}")


def path(n: int) -> Graph:
    if n < 2:
        raise InvalidGraphError(f"P{n} is out of range (n >= 2)")
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)], f"P{n}")


def star(n: int) -> Graph:
    """Star with centre n."""
    if n < 2:
        raise InvalidGraphError(f"S{n} is out of range (n >= 2)")
    return Graph.from_edges(n, [(i, n) for i in range(1, n)], f"S{n}")


def tree_from_pruefer(sequence: Sequence[int]) -> Graph:
    n = len(sequence) + 2
    if any(not 1 <= a <= n for a in sequence):
        raise InvalidGraphError(f"Pruefer entries must lie in 1..{n}")
    tree = nx.from_prufer_sequence([a - 1 for a in sequence])
    name = "T:[" + ",".join(str(a) for a in sequence) + "]"
    return Graph.from_edges(n, [(u + 1, v + 1) for u, v in tree.edges], name)


def whisker(g: Graph, k: int = 1) -> Graph:
    """W_k(G): layer m vertex i + m*n hangs off i + (m-1)*n."""
    if k < 1:
        raise InvalidGraphError(f"whisker length must be positive, got {k}")
    n = g.n
    edges = list(g.edges)
    for m in range(1, k + 1):
        edges.extend((i + (m - 1) * n, i + m * n) for i in range(1, n + 1))
    prefix = "W" if k == 1 else f"W{k}"
    return Graph.from_edges((k + 1) * n, edges, f"{prefix}({g.name})" if g.name else "")


def star_whisker(g: Graph, k: int = 1) -> Graph:
    """W*_k(G): W_k(G) plus one vertex joined to every vertex of the outermost layer."""
    whiskered = whisker(g, k)
    n = g.n
    hub = (k + 1) * n + 1
    edges = list(whiskered.edges) + [(k * n + i, hub) for i in range(1, n + 1)]
    prefix = "W*" if k == 1 else f"W*{k}"
    return Graph.from_edges(hub, edges, f"{prefix}({g.name})" if g.name else "")


def star_whisker_complete(n: int, k: int = 1) -> Graph:
    if n < 3:
        raise InvalidGraphError(f"W*(K{n}) needs n >= 3")
    return star_whisker(complete(n), k)


def bridge(gs: Sequence[Graph]) -> Graph:
    """B(G_1, ..., G_k): components on consecutive labels, last vertex of one joined to the first of the next."""
    if len(gs) < 2:
        raise InvalidGraphError("bridge needs at least two graphs")
    sizes = {g.n for g in gs}
    if len(sizes) > 1:
        logger.warning(f"bridging graphs of unequal sizes {[g.n for g in gs]}; no reflexivity guarantee")
    edges = []
    offset = 0
    for position, g in enumerate(gs):
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        if position:
            edges.append((offset, offset + 1))
        offset += g.n
    names = [g.name for g in gs]
    name = f"B({','.join(names)})" if all(names) else ""
    return Graph.from_edges(offset, edges, name)


def relabel(g: Graph, sigma: Sequence[int]) -> Graph:
    """Image of g under vertex map v -> sigma[v-1]."""
    if sorted(sigma) != list(range(1, g.n + 1)):
        raise InvalidGraphError("relabeling is not a permutation of the vertices")
    return Graph.from_edges(g.n, [(sigma[u - 1], sigma[v - 1]) for u, v in g.edges])


@dataclass(frozen=True)
class CanonicalForm:
    key: str
    edges: tuple[Edge, ...]
    # labeling[v-1] is the canonical label of vertex v
    labeling: tuple[int, ...]


def _refine(cells: list[list[int]], adjacency: list[set[int]]) -> list[list[int]]:
    while True:
        position = {v: k for k, cell in enumerate(cells) for v in cell}
        refined = []
        for cell in cells:
            if len(cell) == 1:
                refined.append(cell)
                continue
            signature = {
                v: tuple(sorted(Counter(position[u] for u in adjacency[v]).items())) for v in cell
            }
            for value in sorted(set(signature.values())):
                refined.append([v for v in cell if signature[v] == value])
        if len(refined) == len(cells):
            return refined
        cells = refined


def _canonical_code(n: int, edges: Sequence[Edge]) -> tuple[tuple[Edge, ...], list[int]]:
    """Smallest relabelled edge tuple over the individualisation-refinement tree (0-based)."""
    adjacency = [set() for _ in range(n)]
    for u, v in edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    best: list = [None, None]

    def search(cells):
        cells = _refine(cells, adjacency)
        target = next((k for k, cell in enumerate(cells) if len(cell) > 1), None)
        if target is None:
            order = [0] * n
            for k, cell in enumerate(cells):
                order[cell[0]] = k
            code = tuple(sorted((min(order[u], order[v]), max(order[u], order[v])) for u, v in edges))
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, order
            return
        cell = cells[target]
        for v in cell:
            rest = [w for w in cell if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search([list(range(n))])
    return best[0], best[1]


def _key(n: int, code: Sequence[Edge]) -> str:
    bits = 0
    for u, v in code:
        bits |= 1 << (u * n + v)
    return f"{n}:{bits:0{(n * n + 3) // 4}x}"


def canonical_form(g: Graph) -> CanonicalForm:
    code, order = _canonical_code(g.n, [(u - 1, v - 1) for u, v in g.edges])
    return CanonicalForm(
        key=_key(g.n, code),
        edges=tuple((u + 1, v + 1) for u, v in code),
        labeling=tuple(k + 1 for k in order),
    )


def isomorphism(g: Graph, h: Graph) -> tuple[int, ...] | None:
    """sigma with relabel(g, sigma) == h, or None."""
    if g.n != h.n or g.edge_count != h.edge_count:
        return None
    cg, ch = canonical_form(g), canonical_form(h)
    if cg.key != ch.key:
        return None
    inverse_h = {label: v for v, label in enumerate(ch.labeling, start=1)}
    return tuple(inverse_h[label] for label in cg.labeling)


def enumerate_connected(n: int, labeled: bool = False) -> Iterator[Graph]:
    """Connected graphs on n vertices, one per isomorphism class in canonical-key order.

    Classes come from the networkx graph atlas, which covers every graph on up
    to seven vertices. With labeled=True every connected labelled graph is
    produced instead.
    """
    if n > MAX_ENUMERATION_VERTICES:
        raise ResourceGuardError(
            "graph enumeration", n, MAX_ENUMERATION_VERTICES,
            f"graph enumeration supports n <= {MAX_ENUMERATION_VERTICES}, got n = {n}",
        )
    if n < 2:
        raise InvalidGraphError(f"graph enumeration needs n >= 2, got {n}")
    if labeled:
        return _labeled_stream(n)
    graphs = [
        Graph.from_edges(n, [(u + 1, v + 1) for u, v in atlas.edges])
        for atlas in nx.graph_atlas_g()
        if atlas.number_of_nodes() == n and nx.is_connected(atlas)
    ]
    logger.debug(f"{len(graphs)} connected graph classes on {n} vertices")
    return iter(sorted(graphs, key=lambda g: canonical_form(g).key))


def _labeled_stream(n: int) -> Iterator[Graph]:
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for size in range(n - 1, len(pairs) + 1):
        for subset in itertools.combinations(pairs, size):
            candidate = nx.Graph(subset)
            candidate.add_nodes_from(range(1, n + 1))
            if nx.is_connected(candidate):
                yield Graph.from_edges(n, subset)

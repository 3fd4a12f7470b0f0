"""Implicit pattern families: connected subgraph families, bounded-gap words,
and explicit desk-scale families, all behind one behavioral contract.

Families are never materialized here (connected-subgraph families are
exponential in graph size); membership, minimal elements, single-item
augmentations and interior projections are answered directly.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, Sequence

from .confluence import NotSubconfluenceError
from .order import Verdict
from .patterns import Universe, bit, is_subset, iter_indices


class FamilyError(ValueError):
    """Invalid family construction (bad graph, empty family, ...)."""


def _subconfluence_message(witness: tuple[int, int, int], universe: Universe) -> str:
    t, x, y = witness
    return (
        "not a subconfluence: "
        f"({universe.format(t)}, {universe.format(x)}, {universe.format(y)}) "
        f"share a member below but their union {universe.format(x | y)} is missing"
    )


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class GraphSpec:
    """An undirected graph with named vertices and optionally labeled edges."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    edge_labels: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise FamilyError("duplicate vertex names")
        if len(self.edges) != len(self.edge_labels):
            raise FamilyError("edge label count does not match edge count")
        if len(set(self.edge_labels)) != len(self.edge_labels):
            raise FamilyError("duplicate edge labels")
        n = len(self.vertices)
        for a, b in self.edges:
            if a == b:
                raise FamilyError("self-loops are not allowed")
            if not (0 <= a < n and 0 <= b < n):
                raise FamilyError("edge endpoint out of range")

    @classmethod
    def build(
        cls,
        vertices: Sequence[str],
        edges: Iterable[tuple[str, str] | tuple[str, str, str]],
    ) -> "GraphSpec":
        index = {v: i for i, v in enumerate(vertices)}
        pairs: list[tuple[int, int]] = []
        labels: list[str] = []
        for e in edges:
            a, b = e[0], e[1]
            if a not in index or b not in index:
                raise FamilyError(f"edge ({a!r}, {b!r}) references unknown vertex")
            pairs.append((index[a], index[b]))
            labels.append(e[2] if len(e) == 3 else f"{a}-{b}")
        return cls(tuple(vertices), tuple(pairs), tuple(labels))

    def vertex_adjacency(self) -> list[int]:
        """adj[v] = bit mask of neighbors of vertex v."""
        adj = [0] * len(self.vertices)
        for a, b in self.edges:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return adj

    def edge_adjacency(self) -> list[int]:
        """adj[e] = bit mask of edges sharing an endpoint with edge e."""
        m = len(self.edges)
        adj = [0] * m
        for i in range(m):
            ai, bi = self.edges[i]
            for j in range(i + 1, m):
                aj, bj = self.edges[j]
                if ai in (aj, bj) or bi in (aj, bj):
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
        return adj


class PatternFamily(ABC):
    """Behavioral contract shared by every pattern family.

    A family is a subconfluence of the powerset of its universe: whenever two
    members contain a common member, their union is a member.  Implementations
    are stateless after construction and safe to query concurrently.
    """

    universe: Universe

    @abstractmethod
    def contains(self, pattern: int) -> bool:
        """Membership of a pattern (a bit mask over the universe)."""

    @abstractmethod
    def minimals(self) -> tuple[int, ...]:
        """Minimal members, sorted by bit-mask value for deterministic mining."""

    @abstractmethod
    def project(self, member: int, x: int) -> int:
        """Greatest family member below x containing ``member`` (requires x >= member)."""

    def augmentations(self, pattern: int) -> list[int]:
        """Item indices e such that pattern + e stays in the family."""
        return [
            e
            for e in range(self.universe.size)
            if not (pattern >> e) & 1 and self.contains(pattern | bit(e))
        ]

    def local_top(self, member: int) -> int:
        return self.project(member, self.universe.full_mask)

    def _check_projection_args(self, member: int, x: int) -> None:
        if not self.contains(member):
            raise ValueError("projection base must belong to the family")
        if not is_subset(member, x):
            raise ValueError("projection argument must contain the base")


def _component_from(seed: int, within: int, adjacency: Sequence[int]) -> int:
    """Connected component of the seed bits inside ``within``, by breadth-first growth."""
    comp = seed
    frontier = seed
    while frontier:
        grown = 0
        for v in iter_indices(frontier):
            grown |= adjacency[v] & within
        frontier = grown & ~comp
        comp |= frontier
    return comp


class ConnectedVertexFamily(PatternFamily):
    """Vertex subsets inducing a connected subgraph, with a minimum size."""

    def __init__(self, graph: GraphSpec, min_size: int = 1):
        if min_size < 1:
            raise FamilyError("min_size must be at least 1")
        if min_size > len(graph.vertices):
            raise FamilyError("min_size exceeds the vertex count: empty family")
        self.graph = graph
        self.min_size = min_size
        self.universe = Universe(graph.vertices)
        self._adj = graph.vertex_adjacency()
        self._minimals = self._find_minimals()
        if not self._minimals:
            raise FamilyError(
                f"no connected vertex set of size {min_size}: empty family"
            )

    def contains(self, pattern: int) -> bool:
        if pattern & ~self.universe.full_mask:
            return False
        if pattern == 0 or pattern.bit_count() < self.min_size:
            return False
        seed = pattern & -pattern
        return _component_from(seed, pattern, self._adj) == pattern

    def minimals(self) -> tuple[int, ...]:
        return self._minimals

    def _find_minimals(self) -> tuple[int, ...]:
        if self.min_size == 1:
            return tuple(bit(v) for v in range(self.universe.size))
        found: set[int] = set()
        for v in range(self.universe.size):
            self._grow(bit(v), found)
        return tuple(sorted(found))

    def _grow(self, current: int, found: set[int]) -> None:
        # Every connected set of exactly min_size vertices; duplicates from
        # different seeds collapse in the result set.
        if current.bit_count() == self.min_size:
            found.add(current)
            return
        neighbors = 0
        for v in iter_indices(current):
            neighbors |= self._adj[v]
        for v in iter_indices(neighbors & ~current):
            self._grow(current | bit(v), found)

    def project(self, member: int, x: int) -> int:
        self._check_projection_args(member, x)
        return _component_from(member, x, self._adj)


class ConnectedEdgeFamily(PatternFamily):
    """Nonempty edge subsets spanning a connected subgraph; items are edges."""

    def __init__(self, graph: GraphSpec):
        if not graph.edges:
            raise FamilyError("graph has no edges: empty family")
        self.graph = graph
        self.universe = Universe(graph.edge_labels)
        self._adj = graph.edge_adjacency()

    def contains(self, pattern: int) -> bool:
        if pattern == 0 or pattern & ~self.universe.full_mask:
            return False
        seed = pattern & -pattern
        return _component_from(seed, pattern, self._adj) == pattern

    def minimals(self) -> tuple[int, ...]:
        return tuple(bit(e) for e in range(self.universe.size))

    def project(self, member: int, x: int) -> int:
        self._check_projection_args(member, x)
        return _component_from(member, x, self._adj)


class KGapWordFamily(ConnectedVertexFamily):
    """Position subsets whose consecutive chosen positions differ by at most k.

    Positions 1..n are vertices of a path with extra edges between positions
    at distance up to k; gap-1 patterns are contiguous words.
    """

    def __init__(self, n: int, k: int = 1):
        if n < 1:
            raise FamilyError("sequence length must be at least 1")
        if k < 1:
            raise FamilyError("gap bound must be at least 1")
        vertices = tuple(f"a{i}" for i in range(1, n + 1))
        edges = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, min(i + k, n - 1) + 1)
        ]
        labels = tuple(f"g{i}-{j}" for i, j in edges)
        graph = GraphSpec(vertices, tuple(edges), labels)
        super().__init__(graph, min_size=1)
        self.n = n
        self.k = k


class ExplicitFamily(PatternFamily):
    """A family given by an explicit pattern list, verified as a subconfluence."""

    def __init__(self, patterns: Iterable[int], universe: Universe):
        members = sorted(set(patterns))
        if not members:
            raise FamilyError("explicit family must be nonempty")
        self.universe = universe
        for p in members:
            if p & ~universe.full_mask:
                raise FamilyError("pattern uses items outside the universe")
        witness = subconfluence_violation(members)
        if witness is not None:
            raise NotSubconfluenceError(witness, _subconfluence_message(witness, universe))
        self.patterns = tuple(members)
        self._set = frozenset(members)
        self._minimals = tuple(
            p
            for p in self.patterns
            if not any(q != p and is_subset(q, p) for q in self.patterns)
        )

    def contains(self, pattern: int) -> bool:
        return pattern in self._set

    def minimals(self) -> tuple[int, ...]:
        return self._minimals

    def project(self, member: int, x: int) -> int:
        self._check_projection_args(member, x)
        best = member
        for q in self.patterns:
            if is_subset(member, q) and is_subset(q, x):
                best |= q
        assert best in self._set  # union of members above a common one stays inside
        return best


def subconfluence_violation(members: Sequence[int]) -> tuple[int, int, int] | None:
    """First triple (t, x, y) with x, y above t whose union escapes, else None."""
    member_set = set(members)
    ordered = sorted(member_set)
    for t in ordered:
        above = [x for x in ordered if is_subset(t, x)]
        for a, x in enumerate(above):
            for y in above[a + 1 :]:
                if x | y not in member_set:
                    return (t, x, y)
    return None


def is_strongly_accessible(members: Sequence[int]) -> Verdict:
    """Can every nested member pair be linked by single-item steps inside the family?

    The witness is the first stuck pair (t1, t2).  ``members`` is the full
    family at desk scale (materialize implicit families first).
    """
    member_set = set(members)
    ordered = sorted(member_set, key=lambda p: (p.bit_count(), p))
    for t1 in ordered:
        for t2 in ordered:
            if t2 == t1 or not is_subset(t1, t2):
                continue
            if not _augmentation_chain_exists(t1, t2, member_set):
                return Verdict(False, (t1, t2))
    return Verdict(True)


def _augmentation_chain_exists(t1: int, t2: int, member_set: set[int]) -> bool:
    seen = {t1}
    stack = [t1]
    while stack:
        cur = stack.pop()
        if cur == t2:
            return True
        for e in iter_indices(t2 & ~cur):
            nxt = cur | bit(e)
            if nxt not in seen and nxt in member_set:
                seen.add(nxt)
                stack.append(nxt)
    return False


def load_graph(lines: Iterable[str]) -> GraphSpec:
    """Parse the graph format: ``v <name>`` and ``e <name1> <name2> [label]`` lines."""
    vertices: list[str] = []
    edges: list[tuple[str, str] | tuple[str, str, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "v" and len(tokens) == 2:
            vertices.append(tokens[1])
        elif tokens[0] == "e" and len(tokens) in (3, 4):
            edges.append(tuple(tokens[1:]))  # type: ignore[arg-type]
        else:
            raise ParseError(lineno, f"expected 'v <name>' or 'e <a> <b> [label]', got {line!r}")
    try:
        return GraphSpec.build(vertices, edges)
    except FamilyError as exc:
        raise FamilyError(f"invalid graph: {exc}") from exc


def parse_pattern_line(line: str, lineno: int) -> tuple[str, ...]:
    """Items of one family-file line; the literal ``{}`` denotes the empty pattern."""
    if line == "{}":
        return ()
    items = tuple(line.split())
    if any(it == "{}" for it in items):
        raise ParseError(lineno, "'{}' must appear alone on its line")
    return items


def load_family_lines(lines: Iterable[str]) -> list[tuple[str, ...]]:
    """Parse a family file into item-name tuples (one pattern per line)."""
    patterns: list[tuple[str, ...]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        patterns.append(parse_pattern_line(line, lineno))
    return patterns


def explicit_family_from_names(
    patterns: Iterable[Iterable[str]], extra_items: Iterable[str] = ()
) -> ExplicitFamily:
    """Build an explicit family, inferring the universe from the patterns.

    Items are indexed in first-appearance order; ``extra_items`` (e.g. items
    seen only in a context file) extend the universe after the family's own.
    """
    pattern_lists = [tuple(p) for p in patterns]
    names: list[str] = []
    seen: set[str] = set()
    for p in pattern_lists:
        for item in p:
            if item not in seen:
                seen.add(item)
                names.append(item)
    for item in extra_items:
        if item not in seen:
            seen.add(item)
            names.append(item)
    universe = Universe(names)
    return ExplicitFamily([universe.mask(p) for p in pattern_lists], universe)

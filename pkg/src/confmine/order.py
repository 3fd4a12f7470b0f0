"""Explicit finite posets and lattices with closure/interior operator machinery.

Element order relations are stored as precomputed reachability bit masks, so
``leq`` queries are O(1).  Everything here is meant for desk-scale structures
(up to a few thousand elements); large pattern families never materialize
through this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .patterns import iter_indices


class PosetError(ValueError):
    """Raised when an order relation fails reflexivity/antisymmetry/transitivity."""


class LatticeError(ValueError):
    """Raised when a poset lacks the meets/joins/bounds required of a lattice."""


@dataclass(frozen=True)
class Verdict:
    """A boolean answer together with the witness of the first violation found."""

    ok: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


class FinitePoset:
    """A finite partial order over opaque element ids.

    ``up[i]`` is the bit mask of element indices j with i <= j (the principal
    up set of i); ``down[i]`` is the dual.  The relation is validated on
    construction.
    """

    def __init__(self, ids: Sequence[Hashable], up: Sequence[int], _validate: bool = True):
        self.ids = tuple(ids)
        self.up = tuple(up)
        n = len(self.ids)
        if len(set(self.ids)) != n:
            raise PosetError("duplicate element ids")
        if len(self.up) != n:
            raise PosetError("up-set table size does not match element count")
        full = (1 << n) - 1
        down = [0] * n
        for i, mask in enumerate(self.up):
            if mask & ~full:
                raise PosetError("up-set mask references out-of-range element")
            for j in iter_indices(mask):
                down[j] |= 1 << i
        self.down = tuple(down)
        self._index = {e: i for i, e in enumerate(self.ids)}
        if _validate:
            self._validate()

    def _validate(self) -> None:
        for i in range(len(self.ids)):
            if not (self.up[i] >> i) & 1:
                raise PosetError(f"relation not reflexive at {self.ids[i]!r}")
        for i in range(len(self.ids)):
            for j in iter_indices(self.up[i]):
                if j != i and (self.up[j] >> i) & 1:
                    raise PosetError(
                        f"relation not antisymmetric on ({self.ids[i]!r}, {self.ids[j]!r})"
                    )
                if self.up[j] & ~self.up[i]:
                    raise PosetError(
                        f"relation not transitive through ({self.ids[i]!r}, {self.ids[j]!r})"
                    )

    @classmethod
    def from_leq(cls, ids: Sequence[Hashable], leq: Callable[[Hashable, Hashable], bool]) -> "FinitePoset":
        ids = tuple(ids)
        up = []
        for a in ids:
            mask = 0
            for j, b in enumerate(ids):
                if leq(a, b):
                    mask |= 1 << j
            up.append(mask)
        return cls(ids, up)

    @classmethod
    def from_covers(cls, ids: Sequence[Hashable], covers: dict[Hashable, Iterable[Hashable]]) -> "FinitePoset":
        """Build from a cover relation: ``covers[x]`` lists elements directly below x.

        The reflexive-transitive closure is computed here; cycles surface as
        antisymmetry violations.
        """
        ids = tuple(ids)
        index = {e: i for i, e in enumerate(ids)}
        up = [1 << i for i in range(len(ids))]
        parents_of: list[list[int]] = [[] for _ in ids]  # direct successors of each element
        for parent, below in covers.items():
            p = index[parent]
            for child in below:
                parents_of[index[child]].append(p)
        changed = True
        while changed:
            changed = False
            for i in range(len(ids)):
                mask = up[i]
                for p in parents_of[i]:
                    mask |= up[p]
                if mask != up[i]:
                    up[i] = mask
                    changed = True
        return cls(ids, up)

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.ids)) - 1

    def index(self, element: Hashable) -> int:
        return self._index[element]

    def leq(self, i: int, j: int) -> bool:
        return bool((self.up[i] >> j) & 1)

    def minimal_mask(self) -> int:
        return sum(1 << i for i in range(self.n) if self.down[i] == 1 << i)

    def maximal_mask(self) -> int:
        return sum(1 << i for i in range(self.n) if self.up[i] == 1 << i)

    def restrict(self, member_mask: int) -> tuple["FinitePoset", list[int]]:
        """Induced subposet on the elements of ``member_mask``.

        Returns the subposet plus the list mapping new indices to old ones.
        """
        old = list(iter_indices(member_mask))
        pos = {o: k for k, o in enumerate(old)}
        up = []
        for o in old:
            mask = 0
            for j in iter_indices(self.up[o] & member_mask):
                mask |= 1 << pos[j]
            up.append(mask)
        return FinitePoset([self.ids[o] for o in old], up, _validate=False), old

    def __repr__(self) -> str:
        return f"FinitePoset(n={self.n})"


def _greatest_of(poset: FinitePoset, mask: int) -> int | None:
    """Index of the maximum of the element set ``mask``, or None."""
    for g in iter_indices(mask):
        if mask & ~poset.down[g] == 0:
            return g
    return None


def _least_of(poset: FinitePoset, mask: int) -> int | None:
    for g in iter_indices(mask):
        if mask & ~poset.up[g] == 0:
            return g
    return None


class FiniteLattice:
    """A finite lattice: a poset with total meet/join tables and both bounds."""

    def __init__(
        self,
        poset: FinitePoset,
        meet: Sequence[Sequence[int]],
        join: Sequence[Sequence[int]],
        top: int,
        bottom: int,
        _verify: bool = True,
    ):
        self.poset = poset
        self.meet_table = tuple(tuple(row) for row in meet)
        self.join_table = tuple(tuple(row) for row in join)
        self.top = top
        self.bottom = bottom
        if _verify:
            self._verify()

    @classmethod
    def from_poset(cls, poset: FinitePoset) -> "FiniteLattice":
        """Derive meet/join tables from the order, failing on any missing bound."""
        n = poset.n
        top = _greatest_of(poset, poset.full_mask)
        bottom = _least_of(poset, poset.full_mask)
        if top is None:
            raise LatticeError("poset has no top element")
        if bottom is None:
            raise LatticeError("poset has no bottom element")
        meet = [[0] * n for _ in range(n)]
        join = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                g = _greatest_of(poset, poset.down[i] & poset.down[j])
                if g is None:
                    raise LatticeError(
                        f"pair ({poset.ids[i]!r}, {poset.ids[j]!r}) has no meet"
                    )
                meet[i][j] = meet[j][i] = g
                l = _least_of(poset, poset.up[i] & poset.up[j])
                if l is None:
                    raise LatticeError(
                        f"pair ({poset.ids[i]!r}, {poset.ids[j]!r}) has no join"
                    )
                join[i][j] = join[j][i] = l
        return cls(poset, meet, join, top, bottom, _verify=False)

    def _verify(self) -> None:
        p = self.poset
        n = p.n
        if p.down[self.top] != p.full_mask:
            raise LatticeError("declared top is not above every element")
        if p.up[self.bottom] != p.full_mask:
            raise LatticeError("declared bottom is not below every element")
        for i in range(n):
            for j in range(n):
                m = self.meet_table[i][j]
                lb = p.down[i] & p.down[j]
                if not ((lb >> m) & 1) or lb & ~p.down[m]:
                    raise LatticeError(
                        f"meet({p.ids[i]!r}, {p.ids[j]!r}) is not the greatest lower bound"
                    )
                v = self.join_table[i][j]
                ub = p.up[i] & p.up[j]
                if not ((ub >> v) & 1) or ub & ~p.up[v]:
                    raise LatticeError(
                        f"join({p.ids[i]!r}, {p.ids[j]!r}) is not the least upper bound"
                    )

    @property
    def n(self) -> int:
        return self.poset.n

    def meet(self, i: int, j: int) -> int:
        return self.meet_table[i][j]

    def join(self, i: int, j: int) -> int:
        return self.join_table[i][j]

    def meet_all(self, mask: int) -> int:
        """Meet of an element set; the empty meet is the top element."""
        acc = self.top
        for i in iter_indices(mask):
            acc = self.meet_table[acc][i]
        return acc

    def join_all(self, mask: int) -> int:
        acc = self.bottom
        for i in iter_indices(mask):
            acc = self.join_table[acc][i]
        return acc

    def __repr__(self) -> str:
        return f"FiniteLattice(n={self.n})"


def powerset_lattice(n_items: int) -> FiniteLattice:
    """The lattice 2^S for a universe of ``n_items`` items.

    Element ids (and indices) are the subset masks themselves, so meets and
    joins are plain bit operations.  Materialization is exponential; callers
    keep n_items at desk scale.
    """
    if n_items > 10:
        raise LatticeError("materialized powerset limited to 10 items")
    size = 1 << n_items
    full_items = size - 1
    up = []
    for x in range(size):
        comp = full_items & ~x
        mask = 0
        s = 0
        while True:
            mask |= 1 << (x | s)
            if s == comp:
                break
            s = (s - comp) & comp
        up.append(mask)
    poset = FinitePoset(list(range(size)), up, _validate=False)
    meet = [[x & y for y in range(size)] for x in range(size)]
    join = [[x | y for y in range(size)] for x in range(size)]
    return FiniteLattice(poset, meet, join, full_items, 0, _verify=False)


class OperatorMap:
    """A total self-map on a finite poset, stored as an index table."""

    def __init__(self, domain: FinitePoset, table: Sequence[int]):
        self.domain = domain
        self.table = tuple(table)
        if len(self.table) != domain.n:
            raise ValueError("operator table size does not match poset")
        for v in self.table:
            if not 0 <= v < domain.n:
                raise ValueError("operator image outside poset")

    @classmethod
    def identity(cls, domain: FinitePoset) -> "OperatorMap":
        return cls(domain, range(domain.n))

    @classmethod
    def constant(cls, domain: FinitePoset, value: int) -> "OperatorMap":
        return cls(domain, [value] * domain.n)

    def apply(self, i: int) -> int:
        return self.table[i]

    def range_mask(self) -> int:
        mask = 0
        for v in self.table:
            mask |= 1 << v
        return mask

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, OperatorMap)
            and self.domain.ids == other.domain.ids
            and self.domain.up == other.domain.up
            and self.table == other.table
        )

    def __repr__(self) -> str:
        return f"OperatorMap(n={self.domain.n})"


@dataclass(frozen=True)
class OperatorClassification:
    """Outcome of the three-law check: monotone, idempotent, extensive/intensive.

    ``kind`` is "closure", "interior" or "neither"; the identity map reports
    "closure" (it satisfies both).  ``failed_law``/``witness`` describe the
    first violation in a fixed scan order, for reproducible test failures.
    """

    kind: str
    is_closure: bool
    is_interior: bool
    failed_law: str | None = None
    witness: object = None


def classify_operator(m: OperatorMap) -> OperatorClassification:
    """Classify a self-map as closure, interior, or neither, with a witness."""
    p = m.domain
    mono_w = None
    for i in range(p.n):
        for j in iter_indices(p.up[i]):
            if not p.leq(m.table[i], m.table[j]):
                mono_w = (p.ids[i], p.ids[j])
                break
        if mono_w:
            break
    if mono_w:
        return OperatorClassification("neither", False, False, "monotone", mono_w)
    for i in range(p.n):
        if m.table[m.table[i]] != m.table[i]:
            return OperatorClassification("neither", False, False, "idempotent", p.ids[i])
    ext_w = next((p.ids[i] for i in range(p.n) if not p.leq(i, m.table[i])), None)
    int_w = next((p.ids[i] for i in range(p.n) if not p.leq(m.table[i], i)), None)
    if ext_w is None:
        return OperatorClassification("closure", True, int_w is None)
    if int_w is None:
        return OperatorClassification("interior", False, True)
    return OperatorClassification("neither", False, False, "extensive", ext_w)


def closure_from_subset(
    poset: FinitePoset, members: int
) -> tuple[OperatorMap | None, Hashable | None]:
    """Build the closure whose range is ``members``, or report a counterexample.

    Succeeds iff for every element x the members above x have a least one;
    the returned witness is the first x (index order) for which they do not.
    """
    table = []
    for x in range(poset.n):
        cand = members & poset.up[x]
        g = _least_of(poset, cand) if cand else None
        if g is None:
            return None, poset.ids[x]
        table.append(g)
    return OperatorMap(poset, table), None


def interior_from_subset(
    poset: FinitePoset, members: int
) -> tuple[OperatorMap | None, Hashable | None]:
    """Dual of :func:`closure_from_subset`: members below x need a greatest one."""
    table = []
    for x in range(poset.n):
        cand = members & poset.down[x]
        g = _greatest_of(poset, cand) if cand else None
        if g is None:
            return None, poset.ids[x]
        table.append(g)
    return OperatorMap(poset, table), None


def is_meet_closed(lattice: FiniteLattice, members: int) -> Verdict:
    """Is ``members`` closed under all meets (the empty meet being top)?

    Finiteness reduces the check to top membership plus pairwise meets; the
    witness is the missing top or the first offending pair in index order.
    """
    p = lattice.poset
    if not (members >> lattice.top) & 1:
        return Verdict(False, p.ids[lattice.top])
    elems = list(iter_indices(members))
    for a, i in enumerate(elems):
        for j in elems[a + 1 :]:
            if not (members >> lattice.meet_table[i][j]) & 1:
                return Verdict(False, (p.ids[i], p.ids[j]))
    return Verdict(True)


def is_join_closed(lattice: FiniteLattice, members: int) -> Verdict:
    p = lattice.poset
    if not (members >> lattice.bottom) & 1:
        return Verdict(False, p.ids[lattice.bottom])
    elems = list(iter_indices(members))
    for a, i in enumerate(elems):
        for j in elems[a + 1 :]:
            if not (members >> lattice.join_table[i][j]) & 1:
                return Verdict(False, (p.ids[i], p.ids[j]))
    return Verdict(True)


def compose_interior_closure(p: OperatorMap, f: OperatorMap) -> OperatorMap:
    """Compose an interior with a closure; the result is a closure on p's range.

    The returned operator lives on the induced subposet of range(p), with the
    original element ids.
    """
    if p.domain is not f.domain and (
        p.domain.ids != f.domain.ids or p.domain.up != f.domain.up
    ):
        raise ValueError("operators must share a domain")
    if not classify_operator(p).is_interior:
        raise ValueError("first operator is not an interior operator")
    if not classify_operator(f).is_closure:
        raise ValueError("second operator is not a closure operator")
    rng = p.range_mask()
    sub, old = p.domain.restrict(rng)
    pos = {o: k for k, o in enumerate(old)}
    table = [pos[p.table[f.table[o]]] for o in old]
    return OperatorMap(sub, table)


def load_poset(lines: Iterable[str]) -> FinitePoset:
    """Parse the poset text format: one element per line, ``id: covers id1 id2 ...``.

    The listed ids are the elements covered by (directly below) the line's id;
    the transitive closure is computed on load.
    """
    ids: list[str] = []
    covers: dict[str, list[str]] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise PosetError(f"line {lineno}: expected 'id: covers ...'")
        name, rest = line.split(":", 1)
        name = name.strip()
        tokens = rest.split()
        if not tokens or tokens[0] != "covers":
            raise PosetError(f"line {lineno}: expected the keyword 'covers'")
        if not name:
            raise PosetError(f"line {lineno}: empty element id")
        if name in covers:
            raise PosetError(f"line {lineno}: duplicate element {name!r}")
        ids.append(name)
        covers[name] = tokens[1:]
    known = set(ids)
    for name, below in covers.items():
        for b in below:
            if b not in known:
                raise PosetError(f"element {name!r} covers unknown element {b!r}")
    return FinitePoset.from_covers(ids, covers)

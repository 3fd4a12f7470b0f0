"""Confluences, local meets/joins, subconfluences and their interior families.

A confluence is a finite poset in which every principal up set is a lattice;
only the up sets of minimal elements need checking.  A subconfluence of a
lattice is a subset forming a confluence whose local join is the host join,
equivalently a subset closed under join above any common member.
"""

from __future__ import annotations

from typing import Hashable

from .order import (
    FiniteLattice,
    FinitePoset,
    OperatorMap,
    Verdict,
    _greatest_of,
    _least_of,
    classify_operator,
)
from .patterns import iter_indices


class NotConfluenceError(ValueError):
    def __init__(self, witness: object):
        super().__init__(f"poset is not a confluence: witness {witness!r}")
        self.witness = witness


class NotSubconfluenceError(ValueError):
    def __init__(self, witness: object, message: str | None = None):
        super().__init__(
            message or f"family is not a subconfluence: join of {witness!r} escapes it"
        )
        self.witness = witness


class NotLocallyMeetClosedError(ValueError):
    def __init__(self, witness: object):
        super().__init__(f"subset is not closed under local meet: witness {witness!r}")
        self.witness = witness


def is_confluence(poset: FinitePoset) -> Verdict:
    """Check that every minimal element's up set is a lattice.

    The witness is ``(m, None)`` when the up set of m lacks a greatest
    element, or ``(m, (x, y))`` when x and y lack a meet inside it.
    """
    for m in iter_indices(poset.minimal_mask()):
        up = poset.up[m]
        if _greatest_of(poset, up) is None:
            return Verdict(False, (poset.ids[m], None))
        elems = list(iter_indices(up))
        for a, x in enumerate(elems):
            for y in elems[a + 1 :]:
                lb = poset.down[x] & poset.down[y] & up
                if lb == 0 or _greatest_of(poset, lb) is None:
                    return Verdict(False, (poset.ids[m], (poset.ids[x], poset.ids[y])))
    return Verdict(True)


class ExplicitConfluence:
    """A materialized confluence: carrier poset, minimal elements, local tops."""

    def __init__(self, carrier: FinitePoset):
        verdict = is_confluence(carrier)
        if not verdict:
            raise NotConfluenceError(verdict.witness)
        self.carrier = carrier
        self.minimal_indices = tuple(iter_indices(carrier.minimal_mask()))
        self.local_tops = {}
        for m in self.minimal_indices:
            self.local_tops[m] = _greatest_of(carrier, carrier.up[m])

    @property
    def n(self) -> int:
        return self.carrier.n

    def local_top_of(self, t: int) -> int:
        """The greatest element of the up set of t (equal for every minimal below t)."""
        for m in self.minimal_indices:
            if self.carrier.leq(m, t):
                return self.local_tops[m]
        raise ValueError("element below no minimal; poset is corrupt")

    def local_meet(self, t: int, x: int, y: int) -> int:
        """Greatest lower bound of {x, y} within the up set of t."""
        up = self.carrier.up[t]
        if not ((up >> x) & 1 and (up >> y) & 1):
            raise ValueError("local meet arguments must lie above the base element")
        lb = self.carrier.down[x] & self.carrier.down[y] & up
        g = _greatest_of(self.carrier, lb)
        if g is None:
            raise NotConfluenceError((self.carrier.ids[t], (self.carrier.ids[x], self.carrier.ids[y])))
        return g

    def local_join(self, x: int, y: int) -> int | None:
        """Least common upper bound inside the confluence, or None if there is none."""
        ub = self.carrier.up[x] & self.carrier.up[y]
        if ub == 0:
            return None
        return _least_of(self.carrier, ub)


def is_closed_under_local_meet(conf: ExplicitConfluence, members: int) -> Verdict:
    """Check a subset is closed under every local meet, including the empty one.

    Witness is ``(t, None)`` when the local top above t is missing from the
    subset, ``(t, (x, y))`` for an escaping pairwise local meet.
    """
    p = conf.carrier
    for t in range(p.n):
        top_t = conf.local_top_of(t)
        if not (members >> top_t) & 1:
            return Verdict(False, (p.ids[t], None))
        elems = list(iter_indices(members & p.up[t]))
        for a, x in enumerate(elems):
            for y in elems[a + 1 :]:
                if not (members >> conf.local_meet(t, x, y)) & 1:
                    return Verdict(False, (p.ids[t], (p.ids[x], p.ids[y])))
    return Verdict(True)


def closure_from_local_meet_subset(conf: ExplicitConfluence, members: int) -> OperatorMap:
    """The closure operator whose range is a locally meet-closed subset.

    Maps each t to the local meet of all subset members above t, i.e. their
    least one.  Raises :class:`NotLocallyMeetClosedError` with the witness when
    the precondition fails.
    """
    verdict = is_closed_under_local_meet(conf, members)
    if not verdict:
        raise NotLocallyMeetClosedError(verdict.witness)
    p = conf.carrier
    table = []
    for t in range(p.n):
        g = _least_of(p, members & p.up[t])
        assert g is not None  # guaranteed: the local top is a member
        table.append(g)
    return OperatorMap(p, table)


def is_subconfluence(host: FiniteLattice, members: int) -> Verdict:
    """Check that x join y stays in ``members`` whenever x, y share a member below.

    Witness is the offending triple ``(t, x, y)``.
    """
    p = host.poset
    for t in iter_indices(members):
        above = list(iter_indices(members & p.up[t]))
        for a, x in enumerate(above):
            for y in above[a + 1 :]:
                if not (members >> host.join_table[x][y]) & 1:
                    return Verdict(False, (p.ids[t], p.ids[x], p.ids[y]))
    return Verdict(True)


class InteriorFamily:
    """A subconfluence of a host lattice with its per-member interior projections.

    ``project(t, x)`` returns the greatest family member below x that contains
    t; by coherence the value only depends on x and any family member below t,
    so projections anchored at different members below t agree.
    """

    def __init__(self, host: FiniteLattice, members: int):
        verdict = is_subconfluence(host, members)
        if not verdict:
            raise NotSubconfluenceError(verdict.witness)
        if members == 0:
            raise ValueError("empty family")
        self.host = host
        self.members = members
        self._cache: dict[tuple[int, int], int] = {}

    def member_indices(self) -> tuple[int, ...]:
        return tuple(iter_indices(self.members))

    def minimal_member_indices(self) -> tuple[int, ...]:
        p = self.host.poset
        return tuple(
            t for t in iter_indices(self.members) if p.down[t] & self.members == 1 << t
        )

    def project(self, t: int, x: int) -> int:
        if not (self.members >> t) & 1:
            raise ValueError("projection base must belong to the family")
        p = self.host.poset
        if not p.leq(t, x):
            raise ValueError("projection argument must lie above the base")
        key = (t, x)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        cand = self.members & p.up[t] & p.down[x]
        g = _greatest_of(p, cand)
        assert g is not None  # join-closedness above t guarantees a greatest member
        self._cache[key] = g
        return g

    def local_top(self, t: int) -> int:
        return self.project(t, self.host.top)


def lift_closure(fam: InteriorFamily, f: OperatorMap) -> OperatorMap:
    """Turn a closure on the host lattice into one on the family.

    Each family member t maps to the projection at t of its host closure.  The
    result lives on the induced subposet of the family.
    """
    host_poset = fam.host.poset
    if f.domain is not host_poset and (
        f.domain.ids != host_poset.ids or f.domain.up != host_poset.up
    ):
        raise ValueError("closure must live on the family's host lattice")
    if not classify_operator(f).is_closure:
        raise ValueError("operator is not a closure on the host lattice")
    sub, old = fam.host.poset.restrict(fam.members)
    pos = {o: k for k, o in enumerate(old)}
    table = [pos[fam.project(t, f.table[t])] for t in old]
    return OperatorMap(sub, table)


def confluence_ids(conf: ExplicitConfluence, indices) -> tuple[Hashable, ...]:
    return tuple(conf.carrier.ids[i] for i in indices)

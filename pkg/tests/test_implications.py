"""Support-equivalence classes, the min-max basis split into internal and
external parts, and implication validity checking."""

import random

import pytest

import confmine as cm
from confmine.families import ExplicitFamily
from confmine.oracle import materialize, random_context, random_graph
from confmine.patterns import is_subset

from conftest import build_context


def fmt_basis(universe, basis):
    return {
        (universe.format(i.premise), universe.format(i.conclusion), i.kind)
        for i in basis
    }


class TestEquivalenceClasses:
    def test_five_family_classes(self, five_context, five_family, five_universe):
        u = five_universe
        classes = cm.equivalence_classes(five_context, five_family, materialize(five_family))
        by_extent = {c.extent: c for c in classes}
        assert set(by_extent) == {0b111, 0b110, 0b100}
        full = by_extent[0b111]
        assert set(full.members) == {u.mask("a"), u.mask("b")}
        assert set(full.generators) == {u.mask("a"), u.mask("b")}
        assert set(full.closed) == {u.mask("a"), u.mask("b")}
        deep = by_extent[0b100]
        assert set(deep.members) == {u.mask("abd"), u.mask("abcd")}
        assert deep.generators == (u.mask("abd"),)
        assert deep.closed == (u.mask("abcd"),)

    def test_single_full_description_object(self, five_family, five_universe):
        u = five_universe
        ctx = build_context(u, {"o1": "a b c d"})
        classes = cm.equivalence_classes(ctx, five_family, materialize(five_family))
        assert len(classes) == 1
        assert set(classes[0].members) == set(five_family.patterns)

    def test_wedge_classes(self, wedge_context, wedge_family, wedge_universe):
        u = wedge_universe
        classes = cm.equivalence_classes(
            wedge_context, wedge_family, materialize(wedge_family)
        )
        got = {c.extent: set(c.members) for c in classes}
        assert got == {
            0b011: {u.mask("ab"), u.mask("abd")},
            0b110: {u.mask("ac"), u.mask("acd")},
            0b010: {u.mask("abc"), u.mask("abcd")},
        }

    def test_generators_have_nothing_below(self):
        rng = random.Random(53)
        for _ in range(10):
            g = random_graph(rng, max_vertices=5)
            fam = cm.ConnectedVertexFamily(g)
            ctx = random_context(rng, fam.universe, max_objects=6)
            members = materialize(fam)
            for cls in cm.equivalence_classes(ctx, fam, members):
                for gen in cls.generators:
                    assert not any(
                        q != gen and is_subset(q, gen) for q in cls.members
                    )

    def test_every_member_below_a_closed_classmate(self):
        rng = random.Random(59)
        for _ in range(10):
            g = random_graph(rng, max_vertices=5)
            fam = cm.ConnectedVertexFamily(g)
            ctx = random_context(rng, fam.universe, max_objects=6)
            members = materialize(fam)
            for cls in cm.equivalence_classes(ctx, fam, members):
                for t in cls.members:
                    closed = cm.support_closure(ctx, fam, t)
                    assert closed in cls.closed
                    assert is_subset(t, closed)


class TestMinMaxBasis:
    def test_five_family_basis(self, five_context, five_family, five_universe):
        basis = cm.minmax_basis(five_context, five_family, materialize(five_family))
        assert fmt_basis(five_universe, basis) == {
            ("a", "b", "external"),
            ("b", "a", "external"),
            ("a b d", "a b c d", "internal"),
        }

    def test_all_closed_distinct_supports_empty_basis(self, five_universe):
        u = five_universe
        fam = ExplicitFamily([u.mask("a"), u.mask("ab"), u.mask("abc")], u)
        ctx = build_context(u, {"o1": "a", "o2": "a b", "o3": "a b c"})
        assert cm.minmax_basis(ctx, fam, materialize(fam)) == []

    def test_wedge_basis(self, wedge_context, wedge_family, wedge_universe):
        basis = cm.minmax_basis(wedge_context, wedge_family, materialize(wedge_family))
        assert fmt_basis(wedge_universe, basis) == {
            ("a b", "a b d", "internal"),
            ("a c", "a c d", "internal"),
            ("a b c", "a b c d", "internal"),
        }

    def test_basis_implications_all_valid(self):
        rng = random.Random(61)
        for _ in range(15):
            g = random_graph(rng, max_vertices=5)
            fam = cm.ConnectedVertexFamily(g)
            ctx = random_context(rng, fam.universe, max_objects=7)
            members = materialize(fam)
            for imp in cm.minmax_basis(ctx, fam, members):
                assert cm.check_implication(ctx, fam, imp)
                assert cm.extension(ctx, imp.premise) == cm.extension(ctx, imp.conclusion)
                assert imp.premise != imp.conclusion
                if imp.kind == "internal":
                    assert is_subset(imp.premise, imp.conclusion)
                else:
                    assert not is_subset(imp.premise, imp.conclusion)
                    assert not is_subset(imp.conclusion, imp.premise)

    def test_lattice_degeneration_internal_only(self):
        # single-minimal family: every class is rooted below its closed member
        rng = random.Random(67)
        u = cm.Universe(["a", "b", "c"])
        fam = ExplicitFamily(range(8), u)
        for _ in range(15):
            ctx = random_context(rng, u, max_objects=5)
            members = materialize(fam)
            basis = cm.minmax_basis(ctx, fam, members)
            assert all(imp.kind == "internal" for imp in basis)
            # classical pairing: premise a generator, conclusion the unique
            # closed member of its class
            for imp in basis:
                closed = cm.intension(ctx, cm.extension(ctx, imp.premise))
                assert imp.conclusion == closed


class TestCheckImplication:
    def test_external_pair_holds(self, five_context, five_family, five_universe):
        u = five_universe
        imp = cm.Implication(u.mask("a"), u.mask("b"), "external")
        assert cm.check_implication(five_context, five_family, imp)

    def test_reflexive_holds(self, five_context, five_family, five_universe):
        u = five_universe
        imp = cm.Implication(u.mask("abc"), u.mask("abc"), "internal")
        assert cm.check_implication(five_context, five_family, imp)

    def test_direction_matters(self, wedge_context, wedge_family, wedge_universe):
        u = wedge_universe
        imp = cm.Implication(u.mask("abd"), u.mask("abc"), "external")
        assert not cm.check_implication(wedge_context, wedge_family, imp)

    def test_rejects_non_members(self, five_context, five_family, five_universe):
        u = five_universe
        imp = cm.Implication(u.mask("ab"), u.mask("abc"), "internal")
        with pytest.raises(ValueError):
            cm.check_implication(five_context, five_family, imp)

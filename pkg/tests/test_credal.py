"""Lower-prevision layer: H-rep construction with implied-row marking,
coherence, natural extension, axiom checks, event-family MESC tests, JSON
parsing."""

import itertools

import pytest

from credalfans.credal import (
    Assessment,
    EventCollection,
    Gamble,
    IncoherenceError,
    LowerPrevision,
    OutcomeSpace,
    SchemaError,
    build_credal_hrep,
    check_axioms,
    cone_additivity_check,
    is_coherent,
    is_event_mesc,
    lower_prevision_from_json,
    natural_extension,
    parse_gamble,
)
from credalfans.exactla import ones, unit
from credalfans.fanwalk import walk
from credalfans.polytope import vertices_bruteforce

from conftest import Q, interval_hrep


SP3 = OutcomeSpace(("x1", "x2", "x3"))
SP4 = OutcomeSpace(("x1", "x2", "x3", "x4"))


def supermod3_lp():
    # singletons at 1/10, doubletons at 1/2; extreme points are the six
    # permutations of (1/10, 2/5, 1/2)
    lows = [(Gamble.indicator(SP3, e), b)
            for e, b in [(("x1",), Q(1) / 10), (("x2",), Q(1) / 10), (("x3",), Q(1) / 10),
                         (("x1", "x2"), Q(1) / 2), (("x1", "x3"), Q(1) / 2), (("x2", "x3"), Q(1) / 2)]]
    return LowerPrevision.from_bounds(SP3, lower=lows)


def pri3_lp():
    lows = [(Gamble.indicator(SP3, (x,)), Q(1) / 6) for x in SP3.names]
    ups = [(Gamble.indicator(SP3, (x,)), Q(1) / 2) for x in SP3.names]
    return LowerPrevision.from_bounds(SP3, lower=lows, upper=ups)


class TestSpacesAndGambles:
    def test_space_validation(self):
        with pytest.raises(ValueError):
            OutcomeSpace(())
        with pytest.raises(ValueError):
            OutcomeSpace(("a", "a"))
        assert SP3.index("x2") == 1
        with pytest.raises(KeyError):
            SP3.index("nope")

    def test_gamble_arithmetic(self):
        f = Gamble(SP3, (2, 1, 0))
        g = Gamble.indicator(SP3, ("x2",))
        assert (f + g).values == (Q(2), Q(2), Q(0))
        assert (f - g).values == (Q(2), Q(0), Q(0))
        assert (-f).values == (Q(-2), Q(-1), Q(0))
        assert (3 * g).values == (Q(0), Q(3), Q(0))
        assert (f + 1).values == (Q(3), Q(2), Q(1))
        assert f.min_value() == 0 and f.max_value() == 2
        assert Gamble.constant(SP3, Q(1) / 3).is_constant()

    def test_gamble_mismatch(self):
        with pytest.raises(ValueError):
            Gamble(SP3, (1, 2))
        with pytest.raises(ValueError):
            Gamble(SP3, (1, 0, 0)) + Gamble(SP4, (1, 0, 0, 0))

    def test_prevision_validation(self):
        g = Gamble.indicator(SP3, ("x1",))
        with pytest.raises(ValueError):  # constant gamble
            LowerPrevision(SP3, (Assessment(Gamble.constant(SP3, 1), 1),))
        with pytest.raises(ValueError):  # duplicate gamble
            LowerPrevision(SP3, (Assessment(g, 0), Assessment(g, Q(1) / 4)))

    def test_from_bounds_conjugacy(self):
        lp = LowerPrevision.from_bounds(
            SP3, lower=[((1, 0, 0), Q(1) / 6)], upper=[((1, 0, 0), Q(1) / 2)]
        )
        direct, conj = lp.assessments
        assert direct.provenance == "direct" and direct.lower == Q(1) / 6
        assert conj.provenance == "conjugate"
        assert conj.gamble.values == (Q(-1), Q(0), Q(0))
        assert conj.lower == Q(-1) / 2


class TestHrepConstruction:
    def test_vacuous_universe_and_rows(self):
        h, uni = build_credal_hrep(LowerPrevision.vacuous(SP3))
        # no assessment implies any nonnegativity row, so all three stay
        assert set(uni) == {unit(3, 0), unit(3, 1), unit(3, 2), ones(3)}
        assert {v.point for v in vertices_bruteforce(h)} == {
            (Q(1), Q(0), Q(0)), (Q(0), Q(1), Q(0)), (Q(0), Q(0), Q(1))}

    def test_direct_singleton_assessment_implies_row(self):
        lp = LowerPrevision.from_bounds(SP3, lower=[((1, 0, 0), Q(1) / 4)])
        h, uni = build_credal_hrep(lp)
        # p(x1) >= 1/4 subsumes p(x1) >= 0; the other two rows survive
        assert set(uni) == {unit(3, 0), unit(3, 1), unit(3, 2), ones(3)}
        assert dict(h.inequalities)[unit(3, 0)] == Q(1) / 4
        assert {v.point for v in vertices_bruteforce(h)} == {
            (Q(1), Q(0), Q(0)),
            (Q(1) / 4, Q(3) / 4, Q(0)),
            (Q(1) / 4, Q(0), Q(3) / 4)}

    def test_scaled_assessment_canonicalizes(self):
        lp = LowerPrevision.from_bounds(SP3, lower=[((2, 0, 0), Q(1) / 2)])
        h, _ = build_credal_hrep(lp)
        assert dict(h.inequalities)[unit(3, 0)] == Q(1) / 4

    def test_descent_ray_keeps_row(self):
        # p . (1,2,3) >= 0 cannot bound any p(x) below, rows all retained
        lp = LowerPrevision.from_bounds(SP3, lower=[((1, 2, 3), 0)])
        _, uni = build_credal_hrep(lp)
        assert unit(3, 0) in uni and unit(3, 1) in uni and unit(3, 2) in uni

    def test_implied_row_without_shortcut(self):
        # upper bounds u == 1/3 on two outcomes force p(x3) >= 1/3 > 0,
        # and no direct assessment sits on 1_{x3}: the oracle-path test
        # must mark the x3 row implied.
        lp = LowerPrevision.from_bounds(
            SP3, upper=[((1, 0, 0), Q(1) / 3), ((0, 1, 0), Q(1) / 3)]
        )
        _, uni = build_credal_hrep(lp)
        assert unit(3, 2) not in uni
        assert unit(3, 0) in uni and unit(3, 1) in uni

    def test_interval_model_matches_handbuilt_polytope(self):
        lp = pri3_lp()
        h, uni = build_credal_hrep(lp)
        handbuilt = interval_hrep([Q(1) / 6] * 3, [Q(1) / 2] * 3)
        assert {v.point for v in vertices_bruteforce(h)} == {
            v.point for v in vertices_bruteforce(handbuilt)}
        # all nonnegativity rows implied by the lower assessments
        assert len(tuple(uni)) == 7

    def test_walk_runs_on_built_model(self):
        h, uni = build_credal_hrep(pri3_lp())
        g = walk(h, uni)
        assert len(g.nodes) == 6
        assert g.vertices == {v.point for v in vertices_bruteforce(h)}


class TestCoherence:
    def test_coherent_supermodular(self):
        rep = is_coherent(supermod3_lp())
        assert rep.coherent and not rep.empty
        assert all(c.tight for c in rep.checks)

    def test_unattained_bound_is_incoherent(self):
        # min of (1,2,3) over the simplex is 1, the assessed 0 is slack
        lp = LowerPrevision.from_bounds(SP3, lower=[((1, 2, 3), 0)])
        rep = is_coherent(lp)
        assert not rep.coherent and not rep.empty
        (bad,) = rep.failures()
        assert bad.attained == 1 and bad.lower == 0

    def test_empty_set_is_incoherent(self):
        lp = LowerPrevision.from_bounds(
            SP3, lower=[((1, 0, 0), Q(2) / 3), ((0, 1, 0), Q(2) / 3)]
        )
        rep = is_coherent(lp)
        assert rep.empty and not rep.coherent
        with pytest.raises(IncoherenceError):
            natural_extension(lp, (1, 0, 0))


class TestNaturalExtension:
    def test_vacuous_is_infimum(self):
        lp = LowerPrevision.vacuous(SP3)
        assert natural_extension(lp, (5, 2, 7)) == 2
        assert natural_extension(lp, Gamble(SP3, (-1, 0, 1))) == -1

    def test_constant_shift(self):
        lp = supermod3_lp()
        f = Gamble(SP3, (2, 1, 0))
        assert natural_extension(lp, f + 3) == natural_extension(lp, f) + 3

    def test_frozen_supermodular_values(self):
        lp = supermod3_lp()
        assert natural_extension(lp, (2, 1, 0)) == Q(3) / 5
        assert natural_extension(lp, (0, 1, 2)) == Q(3) / 5
        # strictly superadditive pair: the two minima sit in different cones
        assert natural_extension(lp, (2, 2, 2)) == 2
        assert 2 > Q(3) / 5 + Q(3) / 5

    def test_incoherent_input_rejected(self):
        lp = LowerPrevision.from_bounds(SP3, lower=[((1, 2, 3), 0)])
        with pytest.raises(IncoherenceError):
            natural_extension(lp, (1, 1, 0))


class TestAxiomChecks:
    GAMBLES = (
        Gamble(SP3, (2, 1, 0)),
        Gamble(SP3, (0, 1, 2)),
        Gamble(SP3, (1, 0, 1)),
        Gamble(SP3, (Q(1) / 2, Q(1) / 3, Q(5))),
    )

    def test_natural_extension_passes(self):
        lp = supermod3_lp()
        rep = check_axioms(lambda g: natural_extension(lp, g), self.GAMBLES)
        assert rep.ok, rep.failures

    def test_subadditive_evaluator_caught(self):
        rep = check_axioms(lambda g: g.max_value(), self.GAMBLES)
        assert not rep.ok
        assert any(f.axiom == "superadditivity" for f in rep.failures)

    def test_bounds_violation_caught(self):
        rep = check_axioms(lambda g: g.min_value() - 1, self.GAMBLES)
        assert any(f.axiom == "bounds" for f in rep.failures)

    def test_homogeneity_violation_caught(self):
        rep = check_axioms(lambda g: g.min_value() + 1, self.GAMBLES)
        assert any(f.axiom == "homogeneity" for f in rep.failures)


class TestConeAdditivity:
    def test_additive_inside_cone(self):
        lp = supermod3_lp()
        vtx = (Q(1) / 10, Q(2) / 5, Q(1) / 2)
        # normal cone there: gens 1_{x1}, 1_{x1,x2}, lineality the constants
        g = (2, 1, 0)
        h = (1, 1, 0)
        assert cone_additivity_check(lp, vtx, g, h) is True
        assert natural_extension(lp, (3, 2, 0)) == Q(3) / 5 + Q(1) / 2

    def test_skip_outside_cone(self):
        lp = supermod3_lp()
        vtx = (Q(1) / 10, Q(2) / 5, Q(1) / 2)
        assert cone_additivity_check(lp, vtx, (2, 1, 0), (0, 1, 2)) is None

    def test_constant_shifts_stay_inside(self):
        lp = supermod3_lp()
        vtx = (Q(1) / 10, Q(2) / 5, Q(1) / 2)
        g = (2, 1, 0)
        h = (0, 0, -1)  # 1_{x1,x2} minus the constant one
        assert cone_additivity_check(lp, vtx, g, h) is True


class TestEventMesc:
    def test_accepted_chain_family(self):
        col = EventCollection(({0}, {0, 1}, {0, 1, 2}))
        rep = is_event_mesc(col, SP3)
        assert rep.ok and rep.reason is None

    def test_requires_sure_event(self):
        with pytest.raises(ValueError):
            is_event_mesc(EventCollection(({0}, {0, 1})), SP3)

    def test_size_failure(self):
        rep = is_event_mesc(EventCollection(({0}, {0, 1, 2})), SP3)
        assert not rep.ok and rep.reason == "size"

    def test_disjoint_pair(self):
        rep = is_event_mesc(EventCollection(({0}, {1}, {0, 1, 2})), SP3)
        assert rep.reason == "disjoint-pair"
        assert set(rep.events) == {frozenset({0}), frozenset({1})}

    def test_covering_pair(self):
        # pairwise intersections all nonempty, so the union test is reached
        rep = is_event_mesc(
            EventCollection(({0, 1, 2}, {1, 2, 3}, {0, 3}, {0, 1, 2, 3})), SP4)
        assert rep.reason == "covering-pair"
        a, b = rep.events
        assert a | b == frozenset(range(4)) and (a & b)

    def test_absorbed_event_with_witness(self):
        # three pairwise-overlapping doubletons absorb the triple {x1,x2,x3}
        col = EventCollection(({0, 1}, {1, 2}, {0, 2}, {0, 1, 2, 3}))
        rep = is_event_mesc(col, SP4)
        assert rep.reason == "absorbs"
        assert rep.events == (frozenset({0, 1, 2}),)
        assert rep.witness.coeffs == (Q(1) / 2, Q(1) / 2, Q(1) / 2)
        assert rep.witness.lineality_coeffs == (Q(0),)

    def test_from_labels(self):
        col = EventCollection.from_labels(SP3, (("x1",), ("x1", "x2"), ("x1", "x2", "x3")))
        assert is_event_mesc(col, SP3).ok

    def test_all_singleton_chains_accepted(self):
        for perm in itertools.permutations(range(3)):
            events = [set(perm[: k + 1]) for k in range(3)]
            assert is_event_mesc(EventCollection(tuple(events)), SP3).ok


class TestJson:
    DOC = {
        "type": "lower_prevision",
        "outcomes": ["x1", "x2", "x3"],
        "assessments": [
            {"event": ["x1"], "lower": "1/6", "upper": "1/2"},
            {"gamble": {"x1": "2", "x2": "1", "x3": "0"}, "lower": "3/5"},
        ],
    }

    def test_parse_roundtrip(self):
        lp = lower_prevision_from_json(self.DOC)
        assert lp.space == SP3
        assert len(lp.assessments) == 3  # lower, gamble, conjugated upper
        kinds = sorted(a.provenance for a in lp.assessments)
        assert kinds == ["conjugate", "direct", "direct"]

    def test_parse_gamble_requires_all_outcomes(self):
        with pytest.raises(SchemaError) as exc:
            parse_gamble({"x1": "1", "x2": "0"}, SP3)
        assert "x3" in str(exc.value)

    def test_bad_rational(self):
        doc = dict(self.DOC, assessments=[{"event": ["x1"], "lower": "0.5"}])
        with pytest.raises(SchemaError) as exc:
            lower_prevision_from_json(doc)
        assert "0.5" in str(exc.value)

    def test_gamble_and_event_exclusive(self):
        doc = dict(self.DOC, assessments=[
            {"event": ["x1"], "gamble": {"x1": "1", "x2": "0", "x3": "0"}, "lower": "0"}])
        with pytest.raises(SchemaError):
            lower_prevision_from_json(doc)

    def test_missing_bound(self):
        doc = dict(self.DOC, assessments=[{"event": ["x1"]}])
        with pytest.raises(SchemaError):
            lower_prevision_from_json(doc)

    def test_wrong_type_tag(self):
        with pytest.raises(SchemaError):
            lower_prevision_from_json(dict(self.DOC, type="pri"))

    def test_duplicate_assessment_reported_as_schema_error(self):
        doc = dict(self.DOC, assessments=[
            {"event": ["x1"], "lower": "1/6"},
            {"event": ["x1"], "lower": "1/4"},
        ])
        with pytest.raises(SchemaError):
            lower_prevision_from_json(doc)

    def test_interval_doc_walks_to_hexagon(self):
        doc = {
            "type": "lower_prevision",
            "outcomes": ["x1", "x2", "x3"],
            "assessments": [
                {"event": [x], "lower": "1/6", "upper": "1/2"} for x in ("x1", "x2", "x3")
            ],
        }
        lp = lower_prevision_from_json(doc)
        h, uni = build_credal_hrep(lp)
        g = walk(h, uni)
        perms = {tuple(p) for p in itertools.permutations((Q(1) / 2, Q(1) / 3, Q(1) / 6))}
        assert g.vertices == perms

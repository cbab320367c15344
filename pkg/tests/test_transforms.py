import random

import pytest
from hypothesis import HealthCheck, given, settings

from igkit import parse, parse_document, serialize
from igkit.errors import MixedOperatorsWithoutGrouping, NoModalToNegate
from igkit.model import Atomic, Combination, Negation, OrElse, StatementKind, classify, is_atomic
from igkit.transforms import Level, decompose_combinations, flatten_vertical, normalize_negation, project
from igkit.validator import check_completeness, feature_usage
from igkit.profiles import parse_profile, profile_includes

from conftest import DATA
from oracles import expected_leaves, leaf_count, leaf_texts, single_operator_atomic
from strategies import statements

CORE = parse_profile("IG Core")


def in_core(statement):
    return all(profile_includes(CORE, f) for f in feature_usage(statement))


def text(leaf, code):
    return next(c.text for c in leaf.explicit if c.code == code)


def leaves(statement):
    return statement.operands if isinstance(statement, Combination) else (statement,)


class TestDecompose:
    def test_producer(self):
        s = parse((DATA / "producer.ig").read_text().splitlines()[1])
        d = decompose_combinations(s)
        assert isinstance(d, Combination) and d.operator == "AND"
        assert [text(l, "I") for l in d.operands] == ["establish", "maintain"]
        assert all(is_atomic(l) for l in d.operands)

    def test_two_dimensions_expand_in_source_order(self, golden):
        d = decompose_combinations(golden["organic-non-atomic"])
        assert [(text(l, "I"), text(l, "Bdir")) for l in d.operands] == [
            ("commit to", "organic farming standards"),
            ("commit to", "regular reviews of their practices"),
            ("accommodate", "organic farming standards"),
            ("accommodate", "regular reviews of their practices"),
        ]

    def test_duplicate_components_read_as_and(self, golden):
        d = decompose_combinations(golden["committee-composition"])
        assert d.operator == "AND"
        assert [text(l, "P") for l in d.operands] == ["a President", "a Secretary", "a Treasurer"]

    def test_xor_group(self):
        d = decompose_combinations(parse("x (A) must (D) ( sell [XOR] lease ) (I)"))
        assert d.operator == "XOR" and len(d.operands) == 2

    def test_context_group_expands_but_repeated_context_does_not(self):
        grouped = parse("x (A) y (I) ( in spring [OR] in autumn ) (Cac)")
        assert [text(l, "Cac") for l in decompose_combinations(grouped).operands] == [
            "in spring", "in autumn",
        ]
        repeated = parse("x (A) y (I) in spring (Cac) at noon (Cac)")
        assert decompose_combinations(repeated) == repeated
        assert is_atomic(repeated)

    def test_different_operators_nest(self):
        s = parse("x (A) must (D) ( sell [AND] lease ) (I) ( goods [OR] land ) (Bdir)")
        d = decompose_combinations(s)
        assert d.operator == "AND"
        assert all(isinstance(o, Combination) and o.operator == "OR" for o in d.operands)

    def test_mixed_operators_in_one_group(self):
        with pytest.raises(MixedOperatorsWithoutGrouping):
            decompose_combinations(parse("x (A) must (D) ( a [AND] b [OR] c ) (I)"))

    def test_or_else_stays_at_its_node(self, golden):
        d = decompose_combinations(golden["vertical-two-level"])
        assert isinstance(d, OrElse)
        assert d == golden["vertical-two-level"]

    def test_nesting_is_kept_inside_leaves(self, golden):
        s = golden["board-functions-polymorph"]
        assert decompose_combinations(s) == s

    def test_metadata_moves_to_the_combination(self):
        s = parse("( x (A) must (D) ( a [AND] b ) (I) ) (;governance:monitored)")
        d = decompose_combinations(s)
        assert d.governance == "monitored"
        assert all(o.governance is None for o in d.operands)

    def test_leaves_stay_complete(self, golden_records):
        for rec in golden_records:
            before = {d.code for d in check_completeness(rec.parsed)}
            for leaf in leaves(decompose_combinations(rec.parsed)):
                assert {d.code for d in check_completeness(leaf)} <= before | {"ImpliedContext"}

    @pytest.mark.parametrize("seed", range(40))
    def test_leaf_count_matches_cross_product(self, seed):
        op, atomic = single_operator_atomic(random.Random(seed))
        d = decompose_combinations(atomic)
        assert len(leaves(d)) == leaf_count(atomic)
        assert leaf_texts(d, atomic) == expected_leaves(atomic)
        assert all(is_atomic(l) for l in leaves(d))


class TestProject:
    def test_extended_drops_annotations(self, golden):
        s = golden["diversity-definition"]
        ext = project(s, Level.EXTENDED)
        assert all(not c.annotations for c in ext.explicit)
        # context labels count as C_Ext and go with the other annotations
        assert feature_usage(ext) == feature_usage(s) - {"U_con", "Cac_Ext"}

    def test_core_collapses_properties(self, golden):
        core = project(golden["constitutive-stylized"], "core")
        assert serialize(core) == (
            "In the context of organic farming (Cac), certified farmers (E) are (F) farmers that have "
            "undergone a certification process (P) following relevant procedural guidelines (Cex)."
        )

    def test_core_matches_golden_file(self, golden_records):
        expected = {r.id: r.parsed for r in parse_document((DATA / "golden_core.ig").read_text())}
        for rec in golden_records:
            assert project(rec.parsed, Level.CORE) == expected[rec.id], rec.id

    def test_logico_is_identity_and_upward_is_rejected(self, golden):
        s = golden["net-metering-intent"]
        assert project(s, "logico") == s
        with pytest.raises(ValueError):
            project(s, "nonsense")

    def test_polymorphic_host_keeps_nesting(self, golden):
        core = project(golden["board-functions-polymorph"], "core")
        assert classify(core) is StatementKind.POLYMORPHIC
        assert in_core(core)


class TestFlatten:
    def test_two_levels(self, golden):
        pairs = flatten_vertical(golden["vertical-two-level"])
        assert [p.depth for p in pairs] == [1, 2]
        assert isinstance(pairs[0].monitored, Combination) and pairs[0].monitored.operator == "AND"
        assert isinstance(pairs[1].monitored, Combination) and pairs[1].monitored.operator == "XOR"
        assert text(pairs[1].consequential, "A") == "USDA"

    def test_none_without_or_else(self, golden):
        assert flatten_vertical(golden["organic-atomic"]) == []


class TestNegation:
    NEGATED = "Farmers (A) must not (D,NOT) sell (I)"
    HOISTED = "[NOT] ( Farmers (A) must (D) sell (I) )"

    def test_hoist_and_push_are_inverse(self):
        hoisted = normalize_negation(parse(self.NEGATED), "hoist")
        assert serialize(hoisted) == self.HOISTED
        assert serialize(normalize_negation(hoisted, "push")) == self.NEGATED

    def test_both_spellings_hoist_alike(self, golden):
        a = normalize_negation(golden["horizontal-xor-not-inline"])
        b = normalize_negation(golden["horizontal-xor-not-operator"])
        assert a == b

    def test_double_negation_cancels(self):
        s = parse("[NOT] ( Farmers (A) must not (D,NOT) sell (I) )")
        assert serialize(normalize_negation(s)) == "Farmers (A) must (D) sell (I)"
        assert serialize(normalize_negation(s, "push")) == "Farmers (A) must (D) sell (I)"

    def test_push_needs_a_modal(self):
        with pytest.raises(NoModalToNegate):
            normalize_negation(parse("[NOT] ( Farmers (A) sell (I) )"), "push")

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            normalize_negation(parse(self.NEGATED), "sideways")


@settings(max_examples=60, deadline=None, suppress_health_check=list(HealthCheck))
@given(statements())
def test_transform_laws(s):
    d = decompose_combinations(s)
    assert decompose_combinations(d) == d
    core = project(project(s, "extended"), "core")
    assert project(core, "core") == core
    assert classify(core) == classify(s)
    assert in_core(core)
    hoisted = normalize_negation(s)
    assert normalize_negation(hoisted) == hoisted
    assert not isinstance(s, Atomic) or isinstance(normalize_negation(s), (Atomic, Negation))

from dataclasses import FrozenInstanceError, replace

import pytest

from igkit import parse
from igkit.model import (
    Atomic,
    Combination,
    Component,
    Negation,
    OrElse,
    PropertyNode,
    StatementKind,
    classify,
    family,
    is_atomic,
    iter_atomics,
    leaves,
    nested_statements,
    renumber,
)


def comp(code, text="x", **kw):
    return Component(code=code, text=text, **kw)


class TestComponents:
    def test_unknown_code_rejected(self):
        with pytest.raises(ValueError):
            Component(code="Z")

    def test_only_context_may_be_implied(self):
        with pytest.raises(ValueError):
            Component(code="A", text="someone", implied=True)

    def test_implied_text_is_fixed(self):
        with pytest.raises(ValueError):
            Component(code="Cac", text="sometimes", implied=True)

    def test_alternative_code_must_cross_families(self):
        assert comp("D", alt_code="M").codes == ("D", "M")
        with pytest.raises(ValueError):
            comp("D", alt_code="I")

    def test_nesting_restricted_to_entity_and_context_codes(self):
        inner = Atomic(components=(comp("A"), comp("I")))
        assert comp("Cac", "", nested=inner).nested is inner
        with pytest.raises(ValueError):
            comp("D", "", nested=inner)

    def test_property_validation(self):
        with pytest.raises(ValueError):
            PropertyNode("x", dependence="loose")
        with pytest.raises(ValueError):
            PropertyNode("x", sibling_operator="NAND")
        with pytest.raises(ValueError):
            PropertyNode("x", index_path=(0,))

    def test_members_and_shared_properties(self):
        group = comp("P", "", grouped=True, properties=(
            PropertyNode("a", dependence="independent"),
            PropertyNode("b", dependence="independent", sibling_operator="OR"),
            PropertyNode("shared"),
        ))
        assert [m.text for m in group.members] == ["a", "b"]
        assert [p.text for p in group.shared_properties] == ["shared"]

    def test_nodes_are_frozen_and_hashable(self):
        c = comp("A")
        with pytest.raises(FrozenInstanceError):
            c.text = "y"
        assert len({c, comp("A")}) == 1


class TestAtomic:
    def test_missing_context_is_implied(self):
        a = Atomic(components=(comp("A"), comp("I")))
        implied = [c for c in a.components if c.implied]
        assert [(c.code, c.text) for c in implied] == [
            ("Cac", "under all conditions"), ("Cex", "no constraints"),
        ]
        assert len(a.explicit) == 2

    def test_explicit_context_replaces_default(self):
        a = Atomic(components=(comp("A"), comp("Cac", "at noon"), Component("Cac", "under all conditions", implied=True)))
        assert [c.code for c in a.components if c.implied] == ["Cex"]
        assert [c.text for c in a.components if c.code == "Cac"] == ["at noon"]

    def test_with_components_drops_stale_defaults(self):
        a = Atomic(components=(comp("A"),))
        b = a.with_components(a.components + (comp("Cex", "daily"),))
        assert [c.implied for c in b.components if c.code == "Cex"] == [False]

    def test_unknown_metadata_rejected(self):
        with pytest.raises(ValueError):
            Atomic(components=(comp("A"),), governance="supervised")
        with pytest.raises(ValueError):
            Combination(operator="NAND", operands=())

    def test_renumber_makes_positions_dense(self):
        a = Atomic(components=(
            comp("A", position=3, properties=(PropertyNode("p", position=7),)),
            comp("I", position=10),
        ))
        r = renumber(a)
        assert [c.position for c in r.explicit] == [0, 2]
        assert r.explicit[0].properties[0].position == 1


def test_family():
    assert family("Bind") == "regulative"
    assert family("F") == "constitutive"
    assert family("Cex") == "shared"
    with pytest.raises(ValueError):
        family("X")


@pytest.mark.parametrize("record, kind", [
    ("regulative-stylized", StatementKind.REGULATIVE),
    ("constitutive-stylized", StatementKind.CONSTITUTIVE),
    ("board-functions-polymorph", StatementKind.POLYMORPHIC),
    ("hybrid-board-establishment", StatementKind.HYBRID),
    ("vertical-two-level", StatementKind.REGULATIVE),
])
def test_classify_golden(golden, record, kind):
    assert classify(golden[record]) is kind


def test_classify_context_only_defaults_to_regulative():
    assert classify(Atomic(components=(comp("Cac"),))) is StatementKind.REGULATIVE


@pytest.mark.parametrize("record, expected", [
    ("organic-atomic", True),
    ("regulative-stylized", True),
    ("market-hours", True),
    ("organic-non-atomic", False),
    ("horizontal-and", False),
    ("nested-activation-condition", False),
    ("committee-members", False),
    ("quorum-majority", True),
])
def test_is_atomic_golden(golden, record, expected):
    assert is_atomic(golden[record]) is expected


def test_several_context_clauses_stay_atomic():
    s = parse("In spring (Cac) farmers (A) must (D) sell (I) goods (Bdir) daily (Cex) in town (Cex)")
    assert is_atomic(s)
    assert not is_atomic(parse("Farmers (A) and traders (A) must (D) sell (I)"))


def test_traversal_helpers(golden):
    s = golden["vertical-two-level"]
    assert isinstance(s, OrElse)
    assert len(list(leaves(s))) == 5
    nested = golden["nested-activation-condition"]
    assert len(list(nested_statements(nested))) == 1
    assert len(list(iter_atomics(nested))) == 2
    neg = golden["horizontal-xor-not-operator"]
    assert any(isinstance(o, Negation) for o in neg.operands)


def test_replace_keeps_validation():
    a = Atomic(components=(comp("A"),))
    with pytest.raises(ValueError):
        replace(a, consequence_type="fatal")

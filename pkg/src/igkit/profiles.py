"""Coding profiles: a baseline level adjusted by removed and added features.

``IG Extended-BCex+SU_reg`` starts from the Extended feature set, removes
the object and execution-constraint refinements and adds the Structural
and regulative-function layers.  Symbols are tokenized greedily (longest
match first), so ``BCex`` reads as ``B`` followed by ``Cex``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    AdditionAlreadyPresent,
    RemovalNotInBaseline,
    UnknownBaseline,
    UnknownFeatureSymbol,
)

FEATURE_TABLE = (
    "A", "B", "Bdir", "Bind", "D", "I", "C", "Cac", "Cex", "O", "P", "M", "E", "F",
    "A_Ext", "B_Ext", "Bdir_Ext", "Bind_Ext", "C_Ext", "Cac_Ext", "Cex_Ext", "P_Ext", "E_Ext",
    "R", "L", "S", "U", "U_reg", "U_con",
)
FEATURE_NAMES = {
    "A": "Attribute", "B": "Object", "Bdir": "Direct object", "Bind": "Indirect object",
    "D": "Deontic", "I": "Aim", "C": "Context", "Cac": "Activation condition",
    "Cex": "Execution constraint", "O": "Or else", "P": "Constituting property",
    "M": "Modal", "E": "Constituted entity", "F": "Constitutive function",
    "A_Ext": "Attribute refinement", "B_Ext": "Object refinement",
    "Bdir_Ext": "Direct object refinement", "Bind_Ext": "Indirect object refinement",
    "C_Ext": "Context refinement", "Cac_Ext": "Activation condition refinement",
    "Cex_Ext": "Execution constraint refinement", "P_Ext": "Constituting property refinement",
    "E_Ext": "Constituted entity refinement", "R": "Policy references",
    "L": "Logical relationships", "S": "Structural annotations", "U": "Institutional function",
    "U_reg": "Regulative function", "U_con": "Constitutive function annotation",
}
AGGREGATES = {
    "B": ("Bdir", "Bind"),
    "C": ("Cac", "Cex"),
    "B_Ext": ("Bdir_Ext", "Bind_Ext"),
    "C_Ext": ("Cac_Ext", "Cex_Ext"),
    "U": ("U_reg", "U_con"),
}
EXTENSION = {
    "A": "A_Ext", "Bdir": "Bdir_Ext", "Bind": "Bind_Ext", "Cac": "Cac_Ext",
    "Cex": "Cex_Ext", "P": "P_Ext", "E": "E_Ext",
}

_CORE = frozenset({"A", "Bdir", "Bind", "D", "I", "Cac", "Cex", "O", "P", "M", "E", "F"})
_EXTENDED = _CORE | frozenset(EXTENSION.values())
_LOGICO = _EXTENDED | frozenset({"R", "L", "S", "U_reg", "U_con"})
BASELINES = {"Core": _CORE, "Extended": _EXTENDED, "Logico": _LOGICO}

_ORDER = {sym: i for i, sym in enumerate(FEATURE_TABLE)}
_BY_LENGTH = sorted(FEATURE_TABLE, key=len, reverse=True)
_EXPR = re.compile(
    r"\s*IG\s+(?P<base>[A-Za-z]+)\s*"
    r"(?:(?:--|-|–|—)(?P<minus>[^+]*))?"
    r"(?:\+(?P<plus>.*))?\s*"
)


def expand(symbol: str) -> tuple[str, ...]:
    """Fine-grained features denoted by one table symbol."""
    return AGGREGATES.get(symbol, (symbol,))


def _tokenize(run: str) -> list[str]:
    # whitespace, backslashes and dollar signs separate symbols in typeset text
    run = re.sub(r"[\s\\$]+", "", run)
    run = re.sub(r"[_,]?\{?Ext\}?", "_Ext", run)
    run = re.sub(r"_\{(reg|con)\}", r"_\1", run)
    out: list[str] = []
    i = 0
    while i < len(run):
        for sym in _BY_LENGTH:
            if run.startswith(sym, i):
                if sym not in out:
                    out.append(sym)
                i += len(sym)
                break
        else:
            raise UnknownFeatureSymbol(f"unknown feature symbol at {run[i:]!r}")
    return out


@dataclass(frozen=True)
class Profile:
    baseline: str
    removed: tuple[str, ...] = ()
    added: tuple[str, ...] = ()
    notes: str = ""

    @cached_property
    def expanded(self) -> frozenset[str]:
        return expand_features(self)

    def __str__(self) -> str:
        return format_profile(self)


def _apply(profile: Profile) -> frozenset[str]:
    current = set(BASELINES[profile.baseline])
    for sym in profile.removed:
        hit = False
        for atom in expand(sym):
            ext = EXTENSION.get(atom)
            if ext is not None and ext in current:
                current.discard(ext)
                hit = True
            elif atom in current:
                current.discard(atom)
                hit = True
        if not hit:
            raise RemovalNotInBaseline(f"{sym} is not part of IG {profile.baseline}")
    for sym in profile.added:
        if sym in profile.removed:
            raise AdditionAlreadyPresent(f"{sym} is both removed and added")
        atoms = expand(sym)
        if all(a in current for a in atoms):
            raise AdditionAlreadyPresent(f"{sym} is already part of the profile")
        current.update(atoms)
    return frozenset(current)


def expand_features(profile: Profile) -> frozenset[str]:
    return _apply(profile)


def parse_profile(expr: str) -> Profile:
    m = _EXPR.fullmatch(expr)
    if m is None:
        raise UnknownBaseline(f"profile expressions start with 'IG <baseline>': {expr!r}")
    base = m.group("base").capitalize()
    if base not in BASELINES:
        raise UnknownBaseline(f"unknown baseline {m.group('base')!r}")
    removed = tuple(_tokenize(m.group("minus") or ""))
    added = tuple(_tokenize(m.group("plus") or ""))
    if m.group("minus") is not None and not removed:
        raise UnknownFeatureSymbol("empty removal list")
    if m.group("plus") is not None and not added:
        raise UnknownFeatureSymbol("empty addition list")
    profile = Profile(
        baseline=base,
        removed=tuple(sorted(removed, key=_ORDER.__getitem__)),
        added=tuple(sorted(added, key=_ORDER.__getitem__)),
    )
    _apply(profile)
    return profile


def format_profile(profile: Profile) -> str:
    out = f"IG {profile.baseline}"
    if profile.removed:
        out += "-" + "".join(sorted(profile.removed, key=_ORDER.__getitem__))
    if profile.added:
        out += "+" + "".join(sorted(profile.added, key=_ORDER.__getitem__))
    return out


def profile_includes(profile: Profile, feature: str) -> bool:
    """Whether ``feature`` is available; aggregates match if any part is."""
    if feature not in _ORDER:
        raise UnknownFeatureSymbol(f"unknown feature symbol {feature!r}")
    have = profile.expanded
    return any(atom in have for atom in expand(feature))


def sorted_features(features) -> list[str]:
    return sorted(features, key=_ORDER.__getitem__)

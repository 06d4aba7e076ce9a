"""Theory profiles.

A profile fixes how permissive the kernel is. Each axis (universe
stratification, the impredicative sorts, the elimination policy for Prop
inductives) can be toggled on its own.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from ..term import BOX, PROP, SET, STAR, TRIANGLE, TYPE


class Family(Enum):
    CIC = "CIC"
    SYSTEM_U = "SystemU"


class ElimPolicy(Enum):
    # Prop inductives eliminate into Set/Type when empty, or when they have
    # one constructor whose arguments all live in Prop.
    SINGLETON = "singleton"
    # only empty Prop inductives eliminate into Set/Type
    EMPTY_ONLY = "empty-only"
    # no restriction at all
    UNRESTRICTED = "unrestricted"


@dataclass(frozen=True)
class Profile:
    name: str
    family: Family
    impredicative: frozenset[str]
    stratified: bool = True
    cumulativity: bool = True
    elimination: ElimPolicy = ElimPolicy.SINGLETON
    # System-U only
    axioms: tuple[tuple[str, str], ...] = ()
    rules: frozenset[tuple[str, str, str]] = frozenset()

    @property
    def sorts(self) -> frozenset[str]:
        if self.family is Family.CIC:
            return frozenset({PROP, SET, TYPE})
        return frozenset({STAR, BOX, TRIANGLE})

    def axiom(self, kind: str) -> str | None:
        return dict(self.axioms).get(kind)

    def rule(self, s1: str, s2: str) -> str | None:
        for a, b, c in self.rules:
            if a == s1 and b == s2:
                return c
        return None


_CIC = Profile("cic", Family.CIC, frozenset({PROP}))

_U_MINUS = Profile(
    "system-u-minus",
    Family.SYSTEM_U,
    frozenset({STAR, BOX}),
    axioms=((STAR, BOX), (BOX, TRIANGLE)),
    rules=frozenset({(STAR, STAR, STAR), (BOX, STAR, STAR), (BOX, BOX, BOX), (TRIANGLE, BOX, BOX)}),
)

BUILTIN: dict[str, Profile] = {
    "cic": _CIC,
    "cic-impredicative-set": replace(_CIC, name="cic-impredicative-set",
                                     impredicative=frozenset({PROP, SET})),
    "type-in-type": replace(_CIC, name="type-in-type", stratified=False),
    "system-u-minus": _U_MINUS,
    "system-u": replace(_U_MINUS, name="system-u",
                        rules=_U_MINUS.rules | {(TRIANGLE, STAR, STAR)}),
}

# modifiers accepted after a '+' in a profile name, e.g. "cic+no-singleton-elim"
MODIFIERS = {
    "impredicative-set": lambda p: replace(p, impredicative=p.impredicative | {SET}),
    "type-in-type": lambda p: replace(p, stratified=False),
    "no-singleton-elim": lambda p: replace(p, elimination=ElimPolicy.EMPTY_ONLY),
    "large-elim": lambda p: replace(p, elimination=ElimPolicy.UNRESTRICTED),
}


class UnknownProfile(ValueError):
    pass


def get_profile(name: str) -> Profile:
    base, *mods = name.split("+")
    if base not in BUILTIN:
        raise UnknownProfile(f"unknown profile {name!r}; known: {', '.join(BUILTIN)}")
    prof = BUILTIN[base]
    for m in mods:
        if m not in MODIFIERS:
            raise UnknownProfile(f"unknown profile modifier {m!r}; known: {', '.join(MODIFIERS)}")
        if prof.family is not Family.CIC:
            raise UnknownProfile(f"modifier {m!r} only applies to CIC profiles")
        prof = MODIFIERS[m](prof)
    return replace(prof, name=name)

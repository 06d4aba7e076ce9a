"""Global environment: checked declarations together with the universe
graph and the stack of open sections."""

from __future__ import annotations

import copy
import difflib
from dataclasses import dataclass, field

from ..errors import UnknownIdentifier
from ..term import Origin, Sort, Term
from ..universes import UniverseGraph
from .profiles import Family, Profile


@dataclass
class Definition:
    name: str
    type: Term
    body: Term
    opaque: bool = False
    origin: Origin = field(default_factory=Origin)


@dataclass
class Axiom:
    name: str
    type: Term
    origin: Origin = field(default_factory=Origin)


@dataclass
class Inductive:
    name: str
    type: Term
    nparams: int
    nindices: int
    sort: Sort
    constructors: list[str]
    targets: frozenset[str] = frozenset()
    recursors: dict[str, str] = field(default_factory=dict)
    origin: Origin = field(default_factory=Origin)
    ctor_arg_sorts: list[list[str]] = field(default_factory=list)


@dataclass
class Constructor:
    name: str
    type: Term
    inductive: str
    index: int
    nfields: int


@dataclass
class Recursor:
    name: str
    type: Term
    inductive: str
    target: str
    nparams: int
    nminors: int
    nindices: int
    # one right-hand side per constructor, under
    # nparams + 1 + nminors + nfields binders (params, motive, minors, fields)
    rules: list[Term]

    @property
    def major(self) -> int:
        return self.nparams + 1 + self.nminors + self.nindices

    @property
    def arity(self) -> int:
        return self.major + 1


Info = Definition | Axiom | Inductive | Constructor | Recursor


@dataclass
class SectionVar:
    name: str
    type: Term  # in the context of the preceding section variables
    kind: str   # "Variable" | "Hypothesis"


@dataclass
class SectionFrame:
    name: str
    start: int  # index of the frame's first variable in the flattened list
    declared: list[str] = field(default_factory=list)


class GlobalEnv:
    def __init__(self, profile: Profile):
        self.profile = profile
        self.graph = UniverseGraph(stratified=profile.stratified,
                                   cumulative_set=profile.family is Family.CIC)
        self.decls: dict[str, Info] = {}
        self.order: dict[str, int] = {}
        self.restricted: dict[str, str] = {}
        self.sections: list[SectionFrame] = []
        self.section_vars: list[SectionVar] = []
        # name -> (global constant, positions of the section variables it is applied to)
        self.aliases: dict[str, tuple[str, tuple[int, ...]]] = {}
        self.file = "<input>"
        self.line = 0
        self.loaded: set[str] = set()  # files pulled in by Require

    def copy(self) -> "GlobalEnv":
        env = copy.copy(self)
        env.graph = self.graph.copy()
        env.decls = dict(self.decls)
        env.order = dict(self.order)
        env.restricted = dict(self.restricted)
        env.sections = [copy.deepcopy(f) for f in self.sections]
        env.section_vars = list(self.section_vars)
        env.aliases = dict(self.aliases)
        env.loaded = set(self.loaded)
        return env

    # -- lookup ----------------------------------------------------------

    def get(self, name: str) -> Info | None:
        return self.decls.get(name)

    def lookup(self, name: str) -> Info:
        info = self.decls.get(name)
        if info is None:
            raise UnknownIdentifier(f"unknown constant {name!r}{self.suggest(name)}")
        return info

    def suggest(self, name: str) -> str:
        pool = list(self.decls) + list(self.aliases) + [v.name for v in self.section_vars]
        close = difflib.get_close_matches(name, pool, n=3)
        return f" (did you mean {', '.join(close)}?)" if close else ""

    def add(self, info: Info) -> None:
        self.decls[info.name] = info
        self.order[info.name] = len(self.order)

    def height(self, name: str) -> int:
        return self.order.get(name, -1)

    def unfoldable(self, name: str) -> Term | None:
        info = self.decls.get(name)
        if isinstance(info, Definition) and not info.opaque:
            return info.body
        return None

    def names(self) -> list[str]:
        return list(self.decls)

    @property
    def in_section(self) -> bool:
        return bool(self.sections)

    def section_context(self) -> list[tuple[str, Term]]:
        return [(v.name, v.type) for v in self.section_vars]

"""Named surface syntax: expressions and vernacular commands."""

from __future__ import annotations

from dataclasses import dataclass, field

Span = tuple[int, int]  # line, column


@dataclass
class Expr:
    pass


@dataclass
class SName(Expr):
    name: str
    span: Span = (0, 0)


@dataclass
class SSort(Expr):
    kind: str
    level: str | None = None
    span: Span = (0, 0)


@dataclass
class SPi(Expr):
    name: str
    domain: Expr
    codomain: Expr


@dataclass
class SLam(Expr):
    name: str
    domain: Expr
    body: Expr


@dataclass
class SArrow(Expr):
    domain: Expr
    codomain: Expr


@dataclass
class SApp(Expr):
    fun: Expr
    arg: Expr


@dataclass
class SLet(Expr):
    name: str
    type: Expr | None
    value: Expr
    body: Expr


Binder = tuple[str, Expr]


@dataclass
class Command:
    span: Span = field(default=(0, 0), kw_only=True)


@dataclass
class DefinitionCmd(Command):
    name: str
    type: Expr | None
    body: Expr
    opaque: bool = False
    keyword: str = "Definition"


@dataclass
class InductiveCmd(Command):
    name: str
    params: list[Binder]
    arity: Expr
    constructors: list[tuple[str, Expr]]


@dataclass
class RecordCmd(Command):
    name: str
    params: list[Binder]
    sort: Expr
    constructor: str
    fields: list[Binder]


@dataclass
class SectionCmd(Command):
    name: str


@dataclass
class EndCmd(Command):
    name: str


@dataclass
class VariableCmd(Command):
    names: list[str]
    type: Expr
    kind: str  # Variable | Hypothesis | Axiom


@dataclass
class CheckCmd(Command):
    expr: Expr


@dataclass
class NormalizeCmd(Command):
    expr: Expr
    fuel: int | None = None


@dataclass
class RequireCmd(Command):
    name: str


Vernacular = (DefinitionCmd | InductiveCmd | RecordCmd | SectionCmd | EndCmd | VariableCmd
              | CheckCmd | NormalizeCmd | RequireCmd)

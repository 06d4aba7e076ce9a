"""Recursive-descent parser for the .pdx vernacular.

    command  ::= (Definition | Lemma | Theorem) ident binders [: expr] := expr [Opaque] .
               | Inductive ident binders : expr := [|] ctor (| ctor)* .
               | Record ident binders : expr := ident { [field (; field)*] } .
               | Section ident .  | End ident .  | Require ident .
               | (Variable | Variables | Hypothesis | Hypotheses | Axiom) ident+ : expr .
               | Check expr .  | Normalize expr [fuel num] .
    ctor     ::= ident binders : expr          field ::= ident binders : expr
    binders  ::= ( '(' ident+ : expr ')' )*
    expr     ::= forall tele , expr | fun tele => expr
               | let ident [: expr] := expr in expr | app [-> expr]
    tele     ::= ident+ : expr | ( '(' ident+ : expr ')' )+
    app      ::= atom atom*
    atom     ::= ident | sort | '(' expr ')'
"""

from __future__ import annotations

from ..errors import ParseError
from .ast import (Binder, CheckCmd, Command, DefinitionCmd, EndCmd, Expr, InductiveCmd,
                  NormalizeCmd, RecordCmd, RequireCmd, SApp, SArrow, SectionCmd, SLam, SLet,
                  SName, SPi, SSort, VariableCmd)
from .lexer import Token, tokenize

SORT_KEYWORDS = ("Prop", "Set", "Type", "Star", "Box", "Triangle")
_ATOM_START = frozenset({"ident", "("} | set(SORT_KEYWORDS))
_VAR_KINDS = {"Variable": "Variable", "Variables": "Variable", "Hypothesis": "Hypothesis",
              "Hypotheses": "Hypothesis", "Axiom": "Axiom"}
_COMMANDS = frozenset({"Definition", "Lemma", "Theorem", "Inductive", "Record", "Section", "End",
                       "Require", "Check", "Normalize"} | set(_VAR_KINDS))


class Parser:
    def __init__(self, text: str, file: str = "<input>"):
        self.file = file
        self.toks = tokenize(text, file)
        self.pos = 0

    # -- token helpers ---------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def at(self, *kinds: str) -> bool:
        return self.tok.kind in kinds

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.pos += 1
        return t

    def error(self, expected) -> ParseError:
        t = self.tok
        exp = frozenset(expected)
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return ParseError(f"expected {' or '.join(sorted(exp))}, found {found}",
                          t.line, t.column, exp, self.file)

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            raise self.error({kind})
        return self.advance()

    def ident(self) -> str:
        return self.expect("ident").text

    # -- commands --------------------------------------------------------

    def parse_file(self) -> list[Command]:
        cmds = []
        while not self.at("eof"):
            cmds.append(self.command())
        return cmds

    def command(self) -> Command:
        t = self.tok
        span = (t.line, t.column)
        k = t.kind
        if k in ("Definition", "Lemma", "Theorem"):
            cmd = self.definition()
        elif k == "Inductive":
            cmd = self.inductive()
        elif k == "Record":
            cmd = self.record()
        elif k in ("Section", "End", "Require"):
            self.advance()
            name = self.ident()
            cmd = {"Section": SectionCmd, "End": EndCmd, "Require": RequireCmd}[k](name)
        elif k in _VAR_KINDS:
            self.advance()
            names = [self.ident()]
            while self.at("ident"):
                names.append(self.ident())
            self.expect(":")
            cmd = VariableCmd(names, self.expr(), _VAR_KINDS[k])
        elif k == "Check":
            self.advance()
            cmd = CheckCmd(self.expr())
        elif k == "Normalize":
            self.advance()
            e = self.expr()
            fuel = None
            if self.at("fuel"):
                self.advance()
                fuel = int(self.expect("num").text)
            cmd = NormalizeCmd(e, fuel)
        else:
            raise self.error(_COMMANDS)
        self.expect(".")
        cmd.span = span
        return cmd

    def definition(self) -> DefinitionCmd:
        keyword = self.advance().kind
        name = self.ident()
        binders = self.binders()
        ty = None
        if self.at(":"):
            self.advance()
            ty = self.expr()
        self.expect(":=")
        body = self.expr()
        opaque = False
        if self.at("Opaque"):
            self.advance()
            opaque = True
        if ty is not None:
            ty = fold(binders, ty, SPi)
        return DefinitionCmd(name, ty, fold(binders, body, SLam), opaque, keyword)

    def inductive(self) -> InductiveCmd:
        self.advance()
        name = self.ident()
        params = self.binders()
        self.expect(":")
        arity = self.expr()
        self.expect(":=")
        if self.at("|"):
            self.advance()
        ctors = []
        if self.at("ident"):
            ctors.append(self.constructor())
            while self.at("|"):
                self.advance()
                ctors.append(self.constructor())
        return InductiveCmd(name, params, arity, ctors)

    def constructor(self) -> tuple[str, Expr]:
        name = self.ident()
        binders = self.binders()
        self.expect(":")
        return name, fold(binders, self.expr(), SPi)

    def record(self) -> RecordCmd:
        self.advance()
        name = self.ident()
        params = self.binders()
        self.expect(":")
        sort = self.expr()
        self.expect(":=")
        ctor = self.ident()
        self.expect("{")
        fields: list[Binder] = []
        if self.at("ident"):
            fields.append(self.constructor())
            while self.at(";"):
                self.advance()
                fields.append(self.constructor())
        self.expect("}")
        return RecordCmd(name, params, sort, ctor, fields)

    def binders(self) -> list[Binder]:
        out: list[Binder] = []
        while self.at("("):
            out.extend(self.group())
        return out

    def group(self) -> list[Binder]:
        self.expect("(")
        names = [self.ident()]
        while self.at("ident"):
            names.append(self.ident())
        self.expect(":")
        ty = self.expr()
        self.expect(")")
        return [(n, ty) for n in names]

    def telescope(self) -> list[Binder]:
        if self.at("("):
            return self.binders()
        names = [self.ident()]
        while self.at("ident"):
            names.append(self.ident())
        self.expect(":")
        ty = self.expr()
        return [(n, ty) for n in names]

    # -- expressions -----------------------------------------------------

    def expr(self) -> Expr:
        if self.at("forall"):
            self.advance()
            tele = self.telescope()
            self.expect(",")
            return fold(tele, self.expr(), SPi)
        if self.at("fun"):
            self.advance()
            tele = self.telescope()
            self.expect("=>")
            return fold(tele, self.expr(), SLam)
        if self.at("let"):
            self.advance()
            name = self.ident()
            ty = None
            if self.at(":"):
                self.advance()
                ty = self.expr()
            self.expect(":=")
            value = self.expr()
            self.expect("in")
            return SLet(name, ty, value, self.expr())
        left = self.application()
        if self.at("->"):
            self.advance()
            return SArrow(left, self.expr())
        return left

    def application(self) -> Expr:
        e = self.atom()
        while self.tok.kind in _ATOM_START:
            e = SApp(e, self.atom())
        return e

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return SName(t.text, (t.line, t.column))
        if t.kind in SORT_KEYWORDS:
            self.advance()
            level = None
            if t.kind == "Type" and self.at("level"):
                level = self.advance().text
            return SSort(t.kind, level, (t.line, t.column))
        if t.kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        raise self.error(_ATOM_START | {"forall", "fun", "let"})


def fold(binders: list[Binder], body: Expr, ctor) -> Expr:
    for name, ty in reversed(binders):
        body = ctor(name, ty, body)
    return body


def parse_file(text: str, file: str = "<input>") -> list[Command]:
    return Parser(text, file).parse_file()


def parse_expr(text: str, file: str = "<input>") -> Expr:
    p = Parser(text, file)
    e = p.expr()
    if not p.at("eof"):
        raise p.error({"end of input"})
    return e

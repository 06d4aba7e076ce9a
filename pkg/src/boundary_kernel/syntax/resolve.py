"""Scope resolution: named surface expressions to de Bruijn terms."""

from __future__ import annotations

import difflib

from ..errors import UnknownIdentifier
from ..kernel.env import GlobalEnv
from ..term import (BOX, PROP, SET, STAR, TRIANGLE, TYPE, App, Const, Lam, Origin, Pi, Sort,
                    SortRef, Term, Var, apps, instantiate, lift, type_sort)
from .ast import Expr, SApp, SArrow, SLam, SLet, SName, SPi, SSort

_FIXED = {"Prop": Sort(PROP), "Set": Sort(SET), "Star": Sort(STAR), "Box": Sort(BOX),
          "Triangle": Sort(TRIANGLE)}


class Scope:
    """Local names (innermost last) on top of the section variables and the
    global environment."""

    def __init__(self, env: GlobalEnv, locals_: list[str] | None = None,
                 self_names: frozenset[str] = frozenset(), file: str | None = None,
                 line: int = 0):
        self.env = env
        self.locals = [v.name for v in env.section_vars] + list(locals_ or [])
        # names that denote themselves (an inductive inside its own declaration)
        self.self_names = self_names
        self.file = file or env.file
        self.line = line

    def push(self, name: str) -> None:
        self.locals.append(name)

    def pop(self) -> None:
        self.locals.pop()

    def lookup(self, name: str, span=(0, 0)) -> Term:
        for i in range(len(self.locals) - 1, -1, -1):
            if self.locals[i] == name:
                return Var(len(self.locals) - 1 - i)
        if name in self.self_names:
            return Const(name)
        env = self.env
        alias = env.aliases.get(name)
        if alias is not None:
            target, positions = alias
            depth = len(self.locals)
            return apps(Const(target), [Var(depth - 1 - p) for p in positions])
        if name in env.decls or name in env.restricted:
            return Const(name)
        pool = list(dict.fromkeys(list(self.locals) + list(env.aliases)
                                  + [n for n in env.decls if not n.startswith("#")]))
        close = difflib.get_close_matches(name, pool, n=3)
        hint = f" (did you mean {', '.join(close)}?)" if close else ""
        err = UnknownIdentifier(f"unknown identifier {name!r}{hint}")
        err.span = (self.file, span[0], span[1])
        raise err


def resolve(expr: Expr, scope: Scope) -> Term:
    if isinstance(expr, SName):
        return scope.lookup(expr.name, expr.span)
    if isinstance(expr, SSort):
        if expr.kind != "Type":
            return SortRef(_FIXED[expr.kind])
        graph = scope.env.graph
        origin = Origin(scope.file, expr.span[0] or scope.line, "occurrence of Type")
        lvl = graph.named(expr.level, origin) if expr.level else graph.fresh(origin)
        return SortRef(type_sort(lvl))
    if isinstance(expr, SApp):
        # iterate down the spine to keep recursion shallow on long applications
        args = []
        while isinstance(expr, SApp):
            args.append(expr.arg)
            expr = expr.fun
        t = resolve(expr, scope)
        for a in reversed(args):
            t = App(t, resolve(a, scope))
        return t
    if isinstance(expr, SArrow):
        dom = resolve(expr.domain, scope)
        return Pi("_", dom, lift(resolve(expr.codomain, scope), 1, 0))
    if isinstance(expr, (SPi, SLam)):
        dom = resolve(expr.domain, scope)
        scope.push(expr.name)
        try:
            inner = resolve(expr.codomain if isinstance(expr, SPi) else expr.body, scope)
        finally:
            scope.pop()
        return (Pi if isinstance(expr, SPi) else Lam)(expr.name, dom, inner)
    if isinstance(expr, SLet):
        # sugar: the bound value is substituted into the body
        value = resolve(expr.value, scope)
        if expr.type is not None:
            ty = resolve(expr.type, scope)
            value = App(Lam(expr.name, ty, Var(0)), value)
        scope.push(expr.name)
        try:
            body = resolve(expr.body, scope)
        finally:
            scope.pop()
        return instantiate(body, value)
    raise TypeError(f"not an expression: {expr!r}")


def resolve_telescope(binders, scope: Scope) -> list[tuple[str, Term]]:
    """Resolve ``(name, type)`` binders, leaving their names pushed on
    ``scope``."""
    out = []
    for name, ty in binders:
        out.append((name, resolve(ty, scope)))
        scope.push(name)
    return out

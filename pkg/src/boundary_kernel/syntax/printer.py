"""Pretty-printer producing text that parses and resolves back to the same
term. Binder names come from hints and are freshened on clash."""

from __future__ import annotations

from typing import Sequence

from ..term import TYPE, App, Const, Lam, Pi, SortRef, Term, Var, constants, has_var, spine
from .lexer import KEYWORDS


def print_term(t: Term, env=None, names: Sequence[str] = (), universes: bool = False) -> str:
    """Render ``t`` in a context whose variables are ``names`` (innermost
    last). With ``universes`` every ``Type`` carries its level."""
    return _Printer(env, universes).expr(t, list(names))


class _Printer:
    def __init__(self, env, universes: bool):
        self.env = env
        self.universes = universes
        self._consts: dict[int, set[str]] = {}

    def consts(self, t: Term) -> set[str]:
        key = id(t)
        got = self._consts.get(key)
        if got is None:
            got = self._consts[key] = constants(t)
        return got

    def fresh(self, hint: str, names: list[str], body: Term) -> str:
        base = hint if hint and hint != "_" and not hint.startswith("#") else "x"
        avoid = self.consts(body)
        name, k = base, 0
        while name in names or name in avoid or name in KEYWORDS:
            name = f"{base}{k}"
            k += 1
        return name

    # precedence: 0 binder/arrow, 1 application, 2 atom

    def expr(self, t: Term, names: list[str]) -> str:
        if isinstance(t, Pi) and not has_var(t.codomain, 0):
            dom = self.paren(t.domain, names, 1)
            return f"{dom} -> {self.expr(t.codomain, names + ['_'])}"
        if isinstance(t, (Pi, Lam)):
            kw, sep = ("forall", ",") if isinstance(t, Pi) else ("fun", " =>")
            groups = []
            while isinstance(t, Pi if kw == "forall" else Lam):
                body = t.codomain if isinstance(t, Pi) else t.body
                if isinstance(t, Pi) and not has_var(body, 0):
                    break
                name = self.fresh(t.hint, names, body)
                groups.append(f"({name} : {self.expr(t.domain, names)})")
                names = names + [name]
                t = body
            head = groups[0][1:-1] if len(groups) == 1 else " ".join(groups)
            return f"{kw} {head}{sep} {self.expr(t, names)}"
        return self.app(t, names)

    def app(self, t: Term, names: list[str]) -> str:
        head, args = spine(t)
        if not args:
            return self.atom(t, names)
        parts = [self.paren(head, names, 2)] + [self.paren(a, names, 2) for a in args]
        return " ".join(parts)

    def paren(self, t: Term, names: list[str], level: int) -> str:
        if isinstance(t, (Pi, Lam)) or (level == 2 and isinstance(t, App)):
            return f"({self.expr(t, names)})"
        return self.app(t, names)

    def atom(self, t: Term, names: list[str]) -> str:
        if isinstance(t, Var):
            i = len(names) - 1 - t.index
            return names[i] if 0 <= i < len(names) else f"#{t.index}"
        if isinstance(t, Const):
            return t.name
        if isinstance(t, SortRef):
            s = t.sort
            if s.kind == TYPE and self.universes:
                return f"Type@{{{s.level}}}"
            return s.kind
        return f"({self.expr(t, names)})"

"""De Bruijn terms of the dependent lambda calculus.

Every node records ``fv``: one more than the largest loose de Bruijn index it
contains (0 for closed terms). Lifting and substitution use it to skip
subterms they cannot touch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Origin:
    file: str = "<input>"
    line: int = 0
    reason: str = ""

    def __str__(self) -> str:
        loc = f"{self.file}:{self.line}"
        return f"{loc}: {self.reason}" if self.reason else loc


@dataclass(frozen=True)
class Level:
    """A floating universe level. Equality is by name only."""

    name: str
    origin: Origin | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return self.name


LPROP = Level("Prop")
LSET = Level("Set")

PROP, SET, TYPE, STAR, BOX, TRIANGLE = "Prop", "Set", "Type", "Star", "Box", "Triangle"
CIC_SORTS = frozenset({PROP, SET, TYPE})
U_SORTS = frozenset({STAR, BOX, TRIANGLE})


@dataclass(frozen=True)
class Sort:
    kind: str
    level: Level | None = None

    def __str__(self) -> str:
        return self.kind if self.kind != TYPE else f"Type@{{{self.level}}}"

    @property
    def cic_level(self) -> Level:
        if self.kind == PROP:
            return LPROP
        if self.kind == SET:
            return LSET
        assert self.level is not None
        return self.level


SORT_PROP = Sort(PROP)
SORT_SET = Sort(SET)
SORT_STAR = Sort(STAR)
SORT_BOX = Sort(BOX)
SORT_TRIANGLE = Sort(TRIANGLE)


def type_sort(level: Level) -> Sort:
    return Sort(TYPE, level)


class Term:
    __slots__ = ("fv",)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Term) and syntactic_eq(self, other)

    def __hash__(self) -> int:
        return _hash(self)

    def __repr__(self) -> str:
        return debug_str(self)


class SortRef(Term):
    __slots__ = ("sort",)

    def __init__(self, sort: Sort):
        self.sort = sort
        self.fv = 0


class Var(Term):
    __slots__ = ("index",)

    def __init__(self, index: int):
        self.index = index
        self.fv = index + 1


class Const(Term):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self.fv = 0


class Pi(Term):
    __slots__ = ("hint", "domain", "codomain")

    def __init__(self, hint: str, domain: Term, codomain: Term):
        self.hint = hint
        self.domain = domain
        self.codomain = codomain
        self.fv = max(domain.fv, codomain.fv - 1, 0)


class Lam(Term):
    __slots__ = ("hint", "domain", "body")

    def __init__(self, hint: str, domain: Term, body: Term):
        self.hint = hint
        self.domain = domain
        self.body = body
        self.fv = max(domain.fv, body.fv - 1, 0)


class App(Term):
    __slots__ = ("fun", "arg")

    def __init__(self, fun: Term, arg: Term):
        self.fun = fun
        self.arg = arg
        self.fv = max(fun.fv, arg.fv)


def prop() -> SortRef:
    return SortRef(SORT_PROP)


def apply(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def apps(head: Term, args: Iterable[Term]) -> Term:
    return apply(head, *args)


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split an application into its head and argument list."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def arrow(a: Term, b: Term) -> Pi:
    """Non-dependent product; ``b`` is given in the outer context."""
    return Pi("_", a, lift(b, 1, 0))


# --------------------------------------------------------------------------
# lifting and substitution


def lift(t: Term, amount: int, cutoff: int = 0) -> Term:
    if amount == 0 or t.fv <= cutoff:
        return t
    if isinstance(t, Var):
        return Var(t.index + amount) if t.index >= cutoff else t
    if isinstance(t, App):
        return App(lift(t.fun, amount, cutoff), lift(t.arg, amount, cutoff))
    if isinstance(t, Pi):
        return Pi(t.hint, lift(t.domain, amount, cutoff), lift(t.codomain, amount, cutoff + 1))
    if isinstance(t, Lam):
        return Lam(t.hint, lift(t.domain, amount, cutoff), lift(t.body, amount, cutoff + 1))
    return t


def subst(t: Term, target: int, replacement: Term) -> Term:
    """Replace ``Var(target)`` and close the gap left by it."""
    return _subst(t, target, replacement, 0)


def _subst(t: Term, k: int, r: Term, depth: int) -> Term:
    if t.fv <= k + depth:
        return t
    if isinstance(t, Var):
        i = t.index
        if i < k + depth:
            return t
        if i == k + depth:
            return lift(r, depth, 0)
        return Var(i - 1)
    if isinstance(t, App):
        return App(_subst(t.fun, k, r, depth), _subst(t.arg, k, r, depth))
    if isinstance(t, Pi):
        return Pi(t.hint, _subst(t.domain, k, r, depth), _subst(t.codomain, k, r, depth + 1))
    if isinstance(t, Lam):
        return Lam(t.hint, _subst(t.domain, k, r, depth), _subst(t.body, k, r, depth + 1))
    return t


def instantiate(body: Term, arg: Term) -> Term:
    return subst(body, 0, arg)


def instantiate_many(body: Term, args: Sequence[Term]) -> Term:
    """Simultaneously substitute ``args`` for the ``len(args)`` outermost
    binders around ``body`` (``args[0]`` is the outermost)."""
    n = len(args)
    if n == 0:
        return body
    return _inst(body, tuple(args), n, 0)


def _inst(t: Term, args: tuple[Term, ...], n: int, depth: int) -> Term:
    if t.fv <= depth:
        return t
    if isinstance(t, Var):
        i = t.index - depth
        if i < 0:
            return t
        if i < n:
            return lift(args[n - 1 - i], depth, 0)
        return Var(t.index - n)
    if isinstance(t, App):
        return App(_inst(t.fun, args, n, depth), _inst(t.arg, args, n, depth))
    if isinstance(t, Pi):
        return Pi(t.hint, _inst(t.domain, args, n, depth), _inst(t.codomain, args, n, depth + 1))
    if isinstance(t, Lam):
        return Lam(t.hint, _inst(t.domain, args, n, depth), _inst(t.body, args, n, depth + 1))
    return t


def abstract(t: Term, names: Sequence[str]) -> Term:
    """Turn placeholder constants ``names`` into loose variables; the last
    name becomes ``Var 0``. Inverse of ``instantiate_many`` with ``Const``s."""
    if not names:
        return t
    pos = {name: i for i, name in enumerate(names)}
    return _abstract(t, pos, len(names), 0)


def _abstract(t: Term, pos: dict[str, int], n: int, depth: int) -> Term:
    if isinstance(t, Const):
        i = pos.get(t.name)
        return t if i is None else Var(depth + n - 1 - i)
    if isinstance(t, Var):
        return Var(t.index + n) if t.index >= depth else t
    if isinstance(t, App):
        return App(_abstract(t.fun, pos, n, depth), _abstract(t.arg, pos, n, depth))
    if isinstance(t, Pi):
        return Pi(t.hint, _abstract(t.domain, pos, n, depth), _abstract(t.codomain, pos, n, depth + 1))
    if isinstance(t, Lam):
        return Lam(t.hint, _abstract(t.domain, pos, n, depth), _abstract(t.body, pos, n, depth + 1))
    return t


def pis(binders: Sequence[tuple[str, Term]], body: Term) -> Term:
    """Close ``body`` with products; binder types are already in de Bruijn form."""
    for hint, ty in reversed(binders):
        body = Pi(hint, ty, body)
    return body


def lams(binders: Sequence[tuple[str, Term]], body: Term) -> Term:
    for hint, ty in reversed(binders):
        body = Lam(hint, ty, body)
    return body


def close_pis(binders: Sequence[tuple[str, str, Term]], body: Term) -> Term:
    """Product over placeholder binders ``(placeholder, hint, type)``; each
    type may mention earlier placeholders."""
    return _close(binders, body, Pi)


def close_lams(binders: Sequence[tuple[str, str, Term]], body: Term) -> Term:
    return _close(binders, body, Lam)


def _close(binders, body, ctor):
    names = [b[0] for b in binders]
    out = abstract(body, names)
    for i in range(len(binders) - 1, -1, -1):
        _, hint, ty = binders[i]
        out = ctor(hint, abstract(ty, names[:i]), out)
    return out


# --------------------------------------------------------------------------
# equality and inspection


def syntactic_eq(t: Term, u: Term) -> bool:
    while True:
        if t is u:
            return True
        if type(t) is not type(u) or t.fv != u.fv:
            return False
        if isinstance(t, App):
            if not syntactic_eq(t.arg, u.arg):
                return False
            t, u = t.fun, u.fun
        elif isinstance(t, Pi):
            if not syntactic_eq(t.domain, u.domain):
                return False
            t, u = t.codomain, u.codomain
        elif isinstance(t, Lam):
            if not syntactic_eq(t.domain, u.domain):
                return False
            t, u = t.body, u.body
        elif isinstance(t, Var):
            return t.index == u.index
        elif isinstance(t, Const):
            return t.name == u.name
        elif isinstance(t, SortRef):
            return t.sort == u.sort
        else:
            return False


def _hash(t: Term) -> int:
    if isinstance(t, Var):
        return hash(("v", t.index))
    if isinstance(t, Const):
        return hash(("c", t.name))
    if isinstance(t, SortRef):
        return hash(("s", t.sort))
    if isinstance(t, App):
        return hash(("a", _hash(t.fun), _hash(t.arg)))
    if isinstance(t, Pi):
        return hash(("p", _hash(t.domain), _hash(t.codomain)))
    if isinstance(t, Lam):
        return hash(("l", _hash(t.domain), _hash(t.body)))
    raise TypeError(t)


def has_var(t: Term, k: int) -> bool:
    """Does ``Var k`` occur free in ``t``?"""
    if t.fv <= k:
        return False
    if isinstance(t, Var):
        return t.index == k
    if isinstance(t, App):
        return has_var(t.fun, k) or has_var(t.arg, k)
    if isinstance(t, Pi):
        return has_var(t.domain, k) or has_var(t.codomain, k + 1)
    if isinstance(t, Lam):
        return has_var(t.domain, k) or has_var(t.body, k + 1)
    return False


def free_vars(t: Term, depth: int = 0, acc: set[int] | None = None) -> set[int]:
    acc = set() if acc is None else acc
    if t.fv <= depth:
        return acc
    if isinstance(t, Var):
        acc.add(t.index - depth)
    elif isinstance(t, App):
        free_vars(t.fun, depth, acc)
        free_vars(t.arg, depth, acc)
    elif isinstance(t, Pi):
        free_vars(t.domain, depth, acc)
        free_vars(t.codomain, depth + 1, acc)
    elif isinstance(t, Lam):
        free_vars(t.domain, depth, acc)
        free_vars(t.body, depth + 1, acc)
    return acc


def constants(t: Term, acc: set[str] | None = None) -> set[str]:
    acc = set() if acc is None else acc
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Const):
            acc.add(x.name)
        elif isinstance(x, App):
            stack += (x.fun, x.arg)
        elif isinstance(x, Pi):
            stack += (x.domain, x.codomain)
        elif isinstance(x, Lam):
            stack += (x.domain, x.body)
    return acc


def levels(t: Term, acc: set[Level] | None = None) -> set[Level]:
    acc = set() if acc is None else acc
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, SortRef) and x.sort.level is not None:
            acc.add(x.sort.level)
        elif isinstance(x, App):
            stack += (x.fun, x.arg)
        elif isinstance(x, Pi):
            stack += (x.domain, x.codomain)
        elif isinstance(x, Lam):
            stack += (x.domain, x.body)
    return acc


def replace_const(t: Term, name: str, by: Term) -> Term:
    """Replace every ``Const(name)`` with the closed term ``by``."""
    if isinstance(t, Const):
        return by if t.name == name else t
    if isinstance(t, App):
        return App(replace_const(t.fun, name, by), replace_const(t.arg, name, by))
    if isinstance(t, Pi):
        return Pi(t.hint, replace_const(t.domain, name, by), replace_const(t.codomain, name, by))
    if isinstance(t, Lam):
        return Lam(t.hint, replace_const(t.domain, name, by), replace_const(t.body, name, by))
    return t


def size(t: Term) -> int:
    n = 0
    stack = [t]
    while stack:
        x = stack.pop()
        n += 1
        if isinstance(x, App):
            stack += (x.fun, x.arg)
        elif isinstance(x, Pi):
            stack += (x.domain, x.codomain)
        elif isinstance(x, Lam):
            stack += (x.domain, x.body)
    return n


def debug_str(t: Term) -> str:
    if isinstance(t, Var):
        return f"#{t.index}"
    if isinstance(t, Const):
        return t.name
    if isinstance(t, SortRef):
        return str(t.sort)
    if isinstance(t, App):
        return f"({debug_str(t.fun)} {debug_str(t.arg)})"
    if isinstance(t, Pi):
        return f"(Pi {t.hint}:{debug_str(t.domain)}. {debug_str(t.codomain)})"
    if isinstance(t, Lam):
        return f"(fun {t.hint}:{debug_str(t.domain)}. {debug_str(t.body)})"
    return object.__repr__(t)

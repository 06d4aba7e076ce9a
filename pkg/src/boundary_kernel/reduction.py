"""Weak-head and full normalisation, and conversion with cumulativity.

Reduction is plain substitution: beta, delta on transparent constants, iota
on recursors applied to a constructor. Conversion records universe
constraints in a pending list; callers commit them only when the whole
comparison succeeds.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .kernel.env import Constructor, GlobalEnv, Recursor
from .term import (CIC_SORTS, LPROP, LSET, PROP, SET, TYPE, App, Const, Lam, Level, Origin,
                   Pi, Sort, SortRef, Term, Var, apps, instantiate, instantiate_many,
                   spine, syntactic_eq)
from .universes import Constraint, Rel

DEFAULT_FUEL = 1_000_000


class Mode(Enum):
    CONV = "Conv"
    CUMUL = "CumulLeftLe"


@dataclass(frozen=True)
class Normal:
    term: Term
    steps: int


@dataclass(frozen=True)
class FuelExhausted:
    last: Term
    steps: int


NormalizationResult = Normal | FuelExhausted

Tracer = Callable[[int, str, "str | None"], None]


class _OutOfFuel(Exception):
    def __init__(self, term: Term):
        self.term = term


class Budget:
    """Counts contractions; raises once ``fuel`` is spent."""

    def __init__(self, fuel: int | None = None, tracer: Tracer | None = None):
        self.fuel = fuel
        self.steps = 0
        self.tracer = tracer

    def tick(self, kind: str, head: str | None, current: Callable[[], Term]) -> None:
        if self.fuel is not None and self.steps >= self.fuel:
            raise _OutOfFuel(current())
        self.steps += 1
        if self.tracer is not None:
            self.tracer(self.steps, kind, head)


def _rebuild(head: Term, stack: list[Term]) -> Term:
    for a in reversed(stack):
        head = App(head, a)
    return head


def whnf(env: GlobalEnv, t: Term, budget: Budget | None = None, delta: bool = True) -> Term:
    """Reduce ``t`` until its head is not a redex. With ``delta=False`` the
    head constant is never unfolded (iota still unfolds inside the major
    premise)."""
    head = t
    stack: list[Term] = []  # arguments, last element is the first argument
    while True:
        if isinstance(head, App):
            while isinstance(head, App):
                stack.append(head.arg)
                head = head.fun
            continue
        if isinstance(head, Lam) and stack:
            if budget is not None:
                budget.tick("beta", None, lambda: _rebuild(head, stack))
            head = instantiate(head.body, stack.pop())
            continue
        if isinstance(head, Const):
            info = env.decls.get(head.name)
            if isinstance(info, Recursor) and len(stack) >= info.arity:
                pos = len(stack) - 1 - info.major
                major = whnf(env, stack[pos], budget)
                mhead, margs = spine(major)
                minfo = env.decls.get(mhead.name) if isinstance(mhead, Const) else None
                if isinstance(minfo, Constructor) and minfo.inductive == info.inductive \
                        and len(margs) == info.nparams + minfo.nfields:
                    if budget is not None:
                        budget.tick("iota", head.name, lambda: _rebuild(head, stack))
                    first = [stack[len(stack) - 1 - i] for i in range(info.nparams + 1 + info.nminors)]
                    fields = margs[info.nparams:]
                    head = instantiate_many(info.rules[minfo.index], first + fields)
                    del stack[pos:]
                    continue
                stack[pos] = major
                break
            if delta:
                body = env.unfoldable(head.name)
                if body is not None:
                    if budget is not None:
                        budget.tick("delta", head.name, lambda: _rebuild(head, stack))
                    head = body
                    continue
        break
    return _rebuild(head, stack)


def normalize(env: GlobalEnv, t: Term, fuel: int = DEFAULT_FUEL,
              tracer: Tracer | None = None) -> NormalizationResult:
    """Leftmost-outermost normalisation with a contraction budget."""
    budget = Budget(fuel, tracer)
    try:
        n = _nf(env, t, budget)
    except _OutOfFuel as exc:
        return FuelExhausted(exc.term, budget.steps)
    return Normal(n, budget.steps)


def _nf(env: GlobalEnv, t: Term, budget: Budget) -> Term:
    t = whnf(env, t, budget)
    if isinstance(t, Lam):
        dom = _nf_in(env, t.domain, budget, lambda x: Lam(t.hint, x, t.body))
        body = _nf_in(env, t.body, budget, lambda x: Lam(t.hint, dom, x))
        return Lam(t.hint, dom, body)
    if isinstance(t, Pi):
        dom = _nf_in(env, t.domain, budget, lambda x: Pi(t.hint, x, t.codomain))
        cod = _nf_in(env, t.codomain, budget, lambda x: Pi(t.hint, dom, x))
        return Pi(t.hint, dom, cod)
    head, args = spine(t)
    done: list[Term] = []
    for i, a in enumerate(args):
        rest = args[i + 1:]
        done.append(_nf_in(env, a, budget,
                           lambda x, done=done, rest=rest: apps(head, done + [x] + rest)))
    return apps(head, done)


def _nf_in(env, t, budget, plug):
    try:
        return _nf(env, t, budget)
    except _OutOfFuel as exc:
        raise _OutOfFuel(plug(exc.term)) from None


# ---------------------------------------------------------------------------
# conversion


class Converter:
    """Decides conversion and collects the universe constraints it needs.

    ``pending`` holds constraints for the comparisons that succeeded; the
    caller enforces them afterwards.
    """

    def __init__(self, env: GlobalEnv, origin: Origin | None = None):
        self.env = env
        self.origin = origin or Origin()
        self.pending: list[Constraint] = []

    def convertible(self, t: Term, u: Term, mode: Mode = Mode.CONV) -> bool:
        mark = len(self.pending)
        ok = self._conv(t, u, mode is Mode.CUMUL)
        if not ok:
            del self.pending[mark:]
        return ok

    def _emit(self, a: Level, rel: Rel, b: Level, why: str) -> None:
        if a == b and rel is not Rel.LT:
            return
        o = Origin(self.origin.file, self.origin.line, why)
        self.pending.append(Constraint(a, rel, b, o))

    def _sorts(self, s: Sort, r: Sort, cumul: bool) -> bool:
        if s == r:
            return True
        if s.kind not in CIC_SORTS or r.kind not in CIC_SORTS:
            return False
        if not self.env.profile.cumulativity:
            cumul = False
        if s.kind == PROP or r.kind == PROP:
            return cumul and s.kind == PROP
        # both are Set or Type
        a, b = s.cic_level, r.cic_level
        if cumul:
            if a == LSET:
                return True
            self._emit(a, Rel.LE, b, f"cumulativity {s} ≤ {r}")
        else:
            self._emit(a, Rel.EQ, b, f"conversion {s} = {r}")
        return True

    def _conv(self, t: Term, u: Term, cumul: bool) -> bool:
        if syntactic_eq(t, u):
            return True
        env = self.env
        t = whnf(env, t, delta=False)
        u = whnf(env, u, delta=False)
        while True:
            if syntactic_eq(t, u):
                return True
            mark = len(self.pending)
            if self._structural(t, u, cumul):
                return True
            del self.pending[mark:]
            th, _ = spine(t)
            uh, _ = spine(u)
            tb = env.unfoldable(th.name) if isinstance(th, Const) else None
            ub = env.unfoldable(uh.name) if isinstance(uh, Const) else None
            if tb is None and ub is None:
                return False
            # unfold the more recently declared constant first
            if tb is not None and (ub is None or env.height(th.name) >= env.height(uh.name)):
                t = whnf(env, _unfold_head(t, tb), delta=False)
            if ub is not None and (tb is None or env.height(uh.name) >= env.height(th.name)):
                u = whnf(env, _unfold_head(u, ub), delta=False)

    def _structural(self, t: Term, u: Term, cumul: bool) -> bool:
        if isinstance(t, SortRef) and isinstance(u, SortRef):
            return self._sorts(t.sort, u.sort, cumul)
        if isinstance(t, Pi) and isinstance(u, Pi):
            return self._conv(t.domain, u.domain, False) and self._conv(t.codomain, u.codomain, cumul)
        if isinstance(t, Lam) and isinstance(u, Lam):
            return self._conv(t.domain, u.domain, False) and self._conv(t.body, u.body, False)
        th, targs = spine(t)
        uh, uargs = spine(u)
        if len(targs) != len(uargs) or not targs and not isinstance(th, (Var, Const)):
            return False
        if isinstance(th, Var) and isinstance(uh, Var):
            same = th.index == uh.index
        elif isinstance(th, Const) and isinstance(uh, Const):
            same = th.name == uh.name
        else:
            return False
        if not same:
            return False
        return all(self._conv(a, b, False) for a, b in zip(targs, uargs))


def _unfold_head(t: Term, body: Term) -> Term:
    _, args = spine(t)
    return apps(body, args)


def convertible(env: GlobalEnv, t: Term, u: Term, mode: Mode = Mode.CONV) -> tuple[bool, list[Constraint]]:
    """Pure entry point: the verdict plus the constraints it would need."""
    conv = Converter(env)
    ok = conv.convertible(t, u, mode)
    return ok, list(conv.pending)

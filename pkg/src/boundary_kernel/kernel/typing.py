"""Type inference and checking for a profile-parameterised PTS."""

from __future__ import annotations

from typing import Sequence

from ..errors import (EliminationRestriction, RuleViolation, TypeMismatch, UnboundVariable,
                      UnknownIdentifier)
from ..reduction import Converter, Mode, whnf
from ..term import (LPROP, LSET, PROP, SET, TYPE, App, Const, Lam, Origin, Pi, Sort, SortRef,
                    Term, Var, instantiate, lift, type_sort)
from .env import GlobalEnv
from .profiles import Family, Profile

Context = Sequence[tuple[str, Term]]


def _pretty(env: GlobalEnv, t: Term, ctx: Context = ()) -> str:
    from ..syntax.printer import print_term

    try:
        return print_term(t, env, [n for n, _ in ctx])
    except Exception:  # printing must never mask the real error
        return repr(t)


def origin_of(env: GlobalEnv, reason: str) -> Origin:
    return Origin(env.file, env.line, reason)


def product_sort(profile: Profile, s1: Sort, s2: Sort, env: GlobalEnv | None = None) -> Sort:
    """Sort of ``forall x : A, B`` given ``A : s1`` and ``B : s2``.

    Under CIC a Type codomain gets a level above both sides; ``env`` supplies
    the universe graph for it.
    """
    if profile.family is Family.SYSTEM_U:
        if s1.kind not in profile.sorts or s2.kind not in profile.sorts:
            raise RuleViolation(f"sorts {s1}, {s2} are not sorts of profile {profile.name}")
        got = profile.rule(s1.kind, s2.kind)
        if got is None:
            raise RuleViolation(f"no product rule ({s1}, {s2}) in profile {profile.name}")
        return Sort(got)
    for s in (s1, s2):
        if s.kind not in profile.sorts:
            raise RuleViolation(f"sort {s.kind} is not part of profile {profile.name}")
    if s2.kind == PROP:
        return s2
    if s2.kind == SET:
        if SET in profile.impredicative or s1.kind in (PROP, SET):
            return s2
        return s1
    if s1.kind in (PROP, SET):
        return s2
    if env is None:
        raise ValueError("a universe graph is needed for a Type-valued product")
    lvl = env.graph.sup(s1.cic_level, s2.cic_level, origin_of(env, "product sort"))
    return type_sort(lvl)


def sort_of_sort(env: GlobalEnv, s: Sort) -> Sort:
    profile = env.profile
    if s.kind not in profile.sorts:
        raise RuleViolation(f"sort {s.kind} is not part of profile {profile.name}")
    if profile.family is Family.SYSTEM_U:
        up = profile.axiom(s.kind)
        if up is None:
            raise RuleViolation(f"sort {s.kind} has no type in profile {profile.name}")
        return Sort(up)
    if s.kind == TYPE and s.level not in env.graph:
        raise RuleViolation(f"unknown universe level {s.level}")
    return type_sort(env.graph.succ(s.cic_level, origin_of(env, f"type of {s.kind}")))


class Checker:
    """Typing judgment over one environment. Universe constraints are
    enforced in ``env.graph`` as soon as they are produced."""

    def __init__(self, env: GlobalEnv):
        self.env = env

    # -- conversion glue -------------------------------------------------

    def leq(self, t: Term, u: Term, why: str, mode: Mode = Mode.CUMUL) -> bool:
        conv = Converter(self.env, origin_of(self.env, why))
        if not conv.convertible(t, u, mode):
            return False
        for c in conv.pending:
            self.env.graph.enforce(c)
        return True

    # -- judgments -------------------------------------------------------

    def infer(self, ctx: Context, t: Term) -> Term:
        env = self.env
        if isinstance(t, Var):
            if t.index >= len(ctx):
                raise UnboundVariable(f"variable #{t.index} is not bound (context has {len(ctx)} entries)")
            return lift(ctx[-1 - t.index][1], t.index + 1, 0)
        if isinstance(t, Const):
            info = env.decls.get(t.name)
            if info is None:
                if t.name in env.restricted:
                    raise EliminationRestriction(env.restricted[t.name])
                raise UnknownIdentifier(f"unknown constant {t.name!r}{env.suggest(t.name)}")
            return info.type
        if isinstance(t, SortRef):
            return SortRef(sort_of_sort(env, t.sort))
        if isinstance(t, Pi):
            s1 = self.infer_sort(ctx, t.domain)
            s2 = self.infer_sort(list(ctx) + [(t.hint, t.domain)], t.codomain)
            return SortRef(product_sort(env.profile, s1, s2, env))
        if isinstance(t, Lam):
            s1 = self.infer_sort(ctx, t.domain)
            inner = list(ctx) + [(t.hint, t.domain)]
            body_ty = self.infer(inner, t.body)
            if env.profile.family is Family.SYSTEM_U:
                # the abstraction exists only if its product type does
                product_sort(env.profile, s1, self.infer_sort(inner, body_ty), env)
            return Pi(t.hint, t.domain, body_ty)
        if isinstance(t, App):
            # walk the spine iteratively to keep recursion shallow
            args = []
            head = t
            while isinstance(head, App):
                args.append(head.arg)
                head = head.fun
            args.reverse()
            fty = self.infer(ctx, head)
            for a in args:
                f = whnf(env, fty)
                if not isinstance(f, Pi):
                    raise TypeMismatch(
                        f"{_pretty(env, head, ctx)} is applied to too many arguments; "
                        f"its type {_pretty(env, fty, ctx)} is not a product")
                self.check(ctx, a, f.domain)
                fty = instantiate(f.codomain, a)
            return fty
        raise TypeError(f"not a term: {t!r}")

    def infer_sort(self, ctx: Context, t: Term) -> Sort:
        ty = whnf(self.env, self.infer(ctx, t))
        if not isinstance(ty, SortRef):
            raise TypeMismatch(f"{_pretty(self.env, t, ctx)} is not a type; it has type "
                               f"{_pretty(self.env, ty, ctx)}")
        return ty.sort

    def check(self, ctx: Context, t: Term, expected: Term) -> None:
        env = self.env
        if isinstance(t, Pi) and env.profile.family is Family.CIC:
            target = whnf(env, expected)
            if isinstance(target, SortRef) and target.sort.kind == SET \
                    and SET not in env.profile.impredicative:
                s1 = self.infer_sort(ctx, t.domain)
                s2 = self.infer_sort(list(ctx) + [(t.hint, t.domain)], t.codomain)
                if s2.kind == SET and s1.kind == TYPE:
                    raise RuleViolation(
                        f"no product rule (Type, Set, Set) in profile {env.profile.name}: "
                        f"Set is predicative, so {_pretty(env, t, ctx)} does not live in Set")
        actual = self.infer(ctx, t)
        if not self.leq(actual, expected, "argument/annotation check"):
            raise TypeMismatch(
                f"{_pretty(env, t, ctx)} has type {_pretty(env, actual, ctx)} "
                f"but is expected to have type {_pretty(env, expected, ctx)}")

    def is_sort_with_level(self, ctx: Context, t: Term) -> Sort | None:
        w = whnf(self.env, t)
        return w.sort if isinstance(w, SortRef) else None


def infer_type(env: GlobalEnv, ctx: Context, t: Term) -> Term:
    return Checker(env).infer(ctx, t)


def check_type(env: GlobalEnv, ctx: Context, t: Term, expected: Term) -> None:
    Checker(env).check(ctx, t, expected)


__all__ = ["Checker", "infer_type", "check_type", "product_sort", "sort_of_sort", "LPROP", "LSET"]

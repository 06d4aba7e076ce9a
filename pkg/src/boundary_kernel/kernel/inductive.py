"""Inductive declarations: well-formedness, strict positivity, universe
constraints on constructor arguments, and recursor generation.

Binders are opened with placeholder constants (names starting with ``#``)
registered as temporary axioms, so the ordinary typing judgment can be used
on open terms without de Bruijn bookkeeping.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field

from ..errors import DuplicateName, PositivityViolation, RuleViolation, TypeMismatch
from ..reduction import whnf
from ..term import (PROP, SET, TYPE, Const, Lam, LPROP, LSET, Pi, SORT_PROP, SORT_SET, Sort,
                    SortRef, Term, abstract, apps, close_lams, close_pis, constants, instantiate,
                    instantiate_many, spine, type_sort)
from ..universes import Constraint, Rel
from .env import Axiom, Constructor, GlobalEnv, Inductive, Recursor
from .profiles import ElimPolicy, Family, Profile
from .typing import Checker, origin_of

RECURSOR_SUFFIX = {PROP: "_ind", SET: "_rec", TYPE: "_rect"}


@dataclass
class InductiveDecl:
    name: str
    params: list[tuple[str, Term]]              # telescope, de Bruijn
    arity: Term                                  # in the context of params
    constructors: list[tuple[str, Term]]         # in the context of params
    # filled in by checking
    ctor_arg_sorts: list[list[str]] = field(default_factory=list)


@contextmanager
def placeholders(env: GlobalEnv, binders: list[tuple[str, str, Term]]):
    """Temporarily register ``(placeholder, hint, type)`` binders."""
    added = []
    try:
        for name, _, ty in binders:
            env.decls[name] = Axiom(name, ty)
            added.append(name)
        yield
    finally:
        for name in added:
            env.decls.pop(name, None)


class _Fresh:
    def __init__(self, tag: str):
        self.tag = tag
        self.n = 0

    def __call__(self, base: str) -> str:
        self.n += 1
        return f"#{self.tag}{base}{self.n}"


def open_telescope(env: GlobalEnv, t: Term, fresh: _Fresh, stop: int | None = None,
                   reduce: bool = True) -> tuple[list[tuple[str, str, Term]], Term]:
    """Peel products off ``t`` (using whnf), opening each binder with a
    placeholder. Placeholders are registered for the caller."""
    binders: list[tuple[str, str, Term]] = []
    while stop is None or len(binders) < stop:
        w = whnf(env, t) if reduce else t
        if not isinstance(w, Pi):
            break
        ph = fresh(w.hint)
        binders.append((ph, w.hint, w.domain))
        env.decls[ph] = Axiom(ph, w.domain)
        t = instantiate(w.codomain, Const(ph))
    return binders, t


def _drop(env: GlobalEnv, binders) -> None:
    for name, _, _ in binders:
        env.decls.pop(name, None)


def eliminator_targets(profile: Profile, ind: Inductive | InductiveDecl, sort: Sort | None = None) -> frozenset[str]:
    """Sorts into which ``ind`` may be eliminated under ``profile``."""
    if profile.family is Family.SYSTEM_U:
        return frozenset()
    if isinstance(ind, Inductive):
        sort = ind.sort
    assert sort is not None
    arg_sorts = ind.ctor_arg_sorts
    if sort.kind != PROP:
        return frozenset({PROP, SET, TYPE})
    large = False
    if profile.elimination is ElimPolicy.UNRESTRICTED:
        large = True
    elif len(arg_sorts) == 0:
        large = True
    elif profile.elimination is ElimPolicy.SINGLETON and len(arg_sorts) == 1:
        large = all(k == PROP for k in arg_sorts[0])
    return frozenset({PROP, SET, TYPE}) if large else frozenset({PROP})


def declare_inductive(env: GlobalEnv, decl: InductiveDecl) -> Inductive:
    """Check ``decl`` (closed: no section context) and add the inductive,
    its constructors and its recursors to ``env``. On error ``env`` is left
    unchanged."""
    if env.profile.family is Family.SYSTEM_U:
        raise RuleViolation(f"profile {env.profile.name} is a pure type system; "
                            f"inductive {decl.name} cannot be declared")
    names = [decl.name] + [c for c, _ in decl.constructors] + \
        [decl.name + s for s in RECURSOR_SUFFIX.values()]
    for n in names:
        if n in env.decls or n in env.aliases or n in env.restricted:
            raise DuplicateName(f"{n} is already declared")
    if len(set(names)) != len(names):
        raise DuplicateName(f"repeated constructor name in {decl.name}")

    mark = env.graph.mark()
    try:
        return _declare(env, decl)
    except BaseException:
        env.graph.rollback(mark)
        for n in names:
            env.decls.pop(n, None)
            env.order.pop(n, None)
            env.restricted.pop(n, None)
        for k in [k for k in env.decls if k.startswith("#")]:
            del env.decls[k]
        raise


def _declare(env: GlobalEnv, decl: InductiveDecl) -> Inductive:
    chk = Checker(env)
    fresh = _Fresh("i")
    I = decl.name

    # parameters
    pbinders: list[tuple[str, str, Term]] = []
    popen: list[Term] = []
    for hint, ty in decl.params:
        ty_o = instantiate_many(ty, popen)
        chk.infer_sort((), ty_o)
        ph = fresh(hint)
        pbinders.append((ph, hint, ty_o))
        env.decls[ph] = Axiom(ph, ty_o)
        popen.append(Const(ph))
    params = [Const(p) for p, _, _ in pbinders]

    # arity
    arity_o = instantiate_many(decl.arity, popen)
    chk.infer_sort((), arity_o)
    ibinders, concl = open_telescope(env, arity_o, fresh)
    concl = whnf(env, concl)
    if not isinstance(concl, SortRef):
        raise TypeMismatch(f"the arity of {I} does not end in a sort")
    sort = concl.sort
    _drop(env, ibinders)
    nindices = len(ibinders)
    full_type = close_pis(pbinders, arity_o)
    env.decls[I] = Axiom(I, full_type)

    # constructors
    ctor_infos = []
    decl.ctor_arg_sorts = []
    for ci, (cname, cty) in enumerate(decl.constructors):
        cty_o = instantiate_many(cty, popen)
        chk.infer_sort((), cty_o)
        abinders, cconcl = open_telescope(env, cty_o, fresh)
        cconcl = whnf(env, cconcl)
        head, cargs = spine(cconcl)
        if not (isinstance(head, Const) and head.name == I and len(cargs) == len(params) + nindices
                and all(isinstance(a, Const) and a.name == p.name for a, p in zip(cargs, params))):
            raise TypeMismatch(f"constructor {cname} must return {I} applied to its parameters")
        for a in cargs[len(params):]:
            if I in constants(a):
                raise PositivityViolation(f"{I} occurs in an index of the conclusion of {cname}")
        arg_sorts = []
        for m, (ph, hint, aty) in enumerate(abinders):
            _positivity(env, I, params, nindices, aty, cname, m)
            arg_sorts.append(_argument_fits(env, chk, I, sort, aty, cname, m))
        decl.ctor_arg_sorts.append(arg_sorts)
        _drop(env, abinders)
        ctor_infos.append((cname, cty_o, len(abinders)))

    ind = Inductive(I, full_type, len(params), nindices, sort, [c for c, _, _ in ctor_infos],
                    origin=origin_of(env, f"inductive {I}"))
    ind.ctor_arg_sorts = decl.ctor_arg_sorts
    ind.targets = eliminator_targets(env.profile, ind)
    del env.decls[I]
    env.add(ind)
    for k, (cname, cty_o, nf) in enumerate(ctor_infos):
        env.add(Constructor(cname, close_pis(pbinders, cty_o), I, k, nf))

    for target in (PROP, SET, TYPE):
        rname = I + RECURSOR_SUFFIX[target]
        if target in ind.targets:
            env.add(_make_recursor(env, ind, pbinders, target, fresh))
            ind.recursors[target] = rname
        else:
            env.restricted[rname] = (
                f"{rname} would eliminate the Prop inductive {I} into {target}; "
                f"profile {env.profile.name} only allows "
                f"{', '.join(sorted(ind.targets))} (large elimination needs at most one "
                f"constructor whose arguments are all proofs)")
    _drop(env, pbinders)
    return ind


def _positivity(env, I, params, nindices, aty, cname, m) -> bool:
    """Check that ``I`` occurs strictly positively in argument ``m``;
    return whether the argument is recursive."""
    w = whnf(env, aty)
    if I not in constants(w):
        return False
    fresh = _Fresh("pos")
    xs, body = open_telescope(env, w, fresh)
    try:
        for _, _, xty in xs:
            if I in constants(xty):
                raise PositivityViolation(
                    f"{I} occurs negatively in argument {m + 1} of constructor {cname}")
        body = whnf(env, body)
        head, args = spine(body)
        if not (isinstance(head, Const) and head.name == I):
            raise PositivityViolation(
                f"{I} occurs in a non-strictly-positive position in argument {m + 1} of "
                f"constructor {cname} (nested under another type former)")
        if len(args) != len(params) + nindices or any(
                not (isinstance(a, Const) and a.name == p.name) for a, p in zip(args, params)):
            raise PositivityViolation(
                f"recursive argument {m + 1} of {cname} must apply {I} to its parameters")
        for a in args[len(params):]:
            if I in constants(a):
                raise PositivityViolation(f"{I} occurs in an index of argument {m + 1} of {cname}")
    finally:
        _drop(env, xs)
    return True


def _argument_fits(env, chk: Checker, I: str, sort: Sort, aty: Term, cname: str, m: int) -> str:
    """Emit the universe constraints that make argument ``m`` fit in the
    inductive's sort; return the kind of the argument type's sort."""
    s = chk.infer_sort((), aty)
    if sort.kind == PROP:
        return s.kind
    target = sort.cic_level
    reason = f"argument {m + 1} of constructor {cname} fits in {I}"
    w = whnf(env, aty)
    if isinstance(w, SortRef):
        # a type-valued field: the field's universe must be strictly smaller
        env.graph.enforce(Constraint(w.sort.cic_level, Rel.LT, target, origin_of(env, reason)))
    elif s.kind != PROP:
        env.graph.enforce(Constraint(s.cic_level, Rel.LE, target, origin_of(env, reason)))
    return s.kind


def _target_sort(env: GlobalEnv, target: str, name: str) -> Sort:
    if target == PROP:
        return SORT_PROP
    if target == SET:
        return SORT_SET
    return type_sort(env.graph.fresh(origin_of(env, f"motive of {name}")))


def _make_recursor(env: GlobalEnv, ind: Inductive, pbinders, target: str, fresh: _Fresh) -> Recursor:
    I = ind.name
    rname = I + RECURSOR_SUFFIX[target]
    params = [Const(p) for p, _, _ in pbinders]

    # motive: forall indices (z : I params indices), target
    arity = instantiate_many(_strip(ind.type, len(params)), params)
    ybinders, _ = open_telescope(env, arity, fresh)
    ys = [Const(y) for y, _, _ in ybinders]
    zname = fresh("z")
    zbinder = (zname, "z", apps(Const(I), params + ys))
    motive_ty = close_pis(ybinders + [zbinder], SortRef(_target_sort(env, target, rname)))
    _drop(env, ybinders)
    P = fresh("P")
    env.decls[P] = Axiom(P, motive_ty)

    minors: list[tuple[str, str, Term]] = []
    rules_open: list[tuple[list[str], Term]] = []
    for cname in ind.constructors:
        ctor = env.decls[cname]
        cty = instantiate_many(_strip(ctor.type, len(params)), params)
        abinders, concl = open_telescope(env, cty, fresh)
        _, cargs = spine(whnf(env, concl))
        indices = cargs[len(params):]
        args = [Const(a) for a, _, _ in abinders]
        hyps: list[tuple[str, str, Term]] = []
        ih_terms: list[Term] = []
        recursive = []
        for (a, hint, aty) in abinders:
            w = whnf(env, aty)
            if I not in constants(w):
                continue
            xs, body = open_telescope(env, w, fresh)
            _, bargs = spine(whnf(env, body))
            w_idx = bargs[len(params):]
            xvals = [Const(x) for x, _, _ in xs]
            applied = apps(Const(a), xvals)
            ih_ty = close_pis(xs, apps(Const(P), w_idx + [applied]))
            h = fresh("ih")
            hyps.append((h, "IH" + hint, ih_ty))
            recursive.append((xs, w_idx, applied))
            _drop(env, xs)
        minor_ty = close_pis(abinders + hyps,
                             apps(Const(P), indices + [apps(Const(cname), params + args)]))
        f = fresh("f")
        minors.append((f, "f_" + cname, minor_ty))
        rules_open.append(([a for a, _, _ in abinders], recursive))
        _drop(env, abinders)

    for f, _, ty in minors:
        env.decls[f] = Axiom(f, ty)
    ybinders2, _ = open_telescope(env, arity, fresh)
    ys2 = [Const(y) for y, _, _ in ybinders2]
    z2 = fresh("z")
    zb2 = (z2, "z", apps(Const(I), params + ys2))
    rec_ty = close_pis(pbinders + [(P, "P", motive_ty)] + minors + ybinders2 + [zb2],
                       apps(Const(P), ys2 + [Const(z2)]))
    _drop(env, ybinders2)

    prefix = [p for p, _, _ in pbinders] + [P] + [f for f, _, _ in minors]
    prefix_terms = [Const(x) for x in prefix]
    rules: list[Term] = []
    for k, (argnames, recursive) in enumerate(rules_open):
        ihs = []
        for xs, w_idx, applied in recursive:
            call = apps(Const(rname), prefix_terms + w_idx + [applied])
            ihs.append(close_lams(xs, call))
        rhs = apps(Const(minors[k][0]), [Const(a) for a in argnames] + ihs)
        rules.append(abstract(rhs, prefix + argnames))
    for f, _, _ in minors:
        env.decls.pop(f, None)
    env.decls.pop(P, None)
    return Recursor(rname, rec_ty, I, target, len(params), len(minors), ind.nindices, rules)


def _strip(t: Term, n: int) -> Term:
    """Drop ``n`` leading products syntactically (the body keeps its
    loose variables for ``instantiate_many``)."""
    for _ in range(n):
        assert isinstance(t, Pi)
        t = t.codomain
    return t


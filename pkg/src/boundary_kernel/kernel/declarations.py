"""Adding checked declarations to the environment, inside or outside sections.

Inside a section a declaration is checked against the section variables
and stored globally right away, abstracted over the variables it uses
(transitively, in declaration order). An alias maps the short name back to
the global constant applied to those variables, so later declarations in
the same section see the constant as if it were not yet discharged.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

from ..errors import DuplicateName, NoOpenSection
from ..term import (PROP, SET, TYPE, Const, Lam, Pi, Term, Var, apps, close_lams, close_pis,
                    free_vars, instantiate_many, lams, lift, pis, replace_const)
from .env import Axiom, Definition, GlobalEnv, Inductive, SectionFrame, SectionVar
from .inductive import RECURSOR_SUFFIX, InductiveDecl, declare_inductive
from .typing import Checker, origin_of


@contextmanager
def transaction(env: GlobalEnv):
    """Undo every change to ``env`` if the block raises."""
    mark = env.graph.mark()
    decls = dict(env.decls)
    order = dict(env.order)
    restricted = dict(env.restricted)
    aliases = dict(env.aliases)
    nvars = len(env.section_vars)
    frames = [(f, list(f.declared)) for f in env.sections]
    try:
        yield
    except BaseException:
        env.graph.rollback(mark)
        env.decls, env.order, env.restricted, env.aliases = decls, order, restricted, aliases
        del env.section_vars[nvars:]
        env.sections = [f for f, _ in frames]
        for f, declared in frames:
            f.declared[:] = declared
        raise


def ensure_fresh(env: GlobalEnv, name: str) -> None:
    if name in env.decls or name in env.aliases or name in env.restricted \
            or any(v.name == name for v in env.section_vars):
        raise DuplicateName(f"{name} is already declared")


# ---------------------------------------------------------------------------
# section variables


def _sv(p: int) -> str:
    return f"#sv{p}"


def _open_vars(env: GlobalEnv) -> list[Term]:
    return [Const(_sv(p)) for p in range(len(env.section_vars))]


def _used_closure(env: GlobalEnv, terms: list[Term]) -> list[int]:
    """Positions of the section variables that ``terms`` (in the section
    context) mention, closed under the dependencies of their types."""
    n = len(env.section_vars)
    used: set[int] = set()
    for t in terms:
        used |= {n - 1 - k for k in free_vars(t) if k < n}
    todo = list(used)
    while todo:
        p = todo.pop()
        for k in free_vars(env.section_vars[p].type):
            q = p - 1 - k
            if q >= 0 and q not in used:
                used.add(q)
                todo.append(q)
    return sorted(used)


def _binders(env: GlobalEnv, used: list[int]) -> list[tuple[str, str, Term]]:
    opened = _open_vars(env)
    out = []
    for p in used:
        v = env.section_vars[p]
        out.append((_sv(p), v.name, instantiate_many(v.type, opened[:p])))
    return out


def _discharge(env: GlobalEnv, terms: list[Term], kinds: list[type]) -> tuple[list[Term], tuple[int, ...]]:
    """Close section-context ``terms`` over the variables they use; each
    entry of ``kinds`` is ``Pi`` or ``Lam``."""
    used = _used_closure(env, terms)
    binders = _binders(env, used)
    opened = _open_vars(env)
    out = []
    for t, k in zip(terms, kinds):
        t_open = instantiate_many(t, opened)
        out.append(close_pis(binders, t_open) if k is Pi else close_lams(binders, t_open))
    return out, tuple(used)


def _record(env: GlobalEnv, name: str, positions: tuple[int, ...]) -> None:
    if env.sections:
        env.aliases[name] = (name, positions)
        env.sections[-1].declared.append(name)


# ---------------------------------------------------------------------------
# definitions and axioms


def declare_definition(env: GlobalEnv, name: str, type: Term | None, body: Term,
                       opaque: bool = False) -> Definition:
    """Check ``body`` (against ``type`` when given) in the current section
    context and store the discharged constant."""
    ensure_fresh(env, name)
    with transaction(env):
        chk = Checker(env)
        ctx = env.section_context()
        if type is None:
            type = chk.infer(ctx, body)
        else:
            chk.infer_sort(ctx, type)
            chk.check(ctx, body, type)
        (ty, bd), used = _discharge(env, [type, body], [Pi, Lam])
        info = Definition(name, ty, bd, opaque, origin_of(env, f"definition {name}"))
        env.add(info)
        _record(env, name, used)
    return info


def declare_axiom(env: GlobalEnv, name: str, type: Term) -> Axiom:
    """A global assumption (outside any section, or forced global)."""
    ensure_fresh(env, name)
    with transaction(env):
        Checker(env).infer_sort(env.section_context(), type)
        (ty,), used = _discharge(env, [type], [Pi])
        info = Axiom(name, ty, origin_of(env, f"axiom {name}"))
        env.add(info)
        _record(env, name, used)
    return info


# ---------------------------------------------------------------------------
# sections


def begin_section(env: GlobalEnv, name: str) -> None:
    env.sections.append(SectionFrame(name, len(env.section_vars)))


def declare_variable(env: GlobalEnv, name: str, type: Term, kind: str = "Variable") -> None:
    """A section variable; outside a section it is a global axiom."""
    if not env.sections:
        declare_axiom(env, name, type)
        return
    ensure_fresh(env, name)
    with transaction(env):
        Checker(env).infer_sort(env.section_context(), type)
    env.section_vars.append(SectionVar(name, type, kind))


def end_section(env: GlobalEnv, name: str | None = None) -> list[str]:
    """Close the innermost section; return the names it declared."""
    if not env.sections:
        raise NoOpenSection(f"End {name or ''}: no section is open".replace("  ", " "))
    frame = env.sections[-1]
    if name is not None and frame.name != name:
        raise NoOpenSection(f"End {name}: the innermost open section is {frame.name}")
    env.sections.pop()
    del env.section_vars[frame.start:]
    for alias, (target, positions) in list(env.aliases.items()):
        kept = tuple(p for p in positions if p < frame.start)
        if kept and env.sections:
            env.aliases[alias] = (target, kept)
        else:
            del env.aliases[alias]
    if env.sections:
        env.sections[-1].declared.extend(frame.declared)
    return frame.declared


# ---------------------------------------------------------------------------
# inductives and records


def declare_inductive_in_scope(env: GlobalEnv, decl: InductiveDecl) -> Inductive:
    """``decl`` is in the section context (outermost variables first). The
    section variables it uses become leading parameters."""
    if not env.sections or not env.section_vars:
        return declare_inductive(env, decl)
    full = [pis(decl.params, decl.arity)] + [pis(decl.params, c) for _, c in decl.constructors]
    used = _used_closure(env, full)
    if not used:
        return declare_inductive(env, decl)
    ensure_fresh(env, decl.name)
    binders = _binders(env, used)
    opened = _open_vars(env)
    applied = apps(Const(decl.name), [Const(_sv(p)) for p in used])
    k = len(used) + len(decl.params)
    closed = []
    for i, t in enumerate(full):
        t_open = instantiate_many(t, opened)
        if i > 0:
            t_open = replace_const(t_open, decl.name, applied)
        closed.append(close_pis(binders, t_open))
    params, arity = _peel(closed[0], k)
    ctors = [(cname, _peel(t, k)[1]) for (cname, _), t in zip(decl.constructors, closed[1:])]
    with transaction(env):
        ind = declare_inductive(env, InductiveDecl(decl.name, params, arity, ctors))
        positions = tuple(used)
        for n in [ind.name] + ind.constructors + list(ind.recursors.values()):
            _record(env, n, positions)
    return ind


def _peel(t: Term, k: int) -> tuple[list[tuple[str, Term]], Term]:
    binders = []
    for _ in range(k):
        assert isinstance(t, Pi)
        binders.append((t.hint, t.domain))
        t = t.codomain
    return binders, t


@dataclass
class RecordDecl:
    name: str
    params: list[tuple[str, Term]]        # in the section context
    sort: Term                            # in the context of params
    constructor: str
    fields: list[tuple[str, Term]]        # telescope after params


def declare_record(env: GlobalEnv, rec: RecordDecl) -> tuple[Inductive, list[str]]:
    """A one-constructor inductive plus one projection per field. Returns
    the inductive and the projections that could be defined (a projection
    needing a restricted recursor is skipped)."""
    np = len(rec.params)
    nf = len(rec.fields)
    # constructor: forall fields, Name params   (params are Var nf .. nf+np-1)
    concl = apps(Const(rec.name), [Var(nf + np - 1 - i) for i in range(np)])
    ctor_ty = pis(rec.fields, concl)
    for n in [rec.constructor] + [f for f, _ in rec.fields]:
        ensure_fresh(env, n)
    with transaction(env):
        ind = declare_inductive_in_scope(
            env, InductiveDecl(rec.name, rec.params, rec.sort, [(rec.constructor, ctor_ty)]))
        made = []
        for j, (fname, _) in enumerate(rec.fields):
            if _declare_projection(env, rec, ind, j, made):
                made.append(fname)
    return ind, made


def _declare_projection(env: GlobalEnv, rec: RecordDecl, ind: Inductive, j: int,
                        made: list[str]) -> bool:
    """``proj_j params (p : Name params) := Name_elim params (fun z => T_j[z]) (fun fields => f_j) p``
    where ``T_j[z]`` is field j's type with earlier fields read off ``z``."""
    np = len(rec.params)
    nf = len(rec.fields)
    if any(rec.fields[k][0] not in made for k in range(j)):
        return False
    self_ty = apps(_resolve(env, rec.name, np), [Var(np - 1 - i) for i in range(np)])

    def field_type(extra: int) -> Term:
        # context: params, then ``extra`` binders, the innermost being the record value
        projs = [apps(_resolve(env, rec.fields[k][0], np + extra),
                      [Var(np - 1 - i + extra) for i in range(np)] + [Var(0)])
                 for k in range(j)]
        return instantiate_many(lift(rec.fields[j][1], extra, j), projs)

    ctx = list(env.section_context()) + list(rec.params) + [("p", self_ty)]
    motive_dom = lift(self_ty, 1, 0)
    motive_body = field_type(2)
    sort = Checker(env).infer_sort(ctx + [("z", motive_dom)], motive_body)
    target = sort.kind if sort.kind in (PROP, SET) else TYPE
    elim = rec.name + RECURSOR_SUFFIX[target]
    if elim not in env.decls:
        return False
    minor_binders = [(n, lift(ty, 1, k)) for k, (n, ty) in enumerate(rec.fields)]
    minor = lams(minor_binders, Var(nf - 1 - j))
    args = [Var(np - i) for i in range(np)] + [Lam("z", motive_dom, motive_body), minor, Var(0)]
    body = lams(rec.params, Lam("p", self_ty, apps(_resolve(env, elim, np + 1), args)))
    ty = pis(rec.params, Pi("p", self_ty, field_type(1)))
    declare_definition(env, rec.fields[j][0], ty, body)
    return True


def _resolve(env: GlobalEnv, name: str, depth: int) -> Term:
    """``name`` as seen from inside the section at ``depth`` local binders."""
    alias = env.aliases.get(name)
    if alias is None:
        return Const(name)
    target, positions = alias
    n = len(env.section_vars)
    return apps(Const(target), [Var(depth + n - 1 - p) for p in positions])


__all__ = ["transaction", "declare_definition", "declare_axiom", "begin_section",
           "declare_variable", "end_section", "declare_inductive_in_scope", "RecordDecl",
           "declare_record", "ensure_fresh"]

"""Running vernacular files against an environment, one command at a time.

Each command runs in a transaction: a rejected declaration leaves the
environment as it was, and checking continues with the next command.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import KernelError, UnknownIdentifier
from .kernel.declarations import (RecordDecl, begin_section, declare_axiom, declare_definition,
                                  declare_inductive_in_scope, declare_record, declare_variable,
                                  end_section, transaction)
from .kernel.env import GlobalEnv
from .kernel.inductive import InductiveDecl
from .kernel.profiles import Family, Profile, get_profile
from .kernel.typing import Checker
from .reduction import DEFAULT_FUEL, FuelExhausted, Tracer, normalize
from .syntax.ast import (CheckCmd, Command, DefinitionCmd, EndCmd, InductiveCmd, NormalizeCmd,
                         RecordCmd, RequireCmd, SectionCmd, VariableCmd)
from .syntax.parser import parse_file
from .syntax.printer import print_term
from .syntax.resolve import Scope, resolve, resolve_telescope
from .term import Term

CORPUS_ENV = "PARADOX_CORPUS_DIR"


def corpus_dir() -> Path:
    override = os.environ.get(CORPUS_ENV)
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "corpus" / "data"


@dataclass
class Outcome:
    name: str
    accepted: bool
    command: str
    file: str
    line: int
    column: int
    error: KernelError | None = None
    type: Term | None = None
    message: str = ""       # output of Check / Normalize
    also: list[str] = field(default_factory=list)  # constructors, projections
    context: list[str] = field(default_factory=list)  # section variables ``type`` may mention

    @property
    def kind(self) -> str | None:
        return None if self.error is None else self.error.kind


@dataclass
class FileReport:
    file: str
    outcomes: list[Outcome] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(o.accepted for o in self.outcomes)

    def outcome(self, name: str) -> Outcome | None:
        for o in self.outcomes:
            if o.name == name or name in o.also:
                return o
        return None


class Session:
    """Checks files into one environment."""

    def __init__(self, env: GlobalEnv, fuel: int = DEFAULT_FUEL, tracer: Tracer | None = None,
                 search: list[Path] | None = None):
        self.env = env
        self.fuel = fuel
        self.tracer = tracer
        self.search = list(search or [])

    # -- files -----------------------------------------------------------

    def check_file(self, path: str | Path) -> FileReport:
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        return self.check_text(text, str(path), base=path.parent)

    def check_text(self, text: str, file: str = "<input>", base: Path | None = None) -> FileReport:
        cmds = parse_file(text, file)          # ParseError propagates
        report = FileReport(file)
        saved = self.env.file
        self.env.file = file
        try:
            for cmd in cmds:
                report.outcomes.extend(self.run(cmd, file, base))
        finally:
            self.env.file = saved
        return report

    def require(self, name: str, base: Path | None) -> FileReport | None:
        if name in self.env.loaded:
            return None
        dirs = ([base] if base is not None else []) + self.search + [corpus_dir()]
        for d in dirs:
            p = Path(d) / f"{name}.pdx"
            if p.is_file():
                self.env.loaded.add(name)
                return self.check_file(p)
        raise UnknownIdentifier(f"Require {name}: no file {name}.pdx found in "
                                f"{', '.join(str(d) for d in dirs)}")

    # -- commands --------------------------------------------------------

    def run(self, cmd: Command, file: str, base: Path | None) -> list[Outcome]:
        env = self.env
        env.line = cmd.span[0]
        line, col = cmd.span

        def outcome(name, error=None, type_=None, message="", also=()) -> Outcome:
            if error is not None:
                error.located(name, (file, line, col))
            return Outcome(name, error is None, type(cmd).__name__.removesuffix("Cmd"),
                           file, line, col, error, type_, message, list(also))

        if isinstance(cmd, SectionCmd):
            begin_section(env, cmd.name)
            return []
        if isinstance(cmd, EndCmd):
            try:
                end_section(env, cmd.name)
            except KernelError as exc:
                return [outcome(f"End {cmd.name}", exc)]
            return []
        if isinstance(cmd, RequireCmd):
            try:
                sub = self.require(cmd.name, base)
            except KernelError as exc:
                return [outcome(f"Require {cmd.name}", exc)]
            if sub is not None and not sub.ok:
                bad = next(o for o in sub.outcomes if not o.accepted)
                err = KernelError(f"required file {sub.file} has rejected declarations "
                                  f"(first: {bad.name}: {bad.kind})")
                return [outcome(f"Require {cmd.name}", err)]
            return []
        if isinstance(cmd, VariableCmd):
            outs = []
            for name in cmd.names:
                try:
                    with transaction(env):
                        ty = resolve(cmd.type, Scope(env, line=line))
                        if cmd.kind == "Axiom":
                            declare_axiom(env, name, ty)
                        else:
                            declare_variable(env, name, ty, cmd.kind)
                except KernelError as exc:
                    outs.append(outcome(name, exc))
                    continue
                info = env.decls.get(name)
                if info is not None:
                    outs.append(outcome(name, type_=info.type))
                else:
                    o = outcome(name, type_=ty)
                    o.context = [v.name for v in env.section_vars[:-1]]
                    outs.append(o)
            return outs
        if isinstance(cmd, DefinitionCmd):
            try:
                with transaction(env):
                    ty = None if cmd.type is None else resolve(cmd.type, Scope(env, line=line))
                    body = resolve(cmd.body, Scope(env, line=line))
                    info = declare_definition(env, cmd.name, ty, body, cmd.opaque)
            except KernelError as exc:
                return [outcome(cmd.name, exc)]
            return [outcome(cmd.name, type_=info.type)]
        if isinstance(cmd, InductiveCmd):
            ctors = [c for c, _ in cmd.constructors]
            try:
                with transaction(env):
                    scope = Scope(env, line=line, self_names=frozenset({cmd.name}))
                    params = resolve_telescope(cmd.params, scope)
                    arity = resolve(cmd.arity, scope)
                    resolved = [(c, resolve(e, scope)) for c, e in cmd.constructors]
                    declare_inductive_in_scope(env, InductiveDecl(cmd.name, params, arity, resolved))
            except KernelError as exc:
                return [outcome(cmd.name, exc, also=ctors)]
            return [outcome(cmd.name, type_=env.decls[cmd.name].type, also=ctors)]
        if isinstance(cmd, RecordCmd):
            try:
                with transaction(env):
                    scope = Scope(env, line=line)
                    params = resolve_telescope(cmd.params, scope)
                    sort = resolve(cmd.sort, scope)
                    fields = resolve_telescope(cmd.fields, scope)
                    _, made = declare_record(env, RecordDecl(cmd.name, params, sort,
                                                             cmd.constructor, fields))
            except KernelError as exc:
                return [outcome(cmd.name, exc, also=[cmd.constructor] + [f for f, _ in cmd.fields])]
            return [outcome(cmd.name, type_=env.decls[cmd.name].type, also=[cmd.constructor] + made)]
        if isinstance(cmd, CheckCmd):
            try:
                with transaction(env):
                    scope = Scope(env, line=line)
                    t = resolve(cmd.expr, scope)
                    ty = Checker(env).infer(env.section_context(), t)
                    names = [v.name for v in env.section_vars]
                    msg = f"{print_term(t, env, names)} : {print_term(ty, env, names)}"
            except KernelError as exc:
                return [outcome("Check", exc)]
            return [outcome("Check", type_=ty, message=msg)]
        if isinstance(cmd, NormalizeCmd):
            try:
                with transaction(env):
                    t = resolve(cmd.expr, Scope(env, line=line))
                    Checker(env).infer(env.section_context(), t)
                    res = normalize(env, t, cmd.fuel if cmd.fuel is not None else self.fuel,
                                    self.tracer)
                    msg = describe_normalization(res, env, [v.name for v in env.section_vars])
            except KernelError as exc:
                return [outcome("Normalize", exc)]
            return [outcome("Normalize", message=msg)]
        raise TypeError(f"unknown command {cmd!r}")


def describe_normalization(res, env, names=()) -> str:
    if isinstance(res, FuelExhausted):
        return f"fuel exhausted after {res.steps} steps"
    return f"normal form after {res.steps} steps: {print_term(res.term, env, list(names))}"


# ---------------------------------------------------------------------------
# environments

_PRELUDE_CACHE: dict[tuple[str, str], GlobalEnv] = {}


def new_env(profile: Profile | str, prelude: bool = True) -> GlobalEnv:
    """A fresh environment, with the prelude checked in for CIC profiles."""
    if isinstance(profile, str):
        profile = get_profile(profile)
    if not prelude or profile.family is not Family.CIC:
        return GlobalEnv(profile)
    key = (profile.name, str(corpus_dir()))
    cached = _PRELUDE_CACHE.get(key)
    if cached is None:
        env = GlobalEnv(profile)
        report = Session(env).require("prelude", None)
        if report is not None and not report.ok:
            bad = [o for o in report.outcomes if not o.accepted]
            raise KernelError(f"the prelude does not check under {profile.name}: "
                              + "; ".join(o.error.render() for o in bad))
        _PRELUDE_CACHE[key] = cached = env
    return cached.copy()

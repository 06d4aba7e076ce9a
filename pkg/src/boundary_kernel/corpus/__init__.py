"""The paradox corpus: a manifest binding each file, under a profile, to the
outcome expected for each of its declarations.

Manifest lines look like::

    path | profile | tier | name=Accepted | name=Rejected:Kind[:substring]

``#`` starts a comment. The name ``*`` with ``Accepted`` asks that every
declaration of the file be accepted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from ..errors import KernelError, ManifestError
from ..kernel.env import Axiom, Definition, GlobalEnv
from ..kernel.profiles import get_profile
from ..reduction import whnf
from ..syntax.ast import DefinitionCmd, InductiveCmd, RecordCmd, VariableCmd
from ..syntax.parser import parse_file
from ..term import Const, Pi, SortRef, Term, Var, constants
from ..vernacular import FileReport, Session, corpus_dir, new_env

MANIFEST = "MANIFEST"
ALL = "*"


class Tier(Enum):
    MANDATORY = "mandatory"
    STRETCH = "stretch"


@dataclass(frozen=True)
class Expectation:
    name: str
    accepted: bool
    kind: str | None = None
    substring: str | None = None

    def describe(self) -> str:
        if self.accepted:
            return "Accepted"
        return "Rejected:" + self.kind + (f":{self.substring}" if self.substring else "")


@dataclass
class CorpusEntry:
    path: Path
    profile: str
    tier: Tier
    expectations: list[Expectation]
    line: int = 0

    @property
    def label(self) -> str:
        return f"{self.path.stem}@{self.profile}"


@dataclass
class Check:
    expectation: Expectation
    observed: str
    passed: bool


@dataclass
class EntryReport:
    entry: CorpusEntry
    checks: list[Check] = field(default_factory=list)
    file_report: FileReport | None = None
    env: GlobalEnv | None = None
    failure: str | None = None  # the file could not be checked at all

    @property
    def passed(self) -> bool:
        return self.failure is None and all(c.passed for c in self.checks)


# ---------------------------------------------------------------------------
# loading

def declared_names(path: Path) -> set[str]:
    """Every name a file declares, constructors and record fields included."""
    names: set[str] = set()
    for cmd in parse_file(path.read_text(encoding="utf-8"), str(path)):
        if isinstance(cmd, DefinitionCmd):
            names.add(cmd.name)
        elif isinstance(cmd, InductiveCmd):
            names.add(cmd.name)
            names.update(c for c, _ in cmd.constructors)
        elif isinstance(cmd, RecordCmd):
            names.update([cmd.name, cmd.constructor] + [f for f, _ in cmd.fields])
        elif isinstance(cmd, VariableCmd):
            names.update(cmd.names)
    return names


def _expectation(text: str, where: str) -> Expectation:
    name, sep, outcome = text.partition("=")
    name, outcome = name.strip(), outcome.strip()
    if not sep or not name:
        raise ManifestError(f"{where}: expected name=Outcome, got {text.strip()!r}")
    if outcome == "Accepted":
        return Expectation(name, True)
    head, _, rest = outcome.partition(":")
    if head != "Rejected" or not rest:
        raise ManifestError(f"{where}: outcome must be Accepted or Rejected:Kind[:substring], "
                            f"got {outcome!r}")
    kind, _, sub = rest.partition(":")
    if name == ALL:
        raise ManifestError(f"{where}: {ALL} can only be expected Accepted")
    return Expectation(name, False, kind.strip(), sub.strip() or None)


def parse_manifest(text: str, directory: Path, source: str = MANIFEST) -> list[CorpusEntry]:
    entries = []
    names_cache: dict[Path, set[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        cols = [c.strip() for c in line.split("|")]
        if len(cols) < 4:
            raise ManifestError(f"{where}: expected 'path | profile | tier | expectation...'")
        rel, profile, tier, *exps = cols
        path = directory / rel
        if not path.is_file():
            raise ManifestError(f"{where}: no such corpus file {rel!r}")
        try:
            get_profile(profile)
        except ValueError as exc:
            raise ManifestError(f"{where}: {exc}") from None
        try:
            tier_v = Tier(tier.lower())
        except ValueError:
            raise ManifestError(f"{where}: tier must be mandatory or stretch, got {tier!r}") from None
        expectations = [_expectation(e, where) for e in exps]
        if not expectations:
            raise ManifestError(f"{where}: no expectations")
        if path not in names_cache:
            try:
                names_cache[path] = declared_names(path)
            except KernelError as exc:
                raise ManifestError(f"{where}: {rel} does not parse: {exc.render()}") from None
        missing = [e.name for e in expectations
                   if e.name != ALL and e.name not in names_cache[path]]
        if missing:
            raise ManifestError(f"{where}: {rel} declares no {', '.join(missing)}")
        entries.append(CorpusEntry(path, profile, tier_v, expectations, lineno))
    if not entries:
        raise ManifestError(f"{source}: no entries")
    return entries


def load_corpus(directory: str | Path | None = None) -> list[CorpusEntry]:
    directory = Path(directory) if directory is not None else corpus_dir()
    manifest = directory / MANIFEST
    if not manifest.is_file():
        raise ManifestError(f"no {MANIFEST} in {directory}")
    return parse_manifest(manifest.read_text(encoding="utf-8"), directory, str(manifest))


# ---------------------------------------------------------------------------
# evaluation

def entry_env(entry: CorpusEntry) -> GlobalEnv:
    # the prelude is checked into an empty environment, everything else on top of it
    return new_env(entry.profile, prelude=entry.path.stem != "prelude")


def evaluate_entry(entry: CorpusEntry, env: GlobalEnv | None = None,
                   fuel: int | None = None) -> EntryReport:
    report = EntryReport(entry)
    try:
        env = env if env is not None else entry_env(entry)
        session = Session(env, search=[entry.path.parent]) if fuel is None else \
            Session(env, fuel=fuel, search=[entry.path.parent])
        fr = session.check_file(entry.path)
    except KernelError as exc:
        report.failure = exc.render()
        return report
    report.file_report, report.env = fr, env
    for exp in entry.expectations:
        if exp.name == ALL:
            bad = [o for o in fr.outcomes if not o.accepted]
            observed = "all Accepted" if not bad else \
                "Rejected " + ", ".join(f"{o.name}:{o.kind}" for o in bad)
            report.checks.append(Check(exp, observed, not bad))
            continue
        out = fr.outcome(exp.name)
        if out is None:
            report.checks.append(Check(exp, "not declared", False))
            continue
        if out.accepted:
            report.checks.append(Check(exp, "Accepted", exp.accepted))
            continue
        text = out.error.render()
        observed = f"Rejected:{out.kind}"
        ok = (not exp.accepted and out.kind == exp.kind
              and (exp.substring is None or exp.substring in text))
        report.checks.append(Check(exp, observed, ok))
    return report


# ---------------------------------------------------------------------------
# soundness scan

def is_empty_type(env: GlobalEnv, ty: Term) -> bool:
    """``False`` or an impredicative bottom ``forall p : s, p``."""
    t = whnf(env, ty)
    if isinstance(t, Const):
        return t.name == "False"
    return (isinstance(t, Pi) and isinstance(t.domain, SortRef)
            and isinstance(t.codomain, Var) and t.codomain.index == 0)


def assumptions(env: GlobalEnv, name: str, _memo: dict[str, frozenset[str]] | None = None
                ) -> frozenset[str]:
    """Axioms a constant depends on, transitively."""
    memo = {} if _memo is None else _memo
    stack, seen, found = [name], set(), set()
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        if n in memo:
            found |= memo[n]
            continue
        info = env.decls.get(n)
        if isinstance(info, Axiom):
            found.add(n)
        elif isinstance(info, Definition):
            stack.extend(constants(info.body) | constants(info.type))
    memo[name] = frozenset(found)
    return memo[name]


def closed_empty_inhabitants(env: GlobalEnv) -> list[str]:
    """Definitions of an empty type that use no axiom: witnesses that the
    environment is inconsistent."""
    memo: dict[str, frozenset[str]] = {}
    return [n for n, info in env.decls.items()
            if isinstance(info, Definition) and is_empty_type(env, info.type)
            and not assumptions(env, n, memo)]


def select(entries: list[CorpusEntry], tier: str = "mandatory") -> list[CorpusEntry]:
    if tier == "all":
        return list(entries)
    return [e for e in entries if e.tier is Tier(tier)]


__all__ = ["ALL", "MANIFEST", "Check", "CorpusEntry", "EntryReport", "Expectation", "Tier",
           "assumptions", "closed_empty_inhabitants", "declared_names", "entry_env", "evaluate_entry", "is_empty_type", "load_corpus", "parse_manifest",
           "select"]

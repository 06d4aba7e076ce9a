"""Universe level constraints and the graph that checks them.

Constraints are edges ``a -> b`` of weight 0 (``a <= b``) or 1 (``a < b``).
A set of constraints is satisfiable over the naturals exactly when the graph
has no cycle of positive weight.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .errors import UniverseInconsistency
from .term import LPROP, LSET, Level, Origin


class Rel(Enum):
    LE = "<="
    LT = "<"
    EQ = "="


@dataclass(frozen=True)
class Constraint:
    lhs: Level
    rel: Rel
    rhs: Level
    origin: Origin = field(default_factory=Origin, compare=False)

    def __str__(self) -> str:
        return f"{self.lhs} {_SYM[self.rel]} {self.rhs}"


_SYM = {Rel.LE: "≤", Rel.LT: "<", Rel.EQ: "="}


@dataclass(frozen=True)
class Edge:
    src: Level
    dst: Level
    strict: bool
    origin: Origin = field(default_factory=Origin, compare=False)

    @property
    def rel(self) -> Rel:
        return Rel.LT if self.strict else Rel.LE

    def render(self) -> str:
        sym = "<" if self.strict else "≤"
        return f"{self.src} {sym} {self.dst}   -- introduced at {self.origin}"


@dataclass(frozen=True)
class InconsistencyReport:
    """A positive-weight cycle. ``cycle`` lists the edges in order; when the
    report comes from adding a constraint, ``attempted`` is that edge and
    the cycle ends with it."""

    cycle: tuple[Edge, ...]
    attempted: Edge | None = None

    @property
    def weight(self) -> int:
        return sum(e.strict for e in self.cycle)

    def summary(self) -> tuple[Edge, Edge]:
        """Collapse the cycle into two opposite relations between the same
        two levels: the attempted edge and the one entailed by the rest."""
        last = self.attempted or self.cycle[-1]
        rest = self.cycle[:-1] if self.cycle[-1] == last else self.cycle
        if not rest:
            return last, last
        entailed = Edge(last.dst, last.src, any(e.strict for e in rest),
                        Origin(reason="entailed by " + ", ".join(_edge_short(e) for e in rest)))
        return entailed, last

    def render(self) -> str:
        entailed, last = self.summary()
        head = (f"cannot enforce {_edge_short(last)} because "
                f"{_edge_short(entailed)}")
        return "\n".join([head] + [e.render() for e in self.cycle])

    def digest(self) -> str:
        import hashlib

        keys = sorted(f"{e.src}{'<' if e.strict else '<='}{e.dst}" for e in self.cycle)
        return hashlib.sha1("|".join(keys).encode()).hexdigest()[:10]


def _edge_short(e: Edge) -> str:
    return f"{e.src} {'<' if e.strict else '≤'} {e.dst}"


class Consistent:
    def __bool__(self) -> bool:
        return True

    def __repr__(self) -> str:
        return "Consistent"


CONSISTENT = Consistent()


class UniverseGraph:
    """Mutable constraint graph with an undo log.

    ``stratified=False`` turns the graph into a recorder that never
    reports an inconsistency. ``cumulative_set`` adds ``Prop <= Set`` and
    ``Set <= l`` for every fresh level ``l``.
    """

    def __init__(self, stratified: bool = True, cumulative_set: bool = True):
        self.stratified = stratified
        self.cumulative_set = cumulative_set
        self.nodes: list[Level] = []
        self.edges: list[Edge] = []
        self.out: dict[Level, list[Edge]] = {}
        self._counter = 0
        self._succ: dict[Level, Level] = {}
        self._sup: dict[tuple[Level, Level], Level] = {}
        self._log: list[tuple] = []
        if cumulative_set:
            self._add_node(LPROP)
            self._add_node(LSET)
            self._add_edge(Edge(LPROP, LSET, False, Origin("<builtin>", 0, "Prop ≤ Set")))

    # -- structure -------------------------------------------------------

    def _add_node(self, lvl: Level) -> None:
        self.nodes.append(lvl)
        self.out[lvl] = []
        self._log.append(("node", lvl))

    def _add_edge(self, e: Edge) -> None:
        self.edges.append(e)
        self.out[e.src].append(e)
        self._log.append(("edge", e))

    def __contains__(self, lvl: Level) -> bool:
        return lvl in self.out

    def copy(self) -> "UniverseGraph":
        g = UniverseGraph.__new__(UniverseGraph)
        g.stratified = self.stratified
        g.cumulative_set = self.cumulative_set
        g.nodes = list(self.nodes)
        g.edges = list(self.edges)
        g.out = {k: list(v) for k, v in self.out.items()}
        g._counter = self._counter
        g._succ = dict(self._succ)
        g._sup = dict(self._sup)
        g._log = list(self._log)
        return g

    # -- transactions ----------------------------------------------------

    def mark(self) -> int:
        return len(self._log)

    def rollback(self, mark: int) -> None:
        while len(self._log) > mark:
            entry = self._log.pop()
            kind = entry[0]
            if kind == "node":
                self.nodes.pop()
                del self.out[entry[1]]
            elif kind == "edge":
                e = self.edges.pop()
                self.out[e.src].pop()
            elif kind == "succ":
                del self._succ[entry[1]]
            elif kind == "sup":
                del self._sup[entry[1]]
            elif kind == "counter":
                self._counter = entry[1]

    # -- levels ----------------------------------------------------------

    def fresh(self, origin: Origin | None = None, prefix: str = "u") -> Level:
        self._log.append(("counter", self._counter))
        self._counter += 1
        while Level(f"{prefix}.{self._counter}") in self.out:
            self._counter += 1
        return self._new_level(Level(f"{prefix}.{self._counter}", origin))

    def named(self, name: str, origin: Origin | None = None) -> Level:
        """The level called ``name``, created on first use."""
        if name == LPROP.name or name == LSET.name:
            return Level(name)
        key = Level(name)
        if key in self.out:
            return key
        return self._new_level(Level(name, origin))

    def _new_level(self, lvl: Level) -> Level:
        self._add_node(lvl)
        if self.cumulative_set:
            self._add_edge(Edge(LSET, lvl, False, Origin("<builtin>", 0, "Set ≤ every Type level")))
        return lvl

    def succ(self, lvl: Level, origin: Origin | None = None) -> Level:
        """A level strictly above ``lvl``, shared by all callers."""
        got = self._succ.get(lvl)
        if got is None:
            got = self.fresh(origin, prefix="u")
            self._succ[lvl] = got
            self._log.append(("succ", lvl))
            self.enforce(Constraint(lvl, Rel.LT, got, origin or Origin(reason=f"type of Type@{{{lvl}}}")))
        return got

    def sup(self, a: Level, b: Level, origin: Origin | None = None) -> Level:
        """A level above both ``a`` and ``b``, shared by all callers."""
        if a == b or a in (LPROP, LSET):
            return b
        if b in (LPROP, LSET):
            return a
        key = (a, b) if a.name <= b.name else (b, a)
        got = self._sup.get(key)
        if got is None:
            got = self.fresh(origin, prefix="u")
            self._sup[key] = got
            self._log.append(("sup", key))
            o = origin or Origin(reason="product sort")
            self.enforce(Constraint(a, Rel.LE, got, o))
            self.enforce(Constraint(b, Rel.LE, got, o))
        return got

    # -- constraints -----------------------------------------------------

    def enforce(self, c: Constraint) -> None:
        """Add ``c``; raise ``UniverseInconsistency`` and leave the graph
        unchanged if it would create a positive cycle."""
        for lvl in (c.lhs, c.rhs):
            if lvl not in self:
                raise KeyError(f"unknown level {lvl}")
        pairs = [(c.lhs, c.rhs, c.rel == Rel.LT)]
        if c.rel == Rel.EQ:
            pairs.append((c.rhs, c.lhs, False))
        start = self.mark()
        for src, dst, strict in pairs:
            e = Edge(src, dst, strict, c.origin)
            if self.stratified:
                path = self._positive_path(dst, src, strict)
                if path is not None:
                    self.rollback(start)
                    raise UniverseInconsistency(InconsistencyReport(tuple(path) + (e,), e))
            if not self._has_edge(e):
                self._add_edge(e)

    def _has_edge(self, e: Edge) -> bool:
        return any(x.dst == e.dst and x.strict == e.strict for x in self.out[e.src])

    def _positive_path(self, start: Level, goal: Level, strict_already: bool) -> list[Edge] | None:
        """A path ``start ~> goal`` that, together with an edge of the given
        strictness closing it, has positive weight."""
        init = (start, strict_already)
        parent: dict[tuple[Level, bool], tuple[tuple[Level, bool], Edge] | None] = {init: None}
        queue = deque([init])
        while queue:
            state = queue.popleft()
            node, s = state
            if node == goal and s:
                path: list[Edge] = []
                while parent[state] is not None:
                    prev, edge = parent[state]
                    path.append(edge)
                    state = prev
                path.reverse()
                return path
            for e in self.out.get(node, ()):
                nxt = (e.dst, s or e.strict)
                if nxt not in parent:
                    parent[nxt] = (state, e)
                    queue.append(nxt)
        return None

    def check(self) -> Consistent | InconsistencyReport:
        if not self.stratified:
            return CONSISTENT
        comp = _scc(self.nodes, self.out)
        for e in self.edges:
            if e.strict and comp[e.src] == comp[e.dst]:
                back = self._positive_path(e.dst, e.src, True)
                assert back is not None
                return InconsistencyReport((e,) + tuple(back))
        return CONSISTENT

    def entails(self, a: Level, b: Level, strict: bool) -> bool:
        """Does the graph force ``a <= b`` (or ``a < b``)?"""
        if a == b and not strict:
            return True
        return self._path_exists(a, b, strict)

    def _path_exists(self, a: Level, b: Level, strict: bool) -> bool:
        seen = {(a, False)}
        queue = deque(seen)
        while queue:
            node, s = queue.popleft()
            if node == b and (s or not strict):
                return True
            for e in self.out.get(node, ()):
                nxt = (e.dst, s or e.strict)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return False


def _scc(nodes: list[Level], out: dict[Level, list[Edge]]) -> dict[Level, int]:
    """Tarjan's algorithm, iterative."""
    index: dict[Level, int] = {}
    low: dict[Level, int] = {}
    comp: dict[Level, int] = {}
    stack: list[Level] = []
    on_stack: set[Level] = set()
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            succs = out.get(v, [])
            recurse = False
            while i < len(succs):
                w = succs[i].dst
                i += 1
                if w not in index:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp[w] = index[v]
                    if w == v:
                        break
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp


# ----------------------------------------------------------------------------
# value-style API


def fresh_level(graph: UniverseGraph, origin: Origin | None = None) -> tuple[UniverseGraph, Level]:
    g = graph.copy()
    return g, g.fresh(origin)


def add_constraint(graph: UniverseGraph, c: Constraint) -> UniverseGraph | InconsistencyReport:
    g = graph.copy()
    try:
        g.enforce(c)
    except UniverseInconsistency as exc:
        return exc.report
    return g


def check_consistency(graph: UniverseGraph) -> Consistent | InconsistencyReport:
    return graph.check()

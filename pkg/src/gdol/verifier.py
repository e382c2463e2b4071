"""Sound, incomplete entailment checking for verification conditions.

The engine works on two reachability graphs: one over class expressions
(subclass and equivalence edges, plus elimination and introduction steps for
conjunctions) and one over property nodes, where a node is a property name
together with an inversion flag so that inverse reasoning falls out of plain
graph walking.  Domain, range, fact, and typing goals lift through those
graphs.  Scoped range axioms (`p only R` under a named domain) deliberately
contribute nothing to global domain or range goals.

Every verdict is per goal axiom, monotone in the theory, and bounded by a
step limit counted in visited nodes and traversed edges; hitting the limit
reports the goal unproven and flags the result rather than failing.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

from .errors import MapKindMismatch
from .model import (
    And, Axiom, ClassAssertion, ClassExpr, DifferentIndividuals,
    DisjointClasses, Domain, EquivalentClasses, Functional, InverseProps,
    Max, Name, Obligation, OneOf, Only, Ontology, PropAssertion, Range,
    RefinementDef, Some, SubClassOf, SubPropertyChain, SubPropertyOf,
    Transitive, axiom_key, axiom_names, canon_axiom, map_ontology,
)

ALL_RULES = frozenset({"R1", "R2", "R3", "R4", "R5", "R6", "R7"})


@dataclass(frozen=True)
class RuleEngineConfig:
    rules: frozenset[str] = ALL_RULES
    step_limit: int = 100000


DEFAULT_CONFIG = RuleEngineConfig()


@dataclass(frozen=True)
class EntailmentResult:
    proven: bool
    step_limited: bool = False
    reason: str = ""


class _StepLimit(Exception):
    pass


class _Counter:
    __slots__ = ("n", "limit")

    def __init__(self, limit: int) -> None:
        self.n = 0
        self.limit = limit

    def tick(self) -> None:
        self.n += 1
        if self.n > self.limit:
            raise _StepLimit


_PropNode = tuple[Name, bool]


def _subexprs(e: ClassExpr):
    yield e
    match e:
        case And(operands):
            for c in operands:
                yield from _subexprs(c)
        case Some(_, f) | Only(_, f) | Max(_, _, f):
            yield from _subexprs(f)
        case _:
            return


def _axiom_exprs(a: Axiom):
    match a:
        case SubClassOf(sub, sup) | EquivalentClasses(sub, sup) | DisjointClasses(sub, sup):
            yield from _subexprs(sub)
            yield from _subexprs(sup)
        case Domain(_, c) | Range(_, c):
            yield from _subexprs(c)
        case ClassAssertion(c, _):
            yield from _subexprs(c)
        case _:
            return


class _Theory:
    def __init__(self, ont: Ontology, goal: Axiom, config: RuleEngineConfig) -> None:
        r = config.rules
        self.config = config
        self.axioms = ont.axioms
        self.class_edges: dict[ClassExpr, set[ClassExpr]] = {}
        self.and_nodes: set[And] = set()
        self.prop_edges: dict[_PropNode, set[_PropNode]] = {}
        self.prop_redges: dict[_PropNode, set[_PropNode]] = {}
        self.domains: dict[_PropNode, set[ClassExpr]] = {}
        self.func_nodes: set[_PropNode] = set()
        self.holds: dict[tuple[Name, Name], set[_PropNode]] = {}
        self.types: dict[Name, set[ClassExpr]] = {}
        self.diffs: list[frozenset[Name]] = []
        self.disjoints: list[tuple[ClassExpr, ClassExpr]] = []
        self._reach_cache: dict[ClassExpr, set[ClassExpr]] = {}
        self._prop_reach_cache: dict[_PropNode, set[_PropNode]] = {}

        for e in _axiom_exprs(goal):
            if isinstance(e, And):
                self.and_nodes.add(e)
        for a in self.axioms:
            if "R3" in r:
                for e in _axiom_exprs(a):
                    if isinstance(e, And):
                        self.and_nodes.add(e)
            match a:
                case SubClassOf(sub, sup):
                    if "R1" in r:
                        self._class_edge(sub, sup)
                case EquivalentClasses(x, y):
                    if "R2" in r:
                        self._class_edge(x, y)
                        self._class_edge(y, x)
                    if "R7" in r:
                        for side, other in ((x, y), (y, x)):
                            if isinstance(side, OneOf):
                                for m in side.members:
                                    self.types.setdefault(m, set()).add(other)
                case DisjointClasses(x, y):
                    self.disjoints.append((x, y))
                case SubPropertyOf(sub, sup):
                    if "R4" in r:
                        self._prop_edge((sub.name, sub.inverse), (sup.name, sup.inverse))
                        self._prop_edge((sub.name, not sub.inverse), (sup.name, not sup.inverse))
                case InverseProps(x, y):
                    if "R4" in r:
                        self._prop_edge((x, False), (y, True))
                        self._prop_edge((y, True), (x, False))
                        self._prop_edge((x, True), (y, False))
                        self._prop_edge((y, False), (x, True))
                case Domain(p, c):
                    self.domains.setdefault((p, False), set()).add(c)
                case Range(p, c):
                    self.domains.setdefault((p, True), set()).add(c)
                case Functional(p):
                    self.func_nodes.add((p, False))
                case ClassAssertion(c, i):
                    self.types.setdefault(i, set()).add(c)
                case PropAssertion(p, s, o):
                    self.holds.setdefault((s, o), set()).add((p, False))
                    self.holds.setdefault((o, s), set()).add((p, True))
                case DifferentIndividuals(members):
                    self.diffs.append(frozenset(members))
                case _:
                    pass
        if "R3" in r:
            for an in self.and_nodes:
                for op in an.operands:
                    self._class_edge(an, op)

    def _class_edge(self, a: ClassExpr, b: ClassExpr) -> None:
        self.class_edges.setdefault(a, set()).add(b)

    def _prop_edge(self, a: _PropNode, b: _PropNode) -> None:
        self.prop_edges.setdefault(a, set()).add(b)
        self.prop_redges.setdefault(b, set()).add(a)

    # --- reachability ---

    def class_reach(self, start: ClassExpr, counter: _Counter) -> set[ClassExpr]:
        cached = self._reach_cache.get(start)
        if cached is not None:
            return cached
        reached = {start}
        frontier = [start]
        while True:
            while frontier:
                x = frontier.pop()
                counter.tick()
                for y in self.class_edges.get(x, ()):
                    counter.tick()
                    if y not in reached:
                        reached.add(y)
                        frontier.append(y)
            grew = False
            for an in self.and_nodes:
                if an not in reached and all(op in reached for op in an.operands):
                    counter.tick()
                    reached.add(an)
                    frontier.append(an)
                    grew = True
            if not grew:
                break
        self._reach_cache[start] = reached
        return reached

    def _walk_props(self, start: _PropNode, edges: dict, counter: _Counter) -> set[_PropNode]:
        reached = {start}
        frontier = [start]
        while frontier:
            x = frontier.pop()
            counter.tick()
            for y in edges.get(x, ()):
                counter.tick()
                if y not in reached:
                    reached.add(y)
                    frontier.append(y)
        return reached

    def prop_reach(self, start: _PropNode, counter: _Counter) -> set[_PropNode]:
        cached = self._prop_reach_cache.get(start)
        if cached is None:
            cached = self._walk_props(start, self.prop_edges, counter)
            self._prop_reach_cache[start] = cached
        return cached

    def prop_reach_back(self, start: _PropNode, counter: _Counter) -> set[_PropNode]:
        return self._walk_props(start, self.prop_redges, counter)

    # --- goals ---

    def _subclass(self, sub: ClassExpr, sup: ClassExpr, counter: _Counter) -> bool:
        return sup in self.class_reach(sub, counter)

    def _domain_goal(self, node: _PropNode, cls: ClassExpr, counter: _Counter) -> bool:
        if "R5" not in self.config.rules:
            return False
        for n in self.prop_reach(node, counter):
            for have in self.domains.get(n, ()):
                if self._subclass(have, cls, counter):
                    return True
        return False

    def prove(self, goal: Axiom, counter: _Counter) -> bool:
        r = self.config.rules
        match goal:
            case SubClassOf(sub, sup):
                return self._subclass(sub, sup, counter)
            case EquivalentClasses(x, y):
                return self._subclass(x, y, counter) and self._subclass(y, x, counter)
            case DisjointClasses(x, y):
                for c, d in self.disjoints:
                    if (self._subclass(x, c, counter) and self._subclass(y, d, counter)) or (
                        self._subclass(x, d, counter) and self._subclass(y, c, counter)
                    ):
                        return True
                return False
            case SubPropertyOf(sub, sup):
                target = (sup.name, sup.inverse)
                return "R4" in r and target in self.prop_reach((sub.name, sub.inverse), counter)
            case InverseProps(x, y):
                if "R4" not in r:
                    return False
                return (y, True) in self.prop_reach((x, False), counter) and (
                    (x, False) in self.prop_reach((y, True), counter)
                )
            case Domain(p, c):
                return self._domain_goal((p, False), c, counter)
            case Range(p, c):
                return self._domain_goal((p, True), c, counter)
            case Functional(p):
                if "R7" not in r:
                    return False
                return bool(self.prop_reach((p, False), counter) & self.func_nodes)
            case Transitive(_) | SubPropertyChain(_, _):
                return goal in self.axioms
            case ClassAssertion(c, i):
                if "R7" not in r:
                    return False
                for have in self.types.get(i, ()):
                    if self._subclass(have, c, counter):
                        return True
                return False
            case PropAssertion(p, s, o):
                if "R6" not in r:
                    return False
                asserted = self.holds.get((s, o), set())
                if not asserted:
                    return False
                return bool(self.prop_reach_back((p, False), counter) & asserted)
            case DifferentIndividuals(members):
                want = frozenset(members)
                return any(want <= have for have in self.diffs)
        raise TypeError(f"not an axiom: {goal!r}")


def entails(theory: Ontology, goal: Axiom, config: RuleEngineConfig = DEFAULT_CONFIG) -> EntailmentResult:
    """Decide whether the rule engine can derive goal from theory."""
    goal = canon_axiom(goal)
    declared = {n for _, n in theory.decls}
    missing = axiom_names(goal) - declared
    if missing:
        names = ", ".join(sorted(str(n) for n in missing))
        return EntailmentResult(False, False, f"goal mentions undeclared names: {names}")
    engine = _Theory(theory, goal, config)
    counter = _Counter(config.step_limit)
    try:
        proven = engine.prove(goal, counter)
    except _StepLimit:
        return EntailmentResult(False, True, f"step limit {config.step_limit} reached")
    return EntailmentResult(proven, False, "" if proven else "not derivable")


def check_obligations(obligations: Iterable[Obligation],
                      config: RuleEngineConfig = DEFAULT_CONFIG) -> tuple[Obligation, ...]:
    """Run the engine over each obligation, filling in status and diagnostic."""
    out = []
    for ob in obligations:
        res = entails(ob.context, ob.axiom, config)
        status = "proven" if res.proven else "unproven"
        out.append(replace(ob, status=status, diagnostic=res.reason))
    return tuple(out)


# --- refinement ---------------------------------------------------------------

@dataclass(frozen=True)
class RefinementReport:
    name: str
    results: tuple[tuple[Axiom, EntailmentResult], ...]

    @property
    def ok(self) -> bool:
        return all(res.proven for _, res in self.results)

    @property
    def unproven(self) -> tuple[Axiom, ...]:
        return tuple(a for a, res in self.results if not res.proven)


def check_refinement(refdef: RefinementDef, env, config: RuleEngineConfig = DEFAULT_CONFIG) -> RefinementReport:
    """A refinement holds when every sentence of the (renamed) source
    expansion is entailed by the target expansion."""
    from .expander import expand_spec_standalone

    source, _ = expand_spec_standalone(env, refdef.source)
    target, _ = expand_spec_standalone(env, refdef.target)
    mapping: dict[Name, Name] = dict(refdef.symbol_map)
    for a, b in refdef.symbol_map:
        ka = source.kind_of(a)
        kb = target.kind_of(b)
        if ka is not None and kb is not None and ka is not kb:
            raise MapKindMismatch(str(a), str(b), (ka.value, kb.value))
    renamed = map_ontology(source, lambda n: mapping.get(n, n))
    results = []
    for axiom in sorted(renamed.axioms, key=axiom_key):
        results.append((axiom, entails(target, axiom, config)))
    return RefinementReport(refdef.name, tuple(results))


# --- obligation export ---------------------------------------------------------

def export_obligations(obligations: Iterable[Obligation], directory: Path) -> list[Path]:
    """Write one Manchester file per obligation: the context theory followed
    by a comment block naming the goal."""
    from .emitter import axiom_text, emit_manchester

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    counters: dict[tuple[str, str, str], int] = {}
    for ob in obligations:
        key = (ob.ontology, ob.pattern, ob.param)
        k = counters.get(key, 0)
        counters[key] = k + 1
        name = f"{ob.ontology}__{ob.pattern}__{ob.param}__{k}.omn"
        body = emit_manchester(ob.context)
        text = (
            f"{body}"
            f"%% goal: {axiom_text(ob.axiom)}\n"
            f"%% from: {ob.ontology} :: {ob.pattern}/{ob.param}#{ob.index}\n"
        )
        path = directory / name
        path.write_text(text, encoding="utf-8", newline="\n")
        written.append(path)
    return written

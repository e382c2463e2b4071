"""Expansion of pattern instantiations into flat ontologies.

An ExpansionEnv holds every top-level pattern and ontology definition from a
set of documents.  Expanding a named ontology walks its spec tree: basic
fragments are stratified and unioned, instantiations are bound, substituted,
and expanded recursively, and references to other named ontologies reuse a
memoized expansion.  Verification obligations are collected per named
ontology as instantiations are encountered.

Recursion depth is bounded by a budget counted in nested instantiation
frames.  Deeply recursive patterns are legitimate (list recursion consumes
one element per frame), so the public entry points run the walk on a worker
thread with a large stack; CPython's default main-thread stack cannot take
the recursion a ten-thousand-frame budget implies.
"""

from __future__ import annotations

import sys
import threading
from collections import ChainMap
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Mapping, TypeVar

from .errors import (
    ArityMismatch, CyclicImport, DepthExceeded, EmptyForRequired, GdolError,
    KindMismatch, ListLengthMismatch, SubstitutionError, UnknownPattern,
)
from .model import (
    Argument, BasicSpec, ConsArg, Document, EmptyArg, EmptySpec,
    ExtensionSpec, InstSpec, LetSpec, ListArg, Name, Obligation, Ontology,
    OntologyDef, Parameter, PatternDef, Spec, SymbolArg, TopDecl, UnionSpec,
    EMPTY_ONTOLOGY, canon_axiom, map_axiom, map_ontology, stratify,
    subst_axiom, substitute,
)

DEFAULT_DEPTH_BUDGET = 10000

_T = TypeVar("_T")


def run_deep(fn: Callable[[], _T], depth_budget: int = DEFAULT_DEPTH_BUDGET) -> _T:
    """Run fn on a thread with a large stack and a recursion limit sized for
    the given instantiation budget."""
    limit = depth_budget * 12 + 10000
    result: list[_T] = []
    error: list[BaseException] = []

    def work() -> None:
        old_limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, old_limit))
        try:
            result.append(fn())
        except BaseException as exc:  # re-raised on the calling thread
            error.append(exc)
        finally:
            sys.setrecursionlimit(old_limit)

    old_stack = threading.stack_size()
    threading.stack_size(512 * 1024 * 1024)
    try:
        worker = threading.Thread(target=work, name="gdol-expand")
        worker.start()
        worker.join()
    finally:
        threading.stack_size(old_stack)
    if error:
        raise error[0]
    return result[0]


# --- argument binding --------------------------------------------------------

@dataclass(frozen=True)
class Binding:
    """Result of matching arguments against a parameter list."""

    mapping: dict[str, Argument]  # param and tail names -> bound arguments
    lists: dict[str, tuple[Argument, ...]]  # full element lists per list param
    exhausted: bool  # every list parameter received an empty list


def _as_list(pattern: str, param: str, arg: Argument) -> tuple[Argument, ...]:
    match arg:
        case ListArg(items):
            return items
        case EmptyArg():
            return ()
        case ConsArg(head, tail):
            rest = _as_list(pattern, param, tail)
            return (head,) + rest
        case SymbolArg(name, _):
            raise SubstitutionError(
                f"{pattern}: parameter {param!r} needs a list, got name {name}"
            )
    raise TypeError(f"not an argument: {arg!r}")


def bind_arguments(pdef: PatternDef, args: tuple[Argument, ...]) -> Binding:
    if len(args) != len(pdef.params):
        raise ArityMismatch(pdef.name, len(pdef.params), len(args))
    mapping: dict[str, Argument] = {}
    lists: dict[str, tuple[Argument, ...]] = {}
    lengths: dict[str, int] = {}
    for param, arg in zip(pdef.params, args):
        if isinstance(arg, SymbolArg) and arg.kind is not None and arg.kind is not param.kind:
            raise KindMismatch(pdef.name, param.name, param.kind.value, arg.kind.value)
        if param.is_list:
            items = _as_list(pdef.name, param.name, arg)
            lists[param.name] = items
            lengths[param.name] = len(items)
            mapping[param.name] = items[0] if items else EmptyArg()
            assert param.list_tail is not None
            mapping[param.list_tail] = ListArg(items[1:]) if items else ListArg()
        else:
            match arg:
                case EmptyArg():
                    if not param.optional:
                        raise EmptyForRequired(pdef.name, param.name)
                    mapping[param.name] = EmptyArg()
                case SymbolArg(_, _):
                    mapping[param.name] = arg
                case _:
                    raise SubstitutionError(
                        f"{pdef.name}: parameter {param.name!r} needs a single name"
                    )
    if len(set(lengths.values())) > 1:
        detail = ", ".join(f"{k}={v}" for k, v in sorted(lengths.items()))
        raise ListLengthMismatch(pdef.name, detail)
    exhausted = bool(lengths) and all(v == 0 for v in lengths.values())
    return Binding(mapping, lists, exhausted)


# --- environment -------------------------------------------------------------

@dataclass(frozen=True)
class _Closure:
    pdef: PatternDef
    scope: Mapping[str, object]


class ExpansionEnv:
    """Shared state for expanding one set of documents."""

    def __init__(self, library: Mapping[str, TopDecl], depth_budget: int = DEFAULT_DEPTH_BUDGET):
        self.depth_budget = depth_budget
        self.diagnostics: list[str] = []
        self.library: dict[str, TopDecl] = dict(library)
        self._cache: dict[str, Ontology] = {}
        self._cache_obs: dict[str, tuple[Obligation, ...]] = {}
        self._stack: list[str] = []
        self._depth = 0
        self._sink: list[Obligation] | None = None
        self._stratified: set[str] = set()
        self._plain: set[str] = set()
        self._warned: set[str] = set()
        scope: dict[str, object] = {}
        for name, decl in self.library.items():
            scope[name] = _Closure(decl, scope) if isinstance(decl, PatternDef) else decl
        self._global_scope: Mapping[str, object] = scope

    @classmethod
    def from_documents(cls, docs: Iterable[Document], depth_budget: int = DEFAULT_DEPTH_BUDGET) -> "ExpansionEnv":
        library: dict[str, TopDecl] = {}
        for doc in docs:
            for decl in doc.decls:
                if isinstance(decl, (PatternDef, OntologyDef)):
                    if decl.name in library:
                        raise GdolError(f"duplicate definition of {decl.name!r} across documents")
                    library[decl.name] = decl
        return cls(library, depth_budget)

    # --- name stratification with collision tracking ---

    def _strat(self, n: Name) -> Name:
        if not n.args:
            self._plain.add(n.base)
            if n.base in self._stratified and n.base not in self._warned:
                self._warned.add(n.base)
                self.diagnostics.append(
                    f"stratified name {n.base!r} coincides with a plain name; the two merge"
                )
            return n
        flat = stratify(n)
        self._stratified.add(flat)
        if flat in self._plain and flat not in self._warned:
            self._warned.add(flat)
            self.diagnostics.append(
                f"stratified name {flat!r} coincides with a plain name; the two merge"
            )
        return Name(flat)

    # --- named ontologies ---

    def expand_named(self, name: str) -> Ontology:
        if name in self._cache:
            return self._cache[name]
        if name in self._stack:
            cycle = tuple(self._stack[self._stack.index(name):]) + (name,)
            raise CyclicImport(cycle)
        decl = self.library.get(name)
        if decl is None:
            raise UnknownPattern(name)
        if not isinstance(decl, OntologyDef):
            raise GdolError(f"{name!r} is a pattern; a reference must name an ontology")
        self._stack.append(name)
        outer_sink, self._sink = self._sink, []
        try:
            result = self._expand_spec(decl.spec, self._global_scope)
            for imp in decl.imports:
                result = result.union(self.expand_named(imp))
            sink = self._sink
        finally:
            self._sink = outer_sink
            self._stack.pop()
        self._cache[name] = result
        self._cache_obs[name] = self._finalize(sink, name, result)
        return result

    def obligations(self, name: str) -> tuple[Obligation, ...]:
        self.expand_named(name)
        return self._cache_obs[name]

    @staticmethod
    def _finalize(sink: list[Obligation], name: str, context: Ontology) -> tuple[Obligation, ...]:
        seen = set()
        out = []
        for ob in sink:
            if ob.axiom in seen:
                continue
            seen.add(ob.axiom)
            out.append(replace(ob, ontology=name, context=context))
        return tuple(out)

    # --- spec walking ---

    def _expand_spec(self, spec: Spec, scope: Mapping[str, object]) -> Ontology:
        match spec:
            case BasicSpec(ontology):
                return map_ontology(ontology, self._strat)
            case UnionSpec(left, right):
                return self._expand_spec(left, scope).union(self._expand_spec(right, scope))
            case ExtensionSpec(base, ext):
                return self._expand_spec(base, scope).union(self._expand_spec(ext, scope))
            case InstSpec():
                return self._expand_inst(spec, scope)
            case LetSpec(locals_, body):
                inner: dict[str, object] = {}
                chained: Mapping[str, object] = ChainMap(inner, scope)
                for p in locals_:
                    inner[p.name] = _Closure(p, chained)
                return self._expand_spec(body, chained)
            case EmptySpec():
                return EMPTY_ONTOLOGY
        raise TypeError(f"not a spec: {spec!r}")

    def _expand_inst(self, spec: InstSpec, scope: Mapping[str, object]) -> Ontology:
        target = scope.get(spec.pattern)
        if target is None:
            raise UnknownPattern(spec.pattern)
        if isinstance(target, OntologyDef):
            if spec.bracketed:
                raise GdolError(f"{spec.pattern!r} names an ontology and takes no arguments")
            return self.expand_named(spec.pattern)
        assert isinstance(target, _Closure)
        pdef = target.pdef
        self._depth += 1
        try:
            if self._depth > self.depth_budget:
                raise DepthExceeded(self.depth_budget, pdef.name)
            binding = bind_arguments(pdef, spec.args)
            if binding.exhausted:
                return EMPTY_ONTOLOGY
            self._collect_obligations(pdef, binding)
            decls = []
            for param in pdef.params:
                if param.is_list:
                    for item in binding.lists[param.name]:
                        if isinstance(item, SymbolArg):
                            decls.append((param.kind, item.name))
                else:
                    bound = binding.mapping[param.name]
                    if isinstance(bound, SymbolArg):
                        decls.append((param.kind, bound.name))
            result = map_ontology(Ontology.of(decls), self._strat)
            for imp in pdef.imports:
                result = result.union(self.expand_named(imp))
            body = substitute(pdef.body, binding.mapping)
            return result.union(self._expand_spec(body, target.scope))
        finally:
            self._depth -= 1

    # --- obligations ---

    def _collect_obligations(self, pdef: PatternDef, binding: Binding) -> None:
        if self._sink is None:
            return
        for param in pdef.params:
            if not param.constraints:
                continue
            if param.is_list:
                for i in range(len(binding.lists[param.name])):
                    # every list runs in parallel: element i of each
                    element_view = dict(binding.mapping)
                    for other, items in binding.lists.items():
                        element_view[other] = items[i]
                    self._emit_obligations(pdef.name, param, i, element_view)
            else:
                if isinstance(binding.mapping[param.name], EmptyArg):
                    continue
                self._emit_obligations(pdef.name, param, 0, binding.mapping)

    def _emit_obligations(self, pattern: str, param: Parameter, index: int,
                          view: Mapping[str, Argument]) -> None:
        assert self._sink is not None
        for constraint in param.constraints:
            ax = subst_axiom(constraint, view)
            if ax is None:
                continue
            ax = canon_axiom(map_axiom(ax, self._strat))
            self._sink.append(Obligation(ax, "", pattern, param.name, index))


# --- public entry points -----------------------------------------------------

def expand_document(doc: Document, library: Iterable[Document] = (),
                    depth_budget: int = DEFAULT_DEPTH_BUDGET) -> dict[str, Ontology]:
    """Expand every ontology declared in doc, in document order."""
    env = ExpansionEnv.from_documents([doc, *library], depth_budget)
    names = [d.name for d in doc.decls if isinstance(d, OntologyDef)]
    return run_deep(lambda: {n: env.expand_named(n) for n in names}, depth_budget)


def document_obligations(doc: Document, library: Iterable[Document] = (),
                         depth_budget: int = DEFAULT_DEPTH_BUDGET) -> tuple[Obligation, ...]:
    """Obligations for the ontologies declared in doc, in document order."""
    env = ExpansionEnv.from_documents([doc, *library], depth_budget)
    names = [d.name for d in doc.decls if isinstance(d, OntologyDef)]

    def work() -> tuple[Obligation, ...]:
        out: list[Obligation] = []
        for n in names:
            out.extend(env.obligations(n))
        return tuple(out)

    return run_deep(work, depth_budget)


def expand_spec_standalone(env: ExpansionEnv, spec: Spec) -> tuple[Ontology, tuple[Obligation, ...]]:
    """Expand a bare spec against an environment; the obligations come back
    with the expansion itself as context."""

    def work() -> tuple[Ontology, tuple[Obligation, ...]]:
        sink: list[Obligation] = []
        outer, env._sink = env._sink, sink
        try:
            result = env._expand_spec(spec, env._global_scope)
        finally:
            env._sink = outer
        return result, env._finalize(sink, "", result)

    return run_deep(work, env.depth_budget)

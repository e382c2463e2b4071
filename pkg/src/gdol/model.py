"""Core data model: names, axioms, ontologies, patterns, specs.

Everything here is an immutable value.  The three primitive operations the
rest of the compiler builds on live here too: stratification of parameterized
names, ontology union under Same-Name-Same-Thing, and simultaneous
substitution of arguments for parameter names inside a spec tree.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping, Union

from .errors import KindClash, ShadowWarning, SubstitutionError

_BAD_NAME_CHARS = set("[],;:?{}()| \t\r\n")


class SymbolKind(Enum):
    CLASS = "Class"
    OBJECT_PROPERTY = "ObjectProperty"
    DATA_PROPERTY = "DataProperty"
    INDIVIDUAL = "Individual"

    @property
    def keyword(self) -> str:
        return self.value

    @classmethod
    def from_keyword(cls, kw: str) -> "SymbolKind":
        for k in cls:
            if k.value == kw:
                return k
        raise ValueError(f"not a symbol kind: {kw!r}")


@dataclass(frozen=True)
class Name:
    """Plain identifier, or parameterized name such as performs[MotherRole]."""

    base: str
    args: tuple["Name", ...] = ()

    def __post_init__(self) -> None:
        if not self.base or (set(self.base) & _BAD_NAME_CHARS):
            raise ValueError(f"invalid identifier {self.base!r}")

    @property
    def is_plain(self) -> bool:
        return not self.args

    def __str__(self) -> str:
        if not self.args:
            return self.base
        return f"{self.base}[{', '.join(str(a) for a in self.args)}]"


def stratify(n: Name) -> str:
    """Flatten a parameterized name: brackets and commas become underscores.

    Equivalent to writing the name out and mapping '[' and ',' to '_' while
    deleting ']', which makes nested bracketings associative.
    """
    if not n.args:
        return n.base
    return n.base + "_" + "_".join(stratify(a) for a in n.args)


@dataclass(frozen=True)
class PropExpr:
    name: Name
    inverse: bool = False


# --- class expressions -------------------------------------------------

@dataclass(frozen=True)
class Named:
    name: Name


@dataclass(frozen=True)
class Some:
    prop: PropExpr
    filler: "ClassExpr"


@dataclass(frozen=True)
class Only:
    prop: PropExpr
    filler: "ClassExpr"


@dataclass(frozen=True)
class Max:
    n: int
    prop: PropExpr
    filler: "ClassExpr"


@dataclass(frozen=True)
class And:
    operands: tuple["ClassExpr", ...]


@dataclass(frozen=True)
class OneOf:
    members: tuple[Name, ...]  # enumeration order is meaningful, kept as written


ClassExpr = Union[Named, Some, Only, Max, And, OneOf]


# --- axioms ------------------------------------------------------------

@dataclass(frozen=True)
class SubClassOf:
    sub: ClassExpr
    sup: ClassExpr


@dataclass(frozen=True)
class EquivalentClasses:
    a: ClassExpr
    b: ClassExpr


@dataclass(frozen=True)
class DisjointClasses:
    a: ClassExpr
    b: ClassExpr


@dataclass(frozen=True)
class SubPropertyOf:
    sub: PropExpr
    sup: PropExpr


@dataclass(frozen=True)
class InverseProps:
    a: Name
    b: Name


@dataclass(frozen=True)
class Domain:
    prop: Name
    cls: ClassExpr


@dataclass(frozen=True)
class Range:
    prop: Name
    cls: ClassExpr


@dataclass(frozen=True)
class Functional:
    prop: Name


@dataclass(frozen=True)
class Transitive:
    prop: Name


@dataclass(frozen=True)
class SubPropertyChain:
    prop: Name
    chain: tuple[PropExpr, ...]  # length >= 2


@dataclass(frozen=True)
class ClassAssertion:
    cls: ClassExpr
    individual: Name


@dataclass(frozen=True)
class PropAssertion:
    prop: Name
    subject: Name
    obj: Name


@dataclass(frozen=True)
class DifferentIndividuals:
    members: tuple[Name, ...]  # length >= 1


Axiom = Union[
    SubClassOf, EquivalentClasses, DisjointClasses, SubPropertyOf, InverseProps,
    Domain, Range, Functional, Transitive, SubPropertyChain,
    ClassAssertion, PropAssertion, DifferentIndividuals,
]


# --- canonical ordering keys -------------------------------------------
# Keys are nested tuples led by an integer tag, so values of different
# shapes never get compared component-wise.

def name_key(n: Name):
    return (n.base, tuple(name_key(a) for a in n.args))


def prop_key(p: PropExpr):
    return (name_key(p.name), p.inverse)


def expr_key(e: ClassExpr):
    match e:
        case Named(name):
            return (0, name_key(name))
        case Some(prop, filler):
            return (1, prop_key(prop), expr_key(filler))
        case Only(prop, filler):
            return (2, prop_key(prop), expr_key(filler))
        case Max(n, prop, filler):
            return (3, n, prop_key(prop), expr_key(filler))
        case And(operands):
            return (4, tuple(expr_key(c) for c in operands))
        case OneOf(members):
            return (5, tuple(name_key(m) for m in members))
    raise TypeError(f"not a class expression: {e!r}")


def axiom_key(a: Axiom):
    match a:
        case SubClassOf(sub, sup):
            return (0, expr_key(sub), expr_key(sup))
        case EquivalentClasses(x, y):
            return (1, expr_key(x), expr_key(y))
        case DisjointClasses(x, y):
            return (2, expr_key(x), expr_key(y))
        case SubPropertyOf(sub, sup):
            return (3, prop_key(sub), prop_key(sup))
        case InverseProps(x, y):
            return (4, name_key(x), name_key(y))
        case Domain(p, c):
            return (5, name_key(p), expr_key(c))
        case Range(p, c):
            return (6, name_key(p), expr_key(c))
        case Functional(p):
            return (7, name_key(p))
        case Transitive(p):
            return (8, name_key(p))
        case SubPropertyChain(p, chain):
            return (9, name_key(p), tuple(prop_key(q) for q in chain))
        case ClassAssertion(c, i):
            return (10, expr_key(c), name_key(i))
        case PropAssertion(p, s, o):
            return (11, name_key(p), name_key(s), name_key(o))
        case DifferentIndividuals(members):
            return (12, tuple(name_key(m) for m in members))
    raise TypeError(f"not an axiom: {a!r}")


# --- canonicalization ---------------------------------------------------

def _dedupe(seq, key):
    seen = set()
    out = []
    for x in seq:
        k = key(x)
        if k not in seen:
            seen.add(k)
            out.append(x)
    return out


def canon_expr(e: ClassExpr) -> ClassExpr:
    match e:
        case Named(_):
            return e
        case Some(prop, filler):
            return Some(prop, canon_expr(filler))
        case Only(prop, filler):
            return Only(prop, canon_expr(filler))
        case Max(n, prop, filler):
            return Max(n, prop, canon_expr(filler))
        case And(operands):
            flat: list[ClassExpr] = []
            for c in operands:
                c = canon_expr(c)
                if isinstance(c, And):
                    flat.extend(c.operands)
                else:
                    flat.append(c)
            flat = _dedupe(sorted(flat, key=expr_key), expr_key)
            if len(flat) == 1:
                return flat[0]
            return And(tuple(flat))
        case OneOf(members):
            return OneOf(tuple(_dedupe(members, name_key)))
    raise TypeError(f"not a class expression: {e!r}")


def canon_axiom(a: Axiom) -> Axiom:
    match a:
        case SubClassOf(sub, sup):
            return SubClassOf(canon_expr(sub), canon_expr(sup))
        case EquivalentClasses(x, y):
            x, y = sorted((canon_expr(x), canon_expr(y)), key=expr_key)
            return EquivalentClasses(x, y)
        case DisjointClasses(x, y):
            x, y = sorted((canon_expr(x), canon_expr(y)), key=expr_key)
            return DisjointClasses(x, y)
        case Domain(p, c):
            return Domain(p, canon_expr(c))
        case Range(p, c):
            return Range(p, canon_expr(c))
        case ClassAssertion(c, i):
            return ClassAssertion(canon_expr(c), i)
        case DifferentIndividuals(members):
            return DifferentIndividuals(tuple(_dedupe(sorted(members, key=name_key), name_key)))
        case _:
            return a


# --- ontologies ----------------------------------------------------------

Decl = tuple[SymbolKind, Name]


@dataclass(frozen=True)
class Ontology:
    decls: frozenset[Decl] = frozenset()
    axioms: frozenset[Axiom] = frozenset()

    def __post_init__(self) -> None:
        kinds: dict = {}
        for kind, name in sorted(self.decls, key=lambda d: (name_key(d[1]), d[0].value)):
            prev = kinds.get(name)
            if prev is not None and prev is not kind:
                raise KindClash(str(name), (prev.value, kind.value))
            kinds[name] = kind

    @classmethod
    def of(cls, decls: Iterable[Decl] = (), axioms: Iterable[Axiom] = ()) -> "Ontology":
        return cls(frozenset(decls), frozenset(canon_axiom(a) for a in axioms))

    def union(self, other: "Ontology") -> "Ontology":
        return Ontology(self.decls | other.decls, self.axioms | other.axioms)

    def kind_of(self, name: Name) -> SymbolKind | None:
        for kind, n in self.decls:
            if n == name:
                return kind
        return None

    @property
    def is_empty(self) -> bool:
        return not self.decls and not self.axioms


EMPTY_ONTOLOGY = Ontology()


def union(a: Ontology, b: Ontology) -> Ontology:
    return a.union(b)


def union_all(parts: Iterable[Ontology]) -> Ontology:
    out = EMPTY_ONTOLOGY
    for p in parts:
        out = out.union(p)
    return out


# --- name rewriting helpers ---------------------------------------------

NameFn = Callable[[Name], Name]


def map_prop(p: PropExpr, fn: NameFn) -> PropExpr:
    return PropExpr(fn(p.name), p.inverse)


def map_expr(e: ClassExpr, fn: NameFn) -> ClassExpr:
    match e:
        case Named(name):
            return Named(fn(name))
        case Some(prop, filler):
            return Some(map_prop(prop, fn), map_expr(filler, fn))
        case Only(prop, filler):
            return Only(map_prop(prop, fn), map_expr(filler, fn))
        case Max(n, prop, filler):
            return Max(n, map_prop(prop, fn), map_expr(filler, fn))
        case And(operands):
            return And(tuple(map_expr(c, fn) for c in operands))
        case OneOf(members):
            return OneOf(tuple(fn(m) for m in members))
    raise TypeError(f"not a class expression: {e!r}")


def map_axiom(a: Axiom, fn: NameFn) -> Axiom:
    match a:
        case SubClassOf(sub, sup):
            return SubClassOf(map_expr(sub, fn), map_expr(sup, fn))
        case EquivalentClasses(x, y):
            return EquivalentClasses(map_expr(x, fn), map_expr(y, fn))
        case DisjointClasses(x, y):
            return DisjointClasses(map_expr(x, fn), map_expr(y, fn))
        case SubPropertyOf(sub, sup):
            return SubPropertyOf(map_prop(sub, fn), map_prop(sup, fn))
        case InverseProps(x, y):
            return InverseProps(fn(x), fn(y))
        case Domain(p, c):
            return Domain(fn(p), map_expr(c, fn))
        case Range(p, c):
            return Range(fn(p), map_expr(c, fn))
        case Functional(p):
            return Functional(fn(p))
        case Transitive(p):
            return Transitive(fn(p))
        case SubPropertyChain(p, chain):
            return SubPropertyChain(fn(p), tuple(map_prop(q, fn) for q in chain))
        case ClassAssertion(c, i):
            return ClassAssertion(map_expr(c, fn), fn(i))
        case PropAssertion(p, s, o):
            return PropAssertion(fn(p), fn(s), fn(o))
        case DifferentIndividuals(members):
            return DifferentIndividuals(tuple(fn(m) for m in members))
    raise TypeError(f"not an axiom: {a!r}")


def map_ontology(o: Ontology, fn: NameFn) -> Ontology:
    return Ontology.of(
        ((kind, fn(name)) for kind, name in o.decls),
        (map_axiom(a, fn) for a in o.axioms),
    )


def axiom_names(a: Axiom) -> set[Name]:
    found: set[Name] = set()

    def collect(n: Name) -> Name:
        found.add(n)
        return n

    map_axiom(a, collect)
    return found


# --- arguments ------------------------------------------------------------

@dataclass(frozen=True)
class SymbolArg:
    name: Name
    kind: SymbolKind | None = None  # set when the source annotates the argument


@dataclass(frozen=True)
class ListArg:
    items: tuple["Argument", ...] = ()


@dataclass(frozen=True)
class EmptyArg:
    pass


@dataclass(frozen=True)
class ConsArg:
    """Head :: tail written in argument position; collapses to ListArg once
    the tail is known."""

    head: "Argument"
    tail: "Argument"


Argument = Union[SymbolArg, ListArg, EmptyArg, ConsArg]


# --- parameters, specs, declarations --------------------------------------

@dataclass(frozen=True)
class Parameter:
    kind: SymbolKind
    name: str
    optional: bool = False
    list_tail: str | None = None  # tail identifier for head::tail parameters
    constraints: tuple[Axiom, ...] = ()

    @property
    def is_list(self) -> bool:
        return self.list_tail is not None


@dataclass(frozen=True)
class BasicSpec:
    ontology: Ontology


@dataclass(frozen=True)
class UnionSpec:
    left: "Spec"
    right: "Spec"


@dataclass(frozen=True)
class ExtensionSpec:
    base: "Spec"
    ext: "Spec"


@dataclass(frozen=True)
class InstSpec:
    pattern: str
    args: tuple[Argument, ...] = ()
    bracketed: bool = True  # False for a bare reference to a named ontology/pattern
    loc: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class LetSpec:
    locals: tuple["PatternDef", ...]
    body: "Spec"


@dataclass(frozen=True)
class EmptySpec:
    pass


Spec = Union[BasicSpec, UnionSpec, ExtensionSpec, InstSpec, LetSpec, EmptySpec]


@dataclass(frozen=True)
class PatternDef:
    name: str
    params: tuple[Parameter, ...]
    body: Spec
    imports: tuple[str, ...] = ()


@dataclass(frozen=True)
class OntologyDef:
    name: str
    spec: Spec
    imports: tuple[str, ...] = ()


@dataclass(frozen=True)
class RefinementDef:
    name: str
    source: Spec
    target: Spec
    symbol_map: tuple[tuple[Name, Name], ...] = ()


TopDecl = Union[PatternDef, OntologyDef, RefinementDef]


@dataclass(frozen=True)
class Document:
    decls: tuple[TopDecl, ...] = ()

    def pattern_defs(self) -> dict[str, PatternDef]:
        return {d.name: d for d in self.decls if isinstance(d, PatternDef)}

    def ontology_defs(self) -> dict[str, OntologyDef]:
        return {d.name: d for d in self.decls if isinstance(d, OntologyDef)}

    def refinement_defs(self) -> dict[str, RefinementDef]:
        return {d.name: d for d in self.decls if isinstance(d, RefinementDef)}


@dataclass(frozen=True)
class Obligation:
    """One verification condition: axiom must hold in the context theory."""

    axiom: Axiom
    ontology: str  # named ontology whose expansion produced it
    pattern: str  # instantiated pattern the constraint came from
    param: str  # constrained parameter
    index: int = 0  # element index for list parameters
    context: Ontology = EMPTY_ONTOLOGY
    status: str = "unproven"
    diagnostic: str = ""


# --- substitution ----------------------------------------------------------

class _MentionsEmpty(Exception):
    """Internal signal: the value under substitution mentions an empty-bound
    parameter.  Never escapes this module."""


def _subst_name(n: Name, binding: Mapping[str, Argument]) -> Name:
    new_args = tuple(_subst_name(a, binding) for a in n.args)
    bound = binding.get(n.base)
    if bound is None:
        return Name(n.base, new_args) if n.args else n
    match bound:
        case SymbolArg(name=repl):
            # a parameterized replacement keeps its own arguments in front
            return Name(repl.base, repl.args + new_args)
        case EmptyArg():
            raise _MentionsEmpty
        case ListArg(_) | ConsArg(_, _):
            raise SubstitutionError(
                f"list argument bound to {n.base!r} used where a single name is expected"
            )
    raise TypeError(f"not an argument: {bound!r}")


def _subst_members(members: tuple[Name, ...], binding: Mapping[str, Argument]) -> tuple[Name, ...]:
    """Individual-enumeration positions: a name bound to a list splices its
    elements in place (Fig-11 style `{v0, vs}`)."""
    out: list[Name] = []
    for m in members:
        bound = binding.get(m.base) if m.is_plain else None
        if isinstance(bound, ListArg):
            for item in bound.items:
                match item:
                    case SymbolArg(name=nm):
                        out.append(nm)
                    case EmptyArg():
                        raise _MentionsEmpty
                    case _:
                        raise SubstitutionError("nested list in individual enumeration")
        else:
            out.append(_subst_name(m, binding))
    return tuple(out)


def _subst_prop(p: PropExpr, binding: Mapping[str, Argument]) -> PropExpr:
    return PropExpr(_subst_name(p.name, binding), p.inverse)


def _subst_expr(e: ClassExpr, binding: Mapping[str, Argument]) -> ClassExpr:
    match e:
        case Named(name):
            return Named(_subst_name(name, binding))
        case Some(prop, filler):
            return Some(_subst_prop(prop, binding), _subst_expr(filler, binding))
        case Only(prop, filler):
            return Only(_subst_prop(prop, binding), _subst_expr(filler, binding))
        case Max(n, prop, filler):
            return Max(n, _subst_prop(prop, binding), _subst_expr(filler, binding))
        case And(operands):
            return And(tuple(_subst_expr(c, binding) for c in operands))
        case OneOf(members):
            return OneOf(_subst_members(members, binding))
    raise TypeError(f"not a class expression: {e!r}")


def subst_axiom(a: Axiom, binding: Mapping[str, Argument]) -> Axiom | None:
    """Substitute into one axiom; None when it mentions an empty-bound name
    and is therefore deleted."""
    try:
        match a:
            case SubClassOf(sub, sup):
                return SubClassOf(_subst_expr(sub, binding), _subst_expr(sup, binding))
            case EquivalentClasses(x, y):
                return EquivalentClasses(_subst_expr(x, binding), _subst_expr(y, binding))
            case DisjointClasses(x, y):
                return DisjointClasses(_subst_expr(x, binding), _subst_expr(y, binding))
            case SubPropertyOf(sub, sup):
                return SubPropertyOf(_subst_prop(sub, binding), _subst_prop(sup, binding))
            case InverseProps(x, y):
                return InverseProps(_subst_name(x, binding), _subst_name(y, binding))
            case Domain(p, c):
                return Domain(_subst_name(p, binding), _subst_expr(c, binding))
            case Range(p, c):
                return Range(_subst_name(p, binding), _subst_expr(c, binding))
            case Functional(p):
                return Functional(_subst_name(p, binding))
            case Transitive(p):
                return Transitive(_subst_name(p, binding))
            case SubPropertyChain(p, chain):
                return SubPropertyChain(
                    _subst_name(p, binding),
                    tuple(_subst_prop(q, binding) for q in chain),
                )
            case ClassAssertion(c, i):
                return ClassAssertion(_subst_expr(c, binding), _subst_name(i, binding))
            case PropAssertion(p, s, o):
                return PropAssertion(
                    _subst_name(p, binding), _subst_name(s, binding), _subst_name(o, binding)
                )
            case DifferentIndividuals(members):
                return DifferentIndividuals(_subst_members(members, binding))
    except _MentionsEmpty:
        return None
    raise TypeError(f"not an axiom: {a!r}")


def subst_argument(arg: Argument, binding: Mapping[str, Argument]) -> Argument:
    """Substitute inside an instantiation argument.  Raises _MentionsEmpty
    internally when the argument mentions an empty-bound name; callers inside
    this module turn that into the whole-instantiation elision rule."""
    match arg:
        case SymbolArg(name=n, kind=k):
            if n.is_plain and n.base in binding:
                bound = binding[n.base]
                if isinstance(bound, EmptyArg):
                    raise _MentionsEmpty
                return bound
            return SymbolArg(_subst_name(n, binding), k)
        case ListArg(items):
            out: list[Argument] = []
            for item in items:
                sub = subst_argument(item, binding)
                if isinstance(sub, ListArg):
                    out.extend(sub.items)
                else:
                    out.append(sub)
            return ListArg(tuple(out))
        case EmptyArg():
            return arg
        case ConsArg(head, tail):
            new_head = subst_argument(head, binding)
            new_tail = subst_argument(tail, binding)
            if isinstance(new_tail, ListArg):
                return ListArg((new_head,) + new_tail.items)
            if isinstance(new_tail, EmptyArg):
                return ListArg((new_head,))
            return ConsArg(new_head, new_tail)
    raise TypeError(f"not an argument: {arg!r}")


def _subst_ontology(o: Ontology, binding: Mapping[str, Argument]) -> Ontology:
    decls: list[Decl] = []
    for kind, name in o.decls:
        try:
            decls.append((kind, _subst_name(name, binding)))
        except _MentionsEmpty:
            continue
    axioms = [b for a in o.axioms if (b := subst_axiom(a, binding)) is not None]
    return Ontology.of(decls, axioms)


def _subst_pattern_def(p: PatternDef, binding: Mapping[str, Argument]) -> PatternDef:
    own = {q.name for q in p.params} | {q.list_tail for q in p.params if q.list_tail}
    shadowed = own & set(binding)
    if shadowed:
        warnings.warn(
            f"parameters {sorted(shadowed)} of local pattern {p.name!r} shadow outer bindings",
            ShadowWarning,
            stacklevel=4,
        )
    inner = {k: v for k, v in binding.items() if k not in own}
    params = []
    for q in p.params:
        kept = [c for c in (subst_axiom(a, inner) for a in q.constraints) if c is not None]
        params.append(Parameter(q.kind, q.name, q.optional, q.list_tail, tuple(kept)))
    return PatternDef(p.name, tuple(params), substitute(p.body, inner), p.imports)


def substitute(spec: Spec, binding: Mapping[str, Argument]) -> Spec:
    """Simultaneously replace bound parameter names throughout a spec tree.

    Applies the elision rules for empty bindings on the way: basic axioms
    mentioning an empty-bound name are deleted, and instantiations whose
    arguments mention one collapse to the empty spec.
    """
    if not binding:
        return spec
    match spec:
        case BasicSpec(ontology):
            return BasicSpec(_subst_ontology(ontology, binding))
        case UnionSpec(left, right):
            return UnionSpec(substitute(left, binding), substitute(right, binding))
        case ExtensionSpec(base, ext):
            return ExtensionSpec(substitute(base, binding), substitute(ext, binding))
        case InstSpec(pattern, args, bracketed, loc):
            try:
                new_args = tuple(subst_argument(a, binding) for a in args)
            except _MentionsEmpty:
                return EmptySpec()
            return InstSpec(pattern, new_args, bracketed, loc)
        case LetSpec(locals_, body):
            return LetSpec(
                tuple(_subst_pattern_def(p, binding) for p in locals_),
                substitute(body, binding),
            )
        case EmptySpec():
            return spec
    raise TypeError(f"not a spec: {spec!r}")

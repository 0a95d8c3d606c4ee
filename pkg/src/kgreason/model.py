"""Core domain types: symbols, facts, rules, the knowledge graph, provenance."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class KgError(Exception):
    """Base class for all kgreason errors."""


class InvalidName(KgError):
    pass


class UnknownPredicate(KgError):
    pass


class KindConflict(KgError):
    pass


class ParseError(KgError):
    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class RangeRestrictionError(KgError):
    pass


class ResourceLimit(KgError):
    pass


class UnknownFact(KgError):
    pass


class DuplicateNamespace(KgError):
    pass


class UnresolvedClass(KgError):
    pass


class AlreadyExists(KgError):
    pass


class StaleClosure(KgError):
    pass


_FORBIDDEN_CHARS = (":", "\t", "\n", "\r")


def _check_name(part, what):
    if not part:
        raise InvalidName(f"{what} must be non-empty")
    for ch in _FORBIDDEN_CHARS:
        if ch in part:
            raise InvalidName(f"{what} {part!r} contains forbidden character {ch!r}")
    if part != part.strip():
        raise InvalidName(f"{what} {part!r} has leading or trailing whitespace")


class Symbol:
    """Interned (namespace, local) identifier. Equality and hash are identity."""

    __slots__ = ("namespace", "local")
    _registry: dict[tuple[str, str], "Symbol"] = {}

    def __new__(cls, namespace, local):
        key = (namespace, local)
        sym = cls._registry.get(key)
        if sym is None:
            _check_name(namespace, "namespace")
            _check_name(local, "local name")
            sym = object.__new__(cls)
            object.__setattr__(sym, "namespace", namespace)
            object.__setattr__(sym, "local", local)
            cls._registry[key] = sym
        return sym

    def __setattr__(self, name, value):
        raise AttributeError("Symbol is immutable")

    def __str__(self):
        return f"{self.namespace}:{self.local}"

    def __repr__(self):
        return f"Symbol({self.namespace!r}, {self.local!r})"

    def __lt__(self, other):
        return (self.namespace, self.local) < (other.namespace, other.local)

    def __reduce__(self):
        return (Symbol, (self.namespace, self.local))


def intern_symbol(namespace, local):
    """Return the canonical Symbol for (namespace, local).

    Raises InvalidName on empty parts or parts containing ':', tab, newline,
    or leading/trailing whitespace.
    """
    return Symbol(namespace, local)


#: The closed core predicate vocabulary; user predicates may extend it.
CORE_PREDICATES = ("subClassOf", "isinstanceOf", "propertyOf", "subPropertyOf", "inverseOf")


class NodeKind(enum.Enum):
    CLASS = "Class"
    PROPERTY = "Property"
    INSTANCE = "Instance"


# Kind forced on (subject, object) per core predicate.  propertyOf's object
# may be a class or an instance, so that position registers no kind.
KIND_POLICY: dict[str, tuple[NodeKind | None, NodeKind | None]] = {
    "subClassOf": (NodeKind.CLASS, NodeKind.CLASS),
    "isinstanceOf": (NodeKind.INSTANCE, NodeKind.CLASS),
    "propertyOf": (NodeKind.PROPERTY, None),
    "subPropertyOf": (NodeKind.PROPERTY, NodeKind.PROPERTY),
    "inverseOf": (NodeKind.PROPERTY, NodeKind.PROPERTY),
}


@dataclass(frozen=True, slots=True)
class Fact:
    predicate: str
    subject: Symbol
    object: Symbol

    def __str__(self):
        return f"{self.predicate}({self.subject}, {self.object})"


@dataclass(frozen=True, slots=True)
class Variable:
    name: str


@dataclass(frozen=True, slots=True)
class Constant:
    symbol: Symbol


Term = Variable | Constant


@dataclass(frozen=True, slots=True)
class Atom:
    predicate: str
    subject: Term
    object: Term

    def variables(self):
        out = []
        for t in (self.subject, self.object):
            if isinstance(t, Variable):
                out.append(t.name)
        return out

    def is_ground(self):
        return isinstance(self.subject, Constant) and isinstance(self.object, Constant)

    def to_fact(self):
        if not self.is_ground():
            raise ValueError(f"atom {self} is not ground")
        return Fact(self.predicate, self.subject.symbol, self.object.symbol)

    def __str__(self):
        def t(term):
            return term.name if isinstance(term, Variable) else str(term.symbol)

        return f"{self.predicate}({t(self.subject)}, {t(self.object)})"


@dataclass(frozen=True)
class Rule:
    id: str
    head: Atom
    body: tuple[Atom, ...]

    def __post_init__(self):
        if not self.body:
            raise RangeRestrictionError(f"rule {self.id!r} has an empty body")
        body_vars = set()
        for atom in self.body:
            body_vars.update(atom.variables())
        unbound = [v for v in self.head.variables() if v not in body_vars]
        if unbound:
            raise RangeRestrictionError(
                f"rule {self.id!r}: head variable(s) {', '.join(unbound)} not bound in body"
            )

    def __str__(self):
        return f"{self.id}: {self.head} :- {', '.join(str(a) for a in self.body)}."


@dataclass(frozen=True)
class Derivation:
    fact: Fact
    rule_id: str
    premises: tuple[Fact, ...]


class KnowledgeGraph:
    """Base facts + derived closure, with per-predicate/argument indexes,
    a node-kind registry and derivation provenance."""

    def __init__(self, predicates=()):
        self.base: dict[Fact, None] = {}
        self.derived: dict[Fact, None] = {}
        # Every symbol occurring in any fact has an entry; value is None when
        # no position has forced a kind yet.
        self.nodes: dict[Symbol, NodeKind | None] = {}
        self.derivations: dict[Fact, list[Derivation]] = {}
        self.predicates: set[str] = set(CORE_PREDICATES)
        self.predicates.update(predicates)
        self._by_pred: dict[str, list[Fact]] = {}
        self._by_subject: dict[tuple[str, Symbol], list[Fact]] = {}
        self._by_object: dict[tuple[str, Symbol], list[Fact]] = {}

    # -- node kinds ---------------------------------------------------------

    def declare_predicate(self, name):
        _check_name(name, "predicate name")
        self.predicates.add(name)

    def register_node(self, symbol, kind=None):
        current = self.nodes.get(symbol)
        if symbol not in self.nodes:
            self.nodes[symbol] = kind
        elif kind is not None:
            if current is None:
                self.nodes[symbol] = kind
            elif current is not kind:
                raise KindConflict(
                    f"{symbol} is already a {current.value} node, cannot become {kind.value}"
                )

    def kind_of(self, symbol):
        return self.nodes.get(symbol)

    # -- facts --------------------------------------------------------------

    def __contains__(self, fact):
        return fact in self.base or fact in self.derived

    def __len__(self):
        return len(self.base) + len(self.derived)

    def facts(self):
        yield from self.base
        yield from self.derived

    def facts_by_predicate(self, predicate):
        return self._by_pred.get(predicate, ())

    def facts_by_subject(self, predicate, subject):
        return self._by_subject.get((predicate, subject), ())

    def facts_by_object(self, predicate, obj):
        return self._by_object.get((predicate, obj), ())

    def insert_fact(self, fact, origin="base", derivation=None):
        """Insert a fact; returns True iff it was not already present.

        origin is "base" or "derived"; a derived insert must carry its
        Derivation.  Registers node kinds per KIND_POLICY and raises
        KindConflict when a symbol would get two kinds.  A fact asserted as
        base stays in base even if later re-derived.
        """
        if origin not in ("base", "derived"):
            raise ValueError(f"origin must be 'base' or 'derived', got {origin!r}")
        if origin == "derived" and derivation is None:
            raise ValueError("derived facts must carry a derivation")
        if fact.predicate not in self.predicates:
            raise UnknownPredicate(f"predicate {fact.predicate!r} is not declared")

        skind, okind = KIND_POLICY.get(fact.predicate, (None, None))
        self.register_node(fact.subject, skind)
        self.register_node(fact.object, okind)

        if fact in self.base:
            return False
        if fact in self.derived:
            if origin == "base":
                # promoted: an asserted fact lives in base only
                del self.derived[fact]
                self.base[fact] = None
            elif derivation is not None:
                recorded = self.derivations.setdefault(fact, [])
                if derivation not in recorded:
                    recorded.append(derivation)
            return False

        if origin == "base":
            self.base[fact] = None
        else:
            self.derived[fact] = None
            self.derivations.setdefault(fact, []).append(derivation)
        self._by_pred.setdefault(fact.predicate, []).append(fact)
        self._by_subject.setdefault((fact.predicate, fact.subject), []).append(fact)
        self._by_object.setdefault((fact.predicate, fact.object), []).append(fact)
        return True

    # -- debugging ----------------------------------------------------------

    def check_indexes(self):
        """Rebuild the indexes from base ∪ derived and compare (debug assertion)."""
        by_pred, by_subj, by_obj = {}, {}, {}
        for fact in self.facts():
            by_pred.setdefault(fact.predicate, []).append(fact)
            by_subj.setdefault((fact.predicate, fact.subject), []).append(fact)
            by_obj.setdefault((fact.predicate, fact.object), []).append(fact)
        assert {k: set(v) for k, v in by_pred.items()} == {
            k: set(v) for k, v in self._by_pred.items() if v
        }
        assert {k: set(v) for k, v in by_subj.items()} == {
            k: set(v) for k, v in self._by_subject.items() if v
        }
        assert {k: set(v) for k, v in by_obj.items()} == {
            k: set(v) for k, v in self._by_object.items() if v
        }
        for fact in self.facts():
            assert fact.subject in self.nodes and fact.object in self.nodes

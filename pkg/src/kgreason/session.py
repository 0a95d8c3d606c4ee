"""Session layer: mediates between assertions/queries and the graph.

A Session owns a KnowledgeGraph and a rule set, tracks whether the closure
is up to date, resolves class names across loaded namespaces, and answers
queries with provenance.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import engine
from .model import (
    AlreadyExists,
    DuplicateNamespace,
    Fact,
    KnowledgeGraph,
    NodeKind,
    StaleClosure,
    UnresolvedClass,
    intern_symbol,
)
from .parser import parse_rules, serialize_fact

# The four propagation axioms plus subClassOf transitivity.  Transitivity is
# a fifth, data-level rule: instance/property propagation through a class
# chain needs the chain itself closed.  Replaceable via SessionConfig.rules.
DEFAULT_RULES_TEXT = """\
propagate-class-instance-to-superclass: isinstanceOf(X,Z) :- isinstanceOf(X,Y), subClassOf(Y,Z).
propagate-class-property-to-instance: propertyOf(Z,X) :- isinstanceOf(X,Y), propertyOf(Z,Y).
propagate-subproperty-to-class: propertyOf(X,Z) :- subPropertyOf(X,Y), propertyOf(Y,Z).
propagate-inverse-to-class: propertyOf(X,Z) :- inverseOf(X,Y), propertyOf(Y,Z).
subclass-transitivity: subClassOf(X,Z) :- subClassOf(X,Y), subClassOf(Y,Z).
"""


def default_rules():
    return parse_rules(DEFAULT_RULES_TEXT)


@dataclass
class SessionConfig:
    auto_infer: bool = False
    fallback_new_class: bool = False
    instance_namespace: str = "user"
    max_derived: int = engine.DEFAULT_MAX_DERIVED


@dataclass
class LoadReport:
    namespace: str
    fact_count: int
    class_count: int
    property_count: int
    instance_count: int


class Session:
    def __init__(self, rules=None, config=None):
        self.config = config or SessionConfig()
        self.rules = list(rules) if rules is not None else default_rules()
        self.graph = KnowledgeGraph()
        self.closed = False
        self.loaded_namespaces: set[str] = set()
        self._last_closure = None

    # -- loading ------------------------------------------------------------

    def load_facts(self, fact_file, namespace, declared_predicates=()):
        """Insert all facts of a parsed FactFile as base facts under the
        given namespace label; returns a LoadReport."""
        if namespace in self.loaded_namespaces:
            raise DuplicateNamespace(f"namespace {namespace!r} is already loaded")
        for name in declared_predicates:
            self.graph.declare_predicate(name)
        for _, fact in fact_file.entries:
            self.graph.insert_fact(fact, origin="base")
        self.loaded_namespaces.add(namespace)
        self.closed = False
        counts = {NodeKind.CLASS: 0, NodeKind.PROPERTY: 0, NodeKind.INSTANCE: 0}
        for symbol, kind in self.graph.nodes.items():
            if symbol.namespace == namespace and kind is not None:
                counts[kind] += 1
        return LoadReport(
            namespace=namespace,
            fact_count=len(fact_file.entries),
            class_count=counts[NodeKind.CLASS],
            property_count=counts[NodeKind.PROPERTY],
            instance_count=counts[NodeKind.INSTANCE],
        )

    def load_bundled(self, name):
        from .datasets import bundled

        bundle = bundled(name)
        return self.load_facts(
            bundle.fact_file(), bundle.namespace, bundle.declared_predicates
        )

    # -- assertions ----------------------------------------------------------

    def resolve_class(self, local_name):
        """All Class symbols whose local name matches case-insensitively,
        across every loaded namespace; sorted, possibly empty."""
        wanted = local_name.casefold()
        return sorted(
            sym
            for sym, kind in self.graph.nodes.items()
            if kind is NodeKind.CLASS and sym.local.casefold() == wanted
        )

    def assert_instance(self, instance_name, class_local_name):
        """Assert isinstanceOf(user:instance, C) for every class C resolving
        to class_local_name.  With the fallback enabled, an unresolvable name
        becomes a new class in the instance namespace first."""
        classes = self.resolve_class(class_local_name)
        if not classes:
            if not self.config.fallback_new_class:
                raise UnresolvedClass(
                    f"no loaded class matches {class_local_name!r}"
                    " (fallback to a new class is disabled)"
                )
            classes = [self.assert_new_class(class_local_name, self.config.instance_namespace)]
        instance = intern_symbol(self.config.instance_namespace, instance_name)
        asserted = []
        for cls in classes:
            fact = Fact("isinstanceOf", instance, cls)
            self.graph.insert_fact(fact, origin="base")
            asserted.append(fact)
        self.closed = False
        return asserted

    def assert_new_class(self, class_name, namespace):
        """Register a new Class node with no edges; returns its Symbol."""
        symbol = intern_symbol(namespace, class_name)
        if self.graph.kind_of(symbol) is not None:
            raise AlreadyExists(f"{symbol} already exists as {self.graph.kind_of(symbol).value}")
        self.graph.register_node(symbol, NodeKind.CLASS)
        self.closed = False
        return symbol

    # -- inference and queries ------------------------------------------------

    def infer(self):
        """Compute the deductive closure of the current base under the rules."""
        result = engine.seminaive_close(
            list(self.graph.base), self.rules, max_derived=self.config.max_derived
        )
        # carry over nodes that exist without facts (assert_new_class)
        for symbol, kind in self.graph.nodes.items():
            result.graph.register_node(symbol, kind)
        for name in self.graph.predicates:
            result.graph.declare_predicate(name)
        self.graph = result.graph
        self.closed = True
        self._last_closure = result
        return result

    def _require_closed(self):
        if not self.closed:
            if self.config.auto_infer:
                self.infer()
            else:
                raise StaleClosure("the session changed since the last infer()")

    def ask(self, query):
        """Ground query -> bool; query with variables -> sorted substitutions."""
        self._require_closed()
        if query.is_ground():
            return query.to_fact() in self.graph
        results = list(engine.match_atom(query, self.graph))
        results.sort(key=lambda subst: tuple(str(subst[v]) for v in sorted(subst)))
        return results

    def explain(self, fact, show_all=False):
        self._require_closed()
        return engine.explain(self.graph, fact, show_all=show_all)

    # -- reporting -------------------------------------------------------------

    def dump_log(self):
        """Deterministic text report: node listings by kind, base facts by
        predicate, then derived facts grouped by rule id with their first
        derivation's premises."""
        self._require_closed()
        lines = []
        for kind in (NodeKind.CLASS, NodeKind.PROPERTY, NodeKind.INSTANCE):
            lines.append(f"== {kind.value} nodes ==")
            lines.extend(
                str(sym) for sym in sorted(s for s, k in self.graph.nodes.items() if k is kind)
            )
        unkinded = sorted(s for s, k in self.graph.nodes.items() if k is None)
        if unkinded:
            lines.append("== Unclassified nodes ==")
            lines.extend(str(sym) for sym in unkinded)

        by_pred = {}
        for fact in self.graph.base:
            by_pred.setdefault(fact.predicate, []).append(fact)
        for pred in sorted(by_pred):
            lines.append(f"== Base facts: {pred} ==")
            lines.extend(serialize_fact(f) for f in sorted(by_pred[pred], key=_fact_key))

        by_rule = {}
        for fact in self.graph.derived:
            derivation = self.graph.derivations[fact][0]
            by_rule.setdefault(derivation.rule_id, []).append((fact, derivation))
        for rule in self.rules:
            group = by_rule.pop(rule.id, None)
            lines.append(f"== Derived by {rule.id} ==")
            if group:
                lines.extend(_derived_line(f, d) for f, d in sorted(group, key=lambda p: _fact_key(p[0])))
        for rule_id in sorted(by_rule):  # rules no longer in the active set
            lines.append(f"== Derived by {rule_id} ==")
            lines.extend(
                _derived_line(f, d) for f, d in sorted(by_rule[rule_id], key=lambda p: _fact_key(p[0]))
            )
        return "\n".join(lines) + "\n"


def _fact_key(fact):
    return (fact.predicate, str(fact.subject), str(fact.object))


def _derived_line(fact, derivation):
    premises = ", ".join(str(p) for p in derivation.premises)
    return f"{serialize_fact(fact)}\t<= {premises}"

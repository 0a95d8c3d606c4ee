"""Forward-chaining closure: a naive reference evaluator (the oracle) and a
semi-naive fixpoint evaluator with derivation provenance.

``seminaive_close`` delegates to a vectorized kernel (see ``_fastpath``)
whenever every rule is a two-atom join over variables; anything else (or
``force_generic=True``) runs the generic substitution-based evaluator.  Both
compute the same least fixpoint as ``naive_close``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    Atom,
    Constant,
    Derivation,
    Fact,
    KnowledgeGraph,
    ResourceLimit,
    Rule,
    UnknownFact,
    Variable,
)

DEFAULT_MAX_DERIVED = 10_000_000

Substitution = dict[str, "object"]  # variable name -> Symbol


@dataclass
class ClosureResult:
    graph: KnowledgeGraph
    iterations: int
    derived_count: int


def _resolve(term, subst):
    if isinstance(term, Constant):
        return term.symbol
    return subst.get(term.name)


def _ground_atom(atom, subst):
    s = _resolve(atom.subject, subst)
    o = _resolve(atom.object, subst)
    if s is None or o is None:
        raise ValueError(f"atom {atom} not fully bound by {subst}")
    return Fact(atom.predicate, s, o)


def _match_atom_facts(atom, graph, partial):
    """Yield (substitution, fact) pairs grounding `atom` in the graph."""
    s = _resolve(atom.subject, partial)
    o = _resolve(atom.object, partial)
    if s is not None and o is not None:
        fact = Fact(atom.predicate, s, o)
        if fact in graph:
            yield dict(partial), fact
        return
    if s is not None:
        candidates = graph.facts_by_subject(atom.predicate, s)
    elif o is not None:
        candidates = graph.facts_by_object(atom.predicate, o)
    else:
        candidates = graph.facts_by_predicate(atom.predicate)
    same_var = (
        isinstance(atom.subject, Variable)
        and isinstance(atom.object, Variable)
        and atom.subject.name == atom.object.name
    )
    for fact in candidates:
        if same_var and fact.subject is not fact.object:
            continue
        if s is not None and fact.subject is not s:
            continue
        if o is not None and fact.object is not o:
            continue
        ext = dict(partial)
        if isinstance(atom.subject, Variable):
            ext[atom.subject.name] = fact.subject
        if isinstance(atom.object, Variable):
            ext[atom.object.name] = fact.object
        yield ext, fact


def match_atom(atom, graph, partial=None):
    """Yield every extension of `partial` that grounds `atom` to a stored fact."""
    for subst, _ in _match_atom_facts(atom, graph, partial or {}):
        yield subst


def _match_body(body, graph, partial=None):
    """Yield (substitution, premise facts) for full body matches."""

    def rec(i, subst, premises):
        if i == len(body):
            yield subst, tuple(premises)
            return
        for ext, fact in _match_atom_facts(body[i], graph, subst):
            premises.append(fact)
            yield from rec(i + 1, ext, premises)
            premises.pop()

    yield from rec(0, partial or {}, [])


def _fresh_graph(base, rules):
    preds = {f.predicate for f in base}
    for rule in rules:
        preds.add(rule.head.predicate)
        preds.update(a.predicate for a in rule.body)
    graph = KnowledgeGraph(predicates=preds)
    for fact in base:
        graph.insert_fact(fact, origin="base")
    return graph


def naive_close(base, rules, max_derived=DEFAULT_MAX_DERIVED):
    """Reference least-fixpoint evaluation: re-derive everything every round.

    The testing oracle; clarity over speed.  Does not record derivations.
    """
    graph = _fresh_graph(base, rules)
    iterations = 0
    derived_count = 0
    while True:
        iterations += 1
        new = []
        for rule in rules:
            for subst, premises in _match_body(rule.body, graph):
                fact = _ground_atom(rule.head, subst)
                if fact not in graph:
                    new.append((fact, Derivation(fact, rule.id, premises)))
        added = 0
        for fact, derivation in new:
            if graph.insert_fact(fact, origin="derived", derivation=derivation):
                added += 1
        derived_count += added
        if derived_count > max_derived:
            raise ResourceLimit(f"derived more than {max_derived} facts")
        if added == 0:
            return ClosureResult(graph, iterations, derived_count)


def _eligible_for_fastpath(rules):
    for rule in rules:
        if len(rule.body) != 2:
            return False
        a, b = rule.body
        terms = (a.subject, a.object, b.subject, b.object)
        if not all(isinstance(t, Variable) for t in terms):
            return False
        va = {a.subject.name, a.object.name}
        vb = {b.subject.name, b.object.name}
        if len(va) != 2 or len(vb) != 2:
            return False
        if len(va & vb) != 1 or len(va | vb) != 3:
            return False
        hv = rule.head.variables()
        if len(hv) != 2 or hv[0] == hv[1] or not set(hv) <= (va | vb):
            return False
        if not (
            isinstance(rule.head.subject, Variable) and isinstance(rule.head.object, Variable)
        ):
            return False
    return True


def seminaive_close(
    base,
    rules,
    max_derived=DEFAULT_MAX_DERIVED,
    force_generic=False,
    record_all_derivations=False,
):
    """Semi-naive least fixpoint: each round joins rule bodies against the
    previous round's delta only.  Every newly derived fact records a
    Derivation; with ``record_all_derivations`` the generic evaluator keeps
    every distinct derivation of a fact, not just the first.
    """
    rules = list(rules)
    base = list(base)
    if not force_generic and not record_all_derivations and _eligible_for_fastpath(rules):
        from . import _fastpath

        if _fastpath.available():
            result = _fastpath.close(base, rules, max_derived, _fresh_graph)
            if result is not None:
                return result
    return _generic_seminaive(base, rules, max_derived, record_all_derivations)


def _generic_seminaive(base, rules, max_derived, record_all_derivations):
    graph = _fresh_graph(base, rules)
    delta = list(graph.base)
    iterations = 0
    derived_count = 0
    while delta:
        iterations += 1
        delta_set = set(delta)
        delta_by_pred = {}
        for fact in delta:
            delta_by_pred.setdefault(fact.predicate, []).append(fact)
        new = []
        for rule in rules:
            for i, delta_atom in enumerate(rule.body):
                for dfact in delta_by_pred.get(delta_atom.predicate, ()):
                    start = _unify_with_fact(delta_atom, dfact)
                    if start is None:
                        continue
                    rest = rule.body[:i] + rule.body[i + 1 :]
                    for subst, premises in _match_body(rest, graph, start):
                        # atoms before the delta position must match older
                        # facts, so each instantiation fires exactly once
                        if any(p in delta_set for p in premises[:i]):
                            continue
                        ordered = premises[:i] + (dfact,) + premises[i:]
                        fact = _ground_atom(rule.head, subst)
                        if fact in graph.base:
                            continue
                        new.append((fact, Derivation(fact, rule.id, ordered)))
        delta = []
        for fact, derivation in new:
            if fact in graph:
                if record_all_derivations:
                    graph.insert_fact(fact, origin="derived", derivation=derivation)
                continue
            graph.insert_fact(fact, origin="derived", derivation=derivation)
            delta.append(fact)
            derived_count += 1
        if derived_count > max_derived:
            raise ResourceLimit(f"derived more than {max_derived} facts")
    return ClosureResult(graph, max(iterations, 1), derived_count)


def _unify_with_fact(atom, fact):
    subst = {}
    for term, value in ((atom.subject, fact.subject), (atom.object, fact.object)):
        if isinstance(term, Constant):
            if term.symbol is not value:
                return None
        else:
            bound = subst.get(term.name)
            if bound is None:
                subst[term.name] = value
            elif bound is not value:
                return None
    return subst


@dataclass
class DerivationNode:
    """Node of an explanation tree; rule_id is None for asserted leaves."""

    fact: Fact
    rule_id: str | None
    premises: list["DerivationNode"]


def explain(graph, fact, show_all=False):
    """Return the derivation tree for a fact in a closed graph.

    Base facts give a single "asserted" leaf.  Derived facts expand their
    first recorded derivation recursively; with ``show_all`` a list of trees,
    one per recorded derivation of the root fact, is returned.
    """
    if fact not in graph:
        raise UnknownFact(f"{fact} is not in the graph")
    if show_all and fact in graph.derived:
        return [
            _expand(graph, fact, derivation) for derivation in graph.derivations.get(fact, [])
        ]
    node = _expand_first(graph, fact)
    return [node] if show_all else node


def _expand_first(graph, fact):
    if fact in graph.base:
        return DerivationNode(fact, None, [])
    derivations = graph.derivations.get(fact)
    if not derivations:
        raise UnknownFact(f"{fact} is derived but has no recorded derivation")
    return _expand(graph, fact, derivations[0])


def _expand(graph, fact, derivation):
    return DerivationNode(
        fact, derivation.rule_id, [_expand_first(graph, p) for p in derivation.premises]
    )


def format_derivation(node, indent=0):
    """Render a derivation tree as indented text, one fact per line."""
    tag = node.rule_id if node.rule_id is not None else "asserted"
    lines = ["  " * indent + f"{node.fact}  [{tag}]"]
    for child in node.premises:
        lines.append(format_derivation(child, indent + 1))
    return "\n".join(lines)

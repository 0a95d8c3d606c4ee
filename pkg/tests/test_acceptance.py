"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criteria:
  1. english asserted into Language reaches Abstract and Entity (< 1 s)
  2. paris asserted into Location inherits all six Location properties (< 1 s)
  3. square asserted into "Object" joins proton:Entity and bfo:material entity
     and inherits proton:"is owned by" / "has contact info" (< 1 s)
  4. bundle fidelity: Proton 25 classes / 56 subClassOf / 30 subPropertyOf /
     7 inverseOf; BFO 34 classes
  5. oracle equivalence: semi-naive == naive on >= 100 random graphs
  6. derived isinstanceOf == BFS reachability oracle under 50 random assertions
  7. performance: full session closure < 1 s; 1,000-node subClassOf chain
     (499,500 subClassOf facts closed, 498,501 of them derived) < 30 s
  8. determinism: dump output byte-identical across 5 runs
"""

import random
import time

import pytest

from kgreason.engine import naive_close, seminaive_close
from kgreason.model import Fact, NodeKind, intern_symbol
from kgreason.parser import parse_query
from kgreason.session import Session, default_rules

from oracles import instance_classes
from strategies import CLASSES, INSTANCES, PROPERTIES

RULES = default_rules()


def report(criterion, ok, detail):
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="module", autouse=True)
def warm_jit():
    """Compile (or load the cached) vectorized kernel outside the timed tests."""
    base = [
        Fact("subClassOf", intern_symbol("warm", "a"), intern_symbol("warm", "b")),
        Fact("subClassOf", intern_symbol("warm", "b"), intern_symbol("warm", "c")),
    ]
    seminaive_close(base, RULES)


def timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


def english_session():
    s = Session()
    s.load_bundled("proton")
    s.assert_instance("english", "Language")
    s.infer()
    return s


def paris_session():
    s = Session()
    s.load_bundled("proton")
    s.assert_instance("paris", "Location")
    s.infer()
    return s


def square_session():
    s = Session()
    s.load_bundled("proton")
    s.load_bundled("bfo")
    s.assert_instance("square", "Object")
    s.infer()
    return s


def full_session():
    s = Session()
    s.load_bundled("proton")
    s.load_bundled("bfo")
    s.assert_instance("english", "Language")
    s.assert_instance("paris", "Location")
    s.assert_instance("square", "Object")
    s.infer()
    return s


def test_criterion_1_english_reaches_abstract_and_entity():
    session, elapsed = timed(english_session)
    abstract = session.ask(parse_query("isinstanceOf(user:english, proton:Abstract)"))
    entity = session.ask(parse_query("isinstanceOf(user:english, proton:Entity)"))
    ok = abstract is True and entity is True and elapsed < 1.0
    report(
        1,
        ok,
        f"english in Abstract={abstract}, Entity={entity}, {elapsed:.3f}s (< 1 s)",
    )


def test_criterion_2_paris_inherits_location_properties():
    session, elapsed = timed(paris_session)
    answers = session.ask(parse_query("propertyOf(P, user:paris)"))
    bound = {str(subst["P"]) for subst in answers}
    required = {
        f"proton:{name}"
        for name in (
            "nima gns unique feature identifier",
            "longitude",
            "population count",
            "subregion of",
            "nima gns designator",
            "latitude",
        )
    }
    missing = required - bound
    ok = not missing and elapsed < 1.0
    report(
        2,
        ok,
        f"paris has {len(bound)} properties incl. all 6 Location ones"
        f" (missing: {sorted(missing) or 'none'}), {elapsed:.3f}s (< 1 s)",
    )


def test_criterion_3_square_spans_both_ontologies():
    session, elapsed = timed(square_session)
    checks = {
        "proton:Entity": session.ask(parse_query("isinstanceOf(user:square, proton:Entity)")),
        "bfo:material entity": session.ask(
            parse_query("isinstanceOf(user:square, 'bfo:material entity')")
        ),
        "is owned by": session.ask(parse_query("propertyOf('proton:is owned by', user:square)")),
        "has contact info": session.ask(
            parse_query("propertyOf('proton:has contact info', user:square)")
        ),
    }
    ok = all(v is True for v in checks.values()) and elapsed < 1.0
    report(3, ok, f"square checks {checks}, {elapsed:.3f}s (< 1 s)")


def test_criterion_4_bundle_fidelity():
    proton = Session()
    proton_report = proton.load_bundled("proton")
    by_pred = {}
    for fact in proton.graph.base:
        by_pred[fact.predicate] = by_pred.get(fact.predicate, 0) + 1
    bfo = Session()
    bfo_report = bfo.load_bundled("bfo")
    ok = (
        proton_report.class_count == 25
        and by_pred.get("subClassOf") == 56
        and by_pred.get("subPropertyOf") == 30
        and by_pred.get("inverseOf") == 7
        and bfo_report.class_count == 34
    )
    report(
        4,
        ok,
        f"proton classes={proton_report.class_count} subClassOf={by_pred.get('subClassOf')}"
        f" subPropertyOf={by_pred.get('subPropertyOf')} inverseOf={by_pred.get('inverseOf')};"
        f" bfo classes={bfo_report.class_count}",
    )


def _random_base(rng, max_size=50):
    base = []
    for _ in range(rng.randint(0, max_size)):
        pred = rng.choice(
            ["subClassOf", "isinstanceOf", "propertyOf", "subPropertyOf", "inverseOf"]
        )
        if pred == "subClassOf":
            s, o = rng.choice(CLASSES), rng.choice(CLASSES)
        elif pred == "isinstanceOf":
            s, o = rng.choice(INSTANCES), rng.choice(CLASSES)
        elif pred == "propertyOf":
            s, o = rng.choice(PROPERTIES), rng.choice(CLASSES + INSTANCES)
        else:
            s, o = rng.choice(PROPERTIES), rng.choice(PROPERTIES)
        base.append(Fact(pred, s, o))
    return base


def test_criterion_5_oracle_equivalence_on_random_graphs():
    rng = random.Random(20260823)
    graphs = 120
    mismatches = 0
    for _ in range(graphs):
        base = _random_base(rng)
        reference = set(naive_close(base, RULES).graph.facts())
        fast = set(seminaive_close(base, RULES).graph.facts())
        generic = set(seminaive_close(base, RULES, force_generic=True).graph.facts())
        if not (reference == fast == generic):
            mismatches += 1
    report(5, mismatches == 0, f"{graphs} random graphs, {mismatches} mismatches (0 allowed)")


def test_criterion_6_reachability_oracle_on_proton():
    rng = random.Random(987654321)
    session = Session()
    session.load_bundled("proton")
    class_names = sorted(
        sym.local
        for sym, kind in session.graph.nodes.items()
        if sym.namespace == "proton" and kind is NodeKind.CLASS
    )
    for i in range(50):
        session.assert_instance(f"inst{i}", rng.choice(class_names))
    session.infer()
    base = list(session.graph.base)
    mismatches = 0
    for i in range(50):
        inst = intern_symbol("user", f"inst{i}")
        derived = {
            f.object for f in session.graph.facts_by_subject("isinstanceOf", inst)
        }
        if derived != instance_classes(base, inst):
            mismatches += 1
    report(6, mismatches == 0, f"50 random assertions, {mismatches} oracle mismatches (0 allowed)")


def test_criterion_7_performance_proxies():
    _, session_elapsed = timed(full_session)

    chain = [
        Fact("subClassOf", intern_symbol("chain", f"n{i}"), intern_symbol("chain", f"n{i+1}"))
        for i in range(999)
    ]
    result, chain_elapsed = timed(lambda: seminaive_close(chain, RULES))
    total_subclass = len(result.graph.facts_by_predicate("subClassOf"))
    counts_ok = result.derived_count == 498_501 and total_subclass == 499_500
    ok = session_elapsed < 1.0 and chain_elapsed < 30.0 and counts_ok
    report(
        7,
        ok,
        f"full session {session_elapsed:.3f}s (< 1 s); 1,000-node chain {chain_elapsed:.2f}s"
        f" (< 30 s), {result.derived_count} derived / {total_subclass} total subClassOf",
    )


def test_criterion_8_dump_determinism():
    dumps = [full_session().dump_log() for _ in range(5)]
    identical = all(d == dumps[0] for d in dumps)
    report(8, identical, f"5 consecutive dumps, byte-identical={identical}, {len(dumps[0])} bytes")

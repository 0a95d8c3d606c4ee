"""Independent oracles used to check closure results.

These deliberately avoid the engine's matching machinery: reachability is a
plain BFS over edge dicts, and the property oracle is a set-closure
computation straight from the propagation semantics.
"""

from collections import deque


def bfs_reachable(edges, start):
    """All nodes reachable from start via edges: dict node -> iterable of nodes."""
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nxt in edges.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def subclass_edges(base_facts):
    edges = {}
    for f in base_facts:
        if f.predicate == "subClassOf":
            edges.setdefault(f.subject, set()).add(f.object)
    return edges


def instance_classes(base_facts, instance):
    """isinstanceOf-closure of an instance: BFS over base subClassOf edges
    from every class it is directly asserted into."""
    edges = subclass_edges(base_facts)
    out = set()
    for f in base_facts:
        if f.predicate == "isinstanceOf" and f.subject is instance:
            out |= bfs_reachable(edges, f.object)
    return out


def property_upward_closure(base_facts, seed_properties):
    """Close a property set under reversed subPropertyOf/inverseOf edges:
    p joins when subPropertyOf(p, q) or inverseOf(p, q) holds for a member q."""
    incoming = {}
    for f in base_facts:
        if f.predicate in ("subPropertyOf", "inverseOf"):
            incoming.setdefault(f.object, set()).add(f.subject)
    closed = set(seed_properties)
    queue = deque(closed)
    while queue:
        q = queue.popleft()
        for p in incoming.get(q, ()):
            if p not in closed:
                closed.add(p)
                queue.append(p)
    return closed


def properties_of_node(base_facts, node_classes, direct_also=()):
    """Expected propertyOf subjects for a node whose class closure is
    node_classes; direct_also holds base propertyOf attachments to the node."""
    seed = set(direct_also)
    for f in base_facts:
        if f.predicate == "propertyOf" and f.object in node_classes:
            seed.add(f.subject)
    return property_upward_closure(base_facts, seed)


def expected_instance_properties(base_facts, instance):
    """propertyOf(p, instance) membership per the propagation semantics."""
    classes = instance_classes(base_facts, instance)
    direct = {
        f.subject
        for f in base_facts
        if f.predicate == "propertyOf" and f.object is instance
    }
    return properties_of_node(base_facts, classes, direct)

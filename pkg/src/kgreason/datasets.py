"""Bundled upper-ontology fact files (Proton and BFO) and their loaders.

The bundles are ordinary fact files installed with the package under
``kgreason/data/`` so they can be inspected and extended.  Note: the Proton
source material quotes 77 properties, but its relation tables enumerate 75
distinct property names; the table-derived count is what the bundle carries.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .parser import FactFile, parse_fact_file


@dataclass(frozen=True)
class BundledOntology:
    name: str
    namespace: str
    text: str
    expected_classes: int
    expected_properties: int
    expected_facts: int
    declared_predicates: tuple[str, ...] = ()

    def fact_file(self) -> FactFile:
        return parse_fact_file(self.text, self.namespace)


def _read(filename):
    return resources.files("kgreason.data").joinpath(filename).read_text(encoding="utf-8")


def proton():
    """The Proton upper ontology: 25 classes, 75 properties, 156 facts
    (56 subClassOf, 63 propertyOf, 30 subPropertyOf, 7 inverseOf)."""
    return BundledOntology(
        name="proton",
        namespace="proton",
        text=_read("proton.tsv"),
        expected_classes=25,
        expected_properties=75,
        expected_facts=156,
    )


# BFO relations beyond the is-a hierarchy: declared, no facts shipped.
BFO_RELATIONS = (
    "existsAt",
    "occursIn",
    "participatesIn",
    "hasParticipant",
    "realizes",
    "locatedIn",
    "partOf",
)


def bfo():
    """The Basic Formal Ontology 2.0: 34 categories in an is-a hierarchy of
    33 subClassOf facts, plus declared (fact-free) relation predicates."""
    return BundledOntology(
        name="bfo",
        namespace="bfo",
        text=_read("bfo.tsv"),
        expected_classes=34,
        expected_properties=0,
        expected_facts=33,
        declared_predicates=BFO_RELATIONS,
    )


BUNDLES = {"proton": proton, "bfo": bfo}


def bundled(name):
    try:
        return BUNDLES[name]()
    except KeyError:
        raise KeyError(f"no bundled ontology named {name!r}; choose from {sorted(BUNDLES)}")

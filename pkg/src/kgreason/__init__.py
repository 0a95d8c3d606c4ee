"""kgreason: an embedded knowledge-graph reasoner.

Loads upper-ontology fact sets, computes the deductive closure under a
Horn-rule set by semi-naive forward chaining, and answers Boolean or
enumeration queries with derivation provenance.
"""

from .engine import (
    ClosureResult,
    DerivationNode,
    explain,
    format_derivation,
    match_atom,
    naive_close,
    seminaive_close,
)
from .model import (
    CORE_PREDICATES,
    AlreadyExists,
    Atom,
    Constant,
    Derivation,
    DuplicateNamespace,
    Fact,
    InvalidName,
    KgError,
    KindConflict,
    KnowledgeGraph,
    NodeKind,
    ParseError,
    RangeRestrictionError,
    ResourceLimit,
    Rule,
    StaleClosure,
    Symbol,
    UnknownFact,
    UnknownPredicate,
    UnresolvedClass,
    Variable,
    intern_symbol,
)
from .parser import (
    FactFile,
    parse_fact_file,
    parse_fact_line,
    parse_query,
    parse_rule,
    parse_rules,
    serialize_fact,
    serialize_facts,
)
from .session import DEFAULT_RULES_TEXT, LoadReport, Session, SessionConfig, default_rules

__version__ = "0.1.0"

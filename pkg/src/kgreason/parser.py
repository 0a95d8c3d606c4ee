"""Parsing of fact files, the rule DSL and query expressions.

Fact file format: one fact per line, tab-separated
``predicate<TAB>subject<TAB>object``; ``#`` starts a comment line; blank
lines are skipped.  Names without a ``:`` get the default namespace; names
with one are split at the first ``:``.  Local names may contain spaces
(tab is the only field separator).

Rule DSL: ``id: head :- atom ("," atom)* "."``
Query:    ``pred "(" term "," term ")"``

In rules and queries a term starting with an uppercase letter and carrying
no ``:`` is a variable; constants must be namespace-qualified (``ns:name``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .model import (
    CORE_PREDICATES,
    Atom,
    Constant,
    Fact,
    InvalidName,
    ParseError,
    Rule,
    UnknownPredicate,
    Variable,
    intern_symbol,
)


@dataclass
class FactFile:
    """Parsed fact file: (line-number, Fact) entries plus skipped lines."""

    entries: list[tuple[int, Fact]] = field(default_factory=list)
    skipped: list[tuple[int, str]] = field(default_factory=list)

    @property
    def facts(self):
        return [fact for _, fact in self.entries]


def _parse_name(text, default_namespace, line_number=None):
    text = text.strip()
    if ":" in text:
        namespace, local = text.split(":", 1)
    else:
        namespace, local = default_namespace, text
    try:
        return intern_symbol(namespace, local.strip())
    except InvalidName as exc:
        raise ParseError(str(exc), line_number) from exc


def parse_fact_line(line, default_namespace, predicates=None, line_number=None):
    """Parse one ``predicate<TAB>subject<TAB>object`` line into a Fact."""
    if predicates is None:
        predicates = CORE_PREDICATES
    fields = [f.strip() for f in line.rstrip("\n").split("\t")]
    if len(fields) != 3:
        raise ParseError(
            f"expected 3 tab-separated fields, got {len(fields)}: {line!r}", line_number
        )
    predicate, subject, obj = fields
    if not predicate or not subject or not obj:
        raise ParseError(f"empty field in fact line: {line!r}", line_number)
    if predicate not in predicates:
        raise ParseError(f"unknown predicate {predicate!r}", line_number)
    return Fact(
        predicate,
        _parse_name(subject, default_namespace, line_number),
        _parse_name(obj, default_namespace, line_number),
    )


def parse_fact_file(text, default_namespace, predicates=None):
    """Parse a whole fact file; comment (#) and blank lines are recorded as skipped."""
    out = FactFile()
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            out.skipped.append((line_number, line))
            continue
        out.entries.append(
            (line_number, parse_fact_line(line, default_namespace, predicates, line_number))
        )
    return out


def serialize_fact(fact):
    return f"{fact.predicate}\t{fact.subject}\t{fact.object}"


def serialize_facts(facts):
    return "\n".join(serialize_fact(f) for f in facts) + ("\n" if facts else "")


_VARIABLE_RE = re.compile(r"^[A-Z][A-Za-z0-9_]*$")
_PRED_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _parse_term(text, line_number=None):
    text = text.strip()
    if text.startswith(("'", '"')) and len(text) >= 2 and text.endswith(text[0]):
        text = text[1:-1].strip()
        if ":" not in text:
            raise ParseError(f"constant {text!r} must be namespace-qualified", line_number)
        return Constant(_parse_name(text, "", line_number))
    if ":" in text:
        return Constant(_parse_name(text, "", line_number))
    if _VARIABLE_RE.match(text):
        return Variable(text)
    raise ParseError(
        f"term {text!r} is neither a variable nor a namespace-qualified constant",
        line_number,
    )


def _split_args(text, line_number=None):
    # binary atoms only: split at the first top-level comma outside quotes
    depth = 0
    quote = None
    for i, ch in enumerate(text):
        if quote:
            if ch == quote:
                quote = None
        elif ch in "'\"":
            quote = ch
        elif ch == "," and depth == 0:
            return text[:i], text[i + 1 :]
    raise ParseError(f"expected two comma-separated terms in {text!r}", line_number)


def _parse_atom(text, line_number=None):
    text = text.strip()
    open_paren = text.find("(")
    if open_paren < 0 or not text.endswith(")"):
        raise ParseError(f"malformed atom {text!r}", line_number)
    predicate = text[:open_paren].strip()
    if not _PRED_RE.match(predicate):
        raise ParseError(f"malformed predicate name {predicate!r}", line_number)
    inner = text[open_paren + 1 : -1]
    if "(" in inner or ")" in inner:
        raise ParseError(f"malformed atom {text!r}", line_number)
    left, right = _split_args(inner, line_number)
    if "," in right:
        raise ParseError(f"atoms are binary, got extra argument in {text!r}", line_number)
    return Atom(predicate, _parse_term(left, line_number), _parse_term(right, line_number))


def parse_rule(text, predicates=None):
    """Parse ``id: head :- body1, body2, ... .`` into a range-restricted Rule.

    Raises ParseError on syntax and RangeRestrictionError when a head
    variable does not occur in the body.
    """
    text = text.strip()
    if not text.endswith("."):
        raise ParseError(f"rule must end with '.': {text!r}")
    text = text[:-1]
    if ":-" not in text:
        raise ParseError(f"rule must contain ':-': {text!r}")
    head_part, body_part = text.split(":-", 1)
    if ":" not in head_part:
        raise ParseError(f"rule must start with 'id:': {text!r}")
    rule_id, head_text = head_part.split(":", 1)
    rule_id = rule_id.strip()
    if not rule_id:
        raise ParseError(f"empty rule id in {text!r}")
    head = _parse_atom(head_text)
    body = []
    rest = body_part.strip()
    while rest:
        close = rest.find(")")
        if close < 0:
            raise ParseError(f"malformed rule body near {rest!r}")
        body.append(_parse_atom(rest[: close + 1]))
        rest = rest[close + 1 :].strip()
        if rest.startswith(","):
            rest = rest[1:].strip()
            if not rest:
                raise ParseError("trailing comma in rule body")
        elif rest:
            raise ParseError(f"unexpected text in rule body: {rest!r}")
    if not body:
        raise ParseError(f"rule {rule_id!r} has no body atoms")
    if predicates is not None:
        for atom in (head, *body):
            if atom.predicate not in predicates:
                raise UnknownPredicate(f"predicate {atom.predicate!r} is not declared")
    return Rule(rule_id, head, tuple(body))


def parse_rules(text, predicates=None):
    """Parse a rule file: one rule per line, # comments and blanks skipped."""
    rules = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rules.append(parse_rule(line, predicates))
    return rules


def parse_query(text, predicates=None):
    """Parse ``pred(term, term)`` into an Atom; variables make it an enumeration query."""
    if predicates is None:
        predicates = CORE_PREDICATES
    atom = _parse_atom(text)
    if atom.predicate not in predicates:
        raise UnknownPredicate(f"predicate {atom.predicate!r} is not declared")
    return atom

"""Command-line front end: batch scripts and an interactive REPL.

Commands, one per line (shlex-quoted arguments; # starts a comment):

    load <path> <namespace>      load a fact file as base facts
    load-bundled <proton|bfo>    load a bundled ontology
    assert <instance> <class>    assert an instance into every matching class
    new-class <name> <namespace> register an empty class node
    infer                        compute the deductive closure
    ask <query>                  e.g. ask "isinstanceOf(user:english, proton:Entity)"
    explain <ground-query>       print the derivation tree of a fact
    dump                         write the full knowledge log to stdout
    rules <path>                 replace the rule set (before infer)
    quit                         leave the REPL

Exit codes: 0 success, 1 command/session error, 2 usage error.
"""

from __future__ import annotations

import argparse
import shlex
import sys
from pathlib import Path

from .engine import format_derivation
from .model import KgError
from .parser import parse_fact_file, parse_query, parse_rules, serialize_fact
from .session import Session, SessionConfig, default_rules

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _expect(args, n, usage):
    if len(args) != n:
        raise UsageError(f"usage: {usage}")
    return args


def execute(session, command, out):
    """Run one command line against the session; raises UsageError or KgError."""
    try:
        parts = shlex.split(command, comments=True)
    except ValueError as exc:
        raise UsageError(f"bad quoting: {exc}")
    if not parts:
        return True
    verb, args = parts[0], parts[1:]

    if verb == "quit" or verb == "exit":
        return False
    if verb == "load":
        path, namespace = _expect(args, 2, "load <path> <namespace>")
        text = Path(path).read_text(encoding="utf-8")
        facts = parse_fact_file(text, namespace, predicates=session.graph.predicates)
        report = session.load_facts(facts, namespace)
        _print_report(report, out)
    elif verb == "load-bundled":
        (name,) = _expect(args, 1, "load-bundled <proton|bfo>")
        _print_report(session.load_bundled(name), out)
    elif verb == "assert":
        instance, cls = _expect(args, 2, "assert <instance> <class>")
        for fact in session.assert_instance(instance, cls):
            print(f"asserted {serialize_fact(fact)}", file=out)
    elif verb == "new-class":
        name, namespace = _expect(args, 2, "new-class <name> <namespace>")
        symbol = session.assert_new_class(name, namespace)
        print(f"declared class {symbol}", file=out)
    elif verb == "infer":
        _expect(args, 0, "infer")
        result = session.infer()
        print(
            f"{result.derived_count} facts derived in {result.iterations} iterations",
            file=out,
        )
    elif verb == "ask":
        (query_text,) = _expect(args, 1, 'ask "<pred>(<term>, <term>)"')
        query = parse_query(query_text, session.graph.predicates)
        answer = session.ask(query)
        if isinstance(answer, bool):
            print("true" if answer else "false", file=out)
        elif not answer:
            print("(no bindings)", file=out)
        else:
            for subst in answer:
                print(", ".join(f"{v} = {subst[v]}" for v in sorted(subst)), file=out)
    elif verb == "explain":
        (fact_text,) = _expect(args, 1, 'explain "<pred>(<const>, <const>)"')
        query = parse_query(fact_text, session.graph.predicates)
        if not query.is_ground():
            raise UsageError("explain needs a ground fact, not a query with variables")
        print(format_derivation(session.explain(query.to_fact())), file=out)
    elif verb == "dump":
        _expect(args, 0, "dump")
        out.write(session.dump_log())
    elif verb == "rules":
        (path,) = _expect(args, 1, "rules <path>")
        session.rules = parse_rules(Path(path).read_text(encoding="utf-8"))
        session.closed = False
        print(f"loaded {len(session.rules)} rules", file=out)
    else:
        raise UsageError(f"unknown command: {verb}")
    return True


def _print_report(report, out):
    print(
        f"loaded {report.namespace}: {report.fact_count} facts, "
        f"{report.class_count} classes, {report.property_count} properties, "
        f"{report.instance_count} instances",
        file=out,
    )


def run_batch(commands, session, out=None, err=None):
    """Execute commands in order; stop at the first error. Returns exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    for command in commands:
        try:
            if not execute(session, command, out):
                break
        except UsageError as exc:
            print(f"error in {command.strip()!r}: {exc}", file=err)
            return EXIT_USAGE
        except (KgError, OSError) as exc:
            print(f"error in {command.strip()!r}: {exc}", file=err)
            return EXIT_ERROR
    return EXIT_OK


def run_repl(session, stdin=None, out=None, err=None):
    """Interactive loop: errors are printed and swallowed; quit exits 0."""
    stdin = stdin or sys.stdin
    out = out or sys.stdout
    err = err or sys.stderr
    interactive = stdin.isatty()
    while True:
        if interactive:
            out.write("kgreason> ")
            out.flush()
        line = stdin.readline()
        if not line:
            break
        try:
            if not execute(session, line, out):
                break
        except (UsageError, KgError, OSError) as exc:
            print(f"error: {exc}", file=err)
    return EXIT_OK


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="kgreason",
        description="Knowledge-graph reasoner: load ontologies, assert instances, "
        "infer the deductive closure, and query with provenance.",
    )
    parser.add_argument("script", nargs="?", help="command script; omit for a REPL on stdin")
    parser.add_argument("--rules", metavar="FILE", help="replace the default rule set")
    parser.add_argument(
        "--auto-infer", action="store_true", help="recompute the closure on stale queries"
    )
    args = parser.parse_args(argv)

    config = SessionConfig(auto_infer=args.auto_infer)
    if args.rules:
        try:
            rules = parse_rules(Path(args.rules).read_text(encoding="utf-8"))
        except (OSError, KgError) as exc:
            print(f"error: cannot load rules: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        rules = default_rules()
    session = Session(rules=rules, config=config)

    if args.script:
        try:
            lines = Path(args.script).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        return run_batch(lines, session)
    return run_repl(session)


if __name__ == "__main__":
    sys.exit(main())

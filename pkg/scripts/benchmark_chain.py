#!/usr/bin/env python3
"""Benchmark the closure evaluators on a synthetic subClassOf chain.

A chain of n classes closes to n(n-1)/2 subClassOf facts under transitivity,
of which n(n-1)/2 - (n-1) are derived.  Compares the vectorized and generic
semi-naive evaluators (the naive reference is only run for small n).

Usage: python scripts/benchmark_chain.py [n ...]   (default: 100 1000)
"""

import sys
import time

from kgreason.engine import naive_close, seminaive_close
from kgreason.model import Fact, intern_symbol
from kgreason.session import default_rules

RULES = default_rules()


def chain(n):
    return [
        Fact("subClassOf", intern_symbol("chain", f"n{i}"), intern_symbol("chain", f"n{i+1}"))
        for i in range(n - 1)
    ]


def run(label, fn, base):
    start = time.perf_counter()
    result = fn(base, RULES)
    elapsed = time.perf_counter() - start
    print(f"  {label:<10} {elapsed:8.3f}s  {result.derived_count:>10,} derived")
    return result.derived_count


def main(argv):
    sizes = [int(a) for a in argv] or [100, 1000]
    # warm the vectorized kernel so timings exclude compilation
    seminaive_close(chain(3), RULES)
    for n in sizes:
        expected = n * (n - 1) // 2 - (n - 1)
        print(f"chain of {n} classes (expected {expected:,} derived):")
        base = chain(n)
        run("fast", seminaive_close, base)
        run("generic", lambda b, r: seminaive_close(b, r, force_generic=True), base)
        if n <= 200:
            run("naive", naive_close, base)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))

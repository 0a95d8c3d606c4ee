"""Vectorized semi-naive evaluation for two-atom join rules.

Facts are re-encoded as integer pairs per predicate; each (rule, delta-role)
pair compiles to a join plan executed by a numba kernel over CSR-style
indexes, with a dense per-predicate bitmap for duplicate suppression.  The
bitmap needs ``len(symbols)**2`` bytes per head predicate, so graphs with a
very large symbol universe fall back to the generic evaluator (``close``
returns None in that case).
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Derivation, Fact, ResourceLimit, Variable

try:
    import numpy as np
    from numba import njit

    _NUMBA_OK = True
except ImportError:  # pragma: no cover - exercised only without numba/numpy
    _NUMBA_OK = False

# dense bitmaps across all head predicates must stay under this many bytes
MAX_BITMAP_BYTES = 512_000_000


def available():
    return _NUMBA_OK


if _NUMBA_OK:

    @njit(cache=True)
    def _join2(ds, do, key_from_obj, idx_keys, idx_offs, idx_vals, hs_src, ho_src, K, present, out, n_out):
        """Join delta pairs against a CSR index; append new head facts to out.

        out rows are (head_s, head_o, delta_s, delta_o, match); returns the
        new row count, or -1 when out is full (caller grows and retries; the
        bitmap is only marked after a successful append, so retries resume
        correctly).
        """
        n_keys = idx_keys.shape[0]
        for i in range(ds.shape[0]):
            s = ds[i]
            o = do[i]
            key = o if key_from_obj else s
            pos = np.searchsorted(idx_keys, key)
            if pos >= n_keys or idx_keys[pos] != key:
                continue
            for j in range(idx_offs[pos], idx_offs[pos + 1]):
                m = idx_vals[j]
                hs = s if hs_src == 0 else (o if hs_src == 1 else m)
                ho = s if ho_src == 0 else (o if ho_src == 1 else m)
                hk = hs * K + ho
                if present[hk] == 0:
                    if n_out >= out.shape[0]:
                        return -1
                    present[hk] = 1
                    out[n_out, 0] = hs
                    out[n_out, 1] = ho
                    out[n_out, 2] = s
                    out[n_out, 3] = o
                    out[n_out, 4] = m
                    n_out += 1
        return n_out


@dataclass(frozen=True)
class _Plan:
    rule_id: str
    delta_pred: str
    other_pred: str
    head_pred: str
    delta_is_first: bool  # delta atom is body[0]
    key_from_obj: bool  # join key sits in the delta atom's object slot
    other_key_is_subj: bool  # CSR of the other atom is keyed by its subject
    hs_src: int  # 0=delta.subject 1=delta.object 2=match value
    ho_src: int
    os_src: int  # other atom subject/object, same source codes
    oo_src: int


def _source_code(var, delta_atom, match_var):
    if var == delta_atom.subject.name:
        return 0
    if var == delta_atom.object.name:
        return 1
    assert var == match_var
    return 2


def _compile_plans(rules):
    plans = []
    for rule in rules:
        for role in (0, 1):
            delta_atom = rule.body[role]
            other_atom = rule.body[1 - role]
            dv = {delta_atom.subject.name, delta_atom.object.name}
            join_var = (
                other_atom.subject.name
                if other_atom.subject.name in dv
                else other_atom.object.name
            )
            other_key_is_subj = other_atom.subject.name == join_var
            match_var = other_atom.object.name if other_key_is_subj else other_atom.subject.name
            plans.append(
                _Plan(
                    rule_id=rule.id,
                    delta_pred=delta_atom.predicate,
                    other_pred=other_atom.predicate,
                    head_pred=rule.head.predicate,
                    delta_is_first=(role == 0),
                    key_from_obj=(delta_atom.object.name == join_var),
                    other_key_is_subj=other_key_is_subj,
                    hs_src=_source_code(rule.head.subject.name, delta_atom, match_var),
                    ho_src=_source_code(rule.head.object.name, delta_atom, match_var),
                    os_src=_source_code(other_atom.subject.name, delta_atom, match_var),
                    oo_src=_source_code(other_atom.object.name, delta_atom, match_var),
                )
            )
    return plans


def _build_csr(pairs, by_subject):
    k = pairs[:, 0] if by_subject else pairs[:, 1]
    v = pairs[:, 1] if by_subject else pairs[:, 0]
    order = np.argsort(k, kind="stable")
    ks = k[order]
    vs = v[order]
    keys, starts = np.unique(ks, return_index=True)
    offs = np.empty(len(keys) + 1, dtype=np.int64)
    offs[:-1] = starts
    offs[-1] = len(ks)
    return keys, offs, vs


def close(base, rules, max_derived, fresh_graph):
    """Run the vectorized closure; returns a ClosureResult or None when the
    dense bitmaps would be too large for this graph."""
    from .engine import ClosureResult

    symbols = []
    ids = {}
    for fact in base:
        for sym in (fact.subject, fact.object):
            if sym not in ids:
                ids[sym] = len(symbols)
                symbols.append(sym)
    K = max(len(symbols), 1)
    plans = _compile_plans(rules)
    head_preds = {p.head_pred for p in plans}
    if len(head_preds) * K * K > MAX_BITMAP_BYTES:
        return None

    pairs = {}
    seen_base = {}
    for fact in base:
        key = (fact.predicate, ids[fact.subject], ids[fact.object])
        if key not in seen_base:
            seen_base[key] = None
            pairs.setdefault(fact.predicate, []).append((key[1], key[2]))
    pair_arrays = {
        pred: np.array(rows, dtype=np.int64).reshape(-1, 2) for pred, rows in pairs.items()
    }
    present = {}
    for pred in head_preds:
        bitmap = np.zeros(K * K, dtype=np.uint8)
        arr = pair_arrays.get(pred)
        if arr is not None and len(arr):
            bitmap[arr[:, 0] * K + arr[:, 1]] = 1
        present[pred] = bitmap

    delta = dict(pair_arrays)
    derived = []  # (plan, rows array) in firing order
    derived_count = 0
    iterations = 0
    empty = np.empty((0, 2), dtype=np.int64)
    while delta:
        iterations += 1
        csr_cache = {}
        new_rows = []
        for plan in plans:
            d = delta.get(plan.delta_pred)
            if d is None or not len(d):
                continue
            full = pair_arrays.get(plan.other_pred)
            if full is None or not len(full):
                continue
            csr_key = (plan.other_pred, plan.other_key_is_subj)
            if csr_key not in csr_cache:
                csr_cache[csr_key] = _build_csr(full, plan.other_key_is_subj)
            idx_keys, idx_offs, idx_vals = csr_cache[csr_key]
            out = np.empty((max(1024, len(d)), 5), dtype=np.int64)
            n_out = 0
            ds = np.ascontiguousarray(d[:, 0])
            do = np.ascontiguousarray(d[:, 1])
            while True:
                res = _join2(
                    ds,
                    do,
                    plan.key_from_obj,
                    idx_keys,
                    idx_offs,
                    idx_vals,
                    plan.hs_src,
                    plan.ho_src,
                    K,
                    present[plan.head_pred],
                    out,
                    n_out,
                )
                if res >= 0:
                    n_out = res
                    break
                # -1 means out filled up completely: keep the collected rows,
                # grow, and rescan (already-collected facts are bitmap-marked
                # and skip cheaply)
                n_out = out.shape[0]
                out = np.concatenate([out, np.empty_like(out)])
            if n_out:
                rows = out[:n_out]
                new_rows.append((plan, rows))
                derived_count += n_out
        if derived_count > max_derived:
            raise ResourceLimit(f"derived more than {max_derived} facts")
        delta = {}
        for plan, rows in new_rows:
            derived.append((plan, rows))
            prev = delta.get(plan.head_pred, empty)
            delta[plan.head_pred] = np.concatenate([prev, rows[:, :2]]) if len(prev) else rows[:, :2]
        for pred, arr in delta.items():
            prev = pair_arrays.get(pred, empty)
            pair_arrays[pred] = np.concatenate([prev, arr]) if len(prev) else arr

    graph = fresh_graph(base, rules)
    sel = {0: 2, 1: 3, 2: 4}  # source code -> out column
    for plan, rows in derived:
        os_col, oo_col = sel[plan.os_src], sel[plan.oo_src]
        for row in rows:
            fact = Fact(plan.head_pred, symbols[row[0]], symbols[row[1]])
            delta_fact = Fact(plan.delta_pred, symbols[row[2]], symbols[row[3]])
            other_fact = Fact(plan.other_pred, symbols[row[os_col]], symbols[row[oo_col]])
            premises = (
                (delta_fact, other_fact) if plan.delta_is_first else (other_fact, delta_fact)
            )
            graph.insert_fact(
                fact, origin="derived", derivation=Derivation(fact, plan.rule_id, premises)
            )
    return ClosureResult(graph, max(iterations, 1), derived_count)

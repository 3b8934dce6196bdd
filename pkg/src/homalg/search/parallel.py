"""Root splitting: run disjoint subtrees in worker processes.

The first ``k`` variables of the canonical order are enumerated here; each
surviving prefix becomes an independent kernel run with those variables
fixed. Results are merged in prefix order with the same node accounting as
one sequential run (prefix assignments count as nodes, the budget is checked
before every assignment), so outcomes, counts, node totals and the first
model are identical to ``workers=1``.
"""

from __future__ import annotations

import multiprocessing as mp

from . import kernel as _kernel
from .program import SearchSpec, compile_spec

TASKS_PER_WORKER = 8
MAX_TASKS = 4096

_STATE: dict = {}


def split_depth(p: int, nfree: int, workers: int) -> int:
    """Smallest prefix length giving ``TASKS_PER_WORKER`` tasks per worker."""
    k = 0
    while k < nfree - 1 and p**k < TASKS_PER_WORKER * workers and p ** (k + 1) <= MAX_TASKS:
        k += 1
    return k


def with_prefix(prog, prefix):
    """``(values, order, n_alpha_free)`` with the first ``len(prefix)`` variables fixed."""
    vals = prog.values.copy()
    j = len(prefix)
    for var, v in zip(prog.order[:j], prefix):
        vals[var] = v
    return vals, prog.order[j:].copy(), max(prog.n_alpha_free - j, 0)


def _call(run, prog, prefix, find_first, budget, leaf_hook=None):
    vals, order, naf = with_prefix(prog, prefix)
    return run(
        prog.n, prog.p, vals, order, naf, prog.ops,
        prog.inst_start, prog.inst_end, prog.inst_lhs, prog.inst_rhs, prog.n_universal,
        prog.group_start, prog.group_end, prog.nregs, prog.alpha_rank,
        find_first, budget, leaf_hook, None,
    )


def _alive(run, prog, prefix) -> bool:
    # a zero budget stops right before the first assignment, after the
    # propagation and rank checks that would prune this node
    status, _, _, _ = _call(run, prog, prefix, True, 0)
    return status == _kernel.BUDGET


def _init_worker(spec_doc, backend):
    from .engine import _leaf_hook

    spec = SearchSpec.from_dict(spec_doc)
    prog = compile_spec(spec)
    _STATE.update(prog=prog, run=_kernel.get_run(backend), hook=_leaf_hook(spec, prog))


def _work(task):
    prefix, find_first, budget = task
    s = _STATE
    status, count, nodes, model = _call(s["run"], s["prog"], prefix, find_first, budget, s["hook"])
    return prefix, int(status), int(count), int(nodes), None if model is None else [int(v) for v in model]


def _prefixes(run, prog, k):
    """Prefix tree in canonical DFS order: ``(prefix, alive)`` for every assigned node."""
    def rec(prefix):
        for v in range(prog.p):
            pre = prefix + (v,)
            ok = _alive(run, prog, pre)
            yield pre, ok
            if ok and len(pre) < k:
                yield from rec(pre)

    yield from rec(())


def run_split(spec: SearchSpec, prog, backend: str | None, workers: int, find_first: bool,
              budget: int, leaf_hook=None, progress=None):
    """Same contract as a kernel ``run`` call, spread over ``workers`` processes."""
    run = _kernel.get_run(backend)
    nfree = len(prog.order)
    k = split_depth(prog.p, nfree, workers)
    if k == 0 or not _alive(run, prog, ()):
        return _call(run, prog, (), find_first, budget, leaf_hook)

    events = list(_prefixes(run, prog, k))
    leaf_at = [i for i, (pre, ok) in enumerate(events) if ok and len(pre) == k]
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    pool = ctx.Pool(workers, initializer=_init_worker, initargs=(spec.to_dict(), backend))
    pending: dict = {}
    queued = 0
    count = nodes = 0
    model = None

    def fill(done_events):
        # keep a bounded window in flight; each task gets an upper bound on
        # the budget that can remain when the merge reaches it
        nonlocal queued
        while queued < len(leaf_at) and len(pending) < workers:
            i = leaf_at[queued]
            b = max(budget - nodes - (i + 1 - done_events), 0)
            pending[i] = (pool.apply_async(_work, ((events[i][0], find_first, b),)), b)
            queued += 1

    try:
        for e, (pre, ok) in enumerate(events):
            if nodes >= budget:
                return _kernel.BUDGET, count, nodes, model
            nodes += 1
            if not ok or len(pre) < k:
                continue
            fill(e)
            res, given = pending.pop(e)
            _, st, c, sub_nodes, m = res.get()
            local = budget - nodes
            if sub_nodes > local or (st == _kernel.BUDGET and given != local):
                # the sequential run stops inside this subtree
                st, c, sub_nodes, m = _call(run, prog, pre, find_first, local, leaf_hook)
            count += c
            nodes += sub_nodes
            if model is None and m is not None:
                model = list(m)
            if st == _kernel.BUDGET:
                return _kernel.BUDGET, count, nodes, model
            if st == _kernel.FOUND and find_first:
                return _kernel.FOUND, count, nodes, model
            if progress is not None and not progress(nodes, count):
                return _kernel.INTERRUPTED, count, nodes, model
            fill(e + 1)
    except KeyboardInterrupt:
        return _kernel.INTERRUPTED, count, nodes, model
    finally:
        pool.terminate()
        pool.join()
    return _kernel.EXHAUSTED, count, nodes, model


__all__ = ["run_split", "split_depth", "with_prefix"]

"""Pure-Python depth-first search kernel (fallback for the compiled one).

Both kernels implement exactly the same algorithm and visit nodes in the same
order, so node counts agree. See ``program.py`` for the data layout.
"""

from __future__ import annotations

EXHAUSTED, FOUND, BUDGET, INTERRUPTED = 0, 1, 2, 3
UNKNOWN = -1
NEVER = 1 << 30
PROGRESS_EVERY = 1 << 14

VIOLATED, GROUND, OPEN = 0, 1, 2


def _eval_instance(k, n, p, vals, pos, ops, inst_start, inst_end, inst_lhs, inst_rhs, regs):
    """Evaluate both sides of instance ``k`` on partially known vectors.

    Returns ``(state, watch)`` where ``watch`` is the smallest assignment
    position among the unknown entries that were read: the evaluation cannot
    change before that position is assigned.
    """
    nn = n * n
    watch = NEVER
    for o in range(inst_start[k], inst_end[k]):
        code, dst, a, b = ops[o]
        out = regs[dst]
        if code == 0:
            for t in range(n):
                out[t] = 0
            out[a] = 1
        elif code == 1:
            u = regs[a]
            for t in range(n):
                acc = 0
                for i in range(n):
                    ui = u[i]
                    if ui == 0:
                        continue
                    s = vals[i * n + t]
                    if s == 0:
                        continue
                    if ui < 0 or s < 0:
                        if s < 0 and pos[i * n + t] < watch:
                            watch = pos[i * n + t]
                        acc = UNKNOWN
                        break
                    acc += ui * s
                out[t] = acc % p if acc >= 0 else UNKNOWN
        else:
            u = regs[a]
            v = regs[b]
            for t in range(n):
                acc = 0
                for i in range(n):
                    ui = u[i]
                    if ui == 0:
                        continue
                    for j in range(n):
                        vj = v[j]
                        if vj == 0:
                            continue
                        idx = nn + (i * n + j) * n + t
                        s = vals[idx]
                        if s == 0:
                            continue
                        if ui < 0 or vj < 0 or s < 0:
                            if s < 0 and pos[idx] < watch:
                                watch = pos[idx]
                            acc = UNKNOWN
                            break
                        acc += ui * vj * s
                    if acc < 0:
                        break
                out[t] = acc % p if acc >= 0 else UNKNOWN
    L = regs[inst_lhs[k]]
    R = regs[inst_rhs[k]]
    state = GROUND
    for t in range(n):
        x, y = L[t], R[t]
        if x < 0 or y < 0:
            state = OPEN
        elif x != y:
            return VIOLATED, watch
    return state, watch


def rank_mod_p(vals, n, p):
    """Rank over GF(p) of the matrix stored in ``vals[:n*n]`` (row-major)."""
    m = [[vals[i * n + t] for t in range(n)] for i in range(n)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        for i in range(n):
            if i != r and m[i][c]:
                f = m[i][c] * inv % p
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
    return r


def run(
    n,
    p,
    values,
    order,
    n_alpha_free,
    ops,
    inst_start,
    inst_end,
    inst_lhs,
    inst_rhs,
    n_universal,
    group_start,
    group_end,
    nregs,
    alpha_rank,
    find_first,
    budget,
    leaf_hook=None,
    progress=None,
):
    """Enumerate completions of ``values`` satisfying the compiled constraints.

    ``alpha_rank`` (``-1`` for none) is checked as soon as alpha is complete.
    Returns ``(status, count, nodes, model)`` where ``model`` is the first
    satisfying assignment (or ``None``).
    """
    vals = [int(v) for v in values]
    order = [int(v) for v in order]
    ops = [tuple(int(x) for x in row) for row in ops]
    inst_start = [int(v) for v in inst_start]
    inst_end = [int(v) for v in inst_end]
    inst_lhs = [int(v) for v in inst_lhs]
    inst_rhs = [int(v) for v in inst_rhs]
    group_start = [int(v) for v in group_start]
    group_end = [int(v) for v in group_end]
    regs = [[0] * n for _ in range(max(nregs, 1))]
    nfree = len(order)
    pos = [NEVER] * len(vals)
    for i, var in enumerate(order):
        pos[var] = i
    # an instance last evaluated at depth evaluated_at[k] (still on the current
    # path) is up to date until the position it watches gets assigned
    evaluated_at = [0] * n_universal
    watch = [-1] * n_universal

    def propagate(depth):
        for k in range(n_universal):
            if evaluated_at[k] < depth and watch[k] >= depth:
                continue
            st, w = _eval_instance(k, n, p, vals, pos, ops, inst_start, inst_end, inst_lhs, inst_rhs, regs)
            evaluated_at[k] = depth
            watch[k] = w
            if st == VIOLATED:
                return False
        return True

    def leaf_ok():
        for g in range(len(group_start)):
            hit = False
            for k in range(group_start[g], group_end[g]):
                if _eval_instance(k, n, p, vals, pos, ops, inst_start, inst_end, inst_lhs, inst_rhs, regs)[0] == VIOLATED:
                    hit = True
                    break
            if not hit:
                return False
        if leaf_hook is not None and not leaf_hook(vals):
            return False
        return True

    count = 0
    nodes = 0
    model = None

    if not propagate(0):
        return EXHAUSTED, 0, 0, None
    if n_alpha_free == 0 and alpha_rank != -1 and rank_mod_p(vals, n, p) != alpha_rank:
        return EXHAUSTED, 0, 0, None
    if nfree == 0:
        if leaf_ok():
            return FOUND, 1, 0, list(vals)
        return EXHAUSTED, 0, 0, None

    # cur[d] = value being tried at depth d (0-based depth == position in order)
    cur = [-1] * nfree
    d = 0
    while d >= 0:
        var = order[d]
        nxt = cur[d] + 1
        if nxt >= p:
            cur[d] = -1
            vals[var] = UNKNOWN
            d -= 1
            continue
        if nodes >= budget:
            return BUDGET, count, nodes, model
        cur[d] = nxt
        vals[var] = nxt
        nodes += 1
        if progress is not None and nodes % PROGRESS_EVERY == 0 and not progress(nodes, count):
            return INTERRUPTED, count, nodes, model
        depth = d + 1
        if not propagate(depth):
            continue
        if depth == n_alpha_free and alpha_rank != -1 and rank_mod_p(vals, n, p) != alpha_rank:
            continue
        if depth == nfree:
            if leaf_ok():
                count += 1
                if model is None:
                    model = list(vals)
                if find_first:
                    return FOUND, count, nodes, model
            continue
        d = depth
    return EXHAUSTED, count, nodes, model

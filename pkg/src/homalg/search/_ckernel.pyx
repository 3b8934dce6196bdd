# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled depth-first search kernel. Mirrors ``_pykernel.run`` node for node."""

import numpy as np

from libc.stdint cimport int32_t, int64_t

cdef int EXHAUSTED = 0
cdef int FOUND = 1
cdef int BUDGET = 2
cdef int INTERRUPTED = 3
cdef int64_t UNKNOWN = -1
cdef int64_t NEVER = 1 << 30
cdef int64_t PROGRESS_EVERY = 1 << 14

cdef int VIOLATED = 0
cdef int GROUND = 1
cdef int OPEN = 2


cdef int eval_instance(
    Py_ssize_t k, int n, int64_t p,
    int64_t[::1] vals, int64_t[::1] pos, int32_t[:, ::1] ops,
    int32_t[::1] inst_start, int32_t[::1] inst_end,
    int32_t[::1] inst_lhs, int32_t[::1] inst_rhs,
    int64_t[:, ::1] regs, int64_t* watch,
) noexcept nogil:
    # watch receives the smallest position among unknown entries read
    cdef Py_ssize_t o, t, i, j, idx
    cdef int code, dst, a, b, state
    cdef int64_t acc, ui, vj, s, x, y
    cdef Py_ssize_t nn = n * n
    cdef bint unknown
    watch[0] = NEVER
    for o in range(inst_start[k], inst_end[k]):
        code = ops[o, 0]
        dst = ops[o, 1]
        a = ops[o, 2]
        b = ops[o, 3]
        if code == 0:
            for t in range(n):
                regs[dst, t] = 0
            regs[dst, a] = 1
        elif code == 1:
            for t in range(n):
                acc = 0
                unknown = False
                for i in range(n):
                    ui = regs[a, i]
                    if ui == 0:
                        continue
                    s = vals[i * n + t]
                    if s == 0:
                        continue
                    if ui < 0 or s < 0:
                        if s < 0 and pos[i * n + t] < watch[0]:
                            watch[0] = pos[i * n + t]
                        unknown = True
                        break
                    acc += ui * s
                regs[dst, t] = UNKNOWN if unknown else acc % p
        else:
            for t in range(n):
                acc = 0
                unknown = False
                for i in range(n):
                    ui = regs[a, i]
                    if ui == 0:
                        continue
                    for j in range(n):
                        vj = regs[b, j]
                        if vj == 0:
                            continue
                        idx = nn + (i * n + j) * n + t
                        s = vals[idx]
                        if s == 0:
                            continue
                        if ui < 0 or vj < 0 or s < 0:
                            if s < 0 and pos[idx] < watch[0]:
                                watch[0] = pos[idx]
                            unknown = True
                            break
                        acc += ui * vj * s
                    if unknown:
                        break
                regs[dst, t] = UNKNOWN if unknown else acc % p
    state = GROUND
    a = inst_lhs[k]
    b = inst_rhs[k]
    for t in range(n):
        x = regs[a, t]
        y = regs[b, t]
        if x < 0 or y < 0:
            state = OPEN
        elif x != y:
            return VIOLATED
    return state


cdef int64_t modpow(int64_t b, int64_t e, int64_t p) noexcept nogil:
    cdef int64_t r = 1
    b %= p
    while e > 0:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


cdef int rank_mod_p(int64_t[::1] vals, int n, int64_t p, int64_t[:, ::1] m) noexcept nogil:
    cdef Py_ssize_t i, t, c, r = 0, piv
    cdef int64_t inv, f, tmp
    for i in range(n):
        for t in range(n):
            m[i, t] = vals[i * n + t]
    for c in range(n):
        piv = -1
        for i in range(r, n):
            if m[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for t in range(n):
                tmp = m[r, t]
                m[r, t] = m[piv, t]
                m[piv, t] = tmp
        inv = modpow(m[r, c], p - 2, p)
        for i in range(n):
            if i != r and m[i, c] != 0:
                f = m[i, c] * inv % p
                for t in range(n):
                    m[i, t] = ((m[i, t] - f * m[r, t]) % p + p) % p
        r += 1
    return <int>r


cdef class _Kernel:
    cdef int n
    cdef int64_t p
    cdef int64_t[::1] vals
    cdef int32_t[:, ::1] ops
    cdef int32_t[::1] inst_start, inst_end, inst_lhs, inst_rhs
    cdef int32_t[::1] group_start, group_end
    cdef int64_t[:, ::1] regs
    cdef int64_t[::1] pos
    cdef int64_t[::1] evaluated_at
    cdef int64_t[::1] watch
    cdef int64_t[:, ::1] scratch
    cdef int64_t alpha_rank
    cdef Py_ssize_t n_universal
    cdef object leaf_hook

    cdef bint propagate(self, int64_t depth) noexcept:
        cdef Py_ssize_t k
        cdef int st
        cdef int64_t w
        for k in range(self.n_universal):
            if self.evaluated_at[k] < depth and self.watch[k] >= depth:
                continue
            st = eval_instance(k, self.n, self.p, self.vals, self.pos, self.ops, self.inst_start, self.inst_end,
                               self.inst_lhs, self.inst_rhs, self.regs, &w)
            self.evaluated_at[k] = depth
            self.watch[k] = w
            if st == VIOLATED:
                return False
        return True

    cdef bint alpha_ok(self) noexcept:
        if self.alpha_rank == -1:
            return True
        return rank_mod_p(self.vals, self.n, self.p, self.scratch) == self.alpha_rank

    cdef bint leaf_ok(self) except -1:
        cdef Py_ssize_t g, k
        cdef bint hit
        cdef int64_t w
        for g in range(self.group_start.shape[0]):
            hit = False
            for k in range(self.group_start[g], self.group_end[g]):
                if eval_instance(k, self.n, self.p, self.vals, self.pos, self.ops, self.inst_start, self.inst_end,
                                 self.inst_lhs, self.inst_rhs, self.regs, &w) == VIOLATED:
                    hit = True
                    break
            if not hit:
                return False
        if self.leaf_hook is not None and not self.leaf_hook(np.asarray(self.vals)):
            return False
        return True


def run(
    int n,
    int64_t p,
    values,
    order,
    Py_ssize_t n_alpha_free,
    ops,
    inst_start,
    inst_end,
    inst_lhs,
    inst_rhs,
    Py_ssize_t n_universal,
    group_start,
    group_end,
    Py_ssize_t nregs,
    int64_t alpha_rank,
    bint find_first,
    int64_t budget,
    leaf_hook=None,
    progress=None,
):
    """Compiled equivalent of ``_pykernel.run``; same arguments and return value."""
    cdef _Kernel K = _Kernel()
    K.n = n
    K.p = p
    K.vals = np.array(values, dtype=np.int64)
    K.ops = np.ascontiguousarray(np.asarray(ops, dtype=np.int32).reshape(-1, 4))
    K.inst_start = np.ascontiguousarray(inst_start, dtype=np.int32)
    K.inst_end = np.ascontiguousarray(inst_end, dtype=np.int32)
    K.inst_lhs = np.ascontiguousarray(inst_lhs, dtype=np.int32)
    K.inst_rhs = np.ascontiguousarray(inst_rhs, dtype=np.int32)
    K.group_start = np.ascontiguousarray(group_start, dtype=np.int32)
    K.group_end = np.ascontiguousarray(group_end, dtype=np.int32)
    K.regs = np.zeros((max(nregs, 1), n), dtype=np.int64)
    K.n_universal = n_universal
    K.evaluated_at = np.zeros(max(n_universal, 1), dtype=np.int64)
    K.watch = np.full(max(n_universal, 1), -1, dtype=np.int64)
    K.leaf_hook = leaf_hook
    K.alpha_rank = alpha_rank
    K.scratch = np.zeros((n, n), dtype=np.int64)

    cdef int64_t[::1] order_v = np.ascontiguousarray(order, dtype=np.int64)
    cdef Py_ssize_t nfree = order_v.shape[0]
    cdef Py_ssize_t q
    K.pos = np.full(K.vals.shape[0], NEVER, dtype=np.int64)
    for q in range(nfree):
        K.pos[order_v[q]] = q
    cdef int64_t[::1] cur = np.full(max(nfree, 1), -1, dtype=np.int64)
    cdef int64_t count = 0
    cdef int64_t nodes = 0
    cdef Py_ssize_t d, depth
    cdef int64_t var, nxt
    model = None

    if not K.propagate(0):
        return EXHAUSTED, 0, 0, None
    if n_alpha_free == 0 and not K.alpha_ok():
        return EXHAUSTED, 0, 0, None
    if nfree == 0:
        if K.leaf_ok():
            return FOUND, 1, 0, np.asarray(K.vals).tolist()
        return EXHAUSTED, 0, 0, None

    d = 0
    while d >= 0:
        var = order_v[d]
        nxt = cur[d] + 1
        if nxt >= p:
            cur[d] = -1
            K.vals[var] = UNKNOWN
            d -= 1
            continue
        if nodes >= budget:
            return BUDGET, count, nodes, model
        cur[d] = nxt
        K.vals[var] = nxt
        nodes += 1
        if progress is not None and nodes % PROGRESS_EVERY == 0 and not progress(nodes, count):
            return INTERRUPTED, count, nodes, model
        depth = d + 1
        if not K.propagate(depth):
            continue
        if depth == n_alpha_free and not K.alpha_ok():
            continue
        if depth == nfree:
            if K.leaf_ok():
                count += 1
                if model is None:
                    model = np.asarray(K.vals).tolist()
                if find_first:
                    return FOUND, count, nodes, model
            continue
        d = depth
    return EXHAUSTED, count, nodes, model

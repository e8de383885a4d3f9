# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: bit-sliced simulation and ASAP scheduling.

Same signatures and results as :mod:`grovercost._kernels_py`.  Lanes are
packed into 64-bit words, so a batch of ``lanes`` basis states costs
``ceil(lanes / 64)`` word operations per gate.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int8_t, int32_t, int64_t, uint64_t

cnp.import_array()

cdef enum:
    _X = 0
    _CNOT = 1
    _CCNOT = 2
    _AND = 3
    _AND_ADJ = 4
    _SWAP = 5
    _MEASURE = 6
    _ALLOC = 7
    _RELEASE = 8
    _REWIRE = 9

cdef enum:
    _P_CLIFF1 = 0
    _P_T = 1
    _P_CNOT = 2
    _P_MEAS = 3


def _pack(init, Py_ssize_t n_words):
    cdef Py_ssize_t n = len(init)
    st = np.zeros((n, n_words), dtype=np.uint64)
    cdef uint64_t[:, ::1] s = st
    cdef Py_ssize_t w, j
    mask = (1 << 64) - 1
    for w in range(n):
        v = init[w]
        j = 0
        while v and j < n_words:
            s[w, j] = v & mask
            v >>= 64
            j += 1
    return st


def _unpack(cnp.ndarray st):
    cdef uint64_t[:, ::1] s = st
    cdef Py_ssize_t n = s.shape[0], n_words = s.shape[1], w, j
    out = []
    for w in range(n):
        v = 0
        for j in range(n_words - 1, -1, -1):
            v = (v << 64) | int(s[w, j])
        out.append(v)
    return out


def simulate(op, a, b, c, init, lanes):
    cdef Py_ssize_t n_words = max(1, (lanes + 63) // 64)
    cdef cnp.ndarray st_arr = _pack(init, n_words)
    cdef uint64_t[:, ::1] s = st_arr
    cdef const int8_t[::1] vop = np.ascontiguousarray(op, dtype=np.int8)
    cdef const int32_t[::1] va = np.ascontiguousarray(a, dtype=np.int32)
    cdef const int32_t[::1] vb = np.ascontiguousarray(b, dtype=np.int32)
    cdef const int32_t[::1] vc = np.ascontiguousarray(c, dtype=np.int32)
    cdef Py_ssize_t n = vop.shape[0], i, j
    cdef int32_t x, y, t
    cdef int k
    cdef uint64_t tmp, bad
    cdef uint64_t last_mask = (~<uint64_t>0) if lanes % 64 == 0 else ((<uint64_t>1 << (lanes % 64)) - 1)
    viol = []
    err = None
    for i in range(n):
        k = vop[i]
        if k == _CNOT:
            x = va[i]; y = vb[i]
            for j in range(n_words):
                s[y, j] ^= s[x, j]
        elif k == _X:
            x = va[i]
            for j in range(n_words - 1):
                s[x, j] = ~s[x, j]
            s[x, n_words - 1] ^= last_mask
        elif k == _CCNOT:
            x = va[i]; y = vb[i]; t = vc[i]
            for j in range(n_words):
                s[t, j] ^= s[x, j] & s[y, j]
        elif k == _AND:
            x = va[i]; y = vb[i]; t = vc[i]
            bad = 0
            for j in range(n_words):
                bad |= s[t, j]
            if bad:
                err = (i, t)
                break
            for j in range(n_words):
                s[t, j] = s[x, j] & s[y, j]
        elif k == _AND_ADJ:
            x = va[i]; y = vb[i]; t = vc[i]
            bad = 0
            for j in range(n_words):
                bad |= s[t, j] ^ (s[x, j] & s[y, j])
            if bad:
                err = (i, t)
                break
            for j in range(n_words):
                s[t, j] = 0
        elif k == _SWAP or k == _REWIRE:
            x = va[i]; y = vb[i]
            for j in range(n_words):
                tmp = s[x, j]
                s[x, j] = s[y, j]
                s[y, j] = tmp
        elif k == _ALLOC:
            x = va[i]
            for j in range(n_words):
                s[x, j] = 0
        elif k == _RELEASE:
            x = va[i]
            bad = 0
            for j in range(n_words):
                bad |= s[x, j]
            if bad:
                viol.append((i, x))
    return _unpack(st_arr), viol, err


def schedule(op, a, b, c, n_wires, initial, templates, n_anc, slot_counts, reuse):
    cdef const int8_t[::1] vop = np.ascontiguousarray(op, dtype=np.int8)
    cdef const int32_t[::1] va = np.ascontiguousarray(a, dtype=np.int32)
    cdef const int32_t[::1] vb = np.ascontiguousarray(b, dtype=np.int32)
    cdef const int32_t[::1] vc = np.ascontiguousarray(c, dtype=np.int32)
    cdef Py_ssize_t n = vop.shape[0], i, j, r

    # templates flattened: rows of (cls, s0, s1, dep, tw), offsets per opcode
    n_codes = len(templates)
    offs = np.zeros(n_codes + 1, dtype=np.int64)
    for code in range(n_codes):
        offs[code + 1] = offs[code] + len(templates[code])
    flat = np.zeros((max(1, int(offs[n_codes])), 5), dtype=np.int32)
    for code in range(n_codes):
        if len(templates[code]):
            flat[offs[code]:offs[code + 1]] = templates[code]
    cdef const int64_t[::1] voff = offs
    cdef const int32_t[:, ::1] tm = flat
    cdef const int32_t[::1] vanc = np.ascontiguousarray(n_anc, dtype=np.int32)
    cdef const int32_t[::1] vslots = np.ascontiguousarray(slot_counts, dtype=np.int32)
    cdef bint use_pool = bool(reuse)

    # physical qubits: ready times and a free stack, grown on demand
    cdef Py_ssize_t cap = 1024
    ready_arr = np.zeros(cap, dtype=np.int64)
    tready_arr = np.zeros(cap, dtype=np.int64)
    free_arr = np.zeros(cap, dtype=np.int64)
    cdef int64_t[::1] ready = ready_arr
    cdef int64_t[::1] tready = tready_arr
    cdef int64_t[::1] free = free_arr
    cdef Py_ssize_t n_phys = 0, n_free = 0
    phys_arr = np.full(max(1, n_wires), -1, dtype=np.int64)
    cdef int64_t[::1] phys = phys_arr

    cdef int64_t counts[4]
    counts[0] = counts[1] = counts[2] = counts[3] = 0
    cdef int64_t depth = 0, tdepth = 0, start, tstart
    cdef int64_t n_live, width
    cdef int64_t slot[16]
    cdef int k, na, extra, cls, s0, s1, dep, tw
    cdef int64_t q0, q1, qd, tmpq

    for w in initial:
        if use_pool and n_free:
            n_free -= 1
            phys[w] = free[n_free]
        else:
            phys[w] = n_phys
            n_phys += 1
    if n_phys >= cap:
        cap = 2 * n_phys + 1024
        ready_arr = np.resize(ready_arr, cap); ready_arr[:] = 0; ready = ready_arr
        tready_arr = np.resize(tready_arr, cap); tready_arr[:] = 0; tready = tready_arr
        free_arr = np.resize(free_arr, cap); free = free_arr
    n_live = len(initial)
    width = n_live

    for i in range(n):
        k = vop[i]
        # room for the up-to-16 qubits one event can create or free
        if n_phys + 16 >= cap or n_free + 16 >= cap:
            cap *= 2
            ready_arr = np.concatenate([ready_arr, np.zeros(cap - ready_arr.shape[0], np.int64)]); ready = ready_arr
            tready_arr = np.concatenate([tready_arr, np.zeros(cap - tready_arr.shape[0], np.int64)]); tready = tready_arr
            free_arr = np.concatenate([free_arr, np.zeros(cap - free_arr.shape[0], np.int64)]); free = free_arr
        if k == _RELEASE:
            if use_pool:
                free[n_free] = phys[va[i]]
                n_free += 1
            phys[va[i]] = -1
            n_live -= 1
            continue
        if k == _REWIRE:
            tmpq = phys[va[i]]
            phys[va[i]] = phys[vb[i]]
            phys[vb[i]] = tmpq
            continue
        if k == _ALLOC:
            if use_pool and n_free:
                n_free -= 1
                phys[va[i]] = free[n_free]
            else:
                phys[va[i]] = n_phys
                n_phys += 1
            n_live += 1
            if n_live > width:
                width = n_live
            continue
        na = vslots[k]
        slot[0] = phys[va[i]]
        if na > 1:
            slot[1] = phys[vb[i]]
        if na > 2:
            slot[2] = phys[vc[i]]
        extra = vanc[k]
        for j in range(extra):
            if use_pool and n_free:
                n_free -= 1
                slot[na + j] = free[n_free]
            else:
                slot[na + j] = n_phys
                n_phys += 1
        if n_live + extra > width:
            width = n_live + extra
        for r in range(voff[k], voff[k + 1]):
            cls = tm[r, 0]; s0 = tm[r, 1]; s1 = tm[r, 2]; dep = tm[r, 3]; tw = tm[r, 4]
            q0 = slot[s0]
            start = ready[q0]
            tstart = tready[q0]
            if s1 >= 0:
                q1 = slot[s1]
                if ready[q1] > start:
                    start = ready[q1]
                if tready[q1] > tstart:
                    tstart = tready[q1]
            if dep >= 0:
                qd = slot[dep]
                if ready[qd] > start:
                    start = ready[qd]
                if tready[qd] > tstart:
                    tstart = tready[qd]
            start += 1
            tstart += tw
            ready[q0] = start
            tready[q0] = tstart
            if s1 >= 0:
                ready[q1] = start
                tready[q1] = tstart
            if start > depth:
                depth = start
            if tstart > tdepth:
                tdepth = tstart
            counts[cls] += 1
        if use_pool:
            for j in range(extra):
                free[n_free] = slot[na + j]
                n_free += 1
    return (int(counts[_P_CNOT]), int(counts[_P_CLIFF1]), int(counts[_P_T]), int(counts[_P_MEAS]),
            int(tdepth), int(depth), int(width))

"""Pure-Python kernels: bit-sliced simulation and ASAP scheduling.

Both functions walk the raw event arrays produced by
:meth:`grovercost.circuit.Circuit.arrays`.  The compiled module
``grovercost._kernels`` implements the same two functions with the same
signatures; :mod:`grovercost._backend` picks one at import time.
"""

from __future__ import annotations

# opcodes (see circuit.py)
_X, _CNOT, _CCNOT, _AND, _AND_ADJ, _SWAP, _MEASURE, _ALLOC, _RELEASE, _REWIRE = range(10)

# primitive classes (see gadgets.py)
_P_CLIFF1, _P_T, _P_CNOT, _P_MEAS = range(4)


def simulate(op, a, b, c, init, lanes):
    """Run the stream on ``lanes`` parallel basis states.

    ``init[w]`` is an int whose bit ``l`` is the value of wire ``w`` in lane
    ``l``.  Returns ``(state, violations, error)`` where ``violations`` lists
    ``(event_index, wire)`` for every release of a nonzero wire and
    ``error`` is ``None`` or ``(event_index, wire)`` for the first AND/AND_ADJ
    whose target assertion failed (simulation stops there).
    """
    st = list(init)
    full = (1 << lanes) - 1
    viol = []
    op = op.tolist()
    a = a.tolist()
    b = b.tolist()
    c = c.tolist()
    for i in range(len(op)):
        k = op[i]
        if k == _CNOT:
            st[b[i]] ^= st[a[i]]
        elif k == _X:
            st[a[i]] ^= full
        elif k == _CCNOT:
            st[c[i]] ^= st[a[i]] & st[b[i]]
        elif k == _AND:
            t = c[i]
            if st[t]:
                return st, viol, (i, t)
            st[t] = st[a[i]] & st[b[i]]
        elif k == _AND_ADJ:
            t = c[i]
            if st[t] ^ (st[a[i]] & st[b[i]]):
                return st, viol, (i, t)
            st[t] = 0
        elif k == _SWAP or k == _REWIRE:
            x, y = a[i], b[i]
            st[x], st[y] = st[y], st[x]
        elif k == _ALLOC:
            st[a[i]] = 0
        elif k == _RELEASE:
            if st[a[i]]:
                viol.append((i, a[i]))
        # MEASURE reads a classical bit: nothing to do
    return st, viol, None


def schedule(op, a, b, c, n_wires, initial, templates, n_anc, slot_counts, reuse):
    """ASAP-schedule the stream after inlining each gate's gadget.

    ``templates[k]`` lists ``(cls, q0, q1, dep, tw)`` rows for opcode ``k``:
    ``q0``/``q1`` are template slots (operands first, then transient ancillas;
    ``q1 = -1`` for one-qubit primitives), ``dep`` is a slot whose last
    measurement must precede the primitive (classically controlled
    corrections) or -1, and ``tw`` is 1 for T/T-dagger.  Returns the tuple
    ``(cnot, cliff1, t, meas, t_depth, full_depth, width)``.
    """
    tmpl = [t.tolist() for t in templates]
    n_anc = list(n_anc)
    # physical qubit bookkeeping
    phys = [-1] * n_wires
    ready = []
    tready = []
    free = []

    def new_qubit():
        if reuse and free:
            return free.pop()
        ready.append(0)
        tready.append(0)
        return len(ready) - 1

    for w in initial:
        phys[w] = new_qubit()
    n_live = len(initial)
    width = n_live
    counts = [0, 0, 0, 0]
    depth = 0
    tdepth = 0
    op = op.tolist()
    a = a.tolist()
    b = b.tolist()
    c = c.tolist()
    slot = [0] * 16
    for i in range(len(op)):
        k = op[i]
        if k == _ALLOC:
            phys[a[i]] = new_qubit()
            n_live += 1
            if n_live > width:
                width = n_live
            continue
        if k == _RELEASE:
            free.append(phys[a[i]])
            phys[a[i]] = -1
            n_live -= 1
            continue
        if k == _REWIRE:
            x, y = a[i], b[i]
            phys[x], phys[y] = phys[y], phys[x]
            continue
        na = slot_counts[k]
        slot[0] = phys[a[i]]
        if na > 1:
            slot[1] = phys[b[i]]
        if na > 2:
            slot[2] = phys[c[i]]
        extra = n_anc[k]
        for j in range(extra):
            slot[na + j] = new_qubit()
        if n_live + extra > width:
            width = n_live + extra
        for cls, s0, s1, dep, tw in tmpl[k]:
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
        for j in range(extra):
            free.append(slot[na + j])
    return counts[_P_CNOT], counts[_P_CLIFF1], counts[_P_T], counts[_P_MEAS], tdepth, depth, width

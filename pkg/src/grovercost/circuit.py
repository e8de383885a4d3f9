"""Gate-level intermediate representation for reversible circuits.

A :class:`Circuit` is a flat event stream.  Every event is an opcode plus up
to three wire operands, stored in compact typed arrays so that circuits with
millions of gates stay cheap to build, copy and hand to the numeric kernels.
Besides the quantum gates the stream carries allocation, release and rewire
markers, so simulation and estimation walk the same sequence.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

# opcodes shared with the kernels
X, CNOT, CCNOT, AND, AND_ADJ, SWAP, MEASURE, ALLOC, RELEASE, REWIRE = range(10)

KIND_NAMES = ("X", "CNOT", "CCNOT", "AND", "AND_ADJ", "SWAP", "MEASURE", "ALLOC", "RELEASE", "REWIRE")
KIND_CODES = {name: code for code, name in enumerate(KIND_NAMES)}
ARITY = (1, 2, 3, 3, 3, 2, 1, 1, 1, 2)
GATE_KINDS = KIND_NAMES[:7]

# inverse opcode; MEASURE has none
_INVERSE = np.array([X, CNOT, CCNOT, AND_ADJ, AND, SWAP, -1, RELEASE, ALLOC, REWIRE], dtype=np.int8)


class CircuitError(Exception):
    """Base class for circuit construction errors."""


class MalformedGateError(CircuitError):
    """Wrong arity, repeated operand, or an operand that is not allocated."""


class NotInvertibleError(CircuitError):
    """Raised when taking the adjoint of a stream containing a bare MEASURE."""


@dataclass(frozen=True)
class Gate:
    kind: str
    wires: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in KIND_CODES:
            raise MalformedGateError(f"unknown gate kind {self.kind!r}")
        if len(self.wires) != ARITY[KIND_CODES[self.kind]]:
            raise MalformedGateError(f"{self.kind} takes {ARITY[KIND_CODES[self.kind]]} operands, got {len(self.wires)}")
        if len(set(self.wires)) != len(self.wires):
            raise MalformedGateError(f"{self.kind} has a repeated operand: {self.wires}")
        if any(w < 0 for w in self.wires):
            raise MalformedGateError(f"negative wire id in {self.wires}")


class Circuit:
    """Mutable builder for a reversible circuit.

    ``Circuit(n)`` starts with ``n`` live input wires numbered ``0..n-1``.
    Fresh wires always receive new ids, so a released id is never handed out
    again; width is tracked separately as the high-water mark of live wires.
    Named registers (``key``, ``msg``, ``ct`` ...) can be attached for callers
    that need to find their data again.
    """

    def __init__(self, n_inputs: int = 0):
        self._op = array("b")
        self._a = array("i")
        self._b = array("i")
        self._c = array("i")
        self._live = bytearray(n_inputs)
        for i in range(n_inputs):
            self._live[i] = 1
        self._n_live = n_inputs
        self._peak = n_inputs
        self.initial_width = n_inputs
        self.inputs: list[int] = list(range(n_inputs))
        self.outputs: list[int] = []
        self.registers: dict[str, list[int]] = {}

    # ------------------------------------------------------------------ state

    @property
    def num_wires(self) -> int:
        """Number of wire ids ever handed out."""
        return len(self._live)

    @property
    def width(self) -> int:
        """High-water mark of simultaneously live wires (IR level, no gadget ancillas)."""
        return self._peak

    @property
    def n_live(self) -> int:
        return self._n_live

    def is_live(self, w: int) -> bool:
        return 0 <= w < len(self._live) and self._live[w] == 1

    def live_wires(self) -> list[int]:
        return [w for w, v in enumerate(self._live) if v]

    def __len__(self) -> int:
        return len(self._op)

    # ------------------------------------------------------------ allocation

    def allocate(self, n: int) -> list[int]:
        if n < 1:
            raise ValueError("allocate needs n >= 1")
        first = len(self._live)
        self._live.extend(b"\x01" * n)
        wires = list(range(first, first + n))
        self._op.extend([ALLOC] * n)
        self._a.extend(wires)
        self._b.extend([0] * n)
        self._c.extend([0] * n)
        self._n_live += n
        if self._n_live > self._peak:
            self._peak = self._n_live
        return wires

    def release(self, *wires: int | Sequence[int]) -> None:
        for w in _flatten(wires):
            self._check_live(w, "RELEASE")
            self._live[w] = 0
            self._n_live -= 1
            self._push(RELEASE, w, 0, 0)

    # ----------------------------------------------------------------- gates

    def append(self, gate: Gate) -> None:
        code = KIND_CODES[gate.kind]
        if code == ALLOC:
            raise MalformedGateError("use allocate() to add wires")
        if code == RELEASE:
            self.release(gate.wires[0])
            return
        for w in gate.wires:
            self._check_live(w, gate.kind)
        self._push(code, *(tuple(gate.wires) + (0, 0))[:3])

    def x(self, w: int) -> None:
        self._check_live(w, "X")
        self._push(X, w, 0, 0)

    def cnot(self, c: int, t: int) -> None:
        self._check_2(c, t, "CNOT")
        self._push(CNOT, c, t, 0)

    def swap(self, a: int, b: int) -> None:
        self._check_2(a, b, "SWAP")
        self._push(SWAP, a, b, 0)

    def ccnot(self, a: int, b: int, t: int) -> None:
        self._check_3(a, b, t, "CCNOT")
        self._push(CCNOT, a, b, t)

    def and_(self, a: int, b: int, t: int) -> None:
        """t <- a AND b, with t known to start in zero."""
        self._check_3(a, b, t, "AND")
        self._push(AND, a, b, t)

    def and_adj(self, a: int, b: int, t: int) -> None:
        """Inverse of :meth:`and_`: returns t (holding a AND b) to zero."""
        self._check_3(a, b, t, "AND_ADJ")
        self._push(AND_ADJ, a, b, t)

    def measure(self, w: int) -> None:
        self._check_live(w, "MEASURE")
        self._push(MEASURE, w, 0, 0)

    def rewire(self, a: int, b: int) -> None:
        """Exchange the roles of two wires at zero cost."""
        self._check_2(a, b, "REWIRE")
        self._push(REWIRE, a, b, 0)

    def permute(self, wires: Sequence[int], perm: Sequence[int]) -> None:
        """Rewire so that afterwards ``wires[i]`` holds what ``wires[perm[i]]`` held."""
        cur = list(range(len(wires)))  # cur[i]: original slot now held by position i
        pos = list(range(len(wires)))  # pos[s]: position holding original slot s
        for i, want in enumerate(perm):
            j = pos[want]
            if j != i:
                self.rewire(wires[i], wires[j])
                si, sj = cur[i], cur[j]
                cur[i], cur[j] = sj, si
                pos[si], pos[sj] = j, i

    def cnots(self, controls: Sequence[int], targets: Sequence[int]) -> None:
        """Append many CNOTs at once; used by the linear-map synthesizers."""
        ctl = np.asarray(controls, dtype=np.int64)
        tgt = np.asarray(targets, dtype=np.int64)
        if ctl.shape != tgt.shape:
            raise MalformedGateError("control and target lists differ in length")
        if ctl.size == 0:
            return
        if np.any(ctl == tgt):
            raise MalformedGateError("CNOT with control equal to target")
        live = np.frombuffer(bytes(self._live), dtype=np.uint8)
        hi = max(int(ctl.max()), int(tgt.max()))
        lo = min(int(ctl.min()), int(tgt.min()))
        if lo < 0 or hi >= live.size or not (live[ctl].all() and live[tgt].all()):
            raise MalformedGateError("CNOT on an unallocated wire")
        n = ctl.size
        self._op.frombytes(np.full(n, CNOT, dtype=np.int8).tobytes())
        self._a.frombytes(ctl.astype(np.int32).tobytes())
        self._b.frombytes(tgt.astype(np.int32).tobytes())
        self._c.frombytes(np.zeros(n, dtype=np.int32).tobytes())

    # --------------------------------------------------------------- adjoint

    def mark(self) -> int:
        """Current stream position, for use with :meth:`append_adjoint`."""
        return len(self._op)

    def append_adjoint(self, start: int = 0, stop: int | None = None) -> None:
        """Append the inverse of events ``start:stop`` of this circuit."""
        stop = len(self._op) if stop is None else stop
        op, a, b, c = self._slice(start, stop)
        inv = _INVERSE[op[::-1]]
        if np.any(inv < 0):
            raise NotInvertibleError("stream contains a bare MEASURE")
        self._extend_raw(inv, a[::-1], b[::-1], c[::-1])

    def adjoint(self) -> "Circuit":
        """A new circuit holding the inverse of this one.

        The result starts from the live set this circuit ends with, ends with
        the live set this one starts from, and swaps the roles of inputs and
        outputs.
        """
        inv = Circuit()
        inv._live = bytearray(self._live)
        inv._n_live = self._n_live
        inv._peak = self._n_live
        inv.initial_width = self._n_live
        inv.inputs = list(self.outputs) if self.outputs else self.live_wires()
        inv.outputs = list(self.inputs)
        inv.registers = {k: list(v) for k, v in self.registers.items()}
        op, a, b, c = self._slice(0, len(self._op))
        invop = _INVERSE[op[::-1]]
        if np.any(invop < 0):
            raise NotInvertibleError("stream contains a bare MEASURE")
        inv._extend_raw(invop, a[::-1], b[::-1], c[::-1])
        return inv

    def extend(self, other: "Circuit") -> None:
        """Append every event of ``other``; wire ids are shared, not remapped."""
        op, a, b, c = other._slice(0, len(other._op))
        self._extend_raw(op, a, b, c)

    def append_circuit(self, sub: "Circuit", wires: Sequence[int]) -> list[int]:
        """Stamp ``sub`` onto this circuit.

        ``sub.inputs`` are bound to ``wires`` in order and every wire ``sub``
        allocates gets a fresh id here.  Returns the wires bound to
        ``sub.outputs`` (empty if it declares none).
        """
        if len(wires) != len(sub.inputs):
            raise MalformedGateError(f"sub-circuit takes {len(sub.inputs)} wires, got {len(wires)}")
        if len(set(wires)) != len(wires):
            raise MalformedGateError("repeated wire binding")
        for w in wires:
            self._check_live(w, "sub-circuit")
        op, a, b, c = sub.arrays()
        mapping = np.full(max(sub.num_wires, 1), -1, dtype=np.int64)
        mapping[np.asarray(sub.inputs, dtype=np.int64)] = np.asarray(wires, dtype=np.int64)
        allocs = a[op == ALLOC].astype(np.int64)
        base = len(self._live)
        mapping[allocs] = np.arange(base, base + allocs.size)
        if allocs.size:
            self._live.extend(bytes(allocs.size))
        arity = np.asarray(ARITY, dtype=np.int8)[op]
        ma = mapping[a]
        mb = np.where(arity > 1, mapping[b], 0)
        mc = np.where(arity > 2, mapping[c], 0)
        if np.any(ma < 0) or np.any(mb < 0) or np.any(mc < 0):
            raise MalformedGateError("sub-circuit uses a wire that is neither input nor allocated")
        self._extend_raw(op, ma, mb, mc)
        return [int(mapping[w]) for w in sub.outputs]

    def copy(self) -> "Circuit":
        dup = Circuit()
        dup._op = array("b", self._op)
        dup._a = array("i", self._a)
        dup._b = array("i", self._b)
        dup._c = array("i", self._c)
        dup._live = bytearray(self._live)
        dup._n_live = self._n_live
        dup._peak = self._peak
        dup.initial_width = self.initial_width
        dup.inputs = list(self.inputs)
        dup.outputs = list(self.outputs)
        dup.registers = {k: list(v) for k, v in self.registers.items()}
        return dup

    # ----------------------------------------------------------------- views

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Zero-copy numpy views (op:int8, a, b, c:int32) of the event stream."""
        return (
            np.frombuffer(self._op, dtype=np.int8) if len(self._op) else np.zeros(0, np.int8),
            np.frombuffer(self._a, dtype=np.int32) if len(self._a) else np.zeros(0, np.int32),
            np.frombuffer(self._b, dtype=np.int32) if len(self._b) else np.zeros(0, np.int32),
            np.frombuffer(self._c, dtype=np.int32) if len(self._c) else np.zeros(0, np.int32),
        )

    @property
    def initial_live(self) -> list[int]:
        """Wires live before the first event (the circuit's inputs)."""
        return list(self.inputs)

    def events(self) -> Iterator[Gate]:
        """Every event, including ALLOC/RELEASE/REWIRE, as :class:`Gate` values."""
        for i in range(len(self._op)):
            code = self._op[i]
            operands = (self._a[i], self._b[i], self._c[i])[: ARITY[code]]
            yield Gate(KIND_NAMES[code], operands)

    def gates(self) -> Iterator[Gate]:
        """Quantum gates only."""
        for g in self.events():
            if g.kind in GATE_KINDS:
                yield g

    def counts(self) -> dict[str, int]:
        op = self.arrays()[0]
        binc = np.bincount(op.astype(np.int64), minlength=len(KIND_NAMES)) if op.size else np.zeros(len(KIND_NAMES), int)
        return {name: int(binc[code]) for code, name in enumerate(KIND_NAMES)}

    def validate(self) -> None:
        """Replay the whole stream and check every operand is live when used."""
        live = bytearray(len(self._live))
        for w in self.inputs:
            live[w] = 1
        for i, g in enumerate(self.events()):
            code = KIND_CODES[g.kind]
            if code == ALLOC:
                if live[g.wires[0]]:
                    raise MalformedGateError(f"event {i}: wire {g.wires[0]} allocated twice")
                live[g.wires[0]] = 1
                continue
            for w in g.wires:
                if not live[w]:
                    raise MalformedGateError(f"event {i}: {g.kind} on unallocated wire {w}")
            if code == RELEASE:
                live[g.wires[0]] = 0

    # ------------------------------------------------------------ text dump

    def dump(self) -> str:
        lines = [f"INPUTS {' '.join(map(str, self.inputs))}".rstrip()]
        for g in self.events():
            lines.append(" ".join([g.kind, *map(str, g.wires)]))
        if self.outputs:
            lines.append(f"OUTPUTS {' '.join(map(str, self.outputs))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Circuit":
        """Inverse of :meth:`dump`.  Each ALLOC line names the wire id it creates."""
        circ = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            kind, *rest = line.split()
            try:
                nums = [int(t) for t in rest]
            except ValueError:
                raise MalformedGateError(f"line {lineno}: bad operand in {raw!r}") from None
            if kind == "INPUTS":
                for w in nums:
                    circ._ensure(w)
                    circ._live[w] = 1
                circ.inputs = nums
                circ._n_live = circ.initial_width = circ._peak = len(nums)
            elif kind == "OUTPUTS":
                circ.outputs = nums
            elif kind == "ALLOC":
                if len(nums) != 1:
                    raise MalformedGateError(f"line {lineno}: ALLOC takes one wire id")
                w = nums[0]
                circ._ensure(w)
                if circ._live[w]:
                    raise MalformedGateError(f"line {lineno}: wire {w} already allocated")
                circ._live[w] = 1
                circ._n_live += 1
                circ._peak = max(circ._peak, circ._n_live)
                circ._push(ALLOC, w, 0, 0)
            else:
                if kind not in KIND_CODES:
                    raise MalformedGateError(f"line {lineno}: unknown kind {kind!r}")
                circ.append(Gate(kind, tuple(nums)))
        return circ

    # -------------------------------------------------------------- helpers

    def _ensure(self, w: int) -> None:
        if w >= len(self._live):
            self._live.extend(bytes(w + 1 - len(self._live)))

    def _check_live(self, w: int, kind: str) -> None:
        if not (0 <= w < len(self._live)) or not self._live[w]:
            raise MalformedGateError(f"{kind} on unallocated wire {w}")

    def _check_2(self, a: int, b: int, kind: str) -> None:
        if a == b:
            raise MalformedGateError(f"{kind} has a repeated operand: ({a}, {b})")
        self._check_live(a, kind)
        self._check_live(b, kind)

    def _check_3(self, a: int, b: int, t: int, kind: str) -> None:
        if a == b or a == t or b == t:
            raise MalformedGateError(f"{kind} has a repeated operand: ({a}, {b}, {t})")
        self._check_live(a, kind)
        self._check_live(b, kind)
        self._check_live(t, kind)

    def _push(self, code: int, a: int, b: int, c: int) -> None:
        self._op.append(code)
        self._a.append(a)
        self._b.append(b)
        self._c.append(c)

    def _slice(self, start: int, stop: int):
        op, a, b, c = self.arrays()
        return op[start:stop].copy(), a[start:stop].copy(), b[start:stop].copy(), c[start:stop].copy()

    def _extend_raw(self, op: np.ndarray, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> None:
        # keep the live-set bookkeeping in step with any ALLOC/RELEASE events
        op = np.ascontiguousarray(op, dtype=np.int8)
        a = np.ascontiguousarray(a, dtype=np.int32)
        idx = np.nonzero((op == ALLOC) | (op == RELEASE))[0]
        if idx.size:
            live, n_live, peak = self._live, self._n_live, self._peak
            for i in idx.tolist():
                w = int(a[i])
                if op[i] == ALLOC:
                    if w >= len(live):
                        live.extend(bytes(w + 1 - len(live)))
                    if live[w]:
                        raise MalformedGateError(f"wire {w} allocated twice")
                    live[w] = 1
                    n_live += 1
                    if n_live > peak:
                        peak = n_live
                else:
                    if w >= len(live) or not live[w]:
                        raise MalformedGateError(f"RELEASE of unallocated wire {w}")
                    live[w] = 0
                    n_live -= 1
            self._n_live, self._peak = n_live, peak
        self._op.frombytes(op.tobytes())
        self._a.frombytes(a.tobytes())
        self._b.frombytes(np.ascontiguousarray(b, dtype=np.int32).tobytes())
        self._c.frombytes(np.ascontiguousarray(c, dtype=np.int32).tobytes())


def _flatten(items: Iterable) -> Iterator[int]:
    for it in items:
        if isinstance(it, (list, tuple, range)):
            yield from it
        else:
            yield int(it)

"""Classical bit-level simulation of circuits.

Every gate in the IR maps basis states to basis states, so a circuit can be
run on classical bits.  Inputs are bit-sliced: wire values are integers whose
bit ``l`` belongs to input row ``l``, so a batch of a thousand inputs costs
one pass over the gate stream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import _backend
from .circuit import KIND_NAMES, Circuit


class SimulationError(Exception):
    """Base class for simulation failures."""


class AndTargetNonzeroError(SimulationError):
    """An AND found its target already set, or an AND_ADJ could not clear it."""

    def __init__(self, index: int, kind: str, wire: int):
        super().__init__(f"event {index}: {kind} target wire {wire} is not in the expected state")
        self.index = index
        self.kind = kind
        self.wire = wire


@dataclass
class CleanReport:
    """Released or leftover ancillas that held a 1 in some simulated row."""

    released_dirty: list[tuple[int, int]] = field(default_factory=list)
    live_dirty: list[int] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.released_dirty and not self.live_dirty

    def __bool__(self) -> bool:
        return not self.clean

    def __len__(self) -> int:
        return len(self.released_dirty) + len(self.live_dirty)


def _pack(rows: Sequence[Sequence[int]], width: int) -> list[int]:
    cols = [0] * width
    for lane, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"input row {lane} has {len(row)} bits, expected {width}")
        for j, bit in enumerate(row):
            if bit:
                cols[j] |= 1 << lane
    return cols


def _unpack(cols: Sequence[int], lanes: int) -> list[list[int]]:
    return [[(v >> lane) & 1 for v in cols] for lane in range(lanes)]


def _run(circuit: Circuit, rows: Sequence[Sequence[int]]):
    lanes = len(rows)
    init = [0] * circuit.num_wires
    for w, v in zip(circuit.inputs, _pack(rows, len(circuit.inputs))):
        init[w] = v
    op, a, b, c = circuit.arrays()
    state, viol, err = _backend.simulate(op, a, b, c, init, lanes)
    if err is not None:
        idx, wire = err
        raise AndTargetNonzeroError(idx, KIND_NAMES[int(op[idx])], wire)
    return state, viol


def run_batch(circuit: Circuit, rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Simulate each input row; return the bits on ``circuit.outputs`` per row."""
    if not rows:
        return []
    state, _ = _run(circuit, rows)
    outs = circuit.outputs if circuit.outputs else circuit.inputs
    return _unpack([state[w] for w in outs], len(rows))


def run(circuit: Circuit, bits: Sequence[int]) -> list[int]:
    """Simulate a single basis input; ``bits`` follow ``circuit.inputs``."""
    return run_batch(circuit, [list(bits)])[0]


def run_state(circuit: Circuit, rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Like :func:`run_batch` but return every wire id's final value per row."""
    state, _ = _run(circuit, rows)
    return _unpack(state, len(rows))


def check_clean(circuit: Circuit, inputs: Sequence[Sequence[int]]) -> CleanReport:
    """Report released wires holding 1, and live non-input, non-output wires left at 1."""
    report = CleanReport()
    if not inputs:
        return report
    state, viol = _run(circuit, inputs)
    report.released_dirty = list(viol)
    keep = set(circuit.inputs) | set(circuit.outputs)
    report.live_dirty = [w for w in circuit.live_wires() if w not in keep and state[w]]
    return report

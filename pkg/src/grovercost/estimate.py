"""Clifford+T resource estimation.

Each IR gate is replaced by an explicit gadget over the primitives
{X, H, S, S^dagger, T, T^dagger, CNOT, measurement}, and the resulting
primitive stream is scheduled as soon as possible under full parallelism:
a primitive starts one step after the latest of its qubits became free.
Full depth counts every primitive as one step; T-depth runs the same
recurrence with unit weight for T/T^dagger and zero for everything else.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, fields
from typing import Sequence

import numpy as np

from . import _backend
from .circuit import AND, AND_ADJ, ARITY, CCNOT, CNOT, MEASURE, SWAP, X, Circuit

# primitive classes
CLIFF1, TGATE, CNOT2, MEAS = range(4)


@dataclass(frozen=True)
class Gadget:
    """An explicit Clifford+T body for one IR gate.

    ``body`` rows are ``(name, q0, q1, dep)``; slots ``0..arity-1`` are the IR
    operands and the next ``transient_ancillas`` slots are scratch qubits that
    start and end in zero.  ``dep`` names a slot whose measurement result
    classically controls the primitive (-1 for none).
    """

    name: str
    arity: int
    transient_ancillas: int
    body: tuple[tuple[str, int, int, int], ...]

    def counts(self) -> dict[str, int]:
        out = {"cnot": 0, "one_qubit_clifford": 0, "t": 0, "measure": 0}
        for prim, *_ in self.body:
            out[_CLASS_KEY[_PRIM_CLASS[prim]]] += 1
        return out


_PRIM_CLASS = {"X": CLIFF1, "H": CLIFF1, "S": CLIFF1, "SDG": CLIFF1, "Z": CLIFF1,
               "T": TGATE, "TDG": TGATE, "CNOT": CNOT2, "M": MEAS}
_CLASS_KEY = {CLIFF1: "one_qubit_clifford", TGATE: "t", CNOT2: "cnot", MEAS: "measure"}


def _g(name, q0, q1=-1, dep=-1):
    return (name, q0, q1, dep)


# AND: a, b, t (zero), helper h.  T-depth 1, depth 8, 8 CNOT + 3 one-qubit Cliffords.
AND_GADGET = Gadget("AND", 3, 1, (
    _g("H", 2), _g("CNOT", 0, 3),
    _g("CNOT", 2, 1),
    _g("CNOT", 1, 3), _g("CNOT", 2, 0),
    _g("TDG", 0), _g("TDG", 1), _g("T", 2), _g("T", 3),
    _g("CNOT", 1, 3), _g("CNOT", 2, 0),
    _g("CNOT", 2, 1), _g("CNOT", 0, 3),
    _g("H", 2),
    _g("S", 2),
))

# AND_ADJ: measure t in the X basis, then a classically controlled CZ(a, b)
# written as H(b) CNOT(a, b) H(b), and a controlled X resetting t.  The
# corrections are always counted, which makes this a deterministic upper bound.
AND_ADJ_GADGET = Gadget("AND_ADJ", 3, 0, (
    _g("H", 2),
    _g("M", 2),
    _g("H", 1, -1, 2),
    _g("CNOT", 0, 1, 2),
    _g("H", 1, -1, 2),
    _g("X", 2),
))

# T-depth-1 Toffoli with four scratch qubits and no measurement.  The first
# CNOT layer avoids the target so it runs alongside the opening Hadamard.
_CC_FWD = ((0, 3), (1, 4), (0, 5), (1, 6), (2, 4), (2, 3), (4, 0), (5, 1))
CCNOT_GADGET = Gadget("CCNOT", 3, 4, (
    (_g("H", 2),)
    + tuple(_g("CNOT", c, t) for c, t in _CC_FWD)
    + (_g("T", 0), _g("TDG", 1), _g("T", 2), _g("TDG", 3), _g("TDG", 4), _g("T", 5), _g("T", 6))
    + tuple(_g("CNOT", c, t) for c, t in reversed(_CC_FWD))
    + (_g("H", 2),)
))

X_GADGET = Gadget("X", 1, 0, (_g("X", 0),))
CNOT_GADGET = Gadget("CNOT", 2, 0, (_g("CNOT", 0, 1),))
SWAP_GADGET = Gadget("SWAP", 2, 0, (_g("CNOT", 0, 1), _g("CNOT", 1, 0), _g("CNOT", 0, 1)))
MEASURE_GADGET = Gadget("MEASURE", 1, 0, (_g("M", 0),))

DEFAULT_GADGETS = {
    X: X_GADGET, CNOT: CNOT_GADGET, CCNOT: CCNOT_GADGET, AND: AND_GADGET,
    AND_ADJ: AND_ADJ_GADGET, SWAP: SWAP_GADGET, MEASURE: MEASURE_GADGET,
}


def _compile_templates(gadgets):
    templates, n_anc, slots = [], [], []
    for code in range(len(ARITY)):
        g = gadgets.get(code)
        if g is None:
            templates.append(np.zeros((0, 5), dtype=np.int32))
            n_anc.append(0)
        else:
            rows = [(_PRIM_CLASS[p], q0, q1, dep, 1 if _PRIM_CLASS[p] == TGATE else 0) for p, q0, q1, dep in g.body]
            templates.append(np.array(rows, dtype=np.int32).reshape(-1, 5))
            n_anc.append(g.transient_ancillas)
        slots.append(ARITY[code])
    return templates, np.array(n_anc, dtype=np.int32), np.array(slots, dtype=np.int32)


_DEFAULT_COMPILED = _compile_templates(DEFAULT_GADGETS)


@dataclass(frozen=True)
class ResourceEstimate:
    cnot: int = 0
    one_qubit_clifford: int = 0
    t: int = 0
    measure: int = 0
    t_depth: int = 0
    full_depth: int = 0
    width: int = 0

    @property
    def gates(self) -> int:
        """Total gate count G_G (all primitives including measurements)."""
        return self.cnot + self.one_qubit_clifford + self.t + self.measure

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


COLUMNS = tuple(f.name for f in fields(ResourceEstimate))
HEADERS = ("#CNOT", "#1qCliff", "#T", "#M", "T-depth", "full depth", "width")


def estimate(circuit: Circuit, *, reuse_qubits: bool = False, gadgets=None) -> ResourceEstimate:
    """Inline gadgets and schedule ``circuit``.

    With ``reuse_qubits`` a released qubit (including gadget scratch) goes
    back to a pool and the next allocation picks it up together with its
    busy-until time, the way a qubit manager recycles physical qubits.  By
    default every allocation is a fresh qubit free from time zero.
    """
    templates, n_anc, slots = _compile_templates(gadgets) if gadgets else _DEFAULT_COMPILED
    op, a, b, c = circuit.arrays()
    res = _backend.schedule(op, a, b, c, circuit.num_wires, list(circuit.inputs),
                            templates, n_anc, slots, bool(reuse_qubits))
    return ResourceEstimate(*map(int, res))


def tabulate(estimates: Sequence[tuple[str, ResourceEstimate]], fmt: str = "text") -> str:
    """Render named estimates as an aligned text table, CSV or JSON."""
    if fmt == "json":
        return json.dumps([{"operation": name, **est.as_dict()} for name, est in estimates], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("operation",) + COLUMNS)
        for name, est in estimates:
            w.writerow((name,) + tuple(getattr(est, k) for k in COLUMNS))
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    rows = [("operation",) + HEADERS]
    rows += [(name,) + tuple(str(getattr(est, k)) for k in COLUMNS) for name, est in estimates]
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [cell.rjust(wd) for cell, wd in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"

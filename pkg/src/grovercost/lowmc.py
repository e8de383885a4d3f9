"""LowMC (the Picnic parameter sets L1/L3/L5) as reversible circuits.

State and key are bit vectors indexed like the reference implementation's
bitsets: wire ``i`` of a block is the ``i``-th bit, most significant first,
of the block's byte string.  The S-box layer acts on wires ``0..29`` (ten
S-boxes on consecutive triples); in triple ``(3j, 3j+1, 3j+2)`` the wire
``3j+2`` is ``a``, ``3j+1`` is ``b`` and ``3j`` is ``c``.

Instance constants live in text files (optionally gzipped).  The three
Picnic instances ship with the package; ``GROVERCOST_LOWMC_DIR`` points the
loader at another directory holding ``lowmc_l1.txt[.gz]`` and friends.
"""

from __future__ import annotations

import gzip
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Sequence

from .bits import bits_to_bytes, bytes_to_bits
from .circuit import Circuit
from .gf2 import (
    DimensionMismatchError, GF2Error, GF2Matrix, SingularMatrixError, emit_inplace, inplace_program, inverse,
)

LEVELS = {"L1": (128, 20), "L3": (192, 30), "L5": (256, 38)}
N_SBOXES = 10
SBOX = (0, 1, 3, 6, 7, 4, 5, 2)  # index c + 2b + 4a

# (key, plaintext, ciphertext) from the Picnic test suite
KNOWN_ANSWERS = {
    "L1": [
        ("80" + "00" * 15, "ABFF" + "00" * 14, "0E30720B9F64D5C2A7771C8C238D8F70"),
        ("B5DF537B" + "00" * 12, "F77DB57B" + "00" * 12, "0E5961E9992153B13245AF243DD7DDC0"),
        ("084c2a6e195d3b7f" + "00" * 8, "f7b3d591e6a2c480" + "00" * 8, "915c6321d78646b6c76543ffb8523b4d"),
    ],
    "L3": [
        ("80" + "00" * 23, "ABFF" + "00" * 22, "A85B8244344A2E1B10A17BAB043073F6BB649AE6AF659F6F"),
        ("B5DF537B" + "00" * 20, "F77DB57B" + "00" * 20, "210BBC4A434B32DB1E85AE7A27FEE9E41582FAC21D035AA1"),
        ("F77DB57B" + "00" * 20, "B5DF537B" + "00" * 20, "E482BCF9AD2C04483148D46FBE1F8B51460DCC3E8EFB3101"),
    ],
    "L5": [
        ("80" + "00" * 31, "ABFF" + "00" * 30,
         "B8F20A888A0A9EC4E495F1FB439ABDDE18C1D3D29CF20DF4B10A567AA02C7267"),
        ("F77DB57B" + "00" * 28, "B5DF537B" + "00" * 28,
         "EEECCE6A584A93306DAEA07519B47AD6402C11DD942AA3166541444977A214C5"),
        ("B5DF537B" + "00" * 28, "F77DB57B" + "00" * 28,
         "03373326C0F50E3B6B2E1CE8F9430FF5EB0EC345C727A4748FCF73179D48E79B"),
    ],
}


class InstanceFormatError(GF2Error):
    """Malformed or truncated LowMC instance file."""


@dataclass(frozen=True, eq=False)
class LowMcInstance:
    level: str
    block_bits: int
    rounds: int
    linear_matrices: tuple[GF2Matrix, ...]
    round_constants: tuple[int, ...]  # bit i = wire i
    key_matrices: tuple[GF2Matrix, ...]

    def __init__(self, level, block_bits, rounds, linear_matrices, round_constants, key_matrices):
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "block_bits", block_bits)
        object.__setattr__(self, "rounds", rounds)
        object.__setattr__(self, "linear_matrices", tuple(linear_matrices))
        object.__setattr__(self, "round_constants", tuple(round_constants))
        object.__setattr__(self, "key_matrices", tuple(key_matrices))
        object.__setattr__(self, "_updates", {})
        self.validate()

    @property
    def key_bits(self) -> int:
        return self.block_bits

    def validate(self) -> None:
        n = self.block_bits
        if len(self.linear_matrices) != self.rounds or len(self.round_constants) != self.rounds:
            raise DimensionMismatchError("need one linear matrix and constant per round")
        if len(self.key_matrices) != self.rounds + 1:
            raise DimensionMismatchError("need rounds + 1 key matrices")
        for m in self.linear_matrices + self.key_matrices:
            if m.shape != (n, n):
                raise DimensionMismatchError(f"matrix of shape {m.shape} in a {n}-bit instance")
            if not m.is_invertible():
                raise SingularMatrixError("LowMC matrices must be invertible")
        for cst in self.round_constants:
            if cst >> n:
                raise DimensionMismatchError("round constant wider than the block")

    def key_update(self, i: int) -> GF2Matrix:
        """``KM_i * KM_{i-1}^{-1}``, taking round key ``i-1`` to round key ``i``."""
        if i not in self._updates:
            self._updates[i] = self.key_matrices[i] @ inverse(self.key_matrices[i - 1])
        return self._updates[i]


# --------------------------------------------------------------- file I/O


def _hex_row(v: int, n: int) -> str:
    # column 0 is the most significant bit of the hex string
    return format(int(format(v, f"0{n}b")[::-1], 2), f"0{(n + 3) // 4}x")


def _parse_row(text: str, n: int) -> int:
    try:
        raw = int(text, 16)
    except ValueError:
        raise InstanceFormatError(f"bad hex row {text!r}") from None
    width = 4 * len(text)
    if raw >> width or width < n or (width > n and raw & ((1 << (width - n)) - 1)):
        raise InstanceFormatError(f"row {text!r} does not fit {n} columns")
    raw >>= width - n
    return int(format(raw, f"0{n}b")[::-1], 2)


def format_instance(inst: LowMcInstance) -> str:
    n = inst.block_bits
    lines = [f"lowmc {n} {n} {inst.rounds}"]
    for i, m in enumerate(inst.linear_matrices, 1):
        lines.append(f"LIN {i}")
        lines += [_hex_row(m.row(r), n) for r in range(n)]
    for i, cst in enumerate(inst.round_constants, 1):
        lines.append(f"CONST {i}")
        lines.append(_hex_row(cst, n))
    for i, m in enumerate(inst.key_matrices):
        lines.append(f"KEY {i}")
        lines += [_hex_row(m.row(r), n) for r in range(n)]
    return "\n".join(lines) + "\n"


def parse_instance(text: str, level: str | None = None) -> LowMcInstance:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise InstanceFormatError("empty instance file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "lowmc":
        raise InstanceFormatError(f"bad header {lines[0]!r}")
    try:
        n, k, rounds = (int(x) for x in head[1:])
    except ValueError:
        raise InstanceFormatError(f"bad header {lines[0]!r}") from None
    if n != k:
        raise DimensionMismatchError("only block size == key size is supported")
    sections: dict[tuple[str, int], list[str]] = {}
    cur = None
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] in ("LIN", "CONST", "KEY"):
            if len(parts) != 2 or not parts[1].isdigit():
                raise InstanceFormatError(f"bad section label {ln!r}")
            cur = (parts[0], int(parts[1]))
            if cur in sections:
                raise InstanceFormatError(f"duplicate section {ln!r}")
            sections[cur] = []
        elif cur is None:
            raise InstanceFormatError("data before the first section")
        else:
            sections[cur].append(ln)

    def matrix(kind, i):
        rows = sections.get((kind, i))
        if rows is None:
            raise InstanceFormatError(f"missing section {kind} {i}")
        if len(rows) != n:
            raise InstanceFormatError(f"section {kind} {i} has {len(rows)} rows, expected {n}")
        return GF2Matrix([_parse_row(r, n) for r in rows], n)

    lin = [matrix("LIN", i) for i in range(1, rounds + 1)]
    consts = []
    for i in range(1, rounds + 1):
        rows = sections.get(("CONST", i))
        if rows is None or len(rows) != 1:
            raise InstanceFormatError(f"section CONST {i} missing or malformed")
        consts.append(_parse_row(rows[0], n))
    keys = [matrix("KEY", i) for i in range(rounds + 1)]
    if level is None:
        level = next((name for name, (bn, r) in LEVELS.items() if (bn, r) == (n, rounds)), f"{n}-{rounds}")
    return LowMcInstance(level, n, rounds, lin, consts, keys)


def load_instance(path) -> LowMcInstance:
    """Read an instance file (``.gz`` is decompressed transparently)."""
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt") as fh:
        return parse_instance(fh.read())


@lru_cache(maxsize=None)
def instance(level: str) -> LowMcInstance:
    """The Picnic instance for ``level`` ("L1", "L3" or "L5")."""
    level = level.upper()
    if level not in LEVELS:
        raise ValueError(f"unknown LowMC level {level!r}")
    name = f"lowmc_{level.lower()}.txt"
    override = os.environ.get("GROVERCOST_LOWMC_DIR")
    if override:
        for cand in (Path(override) / name, Path(override) / (name + ".gz")):
            if cand.exists():
                return load_instance(cand)
        raise FileNotFoundError(f"no {name} in {override}")
    res = resources.files("grovercost") / "data" / (name + ".gz")
    with resources.as_file(res) as p:
        return load_instance(p)


# -------------------------------------------------------------- classical


def _sbox_layer(x: int) -> int:
    out = x >> (3 * N_SBOXES) << (3 * N_SBOXES)
    for j in range(N_SBOXES):
        out |= SBOX[(x >> (3 * j)) & 7] << (3 * j)
    return out


def encrypt_int(inst: LowMcInstance, key: int, pt: int) -> int:
    """Encrypt on bitset integers (bit ``i`` = wire ``i``)."""
    km = inst.key_matrices
    c = pt ^ km[0].matvec(key)
    for r in range(1, inst.rounds + 1):
        c = _sbox_layer(c)
        c = inst.linear_matrices[r - 1].matvec(c) ^ inst.round_constants[r - 1] ^ km[r].matvec(key)
    return c


def _to_int(data: bytes) -> int:
    return sum(bit << i for i, bit in enumerate(bytes_to_bits(data)))


def _from_int(v: int, n: int) -> bytes:
    return bits_to_bytes([(v >> i) & 1 for i in range(n)])


def encrypt_block(inst: LowMcInstance, key: bytes, block: bytes) -> bytes:
    n = inst.block_bits
    if len(key) * 8 != n or len(block) * 8 != n:
        raise ValueError(f"LowMC {inst.level} takes {n // 8}-byte keys and blocks")
    return _from_int(encrypt_int(inst, _to_int(key), _to_int(block)), n)


# ------------------------------------------------------------------ S-box

# In-place: 3 Toffoli and 2 CNOT on (c, b, a); local index 0 = c, 1 = b, 2 = a.
_INPLACE_SEQ = (
    ("cc", 1, 2, 0), ("cx", 2, 0), ("cc", 0, 1, 2), ("cx", 1, 0), ("cc", 0, 2, 1),
)


def lowmc_sbox(circuit: Circuit, wires: Sequence[int], variant: str = "shallow",
               release_copies: bool = True) -> list[int]:
    """Apply the S-box to ``wires = (c, b, a)``; returns the wires now holding
    the result in the same order.

    ``in_place`` overwrites the inputs.  ``shallow`` runs the three products
    in one Toffoli layer on copies and writes the result to three fresh
    wires; the inputs are left untouched.  With ``release_copies=False`` the
    three operand copies stay allocated (for callers that uncompute the
    whole forward pass later anyway).
    """
    c, b, a = wires
    if variant == "in_place":
        for g in _INPLACE_SEQ:
            if g[0] == "cc":
                circuit.ccnot(wires[g[1]], wires[g[2]], wires[g[3]])
            else:
                circuit.cnot(wires[g[1]], wires[g[2]])
        return list(wires)
    if variant != "shallow":
        raise ValueError(f"unknown S-box variant {variant!r}")
    a2, b2, c2 = circuit.allocate(3)
    oc, ob, oa = circuit.allocate(3)
    # the linear terms are split around the Toffoli layer so that no wire
    # waits on another for more than one step
    circuit.cnots([a, b, c, c, b, a], [ob, b2, oc, c2, oc, a2])
    circuit.ccnot(a, c2, ob)
    circuit.ccnot(a2, b2, oc)
    circuit.ccnot(b, c, oa)
    if release_copies:
        circuit.cnots([c, b2, b, a, a2, a], [c2, ob, b2, oa, oc, a2])
        circuit.release(a2, b2, c2)
    else:
        circuit.cnots([b2, a, a2], [ob, oa, oc])
    return [oc, ob, oa]


def sbox_circuit(variant: str = "shallow") -> Circuit:
    circ = Circuit(3)
    circ.outputs = lowmc_sbox(circ, [0, 1, 2], variant)
    return circ


def sbox_layer(circuit: Circuit, state: Sequence[int], variant: str = "shallow",
               release_copies: bool = True) -> list[int]:
    out = list(state)
    for j in range(N_SBOXES):
        out[3 * j:3 * j + 3] = lowmc_sbox(circuit, state[3 * j:3 * j + 3], variant, release_copies)
    return out


# ---------------------------------------------------------- linear layers


@lru_cache(maxsize=None)
def _program(m: GF2Matrix):
    return inplace_program(m)


def affine_layer(circuit: Circuit, state: Sequence[int], inst: LowMcInstance, r: int) -> None:
    """``state <- L_r state + c_r`` in place (round ``r`` counts from 1)."""
    if not 1 <= r <= inst.rounds:
        raise ValueError(f"round {r} out of range 1..{inst.rounds}")
    m = inst.linear_matrices[r - 1]
    emit_inplace(circuit, state, m, _program(m))
    cst = inst.round_constants[r - 1]
    for i in range(inst.block_bits):
        if (cst >> i) & 1:
            circuit.x(state[i])


def key_expand_step(circuit: Circuit, roundkey: Sequence[int], inst: LowMcInstance, r: int) -> None:
    """Turn round key ``r-1`` into round key ``r`` in place.

    ``r = 0`` maps the raw key to ``KM_0 k``.
    """
    if not 0 <= r <= inst.rounds:
        raise ValueError(f"round {r} out of range 0..{inst.rounds}")
    m = inst.key_matrices[0] if r == 0 else inst.key_update(r)
    emit_inplace(circuit, roundkey, m, _program(m))


def affine_circuit(inst: LowMcInstance, r: int = 1) -> Circuit:
    """AffineLayer of round ``r`` alone, in place on ``block_bits`` wires."""
    c = Circuit(inst.block_bits)
    affine_layer(c, list(range(inst.block_bits)), inst, r)
    return c


def key_expansion_circuit(inst: LowMcInstance, r: int = 1) -> Circuit:
    """KeyExpansion step ``r`` alone, in place on ``key_bits`` wires."""
    c = Circuit(inst.key_bits)
    key_expand_step(c, list(range(inst.key_bits)), inst, r)
    return c


# ------------------------------------------------------------------ cipher


def build_forward(circuit: Circuit, inst: LowMcInstance, key: Sequence[int], msg: Sequence[int],
                  sbox_variant: str = "shallow", release_copies: bool = True) -> list[int]:
    """Emit the forward cipher.  The key register ends holding the last round key."""
    n = inst.block_bits
    if len(key) != n or len(msg) != n:
        raise ValueError("wire counts do not match the instance")
    key = list(key)
    state = list(msg)
    key_expand_step(circuit, key, inst, 0)
    circuit.cnots(key, state)
    for r in range(1, inst.rounds + 1):
        state = sbox_layer(circuit, state, sbox_variant, release_copies)
        affine_layer(circuit, state, inst, r)
        key_expand_step(circuit, key, inst, r)
        circuit.cnots(key, state)
    return state


def _cipher_circuit(inst: LowMcInstance):
    n = inst.block_bits
    c = Circuit(2 * n)
    key, msg = list(range(n)), list(range(n, 2 * n))
    c.registers["key"] = key
    c.registers["msg"] = msg
    return c, key, msg


def lowmc_forward(inst: LowMcInstance, sbox_variant: str = "shallow") -> Circuit:
    c, key, msg = _cipher_circuit(inst)
    ct = build_forward(c, inst, key, msg, sbox_variant)
    c.outputs = ct
    c.registers["ct"] = ct
    return c


def lowmc_full(inst: LowMcInstance, sbox_variant: str = "shallow") -> Circuit:
    """Forward cipher, ciphertext copy on fresh wires, then the adjoint."""
    c, key, msg = _cipher_circuit(inst)
    start = c.mark()
    ct = build_forward(c, inst, key, msg, sbox_variant)
    stop = c.mark()
    out = c.allocate(inst.block_bits)
    c.cnots(ct, out)
    c.append_adjoint(start, stop)
    c.outputs = out
    c.registers["ct"] = out
    return c


def encrypt_with_circuit(circuit: Circuit, keys: Sequence[bytes], blocks: Sequence[bytes]) -> list[bytes]:
    from .sim import run_batch

    rows = [bytes_to_bits(k) + bytes_to_bits(b) for k, b in zip(keys, blocks)]
    return [bits_to_bytes(r) for r in run_batch(circuit, rows)]

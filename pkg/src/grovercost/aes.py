"""AES-128/192/256 as reversible circuits, plus a classical reference.

Wire layout: a 128-bit block is a list of 128 wires, byte ``k`` of the block
on wires ``8k..8k+7`` with the most significant bit first.  Bytes follow the
usual column-major AES state order (byte ``4c + r`` is row ``r`` of column
``c``).

The S-box is a 113-gate straight-line program (32 AND, 83 XOR/XNOR) over
the Boyar-Peralta tower-field decomposition with 34 AND gates; every
intermediate value lives on its own ancilla, the result is XORed into the
output byte, and the ancillas are uncomputed.  Because the output is
XORed in, the same block serves ByteSub (fresh zero outputs) and the
in-place key expansion (outputs are live key words).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Sequence

from .circuit import Circuit
from .gf2 import GF2Matrix, LinearProgram, emit_inplace, inplace_program
from .bits import bytes_to_bits, bits_to_bytes

# ---------------------------------------------------------------- classical


def _gmul(a: int, b: int) -> int:
    p = 0
    while b:
        if b & 1:
            p ^= a
        a <<= 1
        if a & 0x100:
            a ^= 0x11B
        b >>= 1
    return p


def _build_sbox() -> tuple[int, ...]:
    inv = [0] * 256
    for x in range(1, 256):
        for y in range(1, 256):
            if _gmul(x, y) == 1:
                inv[x] = y
                break
    out = []
    for x in range(256):
        b = inv[x]
        s = b
        for k in range(1, 5):
            s ^= ((b << k) | (b >> (8 - k))) & 0xFF
        out.append(s ^ 0x63)
    return tuple(out)


SBOX = _build_sbox()
RCON = (0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36)


def expand_key(key: bytes) -> list[bytes]:
    """All key-schedule words ``w[0..4(Nr+1)-1]`` as 4-byte strings."""
    nk = len(key) // 4
    if nk not in (4, 6, 8):
        raise ValueError("AES key must be 16, 24 or 32 bytes")
    nr = nk + 6
    w = [key[4 * i:4 * i + 4] for i in range(nk)]
    for i in range(nk, 4 * (nr + 1)):
        t = w[i - 1]
        if i % nk == 0:
            t = bytes(SBOX[b] for b in t[1:] + t[:1])
            t = bytes([t[0] ^ RCON[i // nk - 1]]) + t[1:]
        elif nk > 6 and i % nk == 4:
            t = bytes(SBOX[b] for b in t)
        w.append(bytes(x ^ y for x, y in zip(w[i - nk], t)))
    return w


def _shift_rows(s: bytes) -> bytes:
    return bytes(s[4 * ((c + r) % 4) + r] for c in range(4) for r in range(4))


def _mix_columns(s: bytes) -> bytes:
    out = bytearray()
    for c in range(4):
        a = s[4 * c:4 * c + 4]
        for r in range(4):
            out.append(_gmul(a[r], 2) ^ _gmul(a[(r + 1) % 4], 3) ^ a[(r + 2) % 4] ^ a[(r + 3) % 4])
    return bytes(out)


def encrypt_block(key: bytes, block: bytes) -> bytes:
    """Classical AES encryption of one 16-byte block."""
    if len(block) != 16:
        raise ValueError("AES block must be 16 bytes")
    w = expand_key(key)
    nr = len(w) // 4 - 1
    s = bytes(x ^ y for x, y in zip(block, b"".join(w[0:4])))
    for rnd in range(1, nr + 1):
        s = _shift_rows(bytes(SBOX[b] for b in s))
        if rnd != nr:
            s = _mix_columns(s)
        s = bytes(x ^ y for x, y in zip(s, b"".join(w[4 * rnd:4 * rnd + 4])))
    return s


# ------------------------------------------------------------------ variants


@dataclass(frozen=True)
class AesVariant:
    key_bits: int
    mixcolumn_kind: str = "in_place"
    key_expansion_kind: str = "in_place"
    sbox_kind: str = "bp12"
    dummy_tdepth: int = 1

    def __post_init__(self):
        if self.key_bits not in (128, 192, 256):
            raise ValueError(f"unsupported AES key size {self.key_bits}")
        if self.mixcolumn_kind not in ("in_place", "shallow"):
            raise ValueError(f"unknown MixColumn kind {self.mixcolumn_kind!r}")
        if self.key_expansion_kind not in ("in_place", "naive"):
            raise ValueError(f"unknown key expansion kind {self.key_expansion_kind!r}")
        if self.sbox_kind not in ("bp12", "dummy"):
            raise ValueError(f"unknown S-box kind {self.sbox_kind!r}")

    @property
    def nk_words(self) -> int:
        return self.key_bits // 32

    @property
    def rounds(self) -> int:
        return self.nk_words + 6

    def with_(self, **kw) -> "AesVariant":
        return replace(self, **kw)


AES128 = AesVariant(128)
AES192 = AesVariant(192)
AES256 = AesVariant(256)
VARIANTS = {"aes128": AES128, "aes192": AES192, "aes256": AES256}


def variant(name: str, mixcolumn: str = "in_place", key_expansion: str = "in_place") -> AesVariant:
    if mixcolumn == "maximov":
        mixcolumn = "shallow"
    return VARIANTS[name].with_(mixcolumn_kind=mixcolumn, key_expansion_kind=key_expansion)


# -------------------------------------------------------------------- S-box

# Straight-line program: inputs U0..U7 (U0 = most significant bit), outputs
# S0..S7.  Each statement is "destination operation left right"; "x" is
# AND, "+" is XOR, "#" is XNOR.  T* are the top linear layer, M* the
# nonlinear middle and L* the bottom linear layer.  The statement order
# (any topological order is correct) was picked by a local search that
# minimizes the scheduled depth of the whole self-cleaning block while
# keeping T-depth 6.
_PROGRAM = """
T21 + U6 U7; T7 + U1 U2; T12 + U5 U2; T5 + U4 U6; T11 + U1 U5; T1 + U3 U0
T18 + U3 U7; T6 + T1 T5; T19 + T7 T18; T16 + T12 T5; T20 + T1 T19; T3 + U0 U6
T4 + U3 U5; T2 + U5 U0; T14 + T11 T6; T27 + T1 T12; T10 + T7 T6; T15 + T11 T5
T22 + T21 T7; T23 + T22 T2; T9 + U7 T7; T17 + T16 T9; T26 + T3 T16; M9 x T20 T17
T13 + T4 T3; M6 x T16 T3; M14 x T2 T10; M10 + M6 M9; M11 x T15 T1; T8 + U7 T6
M12 x T27 T4; M4 x U7 T19; M8 + T26 M6; M15 + M11 M14; M7 x T22 T9; T24 + T10 T2
M1 x T6 T13; M5 + M4 M1; T25 + T17 T20; M18 + M7 M8; M13 + M12 M11; M2 x T23 T8
M19 + M15 M10; M3 + T14 M1; M17 + M5 T24; M16 + M2 M3; M21 + M15 M17; M22 + M13 M18
M20 + M13 M16; M23 + T25 M19; M31 x M20 M23; M24 + M22 M23; M27 + M21 M20; M34 x M22 M21
M25 x M20 M22; M26 + M21 M25; M35 x M24 M34; M30 x M26 M24; M28 + M23 M25; M32 x M27 M31
M33 + M27 M25; M39 + M23 M30; M29 x M28 M27; M37 + M21 M29; M42 + M39 M37; M38 + M32 M33
M36 + M25 M24; M43 + M38 M37; M40 + M35 M36; M41 + M38 M40; M45 + M41 M42; M58 x M43 T3
M62 x M45 T4; M51 x T17 M37; M54 x M41 T10; M60 x M37 T20; M59 x T22 M38; M61 x M42 T1
M44 + M40 M39; M55 x M44 T13; M49 x T16 M43; M52 x T15 M42; M53 x T27 M45; M46 x M44 T6
M48 x M39 U7; L5 + M61 M49; L4 + M54 M58; L10 + L4 M53; L2 + M48 M46; L8 + M51 M59
L6 + M62 L5; M50 x M38 T9; M57 x T19 M39; L18 + M58 L8; M56 x M40 T23; L25 + L10 L6
M47 x M40 T8; L9 + M52 M53; L11 + L2 M60; L23 + L2 L18; L1 + M56 M50; L0 + M61 M62
L15 + M55 L1; S7 # L6 L23; L3 + M47 M55; L27 + L8 L10; L16 + M56 L0; L24 + L15 L9
S0 + L24 L6; L12 + M51 M48; L17 + L1 M57; L7 + M46 L3; L13 + L0 M50; L26 + L7 L9
L29 + L11 L17; M63 x T2 M41; S6 # L27 L13; L19 + M63 L4; L22 + L3 L12; L21 + L1 L7
L14 + M61 M52; S5 + L29 L25; L20 + L1 L0; L28 + L14 L11; S1 # L26 L16; S3 + L21 L6
S2 # L19 L28; S4 + L20 L22
"""


def _parse_slp(text: str) -> list[tuple[str, str, str, str]]:
    out = []
    for stmt in text.replace("\n", ";").split(";"):
        parts = stmt.split()
        if parts:
            dst, opc, x, y = parts
            out.append((dst, opc, x, y))
    return out


SBOX_PROGRAM = _parse_slp(_PROGRAM)


def eval_sbox_program(x: int) -> int:
    """Evaluate the straight-line program classically (used as an oracle)."""
    env = {f"U{i}": (x >> (7 - i)) & 1 for i in range(8)}
    for dst, opc, a, b in SBOX_PROGRAM:
        va, vb = env[a], env[b]
        env[dst] = va & vb if opc == "x" else va ^ vb ^ (1 if opc == "#" else 0)
    return sum(env[f"S{i}"] << (7 - i) for i in range(8))


@lru_cache(maxsize=None)
def sbox_block() -> Circuit:
    """Self-cleaning S-box on 16 input wires: ``out ^= S(in)`` for (in, out).

    Each output bit is XORed into place as soon as its last operand exists,
    so the next layer can start while the rest still computes.  The output
    XORs split the ancilla computation into segments, which are undone in
    reverse order afterwards.
    """
    c = Circuit(16)
    env = {f"U{i}": i for i in range(8)}
    segments = []
    start = c.mark()
    for dst, opc, a, b in SBOX_PROGRAM:
        if dst.startswith("S"):
            segments.append((start, c.mark()))
            o = 8 + int(dst[1:])
            c.cnot(env[a], o)
            c.cnot(env[b], o)
            if opc == "#":
                c.x(o)
            start = c.mark()
            continue
        (w,) = c.allocate(1)
        env[dst] = w
        if opc == "x":
            c.and_(env[a], env[b], w)
        else:
            c.cnot(env[a], w)
            c.cnot(env[b], w)
    segments.append((start, c.mark()))
    for lo, hi in reversed(segments):
        c.append_adjoint(lo, hi)
    c.outputs = list(range(8, 16))
    return c


@lru_cache(maxsize=None)
def dummy_sbox_block(d: int) -> Circuit:
    """Placeholder S-box with T-depth ``d`` that allows no overlap with neighbours.

    Before each of its ``d`` Toffoli layers every one of the 16 wires is
    chained into a CNOT ladder, so each layer waits for all wires of the
    previous one.  It computes no meaningful function; it exists to check
    that the scheduler does not parallelize more than the data flow allows.
    """
    c = Circuit(16)
    for _ in range(d):
        for i in range(15):
            c.cnot(i, i + 1)
        for i in range(14, -1, -1):
            c.cnot(i + 1, i)
        c.ccnot(0, 1, 15)
    c.outputs = list(range(8, 16))
    return c


def sbox(circuit: Circuit, inp: Sequence[int], out: Sequence[int], kind: str = "bp12", d: int = 1) -> None:
    """XOR ``S(inp)`` into ``out`` (8 wires each, most significant bit first)."""
    block = sbox_block() if kind == "bp12" else dummy_sbox_block(d)
    circuit.append_circuit(block, list(inp) + list(out))


def sbox_circuit() -> Circuit:
    """Standalone S-box with 8 inputs and 8 freshly allocated outputs."""
    c = Circuit(8)
    out = c.allocate(8)
    sbox(c, list(range(8)), out)
    c.outputs = out
    return c


# ------------------------------------------------------------- linear layers


def _byte(state: Sequence[int], k: int) -> list[int]:
    return list(state[8 * k:8 * k + 8])


def shiftrow(circuit: Circuit, state: Sequence[int]) -> None:
    """ShiftRow as pure rewiring."""
    perm = []
    for k in range(16):
        c, r = divmod(k, 4)
        src = 4 * ((c + r) % 4) + r
        perm.extend(range(8 * src, 8 * src + 8))
    circuit.permute(list(state), perm)


def _mul_matrix(const: int) -> list[list[int]]:
    """8x8 bit matrix (MSB-first) of multiplication by ``const`` in GF(2^8)."""
    cols = []
    for j in range(8):
        cols.append(_gmul(1 << (7 - j), const))
    return [[(cols[j] >> (7 - i)) & 1 for j in range(8)] for i in range(8)]


# c(x) = 03 x^3 + 01 x^2 + 01 x + 02: output row r takes coefficient of a_{r+k}
MIXCOLUMN_POLY = (0x02, 0x03, 0x01, 0x01)


@lru_cache(maxsize=None)
def mixcolumn_matrix() -> GF2Matrix:
    """32x32 matrix of MixColumn on one column, built from c(x)."""
    rows = [[0] * 32 for _ in range(32)]
    for r in range(4):
        for k, coef in enumerate(MIXCOLUMN_POLY):
            blk = _mul_matrix(coef)
            cidx = (r + k) % 4
            for i in range(8):
                for j in range(8):
                    rows[8 * r + i][8 * cidx + j] ^= blk[i][j]
    return GF2Matrix.from_lists(rows)


# The in-place MixColumn is synthesized with the bits of each byte listed
# least significant first.  The PLU factors of the matrix in that order are
# much sparser (277 CNOTs per column instead of 309 for MSB-first).
_LSB_FIRST = tuple(8 * k + 7 - j for k in range(4) for j in range(8))


@lru_cache(maxsize=None)
def _mixcolumn_lsb() -> tuple[GF2Matrix, LinearProgram]:
    full = mixcolumn_matrix().to_lists()
    q = _LSB_FIRST
    m = GF2Matrix.from_lists([[full[q[i]][q[j]] for j in range(32)] for i in range(32)])
    return m, inplace_program(m)


def _xtime_sources(k: int) -> list[int]:
    """Bit positions (MSB-first) of t feeding bit ``k`` of xtime(t)."""
    src = [k + 1] if k < 7 else []
    # reduction by x^8 + x^4 + x^3 + x + 1 adds the top bit into bits 3, 4, 6, 7
    if k in (3, 4, 6, 7):
        src.append(0)
    return src


@lru_cache(maxsize=None)
def shallow_mixcolumn_block() -> Circuit:
    """Out-of-place MixColumn for one column: 32 inputs, 32 fresh outputs.

    With ``t_r = a_r + a_{r+1}`` the output byte is
    ``b_r = xtime(t_r) + a_{r+1} + t_{r+2}``.  The four helper bytes are
    computed, used, and uncomputed, so only the outputs stay allocated.
    """
    c = Circuit(32)
    a = [list(range(8 * r, 8 * r + 8)) for r in range(4)]
    start = c.mark()
    t = [c.allocate(8) for _ in range(4)]
    for r in range(4):
        for i in range(8):
            c.cnot(a[r][i], t[r][i])
        nxt = (r + 1) % 4
        for i in range(8):
            c.cnot(a[nxt][i], t[r][i])
    stop = c.mark()
    out = [c.allocate(8) for _ in range(4)]
    for r in range(4):
        for k in range(8):
            for s in _xtime_sources(k):
                c.cnot(t[r][s], out[r][k])
            c.cnot(a[(r + 1) % 4][k], out[r][k])
            c.cnot(t[(r + 2) % 4][k], out[r][k])
    c.append_adjoint(start, stop)
    c.outputs = [w for byte in out for w in byte]
    return c


def mixcolumn(circuit: Circuit, state: Sequence[int], kind: str = "in_place") -> list[int]:
    """Apply MixColumn to all four columns; returns the wires now holding the result."""
    if kind == "maximov":
        kind = "shallow"
    if kind == "in_place":
        m, prog = _mixcolumn_lsb()
        for col in range(4):
            column = state[32 * col:32 * col + 32]
            emit_inplace(circuit, [column[i] for i in _LSB_FIRST], m, prog)
        return list(state)
    if kind == "shallow":
        block = shallow_mixcolumn_block()
        out = []
        for col in range(4):
            out += circuit.append_circuit(block, state[32 * col:32 * col + 32])
        return out
    raise ValueError(f"unknown MixColumn kind {kind!r}")


def mixcolumn_circuit(kind: str = "in_place") -> Circuit:
    c = Circuit(128)
    c.outputs = mixcolumn(c, list(range(128)), kind)
    return c


def add_round_key(circuit: Circuit, state: Sequence[int], key: Sequence[int]) -> None:
    circuit.cnots(key, state)


def add_round_constant(circuit: Circuit, word: Sequence[int], i: int) -> None:
    """X gates for ``RCON[i-1]`` on the first byte of a 32-wire word."""
    rc = RCON[i - 1]
    for j in range(8):
        if (rc >> (7 - j)) & 1:
            circuit.x(word[j])


# ------------------------------------------------------------ key expansion


class KeyRegister:
    """Key-schedule words held in an ``Nk``-word register and updated in place.

    Word ``i`` of the schedule lives at register position ``i mod Nk`` and
    overwrites word ``i - Nk``.  Words are produced on demand, so each round
    only computes the key material its AddRoundKey needs.
    """

    def __init__(self, circuit: Circuit, wires: Sequence[int], nk: int, sbox_kind: str = "bp12", dummy_tdepth: int = 1):
        self.c = circuit
        self.nk = nk
        self.words = [list(wires[32 * p:32 * p + 32]) for p in range(nk)]
        self.computed = nk  # words w[0..computed-1] exist
        self.sbox_kind = sbox_kind
        self.d = dummy_tdepth

    def word(self, i: int) -> list[int]:
        if not (self.computed - self.nk <= i < self.computed):
            raise ValueError(f"word {i} is not held by the register")
        return self.words[i % self.nk]

    def step_word(self) -> None:
        i = self.computed
        nk = self.nk
        dst = self.words[i % nk]
        prev = self.words[(i - 1) % nk]
        if i % nk == 0:
            for k in range(4):
                src = prev[8 * ((k + 1) % 4):8 * ((k + 1) % 4) + 8]
                sbox(self.c, src, dst[8 * k:8 * k + 8], self.sbox_kind, self.d)
            add_round_constant(self.c, dst, i // nk)
        elif nk > 6 and i % nk == 4:
            for k in range(4):
                sbox(self.c, prev[8 * k:8 * k + 8], dst[8 * k:8 * k + 8], self.sbox_kind, self.d)
        else:
            self.c.cnots(prev, dst)
            self.computed += 1
            return
        self.computed += 1

    def ensure(self, upto: int) -> None:
        while self.computed <= upto:
            self.step_word()

    def round_key(self, rnd: int) -> list[int]:
        self.ensure(4 * rnd + 3)
        return [w for i in range(4 * rnd, 4 * rnd + 4) for w in self.word(i)]


class NaiveKeySchedule:
    """All key-schedule words on fresh wires, expanded before the first round."""

    def __init__(self, circuit: Circuit, wires: Sequence[int], nk: int, rounds: int, sbox_kind: str = "bp12", dummy_tdepth: int = 1):
        self.words = [list(wires[32 * p:32 * p + 32]) for p in range(nk)]
        for i in range(nk, 4 * (rounds + 1)):
            dst = circuit.allocate(32)
            prev = self.words[i - 1]
            circuit.cnots(self.words[i - nk], dst)
            if i % nk == 0:
                for k in range(4):
                    src = prev[8 * ((k + 1) % 4):8 * ((k + 1) % 4) + 8]
                    sbox(circuit, src, dst[8 * k:8 * k + 8], sbox_kind, dummy_tdepth)
                add_round_constant(circuit, dst, i // nk)
            elif nk > 6 and i % nk == 4:
                for k in range(4):
                    sbox(circuit, prev[8 * k:8 * k + 8], dst[8 * k:8 * k + 8], sbox_kind, dummy_tdepth)
            else:
                circuit.cnots(prev, dst)
            self.words.append(dst)

    def round_key(self, rnd: int) -> list[int]:
        return [w for i in range(4 * rnd, 4 * rnd + 4) for w in self.words[i]]


def key_expand_step(circuit: Circuit, keyset: Sequence[int], round_index: int, j: int = 0, l: int | None = None) -> None:
    """Compute words ``j..l`` of key-set ``round_index`` in place.

    ``keyset`` holds ``Nk`` words; before the call positions ``j..l`` hold
    set ``round_index - 1`` and positions ``< j`` already hold set
    ``round_index``.
    """
    nk = len(keyset) // 32
    if nk not in (4, 6, 8) or len(keyset) != 32 * nk:
        raise ValueError("key set must hold 4, 6 or 8 words")
    l = nk - 1 if l is None else l
    if not (0 <= j <= l < nk) or round_index < 1:
        raise ValueError(f"invalid word range {j}..{l}")
    reg = KeyRegister(circuit, keyset, nk)
    reg.computed = round_index * nk + j
    for _ in range(j, l + 1):
        reg.step_word()


# ------------------------------------------------------------------ cipher


def build_forward(circuit: Circuit, v: AesVariant, key: Sequence[int], msg: Sequence[int]) -> list[int]:
    """Emit the forward cipher; returns the wires holding the ciphertext.

    ``msg`` receives the initial AddRoundKey in place; each round's ByteSub
    writes to 128 fresh wires, which stay allocated (cleanup is the job of
    the adjoint).
    """
    if len(key) != v.key_bits or len(msg) != 128:
        raise ValueError("wire counts do not match the variant")
    if v.key_expansion_kind == "in_place":
        ks = KeyRegister(circuit, key, v.nk_words, v.sbox_kind, v.dummy_tdepth)
    else:
        ks = NaiveKeySchedule(circuit, key, v.nk_words, v.rounds, v.sbox_kind, v.dummy_tdepth)
    state = list(msg)
    add_round_key(circuit, state, ks.round_key(0))
    for rnd in range(1, v.rounds + 1):
        out = circuit.allocate(128)
        for k in range(16):
            sbox(circuit, _byte(state, k), _byte(out, k), v.sbox_kind, v.dummy_tdepth)
        state = out
        shiftrow(circuit, state)
        if rnd != v.rounds:
            state = mixcolumn(circuit, state, v.mixcolumn_kind)
        add_round_key(circuit, state, ks.round_key(rnd))
    return state


def _cipher_circuit(v: AesVariant) -> tuple[Circuit, list[int], list[int]]:
    c = Circuit(v.key_bits + 128)
    key = list(range(v.key_bits))
    msg = list(range(v.key_bits, v.key_bits + 128))
    c.registers["key"] = key
    c.registers["msg"] = msg
    return c, key, msg


def aes_forward(v: AesVariant = AES128) -> Circuit:
    """Forward cipher only; outputs are the ciphertext wires, ancillas stay dirty."""
    c, key, msg = _cipher_circuit(v)
    ct = build_forward(c, v, key, msg)
    c.outputs = ct
    c.registers["ct"] = ct
    return c


def aes_full(v: AesVariant = AES128) -> Circuit:
    """Forward cipher, copy of the ciphertext to fresh wires, then the adjoint."""
    c, key, msg = _cipher_circuit(v)
    start = c.mark()
    ct = build_forward(c, v, key, msg)
    stop = c.mark()
    out = c.allocate(128)
    c.cnots(ct, out)
    c.append_adjoint(start, stop)
    c.outputs = out
    c.registers["ct"] = out
    return c


def encrypt_with_circuit(circuit: Circuit, keys: Sequence[bytes], blocks: Sequence[bytes]) -> list[bytes]:
    """Run an AES circuit on (key, block) pairs and return the ciphertexts."""
    from .sim import run_batch

    rows = [bytes_to_bits(k) + bytes_to_bits(b) for k, b in zip(keys, blocks)]
    return [bits_to_bytes(r) for r in run_batch(circuit, rows)]

"""Grover oracles for key search against AES and LowMC.

The oracle takes the key wires and one target wire.  It fans the key out to
``r`` cipher instances, encrypts the ``r`` known plaintexts, compares all
ciphertext bits with the known ciphertexts through a balanced AND tree,
flips the target on a full match, and uncomputes everything.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from . import aes, lowmc
from .bits import bytes_to_bits
from .circuit import Circuit

Cipher = Union[aes.AesVariant, lowmc.LowMcInstance]


def _block_bits(cipher: Cipher) -> int:
    return 128 if isinstance(cipher, aes.AesVariant) else cipher.block_bits


def _key_bits(cipher: Cipher) -> int:
    return cipher.key_bits


@dataclass(frozen=True)
class OracleSpec:
    cipher: Cipher
    pairs: tuple[tuple[bytes, bytes], ...]  # (plaintext, ciphertext)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((bytes(p), bytes(c)) for p, c in self.pairs))
        n = _block_bits(self.cipher) // 8
        if not self.pairs:
            raise ValueError("an oracle needs at least one plaintext-ciphertext pair")
        for p, c in self.pairs:
            if len(p) != n or len(c) != n:
                raise ValueError(f"blocks must be {n} bytes")
        if len({p for p, _ in self.pairs}) != len(self.pairs):
            raise ValueError("plaintexts must be pairwise distinct")

    @property
    def r(self) -> int:
        return len(self.pairs)

    @classmethod
    def from_key(cls, cipher: Cipher, key: bytes, plaintexts: Sequence[bytes]) -> "OracleSpec":
        """Pairs made by encrypting ``plaintexts`` classically under ``key``."""
        if isinstance(cipher, aes.AesVariant):
            enc = aes.encrypt_block
        else:
            enc = lambda k, b: lowmc.encrypt_block(cipher, k, b)  # noqa: E731
        return cls(cipher, tuple((p, enc(key, p)) for p in plaintexts))


def comparator(circuit: Circuit, data: Sequence[int], constant: Sequence[int], target: int) -> None:
    """``target ^= [data == constant]`` with a balanced AND tree."""
    if len(data) != len(constant):
        raise ValueError("data and constant differ in length")
    flips = [w for w, bit in zip(data, constant) if not bit]
    for w in flips:
        circuit.x(w)
    start = circuit.mark()
    level = list(data)
    while len(level) > 1:
        nxt = []
        for i in range(0, len(level) - 1, 2):
            (t,) = circuit.allocate(1)
            circuit.and_(level[i], level[i + 1], t)
            nxt.append(t)
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    stop = circuit.mark()
    circuit.cnot(level[0], target)
    circuit.append_adjoint(start, stop)
    for w in flips:
        circuit.x(w)


def _forward(circuit: Circuit, cipher: Cipher, key: Sequence[int], msg: Sequence[int]) -> list[int]:
    if isinstance(cipher, aes.AesVariant):
        return aes.build_forward(circuit, cipher, key, msg)
    # operand copies of the shallow S-boxes are left to the final adjoint
    return lowmc.build_forward(circuit, cipher, key, msg, "shallow", release_copies=False)


def build_oracle(spec: OracleSpec) -> Circuit:
    """Oracle circuit on ``key_bits`` key wires followed by one target wire."""
    cipher = spec.cipher
    k = _key_bits(cipher)
    n = _block_bits(cipher)
    c = Circuit(k + 1)
    key = list(range(k))
    target = k
    c.registers["key"] = key
    c.registers["target"] = [target]

    start = c.mark()
    keys = [key]
    for _ in range(1, spec.r):
        copy = c.allocate(k)
        c.cnots(key, copy)
        keys.append(copy)
    msgs = []
    for pt, _ in spec.pairs:
        m = c.allocate(n)
        for w, bit in zip(m, bytes_to_bits(pt)):
            if bit:
                c.x(w)
        msgs.append(m)
    cts = []
    for kw, m in zip(keys, msgs):
        cts.extend(_forward(c, cipher, kw, m))
    stop = c.mark()
    expected = [bit for _, ct in spec.pairs for bit in bytes_to_bits(ct)]
    comparator(c, cts, expected, target)
    c.append_adjoint(start, stop)
    c.outputs = key + [target]
    return c


def default_spec(cipher: Cipher, r: int, key: bytes | None = None) -> OracleSpec:
    """An oracle spec with fixed, reproducible plaintexts and a fixed key."""
    kb = _key_bits(cipher) // 8
    nb = _block_bits(cipher) // 8
    key = key if key is not None else bytes(range(kb))
    pts = [bytes([(17 * i + j) & 0xFF for j in range(nb)]) for i in range(r)]
    return OracleSpec.from_key(cipher, key, pts)


def parse_target(text: str) -> tuple[Cipher, int]:
    """Parse ``<cipher>:<r>`` such as ``aes128:2`` or ``lowmc-l1:1``.

    AES names accept ``-maximov`` (or ``-shallow``) for the out-of-place
    MixColumn.
    """
    try:
        name, r = text.rsplit(":", 1)
        r = int(r)
    except ValueError:
        raise ValueError(f"bad oracle target {text!r}; expected <cipher>:<r>") from None
    if r < 1:
        raise ValueError("r must be at least 1")
    return cipher_by_name(name), r


def cipher_by_name(name: str) -> Cipher:
    name = name.lower()
    if name.startswith("lowmc-"):
        return lowmc.instance(name[len("lowmc-"):].upper())
    base, _, mc = name.partition("-")
    if base not in aes.VARIANTS:
        raise ValueError(f"unknown cipher {name!r}")
    return aes.variant(base, mixcolumn=mc or "in_place")

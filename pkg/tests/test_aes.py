import random

import pytest
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from grovercost import aes, sim
from grovercost.bits import bits_to_bytes, bytes_to_bits
from grovercost.circuit import Circuit
from grovercost.estimate import estimate

PT = bytes.fromhex("00112233445566778899aabbccddeeff")
FIPS = {
    128: "69c4e0d86a7b0430d8cdb78070b4c55a",
    192: "dda97ca4864cdfe06eaf70a0ec0d7191",
    256: "8ea2b7ca516745bfeafc49904b496089",
}
VARIANTS = [aes.AES128, aes.AES192, aes.AES256]


def ecb(key, block):
    enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    return enc.update(block) + enc.finalize()


@pytest.mark.parametrize("bits", [128, 192, 256])
def test_classical_reference_fips(bits):
    assert aes.encrypt_block(bytes(range(bits // 8)), PT).hex() == FIPS[bits]


def test_classical_reference_matches_library(rng):
    for _ in range(200):
        key = bytes(rng.getrandbits(8) for _ in range(rng.choice([16, 24, 32])))
        pt = bytes(rng.getrandbits(8) for _ in range(16))
        assert aes.encrypt_block(key, pt) == ecb(key, pt)


@pytest.fixture(scope="module")
def full_circuits():
    out = {}
    for v in VARIANTS:
        for mc in ("in_place", "shallow"):
            out[(v.key_bits, mc)] = aes.aes_full(v.with_(mixcolumn_kind=mc))
    return out


@pytest.mark.parametrize("bits", [128, 192, 256])
@pytest.mark.parametrize("mc", ["in_place", "shallow"])
def test_circuit_fips_vector(full_circuits, bits, mc):
    (ct,) = aes.encrypt_with_circuit(full_circuits[(bits, mc)], [bytes(range(bits // 8))], [PT])
    assert ct.hex() == FIPS[bits]


@pytest.mark.parametrize("bits", [128, 192, 256])
@pytest.mark.parametrize("mc", ["in_place", "shallow"])
def test_circuit_random_inputs(full_circuits, bits, mc):
    rng = random.Random(bits)
    keys = [bytes(rng.getrandbits(8) for _ in range(bits // 8)) for _ in range(1000)]
    pts = [bytes(rng.getrandbits(8) for _ in range(16)) for _ in range(1000)]
    got = aes.encrypt_with_circuit(full_circuits[(bits, mc)], keys, pts)
    assert got == [ecb(k, p) for k, p in zip(keys, pts)]


@pytest.mark.parametrize("bits", [128, 192, 256])
def test_naive_key_expansion_circuit(bits, rng):
    c = aes.aes_full(aes.variant(f"aes{bits}", key_expansion="naive"))
    keys = [bytes(rng.getrandbits(8) for _ in range(bits // 8)) for _ in range(100)]
    pts = [bytes(rng.getrandbits(8) for _ in range(16)) for _ in range(100)]
    assert aes.encrypt_with_circuit(c, keys, pts) == [ecb(k, p) for k, p in zip(keys, pts)]


@pytest.mark.parametrize("bits", [128, 192, 256])
def test_full_circuit_is_clean(full_circuits, bits, rng):
    for mc in ("in_place", "shallow"):
        c = full_circuits[(bits, mc)]
        rows = [[rng.getrandbits(1) for _ in range(bits + 128)] for _ in range(100)]
        assert sim.check_clean(c, rows).clean


def test_forward_then_adjoint_restores_inputs(rng):
    fwd = aes.aes_forward(aes.AES128)
    c = Circuit(256)
    c.append_circuit(fwd, list(range(256)))
    c.append_adjoint()
    c.outputs = list(range(256))
    rows = [[rng.getrandbits(1) for _ in range(256)] for _ in range(64)]
    assert sim.run_batch(c, rows) == rows
    assert sim.check_clean(c, rows).clean


def test_sbox_program_equals_table():
    assert [aes.eval_sbox_program(x) for x in range(256)] == list(aes.SBOX)


def test_sbox_table_spot_values():
    assert aes.SBOX[0x00] == 0x63 and aes.SBOX[0x53] == 0xED


def test_sbox_circuit_exhaustive():
    rows = [[(x >> (7 - i)) & 1 for i in range(8)] for x in range(256)]
    outs = sim.run_batch(aes.sbox_circuit(), rows)
    assert [sum(b << (7 - i) for i, b in enumerate(o)) for o in outs] == list(aes.SBOX)


def test_sbox_has_34_ands():
    assert aes.sbox_circuit().counts()["AND"] == 34


def test_sbox_then_adjoint_restores():
    c = Circuit(8)
    out = c.allocate(8)
    aes.sbox(c, list(range(8)), out)
    c.append_adjoint()
    c.outputs = list(range(8)) + out
    rows = [[(x >> (7 - i)) & 1 for i in range(8)] for x in range(256)]
    assert sim.run_batch(c, rows) == [r + [0] * 8 for r in rows]


def test_shiftrow_costs_nothing():
    c = Circuit(128)
    aes.shiftrow(c, list(range(128)))
    assert estimate(c).gates == 0


def test_shiftrow_order_four(rng):
    c = Circuit(128)
    for _ in range(4):
        aes.shiftrow(c, list(range(128)))
    c.outputs = list(range(128))
    row = [rng.getrandbits(1) for _ in range(128)]
    assert sim.run(c, row) == row


def test_mixcolumn_variants_agree(rng):
    states = [bytes(rng.getrandbits(8) for _ in range(16)) for _ in range(1000)]
    rows = [bytes_to_bits(s) for s in states]
    want = [aes._mix_columns(s) for s in states]
    for kind in ("in_place", "shallow"):
        got = [bits_to_bytes(o) for o in sim.run_batch(aes.mixcolumn_circuit(kind), rows)]
        assert got == want


def test_mixcolumn_shallow_is_clean(rng):
    c = aes.mixcolumn_circuit("shallow")
    rows = [[rng.getrandbits(1) for _ in range(128)] for _ in range(64)]
    assert sim.check_clean(c, rows).clean


def test_mixcolumn_matrix_from_polynomial():
    m = aes.mixcolumn_matrix()
    assert m.shape == (32, 32) and m.is_invertible()


@pytest.mark.parametrize("bits", [128, 192, 256])
def test_key_expand_step_full(bits):
    nk = bits // 32
    key = bytes(range(bits // 8))
    words = aes.expand_key(key)
    c = Circuit(bits)
    aes.key_expand_step(c, list(range(bits)), 1)
    c.outputs = list(range(bits))
    got = bits_to_bytes(sim.run(c, bytes_to_bits(key)))
    assert got == b"".join(words[nk:2 * nk])


def test_key_expand_fips_round_one():
    key = bytes.fromhex("2b7e151628aed2a6abf7158809cf4f3c")
    c = Circuit(128)
    aes.key_expand_step(c, list(range(128)), 1)
    c.outputs = list(range(128))
    assert bits_to_bytes(sim.run(c, bytes_to_bits(key))).hex().startswith("a0fafe17")


@pytest.mark.parametrize("bits, j, l", [(192, 0, 1), (192, 2, 5), (256, 0, 3), (256, 4, 7)])
def test_key_expand_partial_ranges(bits, j, l, rng):
    nk = bits // 32
    key = bytes(rng.getrandbits(8) for _ in range(bits // 8))
    words = aes.expand_key(key)
    # positions < j already hold set 1, positions j.. hold set 0
    start = b"".join(words[nk + p] if p < j else words[p] for p in range(nk))
    c = Circuit(bits)
    aes.key_expand_step(c, list(range(bits)), 1, j, l)
    c.outputs = list(range(bits))
    got = bits_to_bytes(sim.run(c, bytes_to_bits(start)))
    want = b"".join(words[nk + p] if p <= l else words[p] for p in range(nk))
    assert got == want


def test_key_expand_adjoint_restores(rng):
    c = Circuit(256)
    aes.key_expand_step(c, list(range(256)), 3)
    c.append_adjoint()
    c.outputs = list(range(256))
    row = [rng.getrandbits(1) for _ in range(256)]
    assert sim.run(c, row) == row


def test_key_expand_bad_range():
    with pytest.raises(ValueError):
        aes.key_expand_step(Circuit(128), list(range(128)), 1, 3, 2)
    with pytest.raises(ValueError):
        aes.key_expand_step(Circuit(100), list(range(100)), 1)


@pytest.mark.parametrize("i", range(1, 11))
def test_round_constant_on_zero_word(i):
    c = Circuit(32)
    aes.add_round_constant(c, list(range(32)), i)
    c.outputs = list(range(32))
    assert bits_to_bytes(sim.run(c, [0] * 32)) == bytes([aes.RCON[i - 1], 0, 0, 0])


@pytest.mark.parametrize("v, t", [(aes.AES128, 54400), (aes.AES192, 60928), (aes.AES256, 75072)])
def test_t_counts(v, t):
    e = estimate(aes.aes_full(v))
    assert e.t == t
    assert e.t_depth <= 2 * v.rounds * 6


@pytest.mark.parametrize("v", VARIANTS)
def test_naive_width_difference(v):
    inplace = estimate(aes.aes_full(v)).width
    naive = estimate(aes.aes_full(v.with_(key_expansion_kind="naive"))).width
    assert naive - inplace == 4 * 32 * (v.rounds + 1) - 32 * v.nk_words


def test_naive_is_deeper():
    a = estimate(aes.aes_full(aes.AES128))
    b = estimate(aes.aes_full(aes.AES128.with_(key_expansion_kind="naive")))
    assert b.width > a.width and b.full_depth > a.full_depth


def test_variant_validation():
    with pytest.raises(ValueError):
        aes.AesVariant(160)
    with pytest.raises(ValueError):
        aes.AesVariant(128, mixcolumn_kind="wide")

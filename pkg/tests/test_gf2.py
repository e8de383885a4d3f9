import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grovercost import aes, sim
from grovercost.estimate import estimate
from grovercost.gf2 import (
    DimensionMismatchError, GF2Matrix, SingularMatrixError, format_matrix, inverse, mul, parse_matrix_lines,
    plu_decompose, synth_inplace, synth_outofplace,
)

FIG = [[1, 0, 1, 1], [1, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 1]]


def _bits(v, n):
    return [(v >> i) & 1 for i in range(n)]


def _int(bits):
    return sum(b << i for i, b in enumerate(bits))


def check_synthesis(m, circ, vectors):
    """Simulated circuit output equals ``m @ v`` for every packed vector ``v``."""
    rows = [_bits(v, m.cols) for v in vectors]
    for v, out in zip(vectors, sim.run_batch(circ, rows)):
        assert _int(out) == m.matvec(v)


def test_identity_plu():
    f = plu_decompose(GF2Matrix.identity(4))
    assert f.perm == (0, 1, 2, 3)
    assert f.L == f.U == GF2Matrix.identity(4)


def test_example_factors():
    m = GF2Matrix.from_lists(FIG)
    f = plu_decompose(m)
    assert f.P.to_lists() == [[1, 0, 0, 0], [0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0]]
    assert f.L.to_lists() == [[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1]]
    assert f.U.to_lists()[0] == [1, 0, 1, 1]
    assert f.product() == m


def test_plu_reassembly_random_sizes():
    rng = random.Random(1)
    for i in range(1000):
        n = rng.choice([2, 3, 5, 8, 16, 32]) if i < 980 else rng.choice([64, 128, 256])
        m = GF2Matrix.random_invertible(n, rng)
        f = plu_decompose(m)
        assert f.product() == m
        assert all(f.L[i, i] == 1 and f.L.row(i) >> (i + 1) == 0 for i in range(n))
        assert all(f.U[i, i] == 1 and f.U.row(i) & ((1 << i) - 1) == 0 for i in range(n))


def test_plu_32_reassembly_1000():
    rng = random.Random(2)
    for _ in range(1000):
        m = GF2Matrix.random_invertible(32, rng)
        assert plu_decompose(m).product() == m


def test_plu_deterministic(rng):
    m = GF2Matrix.random_invertible(40, rng)
    assert plu_decompose(m) == plu_decompose(m)


def test_plu_singular():
    with pytest.raises(SingularMatrixError):
        plu_decompose(GF2Matrix.from_lists([[1, 1], [1, 1]]))


def test_plu_nonsquare():
    with pytest.raises(DimensionMismatchError):
        plu_decompose(GF2Matrix.zeros(2, 3))


def test_synth_identity_is_empty():
    assert len(synth_inplace(GF2Matrix.identity(6))) == 0


@pytest.mark.parametrize("n", [1, 2, 4, 8, 12, 16])
def test_synth_inplace_exhaustive(n):
    rng = random.Random(n)
    for _ in range(3 if n < 16 else 1):
        m = GF2Matrix.random_invertible(n, rng)
        circ = synth_inplace(m)
        check_synthesis(m, circ, range(2**n))
        e = estimate(circ)
        assert e.t == 0 and e.width == n


@pytest.mark.parametrize("n", [32, 64, 128])
def test_synth_inplace_randomized(n):
    rng = random.Random(n)
    m = GF2Matrix.random_invertible(n, rng)
    check_synthesis(m, synth_inplace(m), [rng.getrandbits(n) for _ in range(1000)])


def test_synth_basis_vectors_give_columns(rng):
    m = GF2Matrix.random_invertible(20, rng)
    cols = m.transpose()
    out = sim.run_batch(synth_inplace(m), [_bits(1 << j, 20) for j in range(20)])
    assert [_int(o) for o in out] == [cols.row(j) for j in range(20)]


def test_synth_inplace_singular():
    with pytest.raises(SingularMatrixError):
        synth_inplace(GF2Matrix.zeros(3, 3))


def test_mixcolumn_inplace_matches_reference(rng):
    circ = aes.mixcolumn_circuit("in_place")
    states = [bytes(rng.getrandbits(8) for _ in range(16)) for _ in range(256)]
    rows = [[(s[i // 8] >> (7 - i % 8)) & 1 for i in range(128)] for s in states]
    for s, out in zip(states, sim.run_batch(circ, rows)):
        got = bytes(sum(out[8 * k + j] << (7 - j) for j in range(8)) for k in range(16))
        assert got == aes._mix_columns(s)


def test_outofplace_zero_matrix():
    circ = synth_outofplace(GF2Matrix.zeros(3, 4))
    assert circ.counts()["CNOT"] == 0
    assert sim.run(circ, [1, 1, 1, 1]) == [0, 0, 0]


def test_outofplace_example_count():
    m = GF2Matrix.from_lists(FIG)
    assert synth_outofplace(m).counts()["CNOT"] == m.nnz() == 8


def test_outofplace_random_16(rng):
    m = GF2Matrix.random(16, 16, rng)
    check_synthesis(m, synth_outofplace(m), [rng.getrandbits(16) for _ in range(1000)])


@pytest.mark.parametrize("shape", [(5, 9), (9, 5), (1, 16)])
def test_outofplace_rectangular_exhaustive(shape):
    rng = random.Random(sum(shape))
    m = GF2Matrix.random(*shape, rng)
    check_synthesis(m, synth_outofplace(m), range(2 ** m.cols))


def test_inverse_random_64(rng):
    m = GF2Matrix.random_invertible(64, rng)
    assert m @ inverse(m) == GF2Matrix.identity(64)
    assert inverse(m) @ m == GF2Matrix.identity(64)


def test_identity_laws(rng):
    m = GF2Matrix.random(7, 7, rng)
    assert GF2Matrix.identity(7) @ m == m
    assert inverse(GF2Matrix.identity(7)) == GF2Matrix.identity(7)


def test_mul_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        mul(GF2Matrix.zeros(2, 3), GF2Matrix.zeros(2, 3))


def test_inverse_singular():
    with pytest.raises(SingularMatrixError):
        inverse(GF2Matrix.zeros(2, 2))


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 24), seed=st.integers(0, 2**32))
def test_matvec_agrees_with_mul(n, seed):
    rng = random.Random(seed)
    a = GF2Matrix.random(n, n, rng)
    b = GF2Matrix.random(n, n, rng)
    v = rng.getrandbits(n)
    assert (a @ b).matvec(v) == a.matvec(b.matvec(v))


@settings(max_examples=50, deadline=None)
@given(rows=st.integers(1, 12), cols=st.integers(1, 70), seed=st.integers(0, 2**32))
def test_hex_format_roundtrip(rows, cols, seed):
    m = GF2Matrix.random(rows, cols, random.Random(seed))
    text = "# comment\n" + format_matrix(m)
    assert parse_matrix_lines(text.splitlines(), cols) == m


def test_hex_row_msb_is_column_zero():
    m = parse_matrix_lines(["8", "1"], 4)
    assert m.to_lists() == [[1, 0, 0, 0], [0, 0, 0, 1]]


def test_hex_row_bad_width():
    with pytest.raises(DimensionMismatchError):
        parse_matrix_lines(["abc"], 4)

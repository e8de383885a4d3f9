import itertools
import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grovercost import aes, lowmc
from grovercost.circuit import Circuit
from grovercost.estimate import (
    AND_ADJ_GADGET, AND_GADGET, CCNOT_GADGET, HEADERS, ResourceEstimate, estimate, tabulate,
)

from test_circuit import random_circuit

# ------------------------------------------------------- statevector check

_H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
_ONE = {
    "H": _H, "X": np.array([[0, 1], [1, 0]]), "S": np.diag([1, 1j]), "SDG": np.diag([1, -1j]),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]), "TDG": np.diag([1, np.exp(-1j * np.pi / 4)]),
    "Z": np.diag([1, -1]),
}


def _apply1(psi, n, q, u):
    psi = np.moveaxis(psi.reshape([2] * n), q, 0)
    return np.moveaxis(np.tensordot(u, psi, axes=1), 0, q).reshape(-1)


def _cnot(psi, n, c, t):
    psi = psi.reshape([2] * n).copy()
    idx = [slice(None)] * n
    idx[c] = 1
    psi[tuple(idx)] = np.flip(psi[tuple(idx)], axis=t if t < c else t - 1)
    return psi.reshape(-1)


def _basis(n, bits):
    psi = np.zeros(2**n, complex)
    psi[int("".join(map(str, bits)), 2)] = 1
    return psi


def _run_unitary(body, n, psi):
    for name, q0, q1, dep in body:
        assert dep < 0, "classically controlled gates need the measurement branch"
        psi = _cnot(psi, n, q0, q1) if name == "CNOT" else _apply1(psi, n, q0, _ONE[name])
    return psi


def _superposed(n_ops, n, f):
    """Uniform superposition over operand inputs, and the expected image under ``f``."""
    psi_in = np.zeros(2**n, complex)
    psi_out = np.zeros(2**n, complex)
    for bits in itertools.product((0, 1), repeat=n_ops):
        out = list(f(bits))
        psi_in += _basis(n, list(bits) + [0] * (n - n_ops))
        psi_out += _basis(n, out + [0] * (n - len(out)))
    return psi_in / np.linalg.norm(psi_in), psi_out / np.linalg.norm(psi_out)


def test_and_gadget_statevector():
    n = 3 + AND_GADGET.transient_ancillas
    psi_in, want = _superposed(2, n, lambda ab: (ab[0], ab[1], ab[0] & ab[1]))
    got = _run_unitary(AND_GADGET.body, n, psi_in)
    assert np.allclose(got, want, atol=1e-12)


def test_ccnot_gadget_statevector():
    n = 3 + CCNOT_GADGET.transient_ancillas
    psi_in, want = _superposed(3, n, lambda abc: (abc[0], abc[1], abc[2] ^ (abc[0] & abc[1])))
    got = _run_unitary(CCNOT_GADGET.body, n, psi_in)
    assert np.allclose(got, want, atol=1e-12)


@pytest.mark.parametrize("outcome", [0, 1])
def test_and_adj_gadget_both_branches(outcome):
    n = 3
    _, want = _superposed(2, n, lambda ab: (ab[0], ab[1], 0))
    # start from the AND output: uniform superposition of |a, b, ab>
    psi = np.zeros(8, complex)
    for a, b in itertools.product((0, 1), repeat=2):
        psi += _basis(3, [a, b, a & b]) / 2
    meas = None
    for name, q0, q1, dep in AND_ADJ_GADGET.body:
        if name == "M":
            proj = psi.reshape(2, 2, 2).copy()
            proj[:, :, 1 - outcome] = 0
            psi = proj.reshape(-1) / np.linalg.norm(proj)
            meas = outcome
            continue
        if dep >= 0 and not meas:
            continue
        if name == "X" and not meas:
            continue
        psi = _cnot(psi, n, q0, q1) if name == "CNOT" else _apply1(psi, n, q0, _ONE[name])
    # equal up to a global phase
    phase = np.vdot(want, psi)
    assert abs(abs(phase) - 1) < 1e-12
    assert np.allclose(psi, phase * want, atol=1e-12)


# ------------------------------------------------------------ gadget costs

def test_single_and_cost():
    c = Circuit(3)
    c.and_(0, 1, 2)
    e = estimate(c)
    assert (e.t, e.t_depth, e.full_depth, e.width) == (4, 1, 8, 4)
    assert e.cnot + e.one_qubit_clifford == 11


def test_and_gadget_counts():
    assert AND_GADGET.counts() == {"cnot": 8, "one_qubit_clifford": 3, "t": 4, "measure": 0}


def test_ccnot_gadget_costs():
    c = Circuit(3)
    c.ccnot(0, 1, 2)
    e = estimate(c)
    assert (e.t, e.t_depth, e.measure) == (7, 1, 0)
    assert e.width == 7


def test_empty_estimate():
    assert estimate(Circuit(0)) == ResourceEstimate()


def test_aes_sbox_estimate():
    e = estimate(aes.sbox_circuit())
    assert (e.t, e.measure, e.t_depth) == (136, 34, 6)
    # frozen from our own build; the AND_ADJ corrections are always counted
    assert e == ResourceEstimate(666, 242, 136, 34, 6, 102, 136)


@pytest.mark.parametrize("variant, expected", [
    ("in_place", ResourceEstimate(50, 6, 21, 0, 3, 23, 7)),
    ("shallow", ResourceEstimate(60, 6, 21, 0, 1, 11, 13)),
])
def test_lowmc_sbox_estimates(variant, expected):
    assert estimate(lowmc.sbox_circuit(variant)) == expected


def test_invariants_on_random_circuits(rng):
    for _ in range(20):
        c = random_circuit(rng, length=60)
        e = estimate(c)
        counts = c.counts()
        assert e.t == 4 * counts["AND"] + 7 * counts["CCNOT"]
        assert e.measure == counts["AND_ADJ"] + counts["MEASURE"]
        assert e.t_depth <= e.full_depth <= e.gates
        assert e.width >= c.initial_width


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), extra=st.sampled_from(["X", "CNOT", "CCNOT", "AND", "SWAP"]))
def test_depth_monotone_under_append(seed, extra):
    rng = random.Random(seed)
    c = random_circuit(rng, length=30)
    before = estimate(c).full_depth
    w = rng.sample(range(6), 2)
    if extra == "X":
        c.x(w[0])
    elif extra == "CNOT":
        c.cnot(*w)
    elif extra == "SWAP":
        c.swap(*w)
    elif extra == "CCNOT":
        c.ccnot(w[0], w[1], next(x for x in range(6) if x not in w))
    else:
        (t,) = c.allocate(1)
        c.and_(w[0], w[1], t)
    assert estimate(c).full_depth >= before


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_sequential_composition_bound(seed):
    rng = random.Random(seed)
    c1 = random_circuit(rng, length=25)
    c2 = random_circuit(rng, length=25)
    both = Circuit(6)
    both.append_circuit(c1, list(range(6)))
    both.append_circuit(c2, list(range(6)))
    assert estimate(both).full_depth <= estimate(c1).full_depth + estimate(c2).full_depth


@pytest.mark.parametrize("copies, d", [(2, 1), (4, 2), (6, 3)])
def test_serial_dummy_sboxes_t_depth(copies, d):
    c = Circuit(16)
    for _ in range(copies):
        aes.sbox(c, list(range(8)), list(range(8, 16)), "dummy", d)
    assert estimate(c).t_depth == copies * d


@pytest.mark.parametrize("d", [1, 2])
def test_dummy_sbox_aes_hits_naive_bound(d):
    v = aes.AES128.with_(sbox_kind="dummy", dummy_tdepth=d)
    assert estimate(aes.aes_full(v)).t_depth == 2 * v.rounds * d


def test_reuse_never_widens():
    c = aes.aes_full(aes.AES128)
    assert estimate(c, reuse_qubits=True).width <= estimate(c).width


def test_tabulate_text_header():
    out = tabulate([("x", ResourceEstimate(1, 2, 3, 4, 5, 6, 7))], "text").splitlines()
    assert out[0].split()[0] == "operation"
    assert all(h.split()[0] in out[0] for h in HEADERS)
    assert out[1].split() == ["x", "1", "2", "3", "4", "5", "6", "7"]


def test_tabulate_empty_csv():
    assert tabulate([], "csv") == "operation,cnot,one_qubit_clifford,t,measure,t_depth,full_depth,width\n"


def test_tabulate_json_records():
    rows = [(f"aes{k}", ResourceEstimate(k, 1, 2, 3, 4, 5, 6)) for k in (128, 192, 256)]
    data = json.loads(tabulate(rows, "json"))
    assert len(data) == 3
    assert all(sum(isinstance(v, int) for v in rec.values()) == 7 for rec in data)


def test_tabulate_rejects_format():
    with pytest.raises(ValueError):
        tabulate([], "xml")

"""Dense linear algebra over GF(2) and CNOT synthesis of linear maps.

Rows are Python ints with bit ``j`` holding column ``j``.  That keeps row
operations to a single XOR and scales fine up to the 256x256 matrices used
by LowMC.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit


class GF2Error(Exception):
    pass


class SingularMatrixError(GF2Error):
    pass


class DimensionMismatchError(GF2Error):
    pass


def _parity(x: int) -> int:
    return x.bit_count() & 1


class GF2Matrix:
    """Immutable dense bit matrix."""

    __slots__ = ("rows", "cols", "_r")

    def __init__(self, rows: Iterable[int], cols: int):
        r = tuple(int(x) for x in rows)
        mask = (1 << cols) - 1
        if any(x < 0 or x & ~mask for x in r):
            raise DimensionMismatchError(f"row value wider than {cols} columns")
        self._r = r
        self.rows = len(r)
        self.cols = cols

    # ---------------------------------------------------------- constructors

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls((1 << i for i in range(n)), n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "GF2Matrix":
        return cls([0] * rows, cols)

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]]) -> "GF2Matrix":
        cols = len(data[0]) if data else 0
        out = []
        for row in data:
            if len(row) != cols:
                raise DimensionMismatchError("ragged rows")
            out.append(sum((int(v) & 1) << j for j, v in enumerate(row)))
        return cls(out, cols)

    @classmethod
    def from_numpy(cls, arr: np.ndarray) -> "GF2Matrix":
        return cls.from_lists(np.asarray(arr).astype(int).tolist())

    @classmethod
    def random(cls, rows: int, cols: int, rng: random.Random | None = None) -> "GF2Matrix":
        rng = rng or random.Random()
        return cls((rng.getrandbits(cols) for _ in range(rows)), cols)

    @classmethod
    def random_invertible(cls, n: int, rng: random.Random | None = None) -> "GF2Matrix":
        rng = rng or random.Random()
        while True:
            m = cls.random(n, n, rng)
            if m.rank() == n:
                return m

    @classmethod
    def from_hex_rows(cls, lines: Sequence[str], cols: int) -> "GF2Matrix":
        """Parse hex rows where the most significant bit is column 0."""
        digits = (cols + 3) // 4
        out = []
        for line in lines:
            s = line.strip().lower().removeprefix("0x")
            if len(s) != digits:
                raise DimensionMismatchError(f"hex row has {len(s)} digits, expected {digits}")
            v = int(s, 16)
            pad = 4 * digits - cols
            if v & ((1 << pad) - 1):
                raise DimensionMismatchError("nonzero padding bits in hex row")
            out.append(_reverse_bits(v >> pad, cols))
        return cls(out, cols)

    # --------------------------------------------------------------- access

    def row(self, i: int) -> int:
        return self._r[i]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self._r[i] >> j) & 1

    def __eq__(self, other) -> bool:
        return isinstance(other, GF2Matrix) and self.cols == other.cols and self._r == other._r

    def __hash__(self) -> int:
        return hash((self.cols, self._r))

    def __repr__(self) -> str:
        return f"GF2Matrix({self.rows}x{self.cols})"

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self._r]

    def to_numpy(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=np.uint8).reshape(self.rows, self.cols)

    def to_hex_rows(self) -> list[str]:
        digits = (self.cols + 3) // 4
        pad = 4 * digits - self.cols
        return [format(_reverse_bits(r, self.cols) << pad, f"0{digits}x") for r in self._r]

    def nnz(self) -> int:
        return sum(r.bit_count() for r in self._r)

    # ----------------------------------------------------------- arithmetic

    def transpose(self) -> "GF2Matrix":
        out = [0] * self.cols
        for i, r in enumerate(self._r):
            while r:
                low = r & -r
                out[low.bit_length() - 1] |= 1 << i
                r ^= low
        return GF2Matrix(out, self.rows)

    def matvec(self, v: int) -> int:
        """Multiply by a column vector packed as an int (bit j = entry j)."""
        out = 0
        for i, r in enumerate(self._r):
            if _parity(r & v):
                out |= 1 << i
        return out

    def __matmul__(self, other: "GF2Matrix") -> "GF2Matrix":
        return mul(self, other)

    def __add__(self, other: "GF2Matrix") -> "GF2Matrix":
        if self.shape != other.shape:
            raise DimensionMismatchError(f"{self.shape} + {other.shape}")
        return GF2Matrix((x ^ y for x, y in zip(self._r, other._r)), self.cols)

    def rank(self) -> int:
        rows = list(self._r)
        rank = 0
        for col in range(self.cols):
            bit = 1 << col
            piv = next((k for k in range(rank, len(rows)) if rows[k] & bit), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            p = rows[rank]
            for k in range(len(rows)):
                if k != rank and rows[k] & bit:
                    rows[k] ^= p
            rank += 1
        return rank

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def _inverse(self) -> "GF2Matrix":
        n = self.rows
        left = list(self._r)
        right = [1 << i for i in range(n)]
        for col in range(n):
            bit = 1 << col
            piv = next((k for k in range(col, n) if left[k] & bit), None)
            if piv is None:
                raise SingularMatrixError("matrix is singular")
            left[col], left[piv] = left[piv], left[col]
            right[col], right[piv] = right[piv], right[col]
            lp, rp = left[col], right[col]
            for k in range(n):
                if k != col and left[k] & bit:
                    left[k] ^= lp
                    right[k] ^= rp
        return GF2Matrix(right, n)


def mul(a: GF2Matrix, b: GF2Matrix) -> GF2Matrix:
    if a.cols != b.rows:
        raise DimensionMismatchError(f"{a.shape} @ {b.shape}")
    brows = [b.row(k) for k in range(b.rows)]
    out = []
    for i in range(a.rows):
        r = a.row(i)
        acc = 0
        while r:
            low = r & -r
            acc ^= brows[low.bit_length() - 1]
            r ^= low
        out.append(acc)
    return GF2Matrix(out, b.cols)


def inverse(m: GF2Matrix) -> GF2Matrix:
    if m.rows != m.cols:
        raise DimensionMismatchError(f"inverse of non-square {m.shape}")
    return m._inverse()


def _reverse_bits(v: int, n: int) -> int:
    return int(format(v, f"0{n}b")[::-1], 2) if n else 0


# ------------------------------------------------------------------ PLU


@dataclass(frozen=True)
class PLUFactors:
    """``P @ L @ U == M`` with ``perm[i]`` the source row moved to position i."""

    perm: tuple[int, ...]
    L: GF2Matrix
    U: GF2Matrix

    @property
    def P(self) -> GF2Matrix:
        n = len(self.perm)
        # P[perm[i], i] = 1, so (P v)[perm[i]] = v[i]
        rows = [0] * n
        for i, src in enumerate(self.perm):
            rows[src] = 1 << i
        return GF2Matrix(rows, n)

    def product(self) -> GF2Matrix:
        return self.P @ self.L @ self.U


def plu_decompose(m: GF2Matrix) -> PLUFactors:
    """Gaussian elimination with partial pivoting: the topmost usable row is the pivot."""
    n = m.rows
    if m.cols != n:
        raise DimensionMismatchError(f"PLU of non-square {m.shape}")
    rows = [m.row(i) for i in range(n)]
    order = list(range(n))
    low = [0] * n
    for col in range(n):
        bit = 1 << col
        piv = next((k for k in range(col, n) if rows[k] & bit), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            order[col], order[piv] = order[piv], order[col]
            low[col], low[piv] = low[piv], low[col]
        p = rows[col]
        for k in range(col + 1, n):
            if rows[k] & bit:
                rows[k] ^= p
                low[k] |= bit
    L = GF2Matrix((low[i] | (1 << i) for i in range(n)), n)
    return PLUFactors(tuple(order), L, GF2Matrix(rows, n))


# ------------------------------------------------------------- synthesis


@dataclass(frozen=True)
class LinearProgram:
    """A CNOT network on local indices ``0..n-1`` followed by a rewiring."""

    controls: np.ndarray
    targets: np.ndarray
    perm: tuple[int, ...]  # after the CNOTs, position i takes the value at perm[i]

    @property
    def n_cnots(self) -> int:
        return int(self.controls.size)


def inplace_program(m: GF2Matrix) -> LinearProgram:
    """CNOTs computing ``x -> M x`` in place from the PLU factors of ``M``.

    U acts first, column by column from left to right: column ``j`` adds
    ``x_j`` into every row above the diagonal, while ``x_j`` itself is only
    changed by later columns.  L follows column by column from right to
    left, so each ``x_j`` is read before the columns to its left update it.
    The permutation is applied as rewiring.
    """
    f = plu_decompose(m)
    n = m.rows
    ctl: list[int] = []
    tgt: list[int] = []
    ucols = f.U.transpose()
    for j in range(n):
        col = ucols.row(j) & ((1 << j) - 1)
        while col:
            lowbit = col & -col
            ctl.append(j)
            tgt.append(lowbit.bit_length() - 1)
            col ^= lowbit
    lcols = f.L.transpose()
    for j in range(n - 1, -1, -1):
        col = lcols.row(j) & ~((1 << (j + 1)) - 1)
        while col:
            lowbit = col & -col
            ctl.append(j)
            tgt.append(lowbit.bit_length() - 1)
            col ^= lowbit
    # after the CNOTs position i holds (M x)[perm_src[i]]; route it to wire perm_src[i]
    where = [0] * n
    for i, src in enumerate(f.perm):
        where[src] = i
    return LinearProgram(np.array(ctl, dtype=np.int32), np.array(tgt, dtype=np.int32), tuple(where))


def emit_inplace(circuit: Circuit, wires: Sequence[int], m: GF2Matrix, program: LinearProgram | None = None) -> None:
    """Apply ``wires <- M wires`` in place (CNOTs plus zero-cost rewires)."""
    if len(wires) != m.rows or m.rows != m.cols:
        raise DimensionMismatchError(f"{len(wires)} wires for a {m.shape} matrix")
    prog = program or inplace_program(m)
    w = np.asarray(wires, dtype=np.int64)
    circuit.cnots(w[prog.controls], w[prog.targets])
    circuit.permute(list(wires), prog.perm)


def emit_outofplace(circuit: Circuit, inputs: Sequence[int], outputs: Sequence[int], m: GF2Matrix) -> None:
    """XOR ``M inputs`` into ``outputs``: one CNOT per 1 entry."""
    if len(inputs) != m.cols or len(outputs) != m.rows:
        raise DimensionMismatchError(f"{len(inputs)} -> {len(outputs)} wires for a {m.shape} matrix")
    ctl, tgt = [], []
    for i in range(m.rows):
        r = m.row(i)
        while r:
            lowbit = r & -r
            ctl.append(inputs[lowbit.bit_length() - 1])
            tgt.append(outputs[i])
            r ^= lowbit
    circuit.cnots(ctl, tgt)


def synth_inplace(m: GF2Matrix) -> Circuit:
    if m.rows != m.cols:
        raise DimensionMismatchError(f"in-place synthesis of non-square {m.shape}")
    c = Circuit(m.rows)
    emit_inplace(c, list(range(m.rows)), m)
    c.outputs = list(range(m.rows))
    return c


def synth_outofplace(m: GF2Matrix) -> Circuit:
    c = Circuit(m.cols)
    out = c.allocate(m.rows) if m.rows else []
    emit_outofplace(c, list(range(m.cols)), out, m)
    c.outputs = out
    return c


# ------------------------------------------------------------ file format


def parse_matrix_lines(lines: Iterable[str], cols: int) -> GF2Matrix:
    body = [ln.split("#", 1)[0].strip() for ln in lines]
    return GF2Matrix.from_hex_rows([ln for ln in body if ln], cols)


def load_matrix(path, cols: int) -> GF2Matrix:
    with open(path) as fh:
        return parse_matrix_lines(fh, cols)


def format_matrix(m: GF2Matrix) -> str:
    return "".join(row + "\n" for row in m.to_hex_rows())

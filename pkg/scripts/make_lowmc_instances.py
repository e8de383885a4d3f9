"""Regenerate the LowMC instance files shipped in ``grovercost/data``.

The matrices and constants come from LowMC's Grain-LFSR generator (80-bit
state of ones, 160 discarded outputs, self-shrinking selection), in the
order: round LinearLayer matrices, round constants, key matrices.  The
output is checked against the Picnic test vectors before anything is
written.

    python scripts/make_lowmc_instances.py [OUTDIR]
"""

from __future__ import annotations

import gzip
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from grovercost.gf2 import GF2Matrix  # noqa: E402
from grovercost.lowmc import (  # noqa: E402
    LEVELS, KNOWN_ANSWERS, LowMcInstance, encrypt_block, format_instance,
)


def grain():
    s = [1] * 80
    i = 0

    def step():
        nonlocal i
        s[i] ^= s[(i + 13) % 80] ^ s[(i + 23) % 80] ^ s[(i + 38) % 80] ^ s[(i + 51) % 80] ^ s[(i + 62) % 80]
        v = s[i]
        i = (i + 1) % 80
        return v

    for _ in range(160):
        step()
    while True:
        choice = step()
        value = step()
        if choice:
            yield value


def _word(bits, n):
    x = 0
    for j in range(n):
        x |= next(bits) << j
    return x


def _matrix(bits, n, m):
    while True:
        mat = GF2Matrix([_word(bits, m) for _ in range(n)], m)
        if mat.rank() >= min(n, m):
            return mat


def generate(level: str) -> LowMcInstance:
    n, rounds = LEVELS[level]
    bits = grain()
    lin = [_matrix(bits, n, n) for _ in range(rounds)]
    consts = [_word(bits, n) for _ in range(rounds)]
    keys = [_matrix(bits, n, n) for _ in range(rounds + 1)]
    return LowMcInstance(level, n, rounds, lin, consts, keys)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    out = Path(argv[0]) if argv else Path(__file__).resolve().parents[1] / "src" / "grovercost" / "data"
    out.mkdir(parents=True, exist_ok=True)
    for level in LEVELS:
        inst = generate(level)
        for key, pt, ct in KNOWN_ANSWERS[level]:
            got = encrypt_block(inst, bytes.fromhex(key), bytes.fromhex(pt)).hex()
            if got != ct.lower():
                raise SystemExit(f"{level}: got {got}, expected {ct}")
        path = out / f"lowmc_{level.lower()}.txt.gz"
        with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as fh:
            fh.write(format_instance(inst).encode())
        print(f"{level}: wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

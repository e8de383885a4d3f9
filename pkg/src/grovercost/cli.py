"""Command-line front end.

    grovercost simulate --cipher aes128 --key HEX --msg HEX
    grovercost estimate --target aes-sbox aes128 oracle:aes128:1
    grovercost attack aes128 2^40 --metric full
    grovercost tables maxdepth-aes --format csv

Exit status is 0 on success, 2 for invalid input and 3 when the depth
budget cannot hold a single oracle call.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from functools import lru_cache
from typing import Callable, Sequence

from . import aes, costmodel, lowmc, oracle
from .circuit import Circuit
from .costmodel import BigCost, OracleCost
from .estimate import COLUMNS, HEADERS, ResourceEstimate, estimate

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE = 0, 2, 3

AES_NAMES = ("aes128", "aes192", "aes256")
LOWMC_NAMES = ("lowmc-l1", "lowmc-l3", "lowmc-l5")
AES_DESIGNS = ("in_place", "maximov")
MAXDEPTHS = (40, 64, 96)


class UsageError(ValueError):
    pass


# ------------------------------------------------------------------ output

def render(headers: Sequence[str], rows: Sequence[Sequence], fmt: str) -> str:
    rows = [[str(cell) for cell in row] for row in rows]
    if fmt == "json":
        return json.dumps([dict(zip(headers, row)) for row in rows], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(headers)
        w.writerows(rows)
        return buf.getvalue()
    table = [list(headers)] + rows
    widths = [max(len(r[i]) for r in table) for i in range(len(headers))]
    lines = []
    for r in table:
        cells = [r[0].ljust(widths[0])] + [c.rjust(wd) for c, wd in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def _estimate_rows(named: Sequence[tuple[str, ResourceEstimate]]):
    return ("operation",) + HEADERS, [(name,) + tuple(getattr(e, k) for k in COLUMNS) for name, e in named]


# ------------------------------------------------------------------ targets

def _aes_from_name(name: str) -> aes.AesVariant:
    parts = name.split("-")
    if parts[0] not in aes.VARIANTS:
        raise UsageError(f"unknown cipher {name!r}")
    mc, ke = "in_place", "in_place"
    for p in parts[1:]:
        if p in ("maximov", "shallow"):
            mc = "shallow"
        elif p == "naive":
            ke = "naive"
        else:
            raise UsageError(f"unknown AES option {p!r} in {name!r}")
    return aes.variant(parts[0], mc, ke)


def _lowmc_level(name: str) -> str:
    level = name.split("-")[1].upper()
    if level not in lowmc.LEVELS:
        raise UsageError(f"unknown LowMC level in {name!r}")
    return level


def build_target(name: str) -> Circuit:
    """Circuit for an ``estimate`` target name."""
    name = name.lower()
    if name.startswith("oracle:"):
        try:
            cipher, r = oracle.parse_target(name[len("oracle:"):])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return oracle.build_oracle(oracle.default_spec(cipher, r))
    if name == "aes-sbox":
        return aes.sbox_circuit()
    if name in ("aes-mixcolumn", "aes-mixcolumn-maximov", "aes-mixcolumn-shallow"):
        return aes.mixcolumn_circuit("in_place" if name == "aes-mixcolumn" else "shallow")
    if name in ("lowmc-sbox", "lowmc-sbox-inplace", "lowmc-sbox-shallow"):
        return lowmc.sbox_circuit("shallow" if name.endswith("shallow") else "in_place")
    if name.startswith("lowmc-"):
        parts = name.split("-")
        inst = lowmc.instance(_lowmc_level(name))
        if len(parts) == 2:
            return lowmc.lowmc_full(inst)
        if parts[2] == "affine":
            return lowmc.affine_circuit(inst, 1)
        if parts[2] == "keyexp":
            return lowmc.key_expansion_circuit(inst, 1)
        raise UsageError(f"unknown LowMC target {name!r}")
    return aes.aes_full(_aes_from_name(name))


# ------------------------------------------------------------ oracle costs

def _key_block(cipher: str) -> tuple[int, int]:
    if cipher in AES_NAMES:
        return aes.VARIANTS[cipher].key_bits, 128
    n, _ = lowmc.LEVELS[_lowmc_level(cipher)]
    return n, n


@lru_cache(maxsize=None)
def built_oracle_cost(cipher: str, design: str, r: int) -> OracleCost:
    """Estimate our own oracle circuit for ``cipher`` with ``r`` pairs."""
    name = cipher if design in ("", "in_place") else f"{cipher}-{design}"
    c, _ = oracle.parse_target(f"{name}:{r}")
    est = estimate(oracle.build_oracle(oracle.default_spec(c, r)))
    k, n = _key_block(cipher)
    return OracleCost.from_estimate(est, r=r, key_bits=k, block_bits=n, label=name)


class CostBook:
    """Oracle costs by (cipher, design, r), built on demand or read from a file."""

    def __init__(self, path: str | None = None):
        self.table: dict[tuple[str, str, int], OracleCost] | None = None
        if path:
            self.table = {}
            for cost in costmodel.load_oracle_costs(path):
                cipher, _, design = cost.label.partition("-")
                if cipher == "lowmc":
                    cipher, design = cost.label, ""
                if design == "shallow":
                    design = "maximov"
                self.table[(cipher, design or "in_place", cost.r)] = cost

    def designs(self, cipher: str) -> tuple[str, ...]:
        return AES_DESIGNS if cipher in AES_NAMES else ("in_place",)

    def get(self, cipher: str, design: str, r: int) -> OracleCost:
        if self.table is None:
            return built_oracle_cost(cipher, design, r)
        return self.table[(cipher, design, r)]

    def source(self, cipher: str, design: str) -> Callable[[int], OracleCost]:
        return lambda r: self.get(cipher, design, r)


def _split_cipher(name: str) -> tuple[str, tuple[str, ...] | None]:
    name = name.lower()
    if name.startswith("lowmc-"):
        _lowmc_level(name)
        return name, None
    base, _, design = name.partition("-")
    if base not in AES_NAMES:
        raise UsageError(f"unknown cipher {name!r}")
    if design in ("maximov", "shallow"):
        return base, ("maximov",)
    if design in ("in_place", "inplace", "ip"):
        return base, ("in_place",)
    if design:
        raise UsageError(f"unknown AES design {design!r}")
    return base, None


def plan_for(book: CostBook, cipher: str, maxdepth: BigCost, metric: str, bound,
             designs: Sequence[str] | None = None) -> costmodel.AttackPlan:
    """Cheapest plan over the available oracle designs."""
    designs = designs or book.designs(cipher)
    plans = [costmodel.best_plan(book.source(cipher, d), maxdepth, depth_metric=metric, bound=bound)
             for d in designs]
    return costmodel.cheapest(plans)


# ------------------------------------------------------------------ tables

PLAN_HEADERS = ("scheme", "MD", "r", "S", "log2(SKP)", "D", "W", "G-cost", "DW-cost")


def _plan_row(cipher: str, plan: costmodel.AttackPlan) -> list[str]:
    return [cipher] + list(plan.row().values())


def table_sbox(book, fmt):
    return _estimate_rows([
        ("AES S-box (BP12)", estimate(aes.sbox_circuit())),
        ("LowMC in-place S-box", estimate(lowmc.sbox_circuit("in_place"))),
        ("LowMC shallow S-box", estimate(lowmc.sbox_circuit("shallow"))),
    ])


def table_mixcolumn(book, fmt):
    return _estimate_rows([
        ("in-place MixColumn", estimate(aes.mixcolumn_circuit("in_place"))),
        ("shallow MixColumn", estimate(aes.mixcolumn_circuit("shallow"))),
    ])


def table_cipher(book, fmt):
    named = []
    for mc, tag in (("in_place", "in-place MC"), ("shallow", "shallow MC")):
        for name in AES_NAMES:
            named.append((f"{name} ({tag})", estimate(aes.aes_full(aes.variant(name, mc)))))
    for name in AES_NAMES:
        named.append((f"{name} (naive KE)", estimate(aes.aes_full(aes.variant(name, "in_place", "naive")))))
    for level in lowmc.LEVELS:
        inst = lowmc.instance(level)
        named.append((f"LowMC {level}", estimate(lowmc.lowmc_full(inst))))
    for level in lowmc.LEVELS:
        named.append((f"AffineLayer {level} R1", estimate(lowmc.affine_circuit(lowmc.instance(level), 1))))
    for level in lowmc.LEVELS:
        named.append((f"KeyExpansion {level} R1", estimate(lowmc.key_expansion_circuit(lowmc.instance(level), 1))))
    return _estimate_rows(named)


ORACLE_ROWS = (
    [(c, "in_place", r) for r in (1, 2) for c in AES_NAMES] + [("aes256", "in_place", 3)]
    + [(c, "maximov", r) for r in (1, 2) for c in AES_NAMES] + [("aes256", "maximov", 3)]
    + [(c, "in_place", r) for r in (1, 2) for c in LOWMC_NAMES]
)


def _oracle_label(cipher, design, r):
    if cipher in AES_NAMES:
        return f"{cipher} oracle ({'IP' if design == 'in_place' else 'shallow'} MC, r={r})"
    return f"{cipher} oracle (r={r})"


def table_oracle(book, fmt):
    named = []
    for cipher, design, r in ORACLE_ROWS:
        cost = book.get(cipher, design, r)
        if cost.counts is None:
            raise UsageError("the oracle table needs per-kind gate counts")
        named.append((_oracle_label(cipher, design, r), cost.counts))
    return _estimate_rows(named)


GROVER_ROWS = (
    ("aes128", 1), ("aes128", 2), ("aes192", 2), ("aes256", 2), ("aes256", 3),
    ("lowmc-l1", 1), ("lowmc-l3", 1), ("lowmc-l5", 1), ("lowmc-l1", 2), ("lowmc-l3", 2), ("lowmc-l5", 2),
)
GROVER_HEADERS = ("scheme", "#CNOT", "#1qCliff", "#(1qCliff+CNOT)", "#T", "#M", "T-depth", "full depth",
                  "width", "G-cost", "DW-cost", "p_succ")


def _opt(x):
    return x.render() if x is not None else "0"


def table_grover(book, fmt):
    rows = []
    for cipher, r in GROVER_ROWS:
        run = costmodel.grover_run(book.get(cipher, "in_place", r))
        clifford = run.iterations * (run.oracle.counts.cnot + run.oracle.counts.one_qubit_clifford)
        rows.append([_oracle_label(cipher, "in_place", r).replace(" oracle", ""), _opt(run.cnot),
                     _opt(run.one_qubit_clifford), clifford.render(), _opt(run.t), _opt(run.measure),
                     run.t_depth.render(), run.full_depth.render(), run.width, run.G.render(),
                     run.DW.render(), f"{float(run.p_succ):.4f}"])
    return GROVER_HEADERS, rows


NIST_REFERENCE = {"aes128": 170, "aes192": 233, "aes256": 298}  # G-cost ~ 2^x / MAXDEPTH


def table_nist(book, fmt, bound=costmodel.DEFAULT_SKP_BOUND):
    headers = ("category", "source") + tuple(f"MD=2^{md}" for md in MAXDEPTHS) + ("approximation",)
    rows = []
    for cat, cipher in zip((1, 3, 5), AES_NAMES):
        ref = NIST_REFERENCE[cipher]
        rows.append([f"{cat} {cipher}", "NIST"] + [f"2^{ref - md}" for md in MAXDEPTHS] + [f"2^{ref}/MD"])
        plans = [plan_for(book, cipher, BigCost.pow2(md), "full", bound) for md in MAXDEPTHS]
        approx = math.floor((plans[0].G * plans[0].maxdepth).log2)
        rows.append([f"{cat} {cipher}", "estimated"] + [pl.G.render() for pl in plans] + [f"~2^{approx}/MD"])
    return headers, rows


def _maxdepth_table(book, ciphers, bound=costmodel.DEFAULT_SKP_BOUND):
    headers = ("metric",) + PLAN_HEADERS
    rows = []
    for metric in costmodel.DEPTH_METRICS:
        for md in MAXDEPTHS:
            for cipher in ciphers:
                plan = plan_for(book, cipher, BigCost.pow2(md), metric, bound)
                design = plan.oracle.label.partition("-")[2] if cipher in AES_NAMES else ""
                scheme = f"{cipher} ({design or 'in_place'})" if cipher in AES_NAMES else cipher
                rows.append([metric] + _plan_row(scheme, plan))
    return headers, rows


def table_maxdepth_aes(book, fmt):
    return _maxdepth_table(book, AES_NAMES)


def table_maxdepth_lowmc(book, fmt):
    return _maxdepth_table(book, LOWMC_NAMES)


TABLES = {
    "sbox": table_sbox,
    "mixcolumn": table_mixcolumn,
    "cipher": table_cipher,
    "oracle": table_oracle,
    "grover": table_grover,
    "nist": table_nist,
    "maxdepth-aes": table_maxdepth_aes,
    "maxdepth-lowmc": table_maxdepth_lowmc,
}


# ------------------------------------------------------------------ commands

def _hex(text: str, nbytes: int, what: str) -> bytes:
    try:
        data = bytes.fromhex(text)
    except ValueError:
        raise UsageError(f"{what} is not valid hex") from None
    if len(data) != nbytes:
        raise UsageError(f"{what} must be {nbytes} bytes, got {len(data)}")
    return data


def cmd_simulate(args) -> str:
    name = args.cipher.lower()
    if name.startswith("lowmc-"):
        inst = lowmc.instance(_lowmc_level(name))
        nb = inst.block_bits // 8
        key, msg = _hex(args.key, inst.key_bits // 8, "key"), _hex(args.msg, nb, "msg")
        ct = lowmc.encrypt_with_circuit(lowmc.lowmc_full(inst), [key], [msg])[0]
        ref = lowmc.encrypt_block(inst, key, msg)
    else:
        v = _aes_from_name(name)
        key, msg = _hex(args.key, v.key_bits // 8, "key"), _hex(args.msg, 16, "msg")
        ct = aes.encrypt_with_circuit(aes.aes_full(v), [key], [msg])[0]
        ref = aes.encrypt_block(key, msg)
    row = [name, key.hex(), msg.hex(), ct.hex(), "yes" if ct == ref else "NO"]
    return render(("cipher", "key", "msg", "ciphertext", "matches reference"), [row], args.format)


def cmd_estimate(args) -> str:
    targets = [t for group in args.target for t in group]
    named = [(t, estimate(build_target(t), reuse_qubits=args.reuse_qubits)) for t in targets]
    return render(*_estimate_rows(named), args.format)


def cmd_attack(args) -> str:
    try:
        md = costmodel.parse_maxdepth(args.maxdepth)
        bound = BigCost.parse(args.skp_bound).value
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cipher, designs = _split_cipher(args.cipher)
    book = CostBook(args.oracle_costs)
    try:
        plan = plan_for(book, cipher, md, args.metric, bound, designs)
    except KeyError as exc:
        raise UsageError(f"no oracle cost for {exc.args[0]} in {args.oracle_costs}") from None
    headers = ("scheme", "design") + tuple(plan.row())
    design = plan.oracle.label.partition("-")[2] if cipher in AES_NAMES else ""
    return render(headers, [[cipher, design or "in_place"] + list(plan.row().values())], args.format)


def cmd_tables(args) -> str:
    book = CostBook(args.oracle_costs)
    try:
        headers, rows = TABLES[args.which](book, args.format)
    except KeyError as exc:
        raise UsageError(f"no oracle cost for {exc.args[0]} in {args.oracle_costs}") from None
    return render(headers, rows, args.format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grovercost", description=__doc__.split("\n\n")[0])
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "csv", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[fmt], help="encrypt one block with the reversible circuit")
    p.add_argument("--cipher", required=True, help="aes128, aes192, aes256 (-maximov, -naive) or lowmc-l1/l3/l5")
    p.add_argument("--key", required=True, help="key as hex")
    p.add_argument("--msg", required=True, help="plaintext block as hex")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", parents=[fmt], help="Clifford+T resource estimates")
    p.add_argument("--target", action="append", nargs="+", required=True,
                   help="aes-sbox, aes-mixcolumn[-maximov], aes128[-maximov][-naive], lowmc-sbox[-shallow], "
                        "lowmc-l1[-affine|-keyexp], oracle:<cipher>:<r>")
    p.add_argument("--reuse-qubits", action="store_true", help="recycle released qubits when scheduling")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("attack", parents=[fmt], help="plan a depth-limited Grover key search")
    p.add_argument("cipher", help="aes128, aes192, aes256 (optionally -maximov or -in_place) or lowmc-l1/l3/l5")
    p.add_argument("maxdepth", help="depth budget, e.g. 2^40")
    p.add_argument("--metric", choices=costmodel.DEPTH_METRICS, default="full")
    p.add_argument("--skp-bound", default="2^-20", help="largest tolerated spurious-key probability")
    p.add_argument("--oracle-costs", metavar="FILE", help="JSON or CSV oracle costs instead of building circuits")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("tables", parents=[fmt], help="regenerate a cost table")
    p.add_argument("which", choices=tuple(TABLES))
    p.add_argument("--oracle-costs", metavar="FILE", help="JSON or CSV oracle costs instead of building circuits")
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except costmodel.InfeasibleDepth as exc:
        print(f"grovercost: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (UsageError, ValueError, OSError) as exc:
        print(f"grovercost: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())

"""Cost model for Grover key search under a depth limit.

Quantities reach 2^256, so everything large lives in the log2 domain on a
private mpmath context with 120 significant digits.  Probabilities stay as
mpmath reals and use ``expm1`` where they approach 0 or 1.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Union

import mpmath

from .estimate import ResourceEstimate

_mp = mpmath.MPContext()
_mp.dps = 120

Real = Union[int, float, "mpmath.mpf", "BigCost"]

DEPTH_METRICS = ("full", "t_depth")
DEFAULT_SKP_BOUND = _mp.mpf(2) ** -20


class InfeasibleDepth(ValueError):
    """One oracle call alone is deeper than the depth budget."""


def _mpf(x) -> "mpmath.mpf":
    if isinstance(x, BigCost):
        return x.value
    return _mp.mpf(x)


# ---------------------------------------------------------------- BigCost

_PARSE = re.compile(
    r"^\s*(?:(?P<m>[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)\s*(?:\*|·|x|\\cdot)\s*)?"
    r"2\s*\^\s*\{?\s*(?P<e>[+-]?[0-9]*\.?[0-9]+)\s*\}?\s*$"
)


@dataclass(frozen=True, order=True)
class BigCost:
    """A positive quantity stored as its base-2 logarithm."""

    log2_value: "mpmath.mpf"

    def __post_init__(self):
        object.__setattr__(self, "log2_value", _mp.mpf(self.log2_value))

    @classmethod
    def of(cls, x: Real) -> "BigCost":
        if isinstance(x, BigCost):
            return x
        x = _mp.mpf(x)
        if x < 0:
            raise ValueError("BigCost holds non-negative quantities")
        return cls(_mp.log(x, 2) if x > 0 else _mp.ninf)

    @classmethod
    def pow2(cls, e: Real) -> "BigCost":
        return cls(_mp.mpf(e))

    @classmethod
    def parse(cls, text: str) -> "BigCost":
        """Read ``m*2^e``, ``m·2^e``, ``2^e`` or a plain number."""
        match = _PARSE.match(text)
        if match:
            m = _mp.mpf(match["m"]) if match["m"] else _mp.mpf(1)
            return cls(_mp.log(m, 2) + _mp.mpf(match["e"]))
        try:
            return cls.of(_mp.mpf(text.strip()))
        except (ValueError, TypeError):
            raise ValueError(f"cannot parse {text!r} as a quantity") from None

    @property
    def value(self) -> "mpmath.mpf":
        return _mp.mpf(2) ** self.log2_value if self.log2_value != _mp.ninf else _mp.mpf(0)

    @property
    def log2(self) -> float:
        return float(self.log2_value)

    def mantissa_exponent(self, digits: int = 2) -> tuple[float, int]:
        """``(m, e)`` with ``x ≈ m·2^e`` and ``1 <= m < 2`` after rounding."""
        e = int(_mp.floor(self.log2_value))
        m = round(float(_mp.mpf(2) ** (self.log2_value - e)), digits)
        if m >= 2:
            m, e = round(m / 2, digits), e + 1
        return m, e

    def render(self, digits: int = 2, sep: str = "*") -> str:
        if self.log2_value == _mp.ninf:
            return "0"
        m, e = self.mantissa_exponent(digits)
        return f"{m:.{digits}f}{sep}2^{e}"

    def __str__(self) -> str:
        return self.render()

    def __float__(self) -> float:
        return float(self.value)

    def __mul__(self, other: Real) -> "BigCost":
        return BigCost(self.log2_value + BigCost.of(other).log2_value)

    __rmul__ = __mul__

    def __truediv__(self, other: Real) -> "BigCost":
        return BigCost(self.log2_value - BigCost.of(other).log2_value)

    def __pow__(self, k: Real) -> "BigCost":
        return BigCost(self.log2_value * _mp.mpf(k))

    def sqrt(self) -> "BigCost":
        return BigCost(self.log2_value / 2)

    def ceil(self) -> "BigCost":
        return BigCost.of(_mp.ceil(self.value))

    def floor(self) -> "BigCost":
        return BigCost.of(_mp.floor(self.value))


# ------------------------------------------------------------ oracle costs

@dataclass(frozen=True)
class OracleCost:
    """Cost of one Grover oracle call: gates, depth, T-depth and width."""

    g_gates: int
    g_depth: int
    g_tdepth: int
    g_width: int
    r: int = 1
    key_bits: int = 128
    block_bits: int = 128
    label: str = ""
    counts: ResourceEstimate | None = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("g_gates", "g_depth", "g_tdepth", "g_width", "r", "key_bits", "block_bits"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_estimate(cls, est: ResourceEstimate, *, r: int, key_bits: int, block_bits: int,
                      label: str = "") -> "OracleCost":
        return cls(est.gates, est.full_depth, est.t_depth, est.width, r, key_bits, block_bits, label, est)

    def depth(self, metric: str = "full") -> int:
        if metric == "full":
            return self.g_depth
        if metric == "t_depth":
            return self.g_tdepth
        raise ValueError(f"unknown depth metric {metric!r}; expected one of {DEPTH_METRICS}")


def load_oracle_costs(path) -> list[OracleCost]:
    """Read oracle cost records from JSON (a list of objects) or CSV.

    Each record carries ``cipher``, ``r``, ``key_bits``, ``block_bits`` and
    either the per-kind counts (``cnot``, ``one_qubit_clifford``, ``t``,
    ``measure``, ``t_depth``, ``full_depth``, ``width``) or the totals
    (``g_gates``, ``g_depth``, ``g_tdepth``, ``g_width``).  An optional
    ``design`` names the circuit variant.
    """
    import csv

    with open(path, newline="") as fh:
        text = fh.read()
    if text.lstrip().startswith("["):
        records = json.loads(text)
    else:
        records = list(csv.DictReader(text.splitlines()))
    return [oracle_cost_from_record(rec) for rec in records]


def oracle_cost_from_record(rec: Mapping) -> OracleCost:
    def num(key):
        return int(rec[key])

    label = str(rec.get("cipher", ""))
    if rec.get("design"):
        label += f"-{rec['design']}"
    common = dict(r=num("r"), key_bits=num("key_bits"), block_bits=num("block_bits"), label=label)
    if "cnot" in rec:
        est = ResourceEstimate(*(num(k) for k in ("cnot", "one_qubit_clifford", "t", "measure",
                                                  "t_depth", "full_depth", "width")))
        return OracleCost.from_estimate(est, **common)
    return OracleCost(num("g_gates"), num("g_depth"), num("g_tdepth"), num("g_width"), **common)


# ------------------------------------------------- success and spurious keys

def _theta(N, M=1):
    return _mp.asin(_mp.sqrt(_mpf(M) / _mpf(N)))


def success_prob(j: int, N: Real, M: Real = 1) -> "mpmath.mpf":
    """Probability of measuring a solution after ``j`` Grover iterations."""
    N, M = _mpf(N), _mpf(M)
    if not (1 <= M <= N) or j < 0:
        raise ValueError("need 1 <= M <= N and j >= 0")
    return _mp.sin((2 * j + 1) * _theta(N, M)) ** 2


def c_p(p: Real = 1) -> "mpmath.mpf":
    """``arcsin(sqrt(p)) / 2``; equals pi/4 at p = 1."""
    p = _mpf(p)
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    return _mp.asin(_mp.sqrt(p)) / 2


def iterations(p: Real, N: Real, S: Real = 1) -> int:
    """Iterations reaching probability ``p`` on a subspace of ``N/S`` keys."""
    theta = _theta(_mpf(N) / _mpf(S))
    j = _mp.ceil((2 * c_p(p) / theta - 1) / 2)
    return max(int(j), 0)


def spurious_dist(k: int, n: int, r: int, t: int) -> "mpmath.mpf":
    """Poisson approximation of Pr(exactly ``t`` spurious keys)."""
    if min(k, n, r) < 1 or t < 0:
        raise ValueError("need k, n, r >= 1 and t >= 0")
    lam = _mp.mpf(2) ** (k - r * n)
    return _mp.exp(-lam) * lam**t / _mp.factorial(t)


def spurious_binomial(k: int, n: int, r: int, t: int) -> "mpmath.mpf":
    """The exact binomial law that ``spurious_dist`` approximates."""
    keys = 2**k - 1
    q = _mp.mpf(2) ** (-r * n)
    return _mp.binomial(keys, t) * q**t * (1 - q) ** (keys - t)


def skp(k: int, n: int, r: int, S: Real = 1) -> "mpmath.mpf":
    """Probability of a spurious key in the target key's subset."""
    S = _mpf(S)
    if S < 1:
        raise ValueError("S must be at least 1")
    x = _mp.mpf(2) ** (k - r * n) / S
    return -_mp.expm1(-x)


def log2_skp(k: int, n: int, r: int, S: Real = 1) -> float:
    return float(_mp.log(skp(k, n, r, S), 2))


def min_r(k: int, n: int, S: Real = 1, bound: Real = DEFAULT_SKP_BOUND) -> int:
    """Smallest ``r`` with ``skp(k, n, r, S) < bound``."""
    bound = _mpf(bound)
    if not 0 < bound < 1:
        raise ValueError("bound must lie in (0, 1)")
    r = 1
    while skp(k, n, r, S) >= bound:
        r += 1
    return r


def uniqueness_r(k: int, n: int) -> int:
    """``ceil(k/n) + 1`` pairs: a unique key except with probability about 2^-n."""
    return -(-k // n) + 1


# ------------------------------------------------------------- attack plans

@dataclass(frozen=True)
class AttackPlan:
    r: int
    S: BigCost
    skp: "mpmath.mpf"
    iterations: int
    D: BigCost
    W: BigCost
    G: BigCost
    DW: BigCost
    depth_metric: str
    maxdepth: BigCost
    oracle: OracleCost

    @property
    def log2_skp(self) -> float:
        return float(_mp.log(self.skp, 2)) if self.skp > 0 else -math.inf

    def row(self) -> dict[str, str]:
        return {
            "MD": f"2^{self.maxdepth.log2:g}",
            "r": str(self.r),
            "S": self.S.render(),
            "log2(SKP)": f"{self.log2_skp:.2f}",
            "D" if self.depth_metric == "full" else "T-D": self.D.render(),
            "W": self.W.render(),
            "G-cost": self.G.render(),
            "DW-cost" if self.depth_metric == "full" else "T-DW-cost": self.DW.render(),
        }


def _as_cost(x: Real) -> BigCost:
    return x if isinstance(x, BigCost) else BigCost.of(x)


def plan_attack(cost: OracleCost, k: int | None = None, maxdepth: Real = 2**40, p: Real = 1,
                depth_metric: str = "full", block_bits: int | None = None) -> AttackPlan:
    """Inner-parallel Grover search for one key under a depth budget.

    The number of machines ``S`` is the smallest that lets the target key's
    subset be searched to probability ``p`` within ``maxdepth``.
    """
    k = cost.key_bits if k is None else k
    n = cost.block_bits if block_bits is None else block_bits
    md = _as_cost(maxdepth)
    gd = cost.depth(depth_metric)
    N = _mp.mpf(2) ** k
    jmax = _mp.floor(md.value / gd)
    if jmax < 1:
        raise InfeasibleDepth(f"one oracle call of depth {gd} exceeds the budget {md}")
    S = _mp.ceil(N * (2 * c_p(p)) ** 2 / (2 * jmax + 1) ** 2)
    S = max(S, _mp.mpf(1))
    j = iterations(p, N, S)
    while j > jmax:  # guards rounding at the ceiling, never expected to loop
        S += 1
        j = iterations(p, N, S)
    Sc = BigCost.of(S)
    D = BigCost.of(j * gd)
    W = Sc * cost.g_width
    G = Sc * (j * cost.g_gates)
    return AttackPlan(cost.r, Sc, skp(k, n, cost.r, S), j, D, W, G, D * W, depth_metric, md, cost)


CostSource = Union[Mapping[int, OracleCost], Callable[[int], OracleCost]]


def best_plan(costs: CostSource, maxdepth: Real, *, p: Real = 1, depth_metric: str = "full",
              bound: Real = DEFAULT_SKP_BOUND, r_max: int = 8) -> AttackPlan:
    """Plan with the smallest ``r`` whose SKP stays below ``bound``.

    ``costs`` maps ``r`` to the oracle cost for ``r`` pairs; the oracle
    changes with ``r`` and so does ``S``, so each ``r`` is planned in turn.
    """
    get = costs.__getitem__ if isinstance(costs, Mapping) else costs
    bound = _mpf(bound)
    last = None
    for r in range(1, r_max + 1):
        try:
            cost = get(r)
        except KeyError:
            continue
        last = plan_attack(cost, maxdepth=maxdepth, p=p, depth_metric=depth_metric)
        if last.skp < bound:
            return last
    if last is None:
        raise ValueError("no oracle costs supplied")
    raise ValueError(f"no r <= {r_max} brings SKP below the bound")


def cheapest(plans: Iterable[AttackPlan]) -> AttackPlan:
    """Lowest G-cost, ties broken by DW-cost."""
    return min(plans, key=lambda pl: (pl.G.log2_value, pl.DW.log2_value))


# ------------------------------------------------------ unparallelized search

@dataclass(frozen=True)
class GroverRun:
    """Full Grover search with floor(pi/4 * 2^(k/2)) oracle calls, no parallelism."""

    iterations: BigCost
    cnot: BigCost | None
    one_qubit_clifford: BigCost | None
    t: BigCost | None
    measure: BigCost | None
    t_depth: BigCost
    full_depth: BigCost
    width: int
    G: BigCost
    DW: BigCost
    p_succ: "mpmath.mpf"
    oracle: OracleCost


def grover_run(cost: OracleCost) -> GroverRun:
    k, n = cost.key_bits, cost.block_bits
    j = BigCost.of(_mp.floor(_mp.pi / 4 * _mp.mpf(2) ** (_mp.mpf(k) / 2)))
    cnt = cost.counts

    def times(x):
        return j * x if x else None

    return GroverRun(
        iterations=j,
        cnot=times(cnt.cnot) if cnt else None,
        one_qubit_clifford=times(cnt.one_qubit_clifford) if cnt else None,
        t=times(cnt.t) if cnt else None,
        measure=times(cnt.measure) if cnt else None,
        t_depth=j * cost.g_tdepth,
        full_depth=j * cost.g_depth,
        width=cost.g_width,
        G=j * cost.g_gates,
        DW=j * cost.g_depth * cost.g_width,
        p_succ=spurious_dist(k, n, cost.r, 0),
        oracle=cost,
    )


# ------------------------------------------------------ parallelization notes

def outer_parallel_success(S: int, N: Real = 2**128) -> "mpmath.mpf":
    """Success of ``S`` independent searches each run for j_S iterations."""
    if S < 1:
        raise ValueError("S must be at least 1")
    theta = _theta(N)
    jS = _mp.floor(_mp.pi / (4 * theta * _mp.sqrt(S)))
    return 1 - (1 - _mp.sin((2 * jS + 1) * theta) ** 2) ** S


def outer_parallel_limit() -> "mpmath.mpf":
    return 1 - _mp.exp(-_mp.pi**2 / 4)


def repeat_vs_continue(j: int, m: int, N: Real, M: Real = 1) -> tuple["mpmath.mpf", "mpmath.mpf"]:
    """``(p_repeat, p_continue)``: m restarts of j iterations vs one run of m*j."""
    if m < 1:
        raise ValueError("m must be at least 1")
    pj = success_prob(j, N, M)
    return 1 - (1 - pj) ** m, success_prob(m * j, N, M)


def optimal_restart(N: Real, M: Real = 1) -> tuple[int, "mpmath.mpf"]:
    """Iteration count minimizing expected work ``j / p(j)`` with restarts.

    Returns ``(j, expected iterations)``.
    """
    def work(j):
        return j / success_prob(j, N, M)

    lo, hi = 1, max(2, int(_mp.pi / (4 * _theta(N, M))))
    while hi - lo > 2:
        a = lo + (hi - lo) // 3
        b = hi - (hi - lo) // 3
        if work(a) < work(b):
            hi = b
        else:
            lo = a
    j = min(range(lo, hi + 1), key=work)
    return j, work(j)


def classical_crossover(C: Real, cost: OracleCost, k: int | None = None, p: Real = 1) -> BigCost:
    """Machine count beyond which brute force beats parallel Grover."""
    k = cost.key_bits if k is None else k
    C, p = _mpf(C), _mpf(p)
    if C < 0 or p <= 0:
        raise ValueError("need C >= 0 and p > 0")
    ratio = p * C / (c_p(p) * cost.g_gates)
    return BigCost.of(ratio**2) * BigCost.pow2(k)


def min_comm_depth(k: int, cost: OracleCost, c_S: Real = 1, p: Real = 1) -> BigCost:
    """Smallest total depth once collecting results across an H tree counts."""
    c_S = _mpf(c_S)
    if c_S < 0:
        raise ValueError("c_S must be non-negative")
    inner = c_p(p) * c_S * cost.g_depth * _mp.sqrt(cost.g_width)
    return BigCost.pow2(_mp.mpf(k) / 4) * BigCost.of(inner).sqrt()


def classical_min_depth(k: int, cost: OracleCost, C: Real, c_S: Real = 1, p: Real = 1) -> BigCost:
    """The same floor for classical brute force on a planar layout."""
    inner = cost.g_width * _mpf(C) * _mpf(c_S) ** 2 / _mpf(p) ** 2
    return BigCost.pow2(_mp.mpf(k) / 3) * BigCost.of(inner) ** (_mp.mpf(1) / 3)


def parse_maxdepth(text: str) -> BigCost:
    """Read a depth budget such as ``2^40`` or ``1.5*2^64``."""
    return BigCost.parse(text)

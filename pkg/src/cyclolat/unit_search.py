"""Exhaustive search for twists alpha = sign * alpha0 * prod(units^e) whose
twisted trace form realizes prescribed lattice invariants.

Candidates are enumerated over an inclusive per-unit exponent box in
lexicographic order, with partial products reused along the enumeration tree.
Filters are staged from cheap to expensive:

  (i)   embedding sign count -- certified signs of alpha0 and of each unit
        are computed once, and a candidate's sign vector is their pointwise
        product, so no interval arithmetic runs per candidate;
  (ii)  integrality of the Gram matrix;
  (iii) the exact determinant identity;
  (iv)  discriminant group orders and form.

The box may be partitioned into contiguous chunks processed by independent
workers; results are merged into a canonical order, so the output is
identical for every worker count.
"""

from __future__ import annotations

import configparser
import multiprocessing
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .cyclotomic import RealElem, embedding_signs, minimal_poly_mu, parse_coeffs
from .cyclotomic import _mu_power  # integral trace table, see _trace_table
from .exact_linalg import Matrix, congruent_diag, det, snf
from .lattice_core import (
    Lattice,
    diagonal_form_multiset,
    discriminant_form,
    invariant_report,
)

__all__ = [
    "UnitSystem",
    "SearchTarget",
    "SearchSpec",
    "Solution",
    "load_units",
    "load_search_spec",
    "search",
    "search_payload",
]


@dataclass(frozen=True)
class UnitSystem:
    """A list of verified units of the real subfield (|norm| = 1 each)."""

    p: int
    units: tuple[RealElem, ...]
    provenance: str = ""

    @property
    def rank(self) -> int:
        return len(self.units)


def load_units(source: str | Path | configparser.ConfigParser) -> UnitSystem:
    """Read a [units] config section; every entry must have |norm| = 1 and
    the count must match the declared rank."""
    if isinstance(source, configparser.ConfigParser):
        cfg = source
    else:
        cfg = configparser.ConfigParser()
        if not cfg.read(source):
            raise ValueError(f"cannot read units file {source}")
    if "units" not in cfg:
        raise ValueError("no [units] section")
    section = cfg["units"]
    p = int(section["p"])
    rank = int(section["rank"])
    units = []
    for i in range(1, rank + 1):
        key = f"u{i}"
        if key not in section:
            raise ValueError(f"missing unit {key}; declared rank is {rank}")
        u = RealElem(p, parse_coeffs(section[key], (p - 1) // 2))
        n = u.norm()
        if abs(n) != 1:
            raise ValueError(f"entry {key} is not a unit: |norm| = {abs(n)}")
        units.append(u)
    return UnitSystem(p, tuple(units), section.get("provenance", ""))


@dataclass(frozen=True)
class SearchTarget:
    signature: tuple[int, int]
    orders: tuple[int, ...]
    qvalues: tuple[Fraction, ...]


@dataclass(frozen=True)
class SearchSpec:
    p: int
    alpha0: RealElem
    units: UnitSystem
    box: tuple[tuple[int, int], ...]
    signs: tuple[int, ...]
    target: SearchTarget

    def __post_init__(self) -> None:
        if self.units.p != self.p or self.alpha0.p != self.p:
            raise ValueError("prime mismatch between seed, units and spec")
        if self.alpha0.is_zero:
            raise ValueError("seed twist must be nonzero")
        if len(self.box) != self.units.rank:
            raise ValueError(f"box has {len(self.box)} ranges for {self.units.rank} units")
        if any(lo > hi for lo, hi in self.box):
            raise ValueError("empty exponent range in box")
        if not self.signs or any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be a nonempty subset of {+1, -1}")
        sp, sm = self.target.signature
        if sp + sm != self.p - 1 or sm % 2:
            raise ValueError(f"target signature {self.target.signature} is not "
                             f"(p-1-2t, 2t) for p={self.p}")

    @property
    def n_candidates(self) -> int:
        n = 1
        for lo, hi in self.box:
            n *= hi - lo + 1
        return n


@dataclass(frozen=True)
class Solution:
    sign: int
    exponents: tuple[int, ...]
    alpha: RealElem
    gram: Matrix
    invariants: dict


def load_search_spec(path: str | Path) -> SearchSpec:
    path = Path(path)
    cfg = configparser.ConfigParser()
    if not cfg.read(path):
        raise ValueError(f"cannot read search spec {path}")
    if "search" not in cfg:
        raise ValueError("no [search] section")
    section = cfg["search"]
    p = int(section["p"])
    alpha0 = RealElem(p, parse_coeffs(section["alpha0"], (p - 1) // 2))
    units = load_units(path.parent / section["units_file"])
    box = _parse_box(section["box"], units.rank)
    signs = tuple(int(tok) for tok in section["signs"].split(",") if tok.strip())
    target = SearchTarget(
        signature=_parse_int_pair(section["target_signature"]),
        orders=tuple(int(tok) for tok in section["target_orders"].split(",") if tok.strip()),
        qvalues=tuple(Fraction(tok.strip()) for tok in section["target_q"].split(",") if tok.strip()),
    )
    return SearchSpec(p, alpha0, units, box, signs, target)


def _parse_box(text: str, rank: int) -> tuple[tuple[int, int], ...]:
    """Either one 'lo..hi' range applied to all units, or a semicolon list."""
    parts = [tok.strip() for tok in text.split(";") if tok.strip()]
    ranges = []
    for part in parts:
        lo, _, hi = part.partition("..")
        ranges.append((int(lo), int(hi)))
    if len(ranges) == 1:
        ranges = ranges * rank
    if len(ranges) != rank:
        raise ValueError(f"box lists {len(ranges)} ranges for {rank} units")
    return tuple(ranges)


def _parse_int_pair(text: str) -> tuple[int, int]:
    items = [int(tok) for tok in text.split(",") if tok.strip()]
    if len(items) != 2:
        raise ValueError(f"expected two integers, got {text!r}")
    return (items[0], items[1])


# ---------------------------------------------------------------------------
# the search itself

def search(spec: SearchSpec, jobs: int = 1) -> list[Solution]:
    """All box candidates that pass every filter, in canonical order
    (+1 block before -1, exponent vectors lexicographic)."""
    sign_rows = _sign_data(spec)
    tasks = []
    total = spec.n_candidates
    jobs = max(1, min(jobs, total))
    bounds = [total * k // jobs for k in range(jobs + 1)]
    for sign in sorted(spec.signs, reverse=True):
        for k in range(jobs):
            if bounds[k] < bounds[k + 1]:
                tasks.append((spec, sign, bounds[k], bounds[k + 1], sign_rows))
    if jobs == 1:
        chunks = [_search_chunk(t) for t in tasks]
    else:
        with multiprocessing.Pool(processes=jobs) as pool:
            chunks = pool.map(_search_chunk, tasks)
    merged = [sol for chunk in chunks for sol in chunk]
    merged.sort(key=lambda s: (-s.sign, s.exponents))
    return merged


def _sign_data(spec: SearchSpec):
    """Certified embedding signs of the seed and of every unit."""
    seed = embedding_signs(spec.alpha0)
    rows = tuple(embedding_signs(u) for u in spec.units.units)
    return (seed, rows)


def _search_chunk(task) -> list[Solution]:
    # candidates are carried as scaled integer vectors (v, d) standing for
    # v/d over the mu-power basis: the enumeration tree and the first three
    # filters then run entirely on machine integers
    spec, sign, start, stop, (seed_signs, unit_signs) = task
    p = spec.p
    m = (p - 1) // 2
    target = spec.target
    t_target = target.signature[1] // 2
    expected_abs_det = spec.alpha0.norm() ** 2 * Fraction(p) ** (p - 2)
    target_multiset = diagonal_form_multiset(target.orders, target.qvalues)
    minpoly = minimal_poly_mu(p)
    trace_tab = _trace_table(p)
    pow_tables = [
        {e: _to_scaled(u ** e) for e in range(lo, hi + 1)}
        for u, (lo, hi) in zip(spec.units.units, spec.box)
    ]
    base = _to_scaled(spec.alpha0)
    out = []
    for exponents, (vec, den) in _box_products(base, pow_tables, spec.box,
                                               minpoly, start, stop):
        negatives = 0
        for k, s0 in enumerate(seed_signs):
            s = s0 if sign > 0 else -s0
            for d, e in enumerate(exponents):
                if e % 2:
                    s *= unit_signs[d][k]
            if s < 0:
                negatives += 1
        if negatives != t_target:
            continue
        crow = [sum(vec[k] * trace_tab[k][mm] for k in range(m)) for mm in range(p)]
        if any(c % den for c in crow):
            continue
        c = [sign * (x // den) for x in crow]
        gram = Matrix([[c[(i - j) % p] for j in range(p - 1)] for i in range(p - 1)])
        if abs(Fraction(det(gram))) != expected_abs_det:
            continue
        diag = snf(gram).diagonal
        if tuple(d for d in diag if d > 1) != target.orders:
            continue
        lattice = Lattice(gram)
        df = discriminant_form(lattice)
        if df.value_multiset() != target_multiset:
            continue
        if congruent_diag(gram) != target.signature:
            continue
        alpha = RealElem(p, tuple(Fraction(sign * x, den) for x in vec))
        out.append(Solution(sign, exponents, alpha, gram,
                            invariant_report(lattice)))
    return out


def _to_scaled(elem: RealElem) -> tuple[tuple[int, ...], int]:
    den = 1
    for c in elem.coeffs:
        den = den * c.denominator // _int_gcd(den, c.denominator)
    return tuple(int(c * den) for c in elem.coeffs), den


def _scaled_mul(a, b, minpoly) -> tuple[tuple[int, ...], int]:
    (va, da), (vb, db) = a, b
    m = len(va)
    full = [0] * (2 * m - 1)
    for i, x in enumerate(va):
        if x:
            for j, y in enumerate(vb):
                if y:
                    full[i + j] += x * y
    # reduce by the monic integer minimal polynomial
    for i in range(2 * m - 2, m - 1, -1):
        c = full[i]
        if c:
            full[i] = 0
            for j in range(m):
                full[i - m + j] -= c * minpoly[j]
    vec = full[:m]
    den = da * db
    g = den
    for x in vec:
        g = _int_gcd(g, x)
        if g == 1:
            break
    if g > 1:
        vec = [x // g for x in vec]
        den //= g
    return tuple(vec), den


def _int_gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _trace_table(p: int) -> list[list[int]]:
    """Integer table T[k][m] = Tr(mu^k * zeta^m) for 0 <= k < (p-1)/2,
    0 <= m < p; traces of a scaled candidate are integer combinations of it."""
    tab = []
    for k in range((p - 1) // 2):
        coeffs = _mu_power(p, k).coeffs
        total = int(sum(coeffs))
        row = []
        for mm in range(p):
            idx = (-mm) % p
            lead = int(coeffs[idx]) if idx < p - 1 else 0
            row.append(p * lead - total)
        tab.append(row)
    return tab


def _box_products(base, pow_tables, box, minpoly, start: int, stop: int):
    """Yield (exponents, base * prod(units^e)) as scaled integer vectors for
    box positions [start, stop) in lexicographic order, reusing partial
    products along the enumeration tree."""
    r = len(box)
    if r == 0:
        if start == 0 and stop > 0:
            yield (), base
        return
    widths = [hi - lo + 1 for lo, hi in box]
    digits = []
    rest = start
    for w in reversed(widths):
        digits.append(rest % w)
        rest //= w
    digits.reverse()
    partial = [None] * r

    def rebuild(from_d: int) -> None:
        for d in range(from_d, r):
            prev = base if d == 0 else partial[d - 1]
            partial[d] = _scaled_mul(prev, pow_tables[d][box[d][0] + digits[d]], minpoly)

    rebuild(0)
    idx = start
    while idx < stop:
        yield tuple(box[d][0] + digits[d] for d in range(r)), partial[r - 1]
        idx += 1
        if idx >= stop:
            return
        d = r - 1
        while digits[d] == widths[d] - 1:
            digits[d] = 0
            d -= 1
        digits[d] += 1
        rebuild(d)


# ---------------------------------------------------------------------------
# result serialization

def search_payload(spec: SearchSpec, solutions: list[Solution]) -> dict:
    """JSON-ready record of the search parameters (the box is a reported
    decision, not implied by the inputs) and its solutions."""
    return {
        "p": spec.p,
        "alpha0": spec.alpha0.to_text(),
        "units": [u.to_text() for u in spec.units.units],
        "box": [[lo, hi] for lo, hi in spec.box],
        "signs": list(sorted(spec.signs, reverse=True)),
        "target": {
            "signature": list(spec.target.signature),
            "orders": list(spec.target.orders),
            "qvalues": [str(q) for q in spec.target.qvalues],
        },
        "candidates": spec.n_candidates * len(spec.signs),
        "solutions": [
            {
                "sign": sol.sign,
                "exponents": list(sol.exponents),
                "alpha": sol.alpha.to_text(),
                "invariants": sol.invariants,
            }
            for sol in solutions
        ],
    }

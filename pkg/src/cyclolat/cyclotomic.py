"""Exact arithmetic in K = Q(zeta_p), p an odd prime, and in its real subfield.

A CycElem holds exact rational coordinates over the power basis
(1, zeta, ..., zeta^(p-2)), where zeta is a formal root of the p-th
cyclotomic polynomial; nothing in this module ever touches floating point.
A RealElem holds coordinates over (1, mu, ..., mu^((p-3)/2)) where
mu = zeta + zeta^(-1) generates the fixed field of conjugation.

Values of a RealElem under the real embeddings mu -> 2cos(2*pi*k/p) are
returned as certified rational intervals: the roots of mu's minimal
polynomial are isolated once per prime (float seeds, verified by exact sign
changes, with a pure subdivision fallback) and then refined by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "CycElem",
    "RealElem",
    "EmbeddingValue",
    "cyclotomic_polynomial",
    "minimal_poly_mu",
    "eval_embeddings",
    "embedding_signs",
    "parse_coeffs",
    "format_coeffs",
]


def _check_odd_prime(p: int) -> None:
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd prime, got {p}")
    d = 3
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"p must be an odd prime, got {p}")
        d += 2


def cyclotomic_polynomial(p: int) -> tuple[int, ...]:
    """Coefficients of 1 + x + ... + x^(p-1), ascending."""
    _check_odd_prime(p)
    return (1,) * p


# ---------------------------------------------------------------------------
# dense univariate polynomial helpers (ascending coefficient lists)

def _poly_trim(c: list[Fraction]) -> list[Fraction]:
    while c and not c[-1]:
        c.pop()
    return c


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        f = a[i + len(b) - 1] * inv_lead
        if f:
            q[i] = f
            for j, y in enumerate(b):
                a[i + j] -= f * y
    return _poly_trim(q), _poly_trim(a)


def _poly_eval(c, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for coeff in reversed(c):
        acc = acc * x + coeff
    return acc


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _poly_trim(out)


def _poly_modinv(a: list[Fraction], mod: list[Fraction]) -> list[Fraction]:
    """Inverse of a modulo `mod` (monic, irreducible)."""
    if not _poly_trim(list(a)):
        raise ZeroDivisionError("inverse of zero")
    r0, r1 = list(mod), _poly_divmod(list(a), mod)[1]
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible")
    scale = 1 / r0[0]
    return [scale * c for c in t0]


def _resultant(f: list[Fraction], g: list[Fraction]) -> Fraction:
    """Res(f, g); for monic f this is the product of g over the roots of f."""
    f, g = _poly_trim(list(f)), _poly_trim(list(g))
    if not f or not g:
        return Fraction(0)
    m, n = len(f) - 1, len(g) - 1
    if n == 0:
        return g[0] ** m
    r = _poly_divmod(f, g)[1]
    if not r:
        return Fraction(0)
    d = len(r) - 1
    return (-1) ** (m * n) * g[-1] ** (m - d) * _resultant(g, r)


# ---------------------------------------------------------------------------
# serialization

def parse_coeffs(text: str, length: int) -> tuple[Fraction, ...]:
    """Parse comma-separated exact rationals; short lists are zero-padded."""
    items = [t.strip() for t in text.split(",") if t.strip()]
    if len(items) > length:
        raise ValueError(f"expected at most {length} coefficients, got {len(items)}")
    coeffs = [Fraction(t) for t in items]
    coeffs += [Fraction(0)] * (length - len(coeffs))
    return tuple(coeffs)


def format_coeffs(coeffs) -> str:
    return ",".join(str(Fraction(c)) for c in coeffs)


# ---------------------------------------------------------------------------
# K = Q(zeta_p)

class CycElem:
    """Element of Q(zeta_p) over the power basis (1, zeta, ..., zeta^(p-2))."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs) -> None:
        _check_odd_prime(p)
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != p - 1:
            raise ValueError(f"need {p - 1} coefficients for p={p}, got {len(cs)}")
        self.p = p
        self.coeffs = cs

    # -- construction ------------------------------------------------------
    @classmethod
    def zero(cls, p: int) -> CycElem:
        return cls(p, (0,) * (p - 1))

    @classmethod
    def one(cls, p: int) -> CycElem:
        return cls.from_rational(p, 1)

    @classmethod
    def from_rational(cls, p: int, value) -> CycElem:
        coeffs = [Fraction(value)] + [Fraction(0)] * (p - 2)
        return cls(p, coeffs)

    @classmethod
    def zeta(cls, p: int, power: int = 1) -> CycElem:
        """zeta^power, any integer power."""
        e = power % p
        coeffs = [Fraction(0)] * p
        coeffs[e] = Fraction(1)
        return cls(p, _fold_top(p, coeffs))

    @classmethod
    def from_text(cls, p: int, text: str) -> CycElem:
        return cls(p, parse_coeffs(text, p - 1))

    def to_text(self) -> str:
        return format_coeffs(self.coeffs)

    # -- ring structure ----------------------------------------------------
    def _require_same(self, other: CycElem) -> None:
        if self.p != other.p:
            raise ValueError(f"mismatched primes: {self.p} != {other.p}")

    def __add__(self, other: CycElem) -> CycElem:
        self._require_same(other)
        return CycElem(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: CycElem) -> CycElem:
        self._require_same(other)
        return CycElem(self.p, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> CycElem:
        return CycElem(self.p, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycElem(self.p, tuple(a * other for a in self.coeffs))
        if not isinstance(other, CycElem):
            return NotImplemented
        self._require_same(other)
        p = self.p
        full = [Fraction(0)] * (2 * p - 3)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        full[i + j] += a * b
        # zeta^p = 1
        for e in range(p, 2 * p - 3):
            full[e - p] += full[e]
        return CycElem(p, _fold_top(p, full[:p]))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int) -> CycElem:
        if n < 0:
            return self.inverse() ** (-n)
        result = CycElem.one(self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> CycElem:
        mod = [Fraction(c) for c in cyclotomic_polynomial(self.p)]
        inv = _poly_modinv(list(self.coeffs), mod)
        inv += [Fraction(0)] * (self.p - 1 - len(inv))
        return CycElem(self.p, inv)

    def __eq__(self, other) -> bool:
        return (isinstance(other, CycElem) and self.p == other.p
                and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        return f"CycElem(p={self.p}, [{self.to_text()}])"

    def __reduce__(self):
        return (CycElem, (self.p, self.coeffs))

    # -- field maps --------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def conj(self) -> CycElem:
        """Image under zeta^i -> zeta^(p-i)."""
        p = self.p
        exps = [Fraction(0)] * p
        exps[0] = self.coeffs[0]
        for i in range(1, p - 1):
            exps[p - i] += self.coeffs[i]
        return CycElem(p, _fold_top(p, exps))

    def trace(self) -> Fraction:
        """Trace to Q: 1 -> p-1 and zeta^i -> -1 for 0 < i < p."""
        return self.p * self.coeffs[0] - sum(self.coeffs)

    def norm(self) -> Fraction:
        """Norm to Q, the exact product over all p-1 embeddings (a resultant)."""
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.p)]
        return _resultant(phi, list(self.coeffs))


def _fold_top(p: int, exps: list[Fraction]) -> list[Fraction]:
    """Reduce a coefficient list over exponents 0..p-1 using
    zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))."""
    top = exps[p - 1]
    if top:
        return [exps[i] - top for i in range(p - 1)]
    return exps[: p - 1]


# ---------------------------------------------------------------------------
# F = Q(mu_p), the real subfield

@lru_cache(maxsize=None)
def minimal_poly_mu(p: int) -> tuple[int, ...]:
    """Monic integer minimal polynomial of mu = zeta + zeta^(-1), ascending.

    Obtained from dividing the cyclotomic polynomial by x^((p-1)/2) and
    rewriting x^k + x^(-k) in mu via the three-term recursion.
    """
    _check_odd_prime(p)
    m = (p - 1) // 2
    acc = [1]
    t_prev, t_cur = [2], [0, 1]
    for _ in range(1, m + 1):
        acc = [a + b for a, b in _padded(acc, t_cur)]
        t_prev, t_cur = t_cur, [a - b for a, b in _padded([0] + t_cur, t_prev)]
    return tuple(acc)


def _padded(a: list[int], b: list[int]):
    n = max(len(a), len(b))
    return zip(a + [0] * (n - len(a)), b + [0] * (n - len(b)))


@lru_cache(maxsize=None)
def _mu_power(p: int, k: int) -> CycElem:
    if k == 0:
        return CycElem.one(p)
    mu = CycElem.zeta(p, 1) + CycElem.zeta(p, p - 1)
    return _mu_power(p, k - 1) * mu


class RealElem:
    """Element of the real subfield over the basis (1, mu, ..., mu^((p-3)/2))."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs) -> None:
        _check_odd_prime(p)
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != (p - 1) // 2:
            raise ValueError(f"need {(p - 1) // 2} coefficients for p={p}, got {len(cs)}")
        self.p = p
        self.coeffs = cs

    @classmethod
    def zero(cls, p: int) -> RealElem:
        return cls(p, (0,) * ((p - 1) // 2))

    @classmethod
    def one(cls, p: int) -> RealElem:
        return cls.from_rational(p, 1)

    @classmethod
    def from_rational(cls, p: int, value) -> RealElem:
        coeffs = [Fraction(value)] + [Fraction(0)] * ((p - 1) // 2 - 1)
        return cls(p, coeffs)

    @classmethod
    def mu(cls, p: int) -> RealElem:
        if p == 3:
            return cls(3, (Fraction(-1),))  # mu_3 = -1
        coeffs = [Fraction(0)] * ((p - 1) // 2)
        coeffs[1] = Fraction(1)
        return cls(p, coeffs)

    @classmethod
    def from_text(cls, p: int, text: str) -> RealElem:
        return cls(p, parse_coeffs(text, (p - 1) // 2))

    def to_text(self) -> str:
        return format_coeffs(self.coeffs)

    def _require_same(self, other: RealElem) -> None:
        if self.p != other.p:
            raise ValueError(f"mismatched primes: {self.p} != {other.p}")

    def __add__(self, other: RealElem) -> RealElem:
        self._require_same(other)
        return RealElem(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: RealElem) -> RealElem:
        self._require_same(other)
        return RealElem(self.p, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> RealElem:
        return RealElem(self.p, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RealElem(self.p, tuple(a * other for a in self.coeffs))
        if not isinstance(other, RealElem):
            return NotImplemented
        self._require_same(other)
        mod = [Fraction(c) for c in minimal_poly_mu(self.p)]
        prod = _poly_mul(list(self.coeffs), list(other.coeffs))
        rem = _poly_divmod(prod, mod)[1] if len(prod) >= len(mod) else prod
        rem = list(rem) + [Fraction(0)] * ((self.p - 1) // 2 - len(rem))
        return RealElem(self.p, rem)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> RealElem:
        if n < 0:
            return self.inverse() ** (-n)
        result = RealElem.one(self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> RealElem:
        mod = [Fraction(c) for c in minimal_poly_mu(self.p)]
        inv = _poly_modinv(list(self.coeffs), mod)
        inv += [Fraction(0)] * ((self.p - 1) // 2 - len(inv))
        return RealElem(self.p, inv)

    def __eq__(self, other) -> bool:
        return (isinstance(other, RealElem) and self.p == other.p
                and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        return f"RealElem(p={self.p}, [{self.to_text()}])"

    def __reduce__(self):
        return (RealElem, (self.p, self.coeffs))

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_cyc(self) -> CycElem:
        acc = CycElem.zero(self.p)
        for k, c in enumerate(self.coeffs):
            if c:
                acc = acc + _mu_power(self.p, k) * c
        return acc

    @classmethod
    def from_cyc(cls, x: CycElem) -> RealElem:
        """Express a conjugation-fixed element over the mu-power basis."""
        if x.conj() != x:
            raise ValueError("element is not fixed by conjugation")
        p = x.p
        m = (p - 1) // 2
        cols = [_mu_power(p, k).coeffs for k in range(m)]
        sol = _solve_exact(cols, x.coeffs)
        if sol is None:
            raise ValueError("element is not in the real subfield")
        return cls(p, sol)

    def norm(self) -> Fraction:
        """Norm to Q, the exact product over the (p-1)/2 real embeddings."""
        minpoly = [Fraction(c) for c in minimal_poly_mu(self.p)]
        return _resultant(minpoly, list(self.coeffs))


def _solve_exact(cols, target):
    """Solve sum_j x_j * cols[j] = target exactly, or return None."""
    m = len(cols)
    n = len(target)
    aug = [[Fraction(cols[j][i]) for j in range(m)] + [Fraction(target[i])]
           for i in range(n)]
    row = 0
    pivots = []
    for col in range(m):
        piv = next((i for i in range(row, n) if aug[i][col]), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for i in range(n):
            if i != row and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    for r in aug[row:]:
        if r[m]:
            return None
    sol = [Fraction(0)] * m
    for i, col in enumerate(pivots):
        sol[col] = aug[i][m]
    return tuple(sol)


# ---------------------------------------------------------------------------
# certified real embeddings

@dataclass(frozen=True)
class EmbeddingValue:
    """Certified enclosure of the image of a RealElem under mu -> 2cos(2*pi*k/p)."""

    index: int
    lower: Fraction
    upper: Fraction

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def contains_zero(self) -> bool:
        return self.lower <= 0 <= self.upper

    @property
    def sign(self) -> int:
        if self.lower > 0:
            return 1
        if self.upper < 0:
            return -1
        raise ValueError("interval does not determine a sign; refine further")


def _iv_mul(a, b):
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(products), max(products))


def _iv_poly(coeffs, iv):
    lo = hi = Fraction(coeffs[-1])
    acc = (lo, hi)
    for c in reversed(coeffs[:-1]):
        acc = _iv_mul(acc, iv)
        acc = (acc[0] + c, acc[1] + c)
    return acc


@lru_cache(maxsize=None)
def _isolated_mu_roots(p: int) -> tuple[tuple[Fraction, Fraction], ...]:
    """Disjoint isolating intervals for the roots of minimal_poly_mu(p),
    in decreasing order of the root (index k = 1 first)."""
    poly = [Fraction(c) for c in minimal_poly_mu(p)]
    m = (p - 1) // 2
    delta = Fraction(1, 512)
    ivs = []
    for k in range(1, m + 1):
        seed = Fraction(2.0 * math.cos(2.0 * math.pi * k / p)).limit_denominator(1 << 24)
        ivs.append((seed - delta, seed + delta))
    if _isolation_valid(poly, ivs, m):
        return tuple(ivs)
    return tuple(_isolate_by_subdivision(poly, m))


def _isolation_valid(poly, ivs, m) -> bool:
    # m disjoint sign-change intervals isolate all m simple real roots
    for lo, hi in ivs:
        flo, fhi = _poly_eval(poly, lo), _poly_eval(poly, hi)
        if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
            return False
    for (lo1, hi1), (lo2, hi2) in zip(ivs, ivs[1:]):
        if hi2 >= lo1:  # decreasing order expected
            return False
    return len(ivs) == m


def _isolate_by_subdivision(poly, m):
    """Grid subdivision of (-2, 2); terminates since all m roots are real,
    simple and interior."""
    cells = 4
    while True:
        grid = [Fraction(-2) + Fraction(4 * i, cells) for i in range(cells + 1)]
        values = [_poly_eval(poly, g) for g in grid]
        found = []
        for i in range(cells):
            if values[i] == 0:
                found.append((grid[i], grid[i]))
            elif (values[i] > 0) != (values[i + 1] > 0) and values[i + 1] != 0:
                found.append((grid[i], grid[i + 1]))
        if values[-1] == 0:
            found.append((grid[-1], grid[-1]))
        if len(found) == m:
            found.sort(key=lambda iv: iv[0], reverse=True)
            return found
        cells *= 2


def _refine_root(poly, iv, max_width: Fraction):
    lo, hi = iv
    while hi - lo > max_width:
        mid = (lo + hi) / 2
        fmid = _poly_eval(poly, mid)
        if fmid == 0:
            return (mid, mid)
        if (_poly_eval(poly, lo) > 0) != (fmid > 0):
            hi = mid
        else:
            lo = mid
    return (lo, hi)


def eval_embeddings(a: RealElem, precision: int = 64) -> tuple[EmbeddingValue, ...]:
    """Enclosures of a's images under all real embeddings, one per
    k = 1..(p-1)/2, each of width at most 2^-precision."""
    if precision < 8:
        raise ValueError("precision must be at least 8 bits")
    poly = [Fraction(c) for c in minimal_poly_mu(a.p)]
    target = Fraction(1, 2 ** precision)
    coeffs = list(a.coeffs)
    out = []
    for k, iv in enumerate(_isolated_mu_roots(a.p), start=1):
        while True:
            val = _iv_poly(coeffs, iv)
            if val[1] - val[0] <= target:
                break
            iv = _refine_root(poly, iv, (iv[1] - iv[0]) / 2)
        out.append(EmbeddingValue(k, val[0], val[1]))
    return tuple(out)


def embedding_signs(a: RealElem) -> tuple[int, ...]:
    """Certified signs of a at every real embedding; all zeros iff a == 0.

    An exact zero is detected symbolically, so the refinement loop below
    always terminates.
    """
    m = (a.p - 1) // 2
    if a.is_zero:
        return (0,) * m
    poly = [Fraction(c) for c in minimal_poly_mu(a.p)]
    coeffs = list(a.coeffs)
    signs = []
    for iv in _isolated_mu_roots(a.p):
        while True:
            lo, hi = _iv_poly(coeffs, iv)
            if lo > 0:
                signs.append(1)
                break
            if hi < 0:
                signs.append(-1)
                break
            iv = _refine_root(poly, iv, (iv[1] - iv[0]) / 2)
    return tuple(signs)

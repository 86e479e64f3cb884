"""Ideal lattices: the trace form twisted by a totally real multiplier.

A principal fractional ideal with generator beta carries, for a nonzero
multiplier alpha in the real subfield, the bilinear form
(x, y) -> Tr(alpha * x * conj(y)).  In the basis (beta, beta*zeta, ...,
beta*zeta^(p-2)) the Gram entry at (i, j) is Tr(w * zeta^(i-j)) with
w = alpha * beta * conj(beta), so the whole matrix is determined by the p
traces of w * zeta^m and is constant along wrapped diagonals.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .cyclotomic import CycElem, RealElem, embedding_signs
from .exact_linalg import Matrix, congruent_diag, det

__all__ = [
    "IdealLatticeSpec",
    "PropertyReport",
    "Obstruction",
    "ideal_gram",
    "check_properties",
    "unimodular_obstruction",
    "load_ideal_spec",
    "save_ideal_spec",
]


class IdealLatticeSpec:
    """Prime p, ideal generator beta (default 1) and twist alpha."""

    __slots__ = ("p", "alpha", "beta")

    def __init__(self, p: int, alpha: RealElem, beta: CycElem | None = None) -> None:
        if beta is None:
            beta = CycElem.one(p)
        if alpha.p != p or beta.p != p:
            raise ValueError("alpha/beta prime does not match spec prime")
        if alpha.is_zero:
            raise ValueError("alpha must be nonzero")
        if beta.is_zero:
            raise ValueError("beta must be nonzero")
        self.p = p
        self.alpha = alpha
        self.beta = beta

    def __repr__(self) -> str:
        return f"IdealLatticeSpec(p={self.p}, alpha=[{self.alpha.to_text()}])"

    def __reduce__(self):
        return (IdealLatticeSpec, (self.p, self.alpha, self.beta))


def trace_row(w: CycElem) -> tuple[Fraction, ...]:
    """(Tr(w), Tr(w*zeta), ..., Tr(w*zeta^(p-1))) from the coefficients of w:
    Tr(w*zeta^m) = p * w_{(-m) mod p} - sum(w), with the missing top
    coefficient of the power basis read as zero."""
    p = w.p
    total = sum(w.coeffs)
    out = []
    for m in range(p):
        k = (-m) % p
        lead = w.coeffs[k] if k < p - 1 else Fraction(0)
        out.append(p * lead - total)
    return tuple(out)


def ideal_gram(spec: IdealLatticeSpec) -> Matrix:
    """Gram matrix of the twisted trace form in the basis (beta * zeta^i)."""
    w = spec.alpha.to_cyc() * spec.beta * spec.beta.conj()
    c = trace_row(w)
    p = spec.p
    return Matrix([[c[(i - j) % p] for j in range(p - 1)] for i in range(p - 1)])


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of the standard checks on a twisted trace form."""

    integral: bool
    even: bool | None
    disc_identity: bool
    abs_det: Fraction
    expected_abs_det: Fraction
    signature: tuple[int, int]
    negative_embeddings: int
    signature_consistent: bool

    @property
    def ok(self) -> bool:
        return (self.integral and bool(self.even) and self.disc_identity
                and self.signature_consistent)


def check_properties(spec: IdealLatticeSpec, gram: Matrix) -> PropertyReport:
    """Integrality, evenness, the determinant identity
    |det| = N(ideal)^2 * |norm(alpha)| * p^(p-2), and the signature
    (p-1-2t, 2t) predicted by the count t of negative embeddings of alpha."""
    p = spec.p
    integral = gram.is_integral
    even = all(gram[i][i] % 2 == 0 for i in range(gram.nrows)) if integral else None
    norm_beta = abs(spec.beta.norm())
    norm_alpha_f = spec.alpha.norm()
    expected = norm_beta ** 2 * norm_alpha_f ** 2 * Fraction(p) ** (p - 2)
    abs_det = abs(Fraction(det(gram)))
    t = sum(1 for s in embedding_signs(spec.alpha) if s < 0)
    sig = congruent_diag(gram)
    return PropertyReport(
        integral=integral,
        even=even,
        disc_identity=(abs_det == expected),
        abs_det=abs_det,
        expected_abs_det=expected,
        signature=sig,
        negative_embeddings=t,
        signature_consistent=(sig == (p - 1 - 2 * t, 2 * t)),
    )


# ---------------------------------------------------------------------------
# square obstruction for the determinant identity

@dataclass(frozen=True)
class Obstruction:
    """Verdict on solvability of x^2 = target / p^(p-2) over the positive
    rationals.  UNSOLVABLE carries the prime whose valuation is odd;
    INCONCLUSIVE means no square obstruction (existence is not implied)."""

    verdict: str
    ratio: Fraction
    witness_prime: int | None = None
    witness_valuation: int | None = None

    UNSOLVABLE = "UNSOLVABLE"
    INCONCLUSIVE = "INCONCLUSIVE"


def unimodular_obstruction(p: int, target_det) -> Obstruction:
    """Parity check of the prime exponents of target_det / p^(p-2)."""
    ratio = Fraction(target_det) / Fraction(p) ** (p - 2)
    if ratio <= 0:
        raise ValueError("target determinant must be positive")
    vals: dict[int, int] = {}
    for q, e in _factor(ratio.numerator):
        vals[q] = vals.get(q, 0) + e
    for q, e in _factor(ratio.denominator):
        vals[q] = vals.get(q, 0) - e
    for q in sorted(vals):
        if vals[q] % 2:
            return Obstruction(Obstruction.UNSOLVABLE, ratio, q, vals[q])
    return Obstruction(Obstruction.INCONCLUSIVE, ratio)


def _factor(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


# ---------------------------------------------------------------------------
# spec files: key-value document with p, beta (power basis), alpha (mu basis)

def load_ideal_spec(path: str | Path) -> IdealLatticeSpec:
    cfg = configparser.ConfigParser()
    read = cfg.read(path)
    if not read or "ideal" not in cfg:
        raise ValueError(f"no [ideal] section in {path}")
    section = cfg["ideal"]
    p = int(section["p"])
    alpha = RealElem.from_text(p, section["alpha"])
    beta = CycElem.from_text(p, section.get("beta", "1"))
    return IdealLatticeSpec(p, alpha, beta)


def save_ideal_spec(spec: IdealLatticeSpec, path: str | Path) -> None:
    cfg = configparser.ConfigParser()
    cfg["ideal"] = {
        "p": str(spec.p),
        "beta": spec.beta.to_text(),
        "alpha": spec.alpha.to_text(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        cfg.write(fh)

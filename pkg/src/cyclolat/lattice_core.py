"""Integral lattices presented by Gram matrices.

Covers the standard constructors (hyperbolic plane, E8, root lattices,
diagonal forms), direct sums, signatures, discriminant groups and forms,
p-elementarity, orthogonal complements of primitive sublattices, even
overlattices glued along isotropic dual vectors, and verification of
finite-order isometries together with their induced action on the
discriminant group.

Discriminant data comes from the Smith normal form of the Gram matrix G:
with U G V = D, the class of column j of V divided by the invariant factor
d_j generates a cyclic component of order d_j in the dual quotient.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .exact_linalg import (
    Matrix,
    companion_matrix,
    charpoly,
    congruent_diag,
    det,
    hnf_columns,
    int_kernel,
    matrix_from_text,
    matrix_to_text,
    rational_inverse,
    snf,
)

__all__ = [
    "Lattice",
    "DiscForm",
    "GlueSpec",
    "Overlattice",
    "IsometryReport",
    "standard_lattice",
    "direct_sum",
    "signature",
    "discriminant_form",
    "is_p_elementary",
    "orthogonal_complement",
    "saturate",
    "overlattice",
    "extend_isometry",
    "verify_isometry",
    "cyclotomic_isometry",
    "invariant_report",
    "invariant_triple",
    "cyclic_q_matches",
    "diagonal_form_multiset",
    "lattice_to_text",
    "lattice_from_text",
]


class LatticeError(ValueError):
    """Violation of a lattice-level precondition (degenerate form,
    non-primitive sublattice, bad glue vector...)."""


@dataclass(frozen=True)
class Lattice:
    """Free Z-module with a nondegenerate integral symmetric bilinear form."""

    gram: Matrix
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        g = self.gram
        if not g.is_square:
            raise LatticeError("Gram matrix must be square")
        if not g.is_integral:
            raise LatticeError("Gram matrix must be integral")
        if not g.is_symmetric:
            raise LatticeError("Gram matrix must be symmetric")
        d = det(g)
        if d == 0:
            raise LatticeError("Gram matrix is degenerate")
        object.__setattr__(self, "_det", d)

    @property
    def rank(self) -> int:
        return self.gram.nrows

    @property
    def det(self) -> int:
        return self._det

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def __repr__(self) -> str:
        name = self.label or f"rank-{self.rank} lattice"
        return f"Lattice({name}, det={self.det})"


# ---------------------------------------------------------------------------
# constructors

_E8_EDGES = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7))


def _e8_gram() -> list[list[int]]:
    # negative definite convention: -2 on the diagonal, +1 on Dynkin edges
    g = [[0] * 8 for _ in range(8)]
    for i in range(8):
        g[i][i] = -2
    for i, j in _E8_EDGES:
        g[i][j] = g[j][i] = 1
    return g


def standard_lattice(name: str) -> Lattice:
    """Named standard lattices: U, E8, K23, H5, A<n>, diag(a,b,...)."""
    name = name.strip()
    if name == "U":
        return Lattice(Matrix([[0, 1], [1, 0]]), label="U")
    if name == "E8":
        return Lattice(Matrix(_e8_gram()), label="E8")
    if name == "K23":
        return Lattice(Matrix([[-12, 1], [1, -2]]), label="K23")
    if name == "H5":
        return Lattice(Matrix([[2, 1], [1, -2]]), label="H5")
    m = re.fullmatch(r"A(\d+)", name)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise LatticeError(f"bad root lattice {name!r}")
        g = [[2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(n)]
             for i in range(n)]
        return Lattice(Matrix(g), label=name)
    m = re.fullmatch(r"diag\(([-0-9,\s]+)\)", name)
    if m:
        entries = [int(tok) for tok in m.group(1).split(",") if tok.strip()]
        if not entries:
            raise LatticeError("diag() needs at least one entry")
        return Lattice(Matrix.diagonal(entries), label=name)
    raise LatticeError(f"unknown standard lattice {name!r}")


def direct_sum(*lattices: Lattice) -> Lattice:
    """Orthogonal direct sum (block-diagonal Gram)."""
    if not lattices:
        raise LatticeError("direct sum of nothing")
    total = sum(l.rank for l in lattices)
    rows = [[0] * total for _ in range(total)]
    offset = 0
    for l in lattices:
        for i in range(l.rank):
            for j in range(l.rank):
                rows[offset + i][offset + j] = l.gram[i][j]
        offset += l.rank
    label = "+".join(l.label or "?" for l in lattices)
    return Lattice(Matrix(rows), label=label)


def signature(l: Lattice) -> tuple[int, int]:
    return congruent_diag(l.gram)


# ---------------------------------------------------------------------------
# discriminant group and form

@dataclass(frozen=True)
class DiscForm:
    """Cyclic decomposition of the dual quotient of an even lattice.

    orders:     invariant factors > 1, ascending divisibility chain
    generators: dual vectors in lattice coordinates, one per order
    qvalues:    quadratic form of each generator, reduced into [0, 2)
    pairings:   bilinear pairings of generator pairs, reduced into [0, 1)
    """

    orders: tuple[int, ...]
    generators: tuple[tuple[Fraction, ...], ...]
    qvalues: tuple[Fraction, ...]
    pairings: tuple[tuple[Fraction, ...], ...]

    @property
    def group_order(self) -> int:
        return prod(self.orders) if self.orders else 1

    @property
    def is_cyclic(self) -> bool:
        return len(self.orders) <= 1

    def value_multiset(self, limit: int = 200000) -> tuple[Fraction, ...]:
        """Sorted multiset of q over every element of the group."""
        if self.group_order > limit:
            raise ValueError(f"group order {self.group_order} above limit {limit}")
        values = []
        for ks in itertools.product(*(range(d) for d in self.orders)):
            q = Fraction(0)
            for i, ki in enumerate(ks):
                q += ki * ki * self.qvalues[i]
                for j in range(i + 1, len(ks)):
                    q += 2 * ki * ks[j] * self.pairings[i][j]
            values.append(q % 2)
        return tuple(sorted(values))


def discriminant_form(l: Lattice) -> DiscForm:
    """Discriminant group with its quadratic form; the lattice must be even."""
    if not l.is_even:
        raise LatticeError("discriminant form is defined modulo 2Z only for even lattices")
    res = snf(l.gram)
    diag = res.diagonal
    gens = []
    orders = []
    for j, d in enumerate(diag):
        if d > 1:
            orders.append(d)
            gens.append(tuple(Fraction(x, d) for x in res.v.column(j)))
    g = l.gram
    qvalues = tuple(_pair(g, v, v) % 2 for v in gens)
    pairings = tuple(tuple(_pair(g, v, w) % 1 for w in gens) for v in gens)
    return DiscForm(tuple(orders), tuple(gens), qvalues, pairings)


def _pair(g: Matrix, v, w) -> Fraction:
    gw = g.mat_vec(w)
    return sum((a * b for a, b in zip(v, gw)), Fraction(0))


def is_p_elementary(l: Lattice, p: int) -> tuple[bool, int | None]:
    """Whether the discriminant group is (Z/p)^a, and if so its length a."""
    diag = snf(l.gram).diagonal
    if all(d in (1, p) for d in diag):
        return True, sum(1 for d in diag if d == p)
    return False, None


def cyclic_q_matches(df: DiscForm, order: int, qvalue: Fraction) -> bool:
    """Whether a cyclic discriminant form equals the form of given order
    whose generator has the given q-value (full value-multiset comparison,
    complete for cyclic groups)."""
    if not df.is_cyclic:
        return False
    if df.orders != ((order,) if order > 1 else ()):
        return False
    if not df.orders:
        return qvalue % 2 == 0
    return df.value_multiset() == diagonal_form_multiset((order,), (qvalue,))


def diagonal_form_multiset(orders, qvalues) -> tuple[Fraction, ...]:
    """Value multiset of a direct sum of cyclic forms with orthogonal
    generators of the given q-values."""
    values = []
    for ks in itertools.product(*(range(d) for d in orders)):
        q = sum((k * k * Fraction(qv) for k, qv in zip(ks, qvalues)), Fraction(0))
        values.append(q % 2)
    return tuple(sorted(values))


# ---------------------------------------------------------------------------
# sublattices

def saturate(sub: Matrix) -> Matrix:
    """Canonical basis of the saturation of the column span of `sub`."""
    ann = int_kernel(sub.transpose())
    return int_kernel(ann.transpose())


def orthogonal_complement(l: Lattice, sub: Matrix) -> Lattice:
    """Orthogonal complement of a primitive sublattice, given by columns of
    coordinates in the lattice basis."""
    if sub.nrows != l.rank:
        raise LatticeError(f"sublattice coordinates have {sub.nrows} rows, "
                           f"lattice has rank {l.rank}")
    if not sub.is_integral:
        raise LatticeError("sublattice coordinates must be integral")
    factors = snf(sub).diagonal
    if len(factors) < sub.ncols or any(f == 0 for f in factors):
        raise LatticeError("sublattice columns are linearly dependent")
    bad = next((f for f in factors if f not in (0, 1)), None)
    if bad is not None:
        raise LatticeError(f"sublattice is not primitive: invariant factor {bad}; "
                           "saturate() it first")
    pair_rows = sub.transpose() @ l.gram
    basis = int_kernel(pair_rows)
    gram_c = basis.transpose() @ l.gram @ basis
    try:
        return Lattice(gram_c, label=f"({l.label})-complement" if l.label else "complement")
    except LatticeError as exc:
        raise LatticeError(f"complement is degenerate: {exc}") from exc


# ---------------------------------------------------------------------------
# overlattices

@dataclass(frozen=True)
class GlueSpec:
    """Two summands plus glue vectors written in dual coordinates of the sum."""

    summands: tuple[Lattice, Lattice]
    glue_vectors: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class Overlattice:
    """Result of gluing: the new lattice, its basis as columns in the
    coordinates of the direct sum, and the index over the sum."""

    lattice: Lattice
    basis: Matrix
    index: int


def overlattice(spec: GlueSpec) -> Overlattice:
    """Even overlattice generated by the direct sum and the glue vectors."""
    amb = direct_sum(*spec.summands)
    g0 = amb.gram
    n = amb.rank
    glue = [tuple(Fraction(x) for x in w) for w in spec.glue_vectors]
    for idx, w in enumerate(glue):
        if len(w) != n:
            raise LatticeError(f"glue vector {idx} has length {len(w)}, expected {n}")
        gw = g0.mat_vec(w)
        if any(x.denominator != 1 for x in map(Fraction, gw)):
            raise LatticeError(f"glue vector {idx} is not in the dual lattice")
        q = sum((a * b for a, b in zip(w, gw)), Fraction(0))
        if q % 2 != 0:
            raise LatticeError(f"glue vector {idx} is not isotropic: q = {q % 2}")
        for jdx in range(idx):
            pair = sum((a * b for a, b in zip(glue[jdx], gw)), Fraction(0))
            if pair.denominator != 1:
                raise LatticeError(f"glue vectors {jdx} and {idx} pair to {pair}, "
                                   "not an integer")
    denom = 1
    for w in glue:
        for x in w:
            denom = denom * x.denominator // _int_gcd(denom, x.denominator)
    cols = [tuple(denom if i == j else 0 for i in range(n)) for j in range(n)]
    cols += [tuple(int(x * denom) for x in w) for w in glue]
    h = hnf_columns(Matrix.from_columns(cols))
    basis = Matrix([[Fraction(x, denom) for x in row] for row in h.rows])
    index, rem = divmod(denom ** n, abs(det(h)))
    if rem:
        raise LatticeError("glue vectors do not generate a lattice over the sum")
    gram_m = basis.transpose() @ g0 @ basis
    if not gram_m.is_integral:
        raise LatticeError("overlattice form is not integral")
    glued = Lattice(gram_m, label=f"[{amb.label}:{index}]")
    if not glued.is_even:
        raise LatticeError("overlattice form is not even")
    if glued.det * index * index != amb.det:
        raise LatticeError("index inconsistent with determinants")
    return Overlattice(glued, basis, index)


def _int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def extend_isometry(ov: Overlattice, iso_on_sum: Matrix) -> Matrix:
    """Rewrite an isometry of the direct sum in the overlattice basis;
    raises if the overlattice is not preserved."""
    b_inv = rational_inverse(ov.basis)
    x = b_inv @ iso_on_sum @ ov.basis
    if not x.is_integral:
        raise LatticeError("isometry does not preserve the overlattice")
    return x


# ---------------------------------------------------------------------------
# isometry verification

@dataclass(frozen=True)
class IsometryReport:
    preserves_form: bool
    order: int
    order_exact: bool
    char_poly: tuple
    disc_action_trivial: bool | None
    moved_generators: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return (self.preserves_form and self.order_exact
                and self.disc_action_trivial is not False)


def verify_isometry(l: Lattice, c: Matrix, order: int) -> IsometryReport:
    """Check that c preserves the form, has exactly the given order, and
    report its characteristic polynomial and discriminant-group action."""
    if not (c.is_square and c.nrows == l.rank):
        raise LatticeError(f"matrix is {c.nrows}x{c.ncols}, lattice has rank {l.rank}")
    if order < 1:
        raise LatticeError("order must be positive")
    g = l.gram
    preserves = (c.transpose() @ g @ c) == g
    ident = Matrix.identity(l.rank)
    order_exact = _matrix_power(c, order) == ident
    if order_exact:
        for q in _prime_factors(order):
            if _matrix_power(c, order // q) == ident:
                order_exact = False
                break
    cp = charpoly(c)
    disc_trivial: bool | None = None
    moved: tuple[int, ...] = ()
    if l.is_even:
        df = discriminant_form(l)
        bad = []
        for i, gen in enumerate(df.generators):
            image = c.mat_vec(gen)
            if any(Fraction(a - b) % 1 != 0 for a, b in zip(image, gen)):
                bad.append(i)
        disc_trivial = not bad
        moved = tuple(bad)
    return IsometryReport(preserves, order, order_exact, cp, disc_trivial, moved)


def _matrix_power(c: Matrix, n: int) -> Matrix:
    result = Matrix.identity(c.nrows)
    base = c
    while n:
        if n & 1:
            result = result @ base
        base = base @ base
        n >>= 1
    return result


def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


# ---------------------------------------------------------------------------
# reports and file format

def invariant_report(l: Lattice) -> dict:
    """JSON-ready invariants: rank, signature, det, parity, discriminant
    group orders, generator q-values, p-elementarity."""
    s = signature(l)
    diag = snf(l.gram).diagonal
    orders = [d for d in diag if d > 1]
    report = {
        "rank": l.rank,
        "signature": [s[0], s[1]],
        "det": l.det,
        "even": l.is_even,
        "orders": orders,
        "qvalues": None,
        "p_elementary": None,
    }
    if l.is_even:
        df = discriminant_form(l)
        report["qvalues"] = [str(q) for q in df.qvalues]
    if not orders:
        report["p_elementary"] = {"p": None, "a": 0}
    else:
        primes = {q for d in orders for q in _prime_factors(d)}
        if len(primes) == 1:
            p = primes.pop()
            flag, a = is_p_elementary(l, p)
            if flag:
                report["p_elementary"] = {"p": p, "a": a}
    return report


def invariant_triple(l: Lattice):
    """(signature, orders, whole-group q multiset): the comparison key used
    in place of full genus machinery; complete for cyclic groups."""
    df = discriminant_form(l)
    return (signature(l), df.orders, df.value_multiset())


def cyclotomic_isometry(p: int) -> Matrix:
    """The order-p companion-matrix isometry of a rank-(p-1) ideal lattice."""
    return companion_matrix((1,) * p)


def lattice_to_text(l: Lattice) -> str:
    head = f"label: {l.label}\n" if l.label else ""
    return head + matrix_to_text(l.gram)


def lattice_from_text(text: str) -> Lattice:
    label = ""
    if text.lstrip().startswith("label:"):
        first, _, rest = text.lstrip().partition("\n")
        label = first[len("label:"):].strip()
        text = rest
    return Lattice(matrix_from_text(text), label=label)

"""Scripted end-to-end reproductions of the bundled reference computations.

Each case runs the full pipeline on fixture data and compares every
sub-result against its bundled expectation, returning a deterministic
pass/fail report.  The period case works symbolically in a second copy of
the cyclotomic field (a formal eigenvalue xi of the order-23 isometry) and
drops to certified interval arithmetic only for the one positivity check.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .cyclotomic import CycElem, RealElem, eval_embeddings
from .exact_linalg import Matrix, det, matrix_from_text, rational_inverse
from .ideal_lattice import (
    IdealLatticeSpec,
    check_properties,
    ideal_gram,
    load_ideal_spec,
    unimodular_obstruction,
)
from .lattice_core import (
    GlueSpec,
    Lattice,
    cyclic_q_matches,
    cyclotomic_isometry,
    direct_sum,
    discriminant_form,
    extend_isometry,
    invariant_triple,
    orthogonal_complement,
    overlattice,
    signature,
    standard_lattice,
    verify_isometry,
)
from .unit_search import load_search_spec

__all__ = [
    "CASES",
    "Check",
    "CaseReport",
    "fixtures_dir",
    "reproduce",
    "period_checks",
    "construction_twist",
]

CASES = (
    "P5_EXAMPLE",
    "P13_OBSTRUCTION",
    "P23_CONSTRUCTION",
    "P23_GLUE",
    "P23_EMBEDDINGS",
    "APPENDIX_MATRIX",
    "PERIOD_CHECKS",
)

FIXTURES_ENV = "CYCLOLAT_FIXTURES"


def fixtures_dir() -> Path:
    override = os.environ.get(FIXTURES_ENV)
    if override:
        return Path(override)
    return Path(__file__).parent / "fixtures"


def _fixture_matrix(relpath: str) -> Matrix:
    path = fixtures_dir() / relpath
    if not path.exists():
        raise FileNotFoundError(f"missing fixture {path}")
    return matrix_from_text(path.read_text())


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    expected: str
    computed: str


@dataclass(frozen=True)
class CaseReport:
    case: str
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed,
                 "expected": c.expected, "computed": c.computed}
                for c in self.checks
            ],
        }


def _check(name: str, expected, computed) -> Check:
    return Check(name, expected == computed, str(expected), str(computed))


def _check_true(name: str, flag: bool, detail: str = "") -> Check:
    return Check(name, bool(flag), "true", detail or str(bool(flag)).lower())


def _check_matrix(name: str, expected: Matrix, computed: Matrix) -> Check:
    mismatches = sum(1 for i in range(expected.nrows) for j in range(expected.ncols)
                     if expected[i][j] != computed[i][j]) \
        if (expected.nrows, expected.ncols) == (computed.nrows, computed.ncols) \
        else expected.nrows * expected.ncols
    return Check(name, mismatches == 0,
                 f"{expected.nrows}x{expected.ncols}, 0 mismatches",
                 f"{computed.nrows}x{computed.ncols}, {mismatches} mismatches")


def _floor_decimal(value: Fraction, digits: int = 6) -> str:
    """Decimal string rounded toward minus infinity: a certified lower bound."""
    scaled = value * 10 ** digits
    floored = scaled.numerator // scaled.denominator
    sign = "-" if floored < 0 else ""
    mag = abs(floored)
    return f"{sign}{mag // 10 ** digits}.{mag % 10 ** digits:0{digits}d}"


# ---------------------------------------------------------------------------
# bundled construction data

def construction_twist() -> RealElem:
    """The bundled order-23 twist: search seed times the recorded unit word."""
    data = json.loads((fixtures_dir() / "expected/p23_construction.json").read_text())
    spec = load_search_spec(fixtures_dir() / "search/p23.cfg")
    alpha = spec.alpha0 * data["sign"]
    for unit, e in zip(spec.units.units, data["exponents"]):
        alpha = alpha * unit ** e
    return alpha


def _appendix_lattice() -> Lattice:
    return Lattice(_fixture_matrix("matrices/appendix23.mat"), label="S23")


# ---------------------------------------------------------------------------
# cases

def _case_p5_example() -> CaseReport:
    spec = load_ideal_spec(fixtures_dir() / "ideal/p5.cfg")
    gram = ideal_gram(spec)
    fixture = _fixture_matrix("matrices/p5_gram.mat")
    lattice = Lattice(gram, label="S5")
    df = discriminant_form(lattice)
    rep = check_properties(spec, gram)
    iso = verify_isometry(lattice, cyclotomic_isometry(5), 5)
    checks = (
        _check_matrix("gram_matches_fixture", fixture, gram),
        _check("signature", (2, 2), signature(lattice)),
        _check("abs_det", 5, abs(lattice.det)),
        _check("disc_orders", (5,), df.orders),
        _check_true("disc_q_is_2/5", cyclic_q_matches(df, 5, Fraction(2, 5)),
                    f"generator q = {df.qvalues[0]}"),
        _check_true("properties_ok", rep.ok),
        _check_true("companion_order_5", iso.preserves_form and iso.order_exact),
    )
    return CaseReport("P5_EXAMPLE", checks)


def _case_p13_obstruction() -> CaseReport:
    verdict = unimodular_obstruction(13, 1)
    checks = (
        _check("verdict", "UNSOLVABLE", verdict.verdict),
        _check("witness_prime", 13, verdict.witness_prime),
        _check("witness_odd_exponent", 11, abs(verdict.witness_valuation or 0)),
        _check("ratio", Fraction(1, 13 ** 11), verdict.ratio),
    )
    return CaseReport("P13_OBSTRUCTION", checks)


def _case_p23_construction() -> CaseReport:
    alpha = construction_twist()
    spec = IdealLatticeSpec(23, alpha)
    gram = ideal_gram(spec)
    fixture = _fixture_matrix("matrices/appendix23.mat")
    lattice = Lattice(gram, label="S23")
    df = discriminant_form(lattice)
    rep = check_properties(spec, gram)
    iso = verify_isometry(lattice, cyclotomic_isometry(23), 23)
    checks = (
        _check_matrix("gram_matches_fixture", fixture, gram),
        _check("signature", (2, 20), signature(lattice)),
        _check("abs_det", 23, abs(lattice.det)),
        _check("disc_orders", (23,), df.orders),
        _check_true("disc_q_is_44/23", cyclic_q_matches(df, 23, Fraction(44, 23)),
                    f"generator q = {df.qvalues[0]}"),
        _check_true("properties_ok", rep.ok),
        _check_true("companion_preserves_form", iso.preserves_form),
        _check_true("companion_order_23", iso.order_exact),
        _check("companion_char_poly", (1,) * 23, iso.char_poly),
        _check_true("disc_action_trivial", iso.disc_action_trivial is True),
    )
    return CaseReport("P23_CONSTRUCTION", checks)


def _case_p23_glue() -> CaseReport:
    s = _appendix_lattice()
    t = standard_lattice("diag(46)")
    df_s = discriminant_form(s)
    gen, qval = df_s.generators[0], df_s.qvalues[0]
    scale = next(k for k in range(1, 23) if (k * k * qval) % 2 == Fraction(44, 23))
    glue = tuple(2 * scale * x for x in gen) + (Fraction(4, 46),)
    ov = overlattice(GlueSpec((s, t), (glue,)))
    glued = ov.lattice
    df_m = discriminant_form(glued)
    iso_sum = _block_with_one(cyclotomic_isometry(23))
    extended = extend_isometry(ov, iso_sum)
    iso = verify_isometry(glued, extended, 23)
    t_coords = rational_inverse(ov.basis).mat_vec(tuple([0] * 22 + [1]))
    checks = (
        _check("rank", 23, glued.rank),
        _check("signature", (3, 20), signature(glued)),
        _check("index_over_sum", 23, ov.index),
        _check("det", 2, glued.det),
        _check("disc_orders", (2,), df_m.orders),
        _check("disc_q_on_generator", Fraction(3, 2), df_m.qvalues[0]),
        _check_true("extension_preserves_form", iso.preserves_form),
        _check_true("extension_order_23", iso.order_exact),
        _check_true("extension_fixes_t",
                    all(Fraction(x).denominator == 1 for x in t_coords)
                    and extended.mat_vec(t_coords) == t_coords),
    )
    return CaseReport("P23_GLUE", checks)


def _block_with_one(c: Matrix) -> Matrix:
    n = c.nrows
    rows = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        for j in range(n):
            rows[i][j] = c[i][j]
    rows[n][n] = 1
    return Matrix(rows)


def ambient_rank23() -> Lattice:
    """The rank-23 even lattice of signature (3,20) used by the embedding
    checks: two E8 blocks, three hyperbolic planes and a square -2 vector."""
    return direct_sum(standard_lattice("E8"), standard_lattice("E8"),
                      standard_lattice("U"), standard_lattice("U"),
                      standard_lattice("U"), standard_lattice("diag(-2)"))


def _case_p23_embeddings() -> CaseReport:
    ambient = ambient_rank23()
    # basis vectors (e, f) of the last hyperbolic plane sit at 20, 21;
    # the square -2 generator at 22
    t1 = [0] * 23
    t1[20], t1[21], t1[22] = 2, 12, 1
    t2 = [0] * 23
    t2[20], t2[21] = 1, 23
    comp1 = orthogonal_complement(ambient, Matrix.from_columns([t1]))
    comp2 = orthogonal_complement(ambient, Matrix.from_columns([t2]))
    triple1 = invariant_triple(comp1)
    triple2 = invariant_triple(comp2)
    model1 = invariant_triple(_appendix_lattice())
    model2 = invariant_triple(direct_sum(
        standard_lattice("E8"), standard_lattice("E8"), standard_lattice("U"),
        standard_lattice("diag(-2)"), standard_lattice("diag(2)"),
        standard_lattice("K23")))
    sq1 = (Matrix.from_columns([t1]).transpose() @ ambient.gram
           @ Matrix.from_columns([t1]))[0][0]
    sq2 = (Matrix.from_columns([t2]).transpose() @ ambient.gram
           @ Matrix.from_columns([t2]))[0][0]
    checks = (
        _check("first_vector_square", 46, sq1),
        _check("second_vector_square", 46, sq2),
        _check_true("first_complement_matches", triple1 == model1,
                    f"sig {triple1[0]}, orders {triple1[1]}"),
        _check_true("second_complement_matches", triple2 == model2,
                    f"sig {triple2[0]}, orders {triple2[1]}"),
        _check_true("triples_differ", triple1 != triple2,
                    f"orders {triple1[1]} vs {triple2[1]}"),
    )
    return CaseReport("P23_EMBEDDINGS", checks)


def _case_appendix_matrix() -> CaseReport:
    fixture = _fixture_matrix("matrices/appendix23.mat")
    gram = ideal_gram(IdealLatticeSpec(23, construction_twist()))
    diff = sum(1 for i in range(22) for j in range(22)
               if fixture[i][j] != gram[i][j])
    checks = (
        _check("entries_equal", 0, diff),
        _check_true("fixture_symmetric", fixture.is_symmetric),
        _check_true("fixture_even_diagonal",
                    all(fixture[i][i] % 2 == 0 for i in range(22))),
    )
    return CaseReport("APPENDIX_MATRIX", checks)


# ---------------------------------------------------------------------------
# period point of the order-23 isometry

def _period_vector() -> list[CycElem]:
    """Entry i is sum of xi^j for j = 0..21-i, an element of the formal
    eigenvalue field Q[xi]/(1 + xi + ... + xi^22)."""
    omega = []
    for i in range(22):
        coeffs = [1 if j <= 21 - i else 0 for j in range(22)]
        omega.append(CycElem(23, coeffs))
    return omega


def period_checks() -> CaseReport:
    gram = _fixture_matrix("matrices/appendix23.mat")
    omega = _period_vector()
    omega_bar = [w.conj() for w in omega]

    # (a) the self-pairing vanishes identically in Q[xi]
    g_omega = [_cyc_combination(gram[i], omega) for i in range(22)]
    self_pair = _cyc_dot(omega, g_omega)

    # (b) the conjugate pairing is a conjugation-fixed element; its value at
    # the embedding xi -> exp(2*pi*i/23) must be strictly positive
    g_omega_bar = [_cyc_combination(gram[i], omega_bar) for i in range(22)]
    conj_pair = _cyc_dot(omega, g_omega_bar)
    real_pair = RealElem.from_cyc(conj_pair)
    precision = 16
    enclosure = eval_embeddings(real_pair, precision)[0]
    while enclosure.contains_zero:
        precision *= 2
        if precision > 4096:
            raise RuntimeError("positivity undecided at 4096 bits; value may be zero")
        enclosure = eval_embeddings(real_pair, precision)[0]

    # (c) the pairing-against-eigenvector matrix is invertible
    j = Matrix([[1 if col >= row else 0 for col in range(22)] for row in range(22)])
    det_mj = det(gram @ j)
    expected = json.loads((fixtures_dir() / "expected/period.json").read_text())

    checks = (
        _check_true("self_pairing_zero", self_pair.is_zero,
                    "exact zero of Q[xi]" if self_pair.is_zero else self_pair.to_text()),
        _check_true("conjugate_pairing_positive", enclosure.sign == 1,
                    f"certified lower bound {_floor_decimal(enclosure.lower)}"),
        _check_true("det_mj_nonzero", det_mj != 0, str(det_mj)),
        _check("det_mj_regression", Fraction(expected["det_mj"]), Fraction(det_mj)),
    )
    return CaseReport("PERIOD_CHECKS", checks)


def _cyc_combination(coeffs, elems: list[CycElem]) -> CycElem:
    acc = CycElem.zero(elems[0].p)
    for c, e in zip(coeffs, elems):
        if c:
            acc = acc + e * c
    return acc


def _cyc_dot(a: list[CycElem], b: list[CycElem]) -> CycElem:
    acc = CycElem.zero(a[0].p)
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


# ---------------------------------------------------------------------------
# dispatch

_DISPATCH = {
    "P5_EXAMPLE": _case_p5_example,
    "P13_OBSTRUCTION": _case_p13_obstruction,
    "P23_CONSTRUCTION": _case_p23_construction,
    "P23_GLUE": _case_p23_glue,
    "P23_EMBEDDINGS": _case_p23_embeddings,
    "APPENDIX_MATRIX": _case_appendix_matrix,
    "PERIOD_CHECKS": period_checks,
}


def reproduce(case: str) -> CaseReport:
    """Run one named case; unknown names list the available ones."""
    try:
        runner = _DISPATCH[case.upper()]
    except KeyError:
        raise ValueError(f"unknown case {case!r}; choose from {', '.join(CASES)}") from None
    return runner()

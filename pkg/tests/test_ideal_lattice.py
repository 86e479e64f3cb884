from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cyclolat.cyclotomic import CycElem, RealElem, embedding_signs
from cyclolat.exact_linalg import Matrix, congruent_diag
from cyclolat.ideal_lattice import (
    IdealLatticeSpec,
    check_properties,
    ideal_gram,
    load_ideal_spec,
    save_ideal_spec,
    unimodular_obstruction,
)
from cyclolat.lattice_core import cyclotomic_isometry
from cyclolat.scenarios import fixtures_dir

P5_ALPHA = RealElem(5, (Fraction(4, 5), Fraction(3, 5)))
P5_GRAM = Matrix([[2, 1, -2, -2], [1, 2, 1, -2], [-2, 1, 2, 1], [-2, -2, 1, 2]])


def gram_entrywise_oracle(spec: IdealLatticeSpec) -> Matrix:
    """Independent path: one trace computation per entry, no use of the
    translation structure of the power basis."""
    p = spec.p
    alpha = spec.alpha.to_cyc()
    rows = []
    for i in range(p - 1):
        bi = spec.beta * CycElem.zeta(p, i)
        row = []
        for j in range(p - 1):
            bj_bar = (spec.beta * CycElem.zeta(p, j)).conj()
            row.append((alpha * bi * bj_bar).trace())
        rows.append(row)
    return Matrix(rows)


def random_spec(rng) -> IdealLatticeSpec:
    p = rng.choice((3, 5, 7, 11, 13))
    while True:
        den = rng.choice((1, p))
        coeffs = [Fraction(rng.randint(-3, 3), den) for _ in range((p - 1) // 2)]
        if any(coeffs):
            break
    alpha = RealElem(p, coeffs)
    if rng.random() < 0.3:
        beta = CycElem.one(p) - CycElem.zeta(p)
    else:
        beta = CycElem.one(p)
    return IdealLatticeSpec(p, alpha, beta)


# ---------------------------------------------------------------------------
# Gram construction

def test_p5_printed_matrix():
    assert ideal_gram(IdealLatticeSpec(5, P5_ALPHA)) == P5_GRAM


def test_p5_untwisted_is_pure_trace_form():
    g = ideal_gram(IdealLatticeSpec(5, RealElem.one(5)))
    assert all(g[i][i] == 4 for i in range(4))
    assert all(g[i][j] == -1 for i in range(4) for j in range(4) if i != j)


def test_gram_against_entrywise_oracle():
    rng = random.Random(30)
    for _ in range(15):
        spec = random_spec(rng)
        assert ideal_gram(spec) == gram_entrywise_oracle(spec)


def test_gram_symmetric_always():
    rng = random.Random(31)
    for _ in range(10):
        g = ideal_gram(random_spec(rng))
        assert g.is_symmetric


def test_companion_invariance():
    rng = random.Random(32)
    for _ in range(20):
        spec = random_spec(rng)
        g = ideal_gram(spec)
        c = cyclotomic_isometry(spec.p)
        assert c.transpose() @ g @ c == g


def test_spec_validation():
    with pytest.raises(ValueError, match="nonzero"):
        IdealLatticeSpec(5, RealElem.zero(5))
    with pytest.raises(ValueError, match="nonzero"):
        IdealLatticeSpec(5, P5_ALPHA, CycElem.zero(5))
    with pytest.raises(ValueError, match="prime"):
        IdealLatticeSpec(7, P5_ALPHA)


# ---------------------------------------------------------------------------
# property checks

def test_p5_properties():
    spec = IdealLatticeSpec(5, P5_ALPHA)
    rep = check_properties(spec, ideal_gram(spec))
    assert rep.integral and rep.even
    assert rep.abs_det == 5
    assert rep.expected_abs_det == Fraction(1, 25) * 125
    assert rep.disc_identity
    assert rep.negative_embeddings == 1
    assert rep.signature == (2, 2)
    assert rep.signature_consistent and rep.ok


def test_p5_alpha_one_positive_definite():
    spec = IdealLatticeSpec(5, RealElem.one(5))
    rep = check_properties(spec, ideal_gram(spec))
    assert rep.abs_det == 125
    assert rep.signature == (4, 0)
    assert rep.negative_embeddings == 0
    assert rep.ok


def test_nonprincipal_generator_scales_determinant():
    beta = CycElem.one(5) - CycElem.zeta(5)  # norm 5
    spec = IdealLatticeSpec(5, RealElem.one(5), beta)
    rep = check_properties(spec, ideal_gram(spec))
    assert rep.abs_det == 25 * 125
    assert rep.disc_identity and rep.ok


def test_disc_identity_random_specs():
    rng = random.Random(33)
    for _ in range(20):
        spec = random_spec(rng)
        rep = check_properties(spec, ideal_gram(spec))
        assert rep.disc_identity
        assert rep.signature_consistent


def test_integral_implies_even():
    rng = random.Random(34)
    seen_integral = 0
    for _ in range(60):
        spec = random_spec(rng)
        rep = check_properties(spec, ideal_gram(spec))
        if rep.integral:
            seen_integral += 1
            assert rep.even
    assert seen_integral >= 5


def test_signature_by_two_independent_routes():
    rng = random.Random(35)
    for _ in range(15):
        spec = random_spec(rng)
        g = ideal_gram(spec)
        t = sum(1 for s in embedding_signs(spec.alpha) if s < 0)
        assert congruent_diag(g) == (spec.p - 1 - 2 * t, 2 * t)


# ---------------------------------------------------------------------------
# obstruction

def test_obstruction_p13_unsolvable():
    verdict = unimodular_obstruction(13, 1)
    assert verdict.verdict == "UNSOLVABLE"
    assert verdict.witness_prime == 13
    assert verdict.witness_valuation == -11
    assert verdict.witness_valuation % 2 != 0


def test_obstruction_inconclusive_cases():
    assert unimodular_obstruction(23, 23).verdict == "INCONCLUSIVE"
    assert unimodular_obstruction(5, 5).verdict == "INCONCLUSIVE"
    assert unimodular_obstruction(5, 5).ratio == Fraction(1, 25)


def test_obstruction_composite_target():
    verdict = unimodular_obstruction(5, 10)  # 10/125 = 2/25: odd power of 2
    assert verdict.verdict == "UNSOLVABLE"
    assert verdict.witness_prime == 2
    assert verdict.witness_valuation == 1


def test_obstruction_rejects_nonpositive():
    with pytest.raises(ValueError):
        unimodular_obstruction(5, 0)


# ---------------------------------------------------------------------------
# spec files

def test_fixture_spec_files_round_trip(tmp_path):
    spec = load_ideal_spec(fixtures_dir() / "ideal/p5.cfg")
    assert spec.p == 5 and spec.alpha == P5_ALPHA
    assert ideal_gram(spec) == P5_GRAM
    out = tmp_path / "spec.cfg"
    save_ideal_spec(spec, out)
    again = load_ideal_spec(out)
    assert again.p == spec.p and again.alpha == spec.alpha and again.beta == spec.beta


def test_bundled_p23_spec_reproduces_appendix():
    spec = load_ideal_spec(fixtures_dir() / "ideal/p23.cfg")
    from cyclolat.exact_linalg import matrix_from_text
    fixture = matrix_from_text((fixtures_dir() / "matrices/appendix23.mat").read_text())
    assert ideal_gram(spec) == fixture


def test_missing_spec_file():
    with pytest.raises(ValueError, match="ideal"):
        load_ideal_spec("/nonexistent/path.cfg")

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cyclolat.cyclotomic import (
    CycElem,
    RealElem,
    cyclotomic_polynomial,
    embedding_signs,
    eval_embeddings,
    format_coeffs,
    minimal_poly_mu,
    parse_coeffs,
)
from cyclolat.cyclotomic import _mu_power
from cyclolat.exact_linalg import Matrix, det


def poly_mulmod_oracle(p: int, a, b):
    """Independent check of CycElem multiplication: raw polynomial product
    followed by long division by the cyclotomic polynomial."""
    prod = [Fraction(0)] * (2 * p - 3)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    phi = list(cyclotomic_polynomial(p))
    for i in range(len(prod) - 1, p - 2, -1):
        c = prod[i]
        if c:
            prod[i] = Fraction(0)
            for j in range(p):
                prod[i - (p - 1) + j] -= c * phi[j]
    return tuple(prod[: p - 1])


def random_elem(rng, p, den=1):
    return CycElem(p, [Fraction(rng.randint(-5, 5), den) for _ in range(p - 1)])


# ---------------------------------------------------------------------------
# multiplication

def test_mul_zeta_power_wraps():
    z = CycElem.zeta(5)
    assert z ** 4 * z == CycElem.one(5)


def test_mul_reduction_by_cyclotomic_polynomial():
    z = CycElem.zeta(5)
    assert z ** 3 * z == -(CycElem.one(5) + z + z ** 2 + z ** 3)


def test_mul_against_polynomial_remainder_oracle():
    one, z = CycElem.one(5), CycElem.zeta(5)
    a, b = one - z, one - z ** 4
    prod = a * b
    assert prod == CycElem(5, (3, 0, 1, 1))
    assert prod.coeffs == poly_mulmod_oracle(5, a.coeffs, b.coeffs)


@pytest.mark.parametrize("p", [3, 5, 7, 13, 23])
def test_mul_random_against_oracle(p):
    rng = random.Random(p)
    for _ in range(10):
        a, b = random_elem(rng, p), random_elem(rng, p, den=3)
        assert (a * b).coeffs == poly_mulmod_oracle(p, a.coeffs, b.coeffs)
        assert a * b == b * a


def test_mul_prime_mismatch_rejected():
    with pytest.raises(ValueError, match="mismatched primes"):
        CycElem.one(5) * CycElem.one(7)


def test_mul_associative_random():
    rng = random.Random(1)
    for _ in range(10):
        a, b, c = (random_elem(rng, 7) for _ in range(3))
        assert (a * b) * c == a * (b * c)


# ---------------------------------------------------------------------------
# conjugation

def test_conj_of_zeta():
    for p in (5, 23):
        assert CycElem.zeta(p).conj() == CycElem.zeta(p, p - 1)


def test_conj_fixes_real_element():
    mu = RealElem.mu(23).to_cyc()
    assert mu.conj() == mu


def test_conj_is_involution():
    rng = random.Random(2)
    for _ in range(20):
        x = random_elem(rng, 11, den=2)
        assert x.conj().conj() == x


def test_conj_is_isometry_of_trace_pairing():
    rng = random.Random(3)
    for _ in range(20):
        x, y = random_elem(rng, 7), random_elem(rng, 7)
        assert (x * y.conj()).trace() == (x.conj() * y.conj().conj()).trace()


# ---------------------------------------------------------------------------
# trace and norms

def test_trace_values():
    assert CycElem.one(23).trace() == 22
    assert CycElem.zeta(23).trace() == -1
    assert CycElem.zeta(5, 3).trace() == -1


def test_norm_of_root_of_unity():
    assert CycElem.zeta(5).norm() == 1
    assert CycElem.zeta(23, 7).norm() == 1


def test_norm_of_one_minus_zeta_is_p():
    for p in (3, 5, 13, 23):
        assert (CycElem.one(p) - CycElem.zeta(p)).norm() == p


def test_norm_multiplicative_random():
    rng = random.Random(4)
    for _ in range(10):
        x, y = random_elem(rng, 7), random_elem(rng, 7, den=2)
        assert (x * y).norm() == x.norm() * y.norm()


def test_norm_of_real_element_is_square_of_subfield_norm():
    alpha = RealElem(5, (Fraction(4, 5), Fraction(3, 5)))
    assert alpha.norm() == Fraction(-1, 5)
    assert alpha.to_cyc().norm() == alpha.norm() ** 2


def test_norm_mu5():
    assert RealElem.mu(5).norm() == -1


def test_norm_zero():
    assert CycElem.zero(5).norm() == 0
    assert RealElem.zero(5).norm() == 0


# ---------------------------------------------------------------------------
# minimal polynomial of mu

def test_minimal_poly_small_primes():
    assert minimal_poly_mu(5) == (-1, 1, 1)   # x^2 + x - 1
    assert minimal_poly_mu(3) == (1, 1)       # x + 1


def test_minimal_poly_23_annihilates_mu():
    poly = minimal_poly_mu(23)
    assert len(poly) == 12 and poly[-1] == 1
    acc = CycElem.zero(23)
    for k, c in enumerate(poly):
        acc = acc + _mu_power(23, k) * c
    assert acc.is_zero


# ---------------------------------------------------------------------------
# trace pairing determinant

@pytest.mark.parametrize("p", [3, 5, 13, 23])
def test_trace_pairing_determinant(p):
    rows = []
    for i in range(p - 1):
        zi = CycElem.zeta(p, i)
        rows.append([(zi * CycElem.zeta(p, j).conj()).trace() for j in range(p - 1)])
    assert det(Matrix(rows)) == p ** (p - 2)


# ---------------------------------------------------------------------------
# embeddings

def test_embedding_of_mu5_contains_cosines():
    ivs = eval_embeddings(RealElem.mu(5), 32)
    # 2cos(72 deg) = 0.6180339887..., 2cos(144 deg) = -1.6180339887...
    assert ivs[0].lower < Fraction(6180339888, 10 ** 10) < ivs[0].upper or \
        ivs[0].lower < Fraction(6180339887, 10 ** 10) < ivs[0].upper
    assert ivs[1].lower < Fraction(-16180339887, 10 ** 10) < ivs[1].upper
    assert ivs[0].index == 1 and ivs[1].index == 2


def test_embedding_signs_p5_twist():
    alpha = RealElem(5, (Fraction(4, 5), Fraction(3, 5)))
    assert embedding_signs(alpha) == (1, -1)


def test_embedding_signs_zero_detected_symbolically():
    assert embedding_signs(RealElem.zero(23)) == (0,) * 11


def test_embeddings_nested_and_shrinking():
    a = RealElem(23, tuple(Fraction(i - 5, 3) for i in range(11)))
    prev = eval_embeddings(a, 16)
    for precision in (32, 64):
        cur = eval_embeddings(a, precision)
        for before, after in zip(prev, cur):
            assert before.lower <= after.lower <= after.upper <= before.upper
            assert after.width <= Fraction(1, 2 ** precision)
            assert after.width * 2 <= before.width or before.width == 0
        prev = cur


def test_embeddings_reject_low_precision():
    with pytest.raises(ValueError, match="at least 8"):
        eval_embeddings(RealElem.mu(5), 4)


def test_embedding_count_of_order23_units():
    # independent cross-check of sign counting: values sum against the trace
    a = RealElem.mu(23)
    ivs = eval_embeddings(a, 64)
    total_lo = sum(iv.lower for iv in ivs)
    total_hi = sum(iv.upper for iv in ivs)
    # sum of the embeddings of mu is the trace of mu over the real subfield,
    # i.e. -(second-highest coefficient) of its minimal polynomial
    expected = -Fraction(minimal_poly_mu(23)[-2])
    assert total_lo <= expected <= total_hi


# ---------------------------------------------------------------------------
# element plumbing

def test_inverse_round_trip():
    x = CycElem(7, (1, 0, 2, -1, 0, 3))
    assert x * x.inverse() == CycElem.one(7)
    r = RealElem(23, tuple(range(1, 12)))
    assert r * r.inverse() == RealElem.one(23)


def test_inverse_of_zero_rejected():
    with pytest.raises(ZeroDivisionError):
        CycElem.zero(5).inverse()


def test_negative_powers():
    z = CycElem.zeta(23)
    assert z ** -1 == z.conj()
    mu = RealElem.mu(5)
    assert mu ** -2 == (mu * mu).inverse()


def test_real_embedding_into_cyc_and_back():
    r = RealElem(23, tuple(Fraction(i, 7) for i in range(11)))
    assert RealElem.from_cyc(r.to_cyc()) == r


def test_from_cyc_rejects_non_real():
    with pytest.raises(ValueError, match="not fixed by conjugation"):
        RealElem.from_cyc(CycElem.zeta(5))


def test_text_serialization_round_trip():
    x = CycElem(5, (Fraction(1, 3), -2, 0, Fraction(7, 2)))
    assert CycElem.from_text(5, x.to_text()) == x
    r = RealElem(23, tuple(Fraction((-1) ** i * i, 23) for i in range(11)))
    assert RealElem.from_text(23, r.to_text()) == r


def test_parse_coeffs_pads_short_input():
    assert parse_coeffs("1", 4) == (1, 0, 0, 0)
    assert format_coeffs((Fraction(1, 2), 3)) == "1/2,3"
    with pytest.raises(ValueError):
        parse_coeffs("1,2,3", 2)


def test_coefficient_length_enforced():
    with pytest.raises(ValueError, match="coefficients"):
        CycElem(5, (1, 2, 3))
    with pytest.raises(ValueError, match="odd prime"):
        CycElem(9, (1,) * 8)

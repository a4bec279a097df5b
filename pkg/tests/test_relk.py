import random

import pytest

from nclfun.coeffring import CoeffRing, Poly, poly_det
from nclfun.errors import InvariantViolation, NotSQuasiIso
from nclfun.relk import (
    TorsionClass,
    block_reduction_check,
    d_connecting,
    poly_mat_mul,
    verify_d_exactness,
    verify_d_fitting_consistency,
    verify_d_multiplicative,
)

Z9 = CoeffRing(3, 2)
Z25 = CoeffRing(5, 2)
SPLIT3 = CoeffRing(3, 2, minpoly=[2, 0, 1])


def _p(ring, *ints):
    return Poly.from_ints(ring, list(ints))


def _rand_poly(rng, ring, deg):
    return Poly.from_ints(
        ring, [rng.randrange(ring.modulus) for _ in range(deg + 1)])


def _rand_s_matrix(rng, ring, size, deg):
    """Random polynomial matrix, resampled until the determinant is in S."""
    from nclfun.coeffring import is_in_S
    while True:
        mat = [[_rand_poly(rng, ring, deg) for _ in range(size)]
               for _ in range(size)]
        if is_in_S(poly_det(mat, ring)):
            return mat


# ---------------------------------------------------------------------------
# the connecting map itself
# ---------------------------------------------------------------------------

def test_d_connecting_single_entry():
    cls = d_connecting(Z9, [[_p(Z9, 1, -4)]])
    assert isinstance(cls, TorsionClass)
    assert len(cls.num_gens) == 1
    assert cls.num_gens[0] == _p(Z9, 1, 5)
    assert cls.den_gens == (Poly.one(Z9),)


def test_d_connecting_rejects_determinant_outside_s():
    with pytest.raises(NotSQuasiIso):
        d_connecting(Z9, [[_p(Z9, 3)]])
    with pytest.raises(NotSQuasiIso):
        d_connecting(Z9, [[_p(Z9, 0, 3, 6)]])
    # one entry bad but the determinant fine is allowed
    cls = d_connecting(Z9, [[_p(Z9, 3), _p(Z9, 1)],
                            [_p(Z9, 1), _p(Z9, 0)]])
    assert cls.num_gens[0] == _p(Z9, 8)


def test_d_connecting_input_validation():
    with pytest.raises(InvariantViolation):
        d_connecting(Z9, [[_p(Z9, 1), _p(Z9, 0)]])
    with pytest.raises(InvariantViolation):
        d_connecting(Z9, [[_p(Z25, 1)]])


def test_torsion_class_product_concatenates_generator_products():
    a = TorsionClass(Z9, [_p(Z9, 1, 1)])
    b = TorsionClass(Z9, [_p(Z9, 2)])
    ab = a * b
    assert ab.num_gens == (_p(Z9, 1, 1) * _p(Z9, 2),)
    assert ab.equals_at(ab, 16)


def test_poly_mat_mul_identity():
    one = Poly.one(Z9)
    zero = Poly.zero(Z9)
    ident = [[one, zero], [zero, one]]
    mat = [[_p(Z9, 1, 2), _p(Z9, 0, 1)], [_p(Z9, 4), _p(Z9, 7, 0, 1)]]
    assert poly_mat_mul(Z9, ident, mat) == mat
    assert poly_mat_mul(Z9, mat, ident) == mat


# ---------------------------------------------------------------------------
# multiplicativity and exactness
# ---------------------------------------------------------------------------

def test_d_multiplicative_hand_pair():
    alpha = [[_p(Z9, 1, 5)]]
    beta = [[_p(Z9, 2, 0, 1)]]
    out = verify_d_multiplicative(Z9, alpha, beta, prec=16)
    assert out["ok"]
    assert out["classes_equal"]
    assert out["det_exact"]
    assert out["check"] == "d-multiplicative"


def test_d_multiplicative_size_mismatch():
    with pytest.raises(InvariantViolation):
        verify_d_multiplicative(
            Z9, [[_p(Z9, 1)]],
            [[_p(Z9, 1), _p(Z9, 0)], [_p(Z9, 0), _p(Z9, 1)]], 8)


def test_d_multiplicative_random():
    rng = random.Random(4021)
    for ring in (Z9, Z25, SPLIT3):
        for _ in range(12):
            size = rng.randrange(1, 4)
            alpha = _rand_s_matrix(rng, ring, size, 2)
            beta = _rand_s_matrix(rng, ring, size, 2)
            out = verify_d_multiplicative(ring, alpha, beta, prec=24)
            assert out["ok"], (ring, alpha, beta)


def test_d_exactness_hand_triangle():
    alpha = [[_p(Z9, 1, 5)]]
    gamma = [[_p(Z9, 2, 1)]]
    off = [[_p(Z9, 0, 0, 7)]]
    out = verify_d_exactness(Z9, alpha, gamma, off, prec=16)
    assert out["ok"]
    assert out["check"] == "d-exactness"


def test_d_exactness_off_block_shape_guard():
    with pytest.raises(InvariantViolation):
        verify_d_exactness(Z9, [[_p(Z9, 1)]], [[_p(Z9, 1)]],
                           [[_p(Z9, 0), _p(Z9, 0)]], 8)


def test_d_exactness_random_mixed_block_sizes():
    rng = random.Random(909)
    for _ in range(15):
        ring = rng.choice((Z9, Z25))
        n = rng.randrange(1, 3)
        k = rng.randrange(1, 3)
        alpha = _rand_s_matrix(rng, ring, n, 2)
        gamma = _rand_s_matrix(rng, ring, k, 2)
        off = [[_rand_poly(rng, ring, 2) for _ in range(k)] for _ in range(n)]
        out = verify_d_exactness(ring, alpha, gamma, off, prec=24)
        assert out["ok"], (ring, n, k)


# ---------------------------------------------------------------------------
# block reduction
# ---------------------------------------------------------------------------

def test_block_reduction_pinned_two_blocks():
    # [[1, -A], [-1, 1]] must land on diag(1, 1 - A) with A = 4T
    out = block_reduction_check(Z9, [[_p(Z9, 0, 4)]], 2)
    assert out["ok"]
    assert out["diagonal_exact"]
    assert out["left"] == out["right"] == str(_p(Z9, 1, 5))


def test_block_reduction_single_block_degenerates():
    out = block_reduction_check(Z9, [[_p(Z9, 0, 2)]], 1)
    assert out["ok"]
    assert out["right"] == str(_p(Z9, 1, 7))


def test_block_reduction_wider_blocks():
    A = [[_p(Z9, 2, 1), _p(Z9, 0, 1)],
         [_p(Z9, 1), _p(Z9, 5, 2)]]
    for b in (2, 3):
        out = block_reduction_check(Z9, A, b)
        assert out["ok"], b
        assert out["left"] == out["right"]


def test_block_reduction_random_degree_capped():
    rng = random.Random(3355)
    for _ in range(10):
        ring = rng.choice((Z9, Z25, SPLIT3))
        b = rng.randrange(2, 6)
        n = rng.randrange(1, 3)
        deg = 1 if b >= 4 else 2
        A = [[_rand_poly(rng, ring, deg) for _ in range(n)] for _ in range(n)]
        out = block_reduction_check(ring, A, b)
        assert out["ok"], (ring, b, n)


def test_block_reduction_rejects_bad_block_count():
    with pytest.raises(InvariantViolation):
        block_reduction_check(Z9, [[_p(Z9, 1)]], 0)


# ---------------------------------------------------------------------------
# bridge to the Iwasawa side
# ---------------------------------------------------------------------------

def test_d_fitting_consistency_worked_unit():
    out = verify_d_fitting_consistency(Z9, [[Z9.int_embed(4)]], prec=24)
    assert out["ok"]
    assert out["left"] == "6 + Y"


def test_d_fitting_consistency_random_small():
    rng = random.Random(6161)
    for ring in (Z9, Z25, SPLIT3):
        for _ in range(4):
            s = rng.randrange(1, 3)
            Phi = [[ring.int_embed(rng.randrange(ring.modulus))
                    for _ in range(s)] for _ in range(s)]
            out = verify_d_fitting_consistency(ring, Phi, prec=24)
            assert out["ok"], (ring, Phi)

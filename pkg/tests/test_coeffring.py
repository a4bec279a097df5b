import random

import pytest

from nclfun.coeffring import (
    CoeffRing,
    Poly,
    RationalFunction,
    Series,
    det_one_minus_scaled,
    eq_up_to_unit,
    is_in_P,
    is_in_S,
    mat_inverse_omega,
    mat_mul_omega,
    mat_identity_omega,
    omega_det,
    poly_det,
    render_element,
    series_invert,
    solve_left_omega,
)
from nclfun.errors import InvariantViolation, NonUnitConstantTerm

Z9 = CoeffRing(3, 2)
Z8 = CoeffRing(2, 3)
GAUSS9 = CoeffRing(3, 2, [1, 0, 1])          # x^2 + 1, irreducible mod 3
SPLIT3 = CoeffRing(3, 1, [2, 0, 1])          # x^2 + 2 = (x+1)(x+2) mod 3


def _rand_elem(rng, ring):
    return ring.element([rng.randrange(ring.modulus)
                         for _ in range(ring.deg)])


def test_ring_validation():
    with pytest.raises(InvariantViolation):
        CoeffRing(4, 2)
    with pytest.raises(InvariantViolation):
        CoeffRing(3, 0)
    with pytest.raises(InvariantViolation):
        CoeffRing(3, 2, [0, 0, 1])            # x^2, not square free mod 3
    with pytest.raises(InvariantViolation):
        CoeffRing(3, 2, [1, 1, 1])            # (x+2)^2 mod 3
    with pytest.raises(InvariantViolation):
        CoeffRing(3, 2, [1, 2])               # not monic


def test_ring_axioms_random():
    rng = random.Random(101)
    for ring in [Z9, Z8, GAUSS9, SPLIT3, CoeffRing(5, 3)]:
        for _ in range(40):
            a, b, c = (_rand_elem(rng, ring) for _ in range(3))
            assert ring.mul(a, b) == ring.mul(b, a)
            assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
            assert ring.mul(a, ring.add(b, c)) == \
                ring.add(ring.mul(a, b), ring.mul(a, c))
            assert ring.mul(a, ring.one) == a
            assert ring.add(a, ring.neg(a)) == ring.zero


def test_gauss_ring_inverse_of_x():
    x = GAUSS9.gen()
    assert GAUSS9.mul(x, x) == GAUSS9.int_embed(-1)
    # 1/x = -x since x * (-x) = -x^2 = 1
    assert GAUSS9.inv(x) == GAUSS9.neg(x) == (0, 8)


def test_unit_inverse_roundtrip():
    rng = random.Random(103)
    for ring in [Z9, Z8, GAUSS9, SPLIT3, CoeffRing(5, 2, [2, 0, 0, 1])]:
        units = 0
        for _ in range(60):
            a = _rand_elem(rng, ring)
            if ring.is_unit(a):
                units += 1
                assert ring.mul(a, ring.inv(a)) == ring.one
        assert units > 10


def test_unit_count_z9():
    assert sum(Z9.is_unit((k,)) for k in range(9)) == 6


def test_split_ring_components():
    assert SPLIT3.components == [(1, 1), (2, 1)]
    # x - 1 dies in the component where x maps to 1
    a = SPLIT3.element([-1, 1])
    assert SPLIT3.project_component(a, (2, 1)) == (0,)
    assert SPLIT3.project_component(a, (1, 1)) == (1,)
    assert not SPLIT3.is_unit(a)


def test_series_invert_frozen():
    s = Series.from_ints(Z9, 6, [1, 3])
    t = series_invert(s)
    assert t.coeffs == tuple((c,) for c in [1, 6, 0, 0, 0, 0])
    assert (s * t).coeffs[0] == (1,)
    assert all(c == (0,) for c in (s * t).coeffs[1:])


def test_series_invert_needs_unit():
    with pytest.raises(NonUnitConstantTerm):
        series_invert(Series.from_ints(Z9, 4, [3, 1]))


def test_series_invert_random_roundtrip():
    rng = random.Random(107)
    for ring in [Z9, Z8, GAUSS9]:
        for _ in range(20):
            coeffs = [_rand_elem(rng, ring) for _ in range(8)]
            if not ring.is_unit(coeffs[0]):
                coeffs[0] = ring.one
            s = Series(ring, 8, coeffs)
            t = series_invert(s)
            assert (s * t) == Series.one(ring, 8)


def test_series_precision_rules():
    a = Series.from_ints(Z9, 5, [1, 1])
    b = Series.from_ints(Z9, 3, [1, 8])
    assert (a * b).prec == 3
    assert (a + b).prec == 3
    assert (a * b).coeffs == ((1,), (0,), (8,))
    with pytest.raises(InvariantViolation):
        b.truncate(4)


def test_poly_degree_and_zero():
    assert Poly.zero(Z9).degree == -1
    assert Poly.from_ints(Z9, [0, 0, 9]).degree == -1
    assert Poly.from_ints(Z9, [5, 0, 3]).degree == 2
    p = Poly.from_ints(Z9, [1, 2])
    q = Poly.from_ints(Z9, [1, 7])
    assert (p + q).coeffs == ((2,),)          # 2 + 9T collapses


def test_is_in_P():
    assert is_in_P(Poly.from_ints(Z9, [1, 5]))
    assert not is_in_P(Poly.from_ints(Z9, [3, 1]))
    assert not is_in_P(Poly.from_ints(Z9, [0, 1]))
    assert is_in_P(Series.from_ints(Z9, 4, [2, 0, 1]))


def test_is_in_S():
    assert is_in_S(Poly.from_ints(Z9, [0, 1]))        # T survives mod 3
    assert is_in_S(Poly.from_ints(Z9, [-7, 1]))
    assert not is_in_S(Poly.from_ints(Z9, [3, 6]))    # dies mod 3
    assert not is_in_S(Poly.zero(Z9))
    # (x - 1) T vanishes in one residue component of the split ring
    p = Poly(SPLIT3, [SPLIT3.zero, SPLIT3.element([-1, 1])])
    assert not is_in_S(p)
    # (x - 1) T + 1 is visible in both components
    q = Poly(SPLIT3, [SPLIT3.one, SPLIT3.element([-1, 1])])
    assert is_in_S(q)


def test_eq_up_to_unit_frozen_pair():
    a = Poly.from_ints(Z9, [-7, 1])
    b = Poly.from_ints(Z9, [1, -4])
    assert eq_up_to_unit(a, b, 8)
    assert eq_up_to_unit(b, a, 8)
    # the witness is the constant 2: 2 * (1 - 4T) = 2 + T = T - 7 mod 9
    assert b.scale(Z9.int_embed(2)) == a


def test_eq_up_to_unit_rejects():
    assert not eq_up_to_unit(Poly.from_ints(Z9, [0, 1]),
                             Poly.from_ints(Z9, [1, 1]), 8)
    assert not eq_up_to_unit(Poly.from_ints(Z9, [0, 3]),
                             Poly.from_ints(Z9, [0, 1]), 8)
    assert eq_up_to_unit(Poly.from_ints(Z9, [0, 2]),
                         Poly.from_ints(Z9, [0, 1]), 8)


def test_eq_up_to_unit_random_witnessed():
    rng = random.Random(109)
    for ring in [Z9, GAUSS9]:
        for _ in range(15):
            b = Poly(ring, [_rand_elem(rng, ring) for _ in range(3)])
            u = Series(ring, 12, [_rand_elem(rng, ring) for _ in range(12)])
            if not ring.is_unit(u.coeffs[0]):
                u = Series(ring, 12, (ring.one,) + u.coeffs[1:])
            a = u * b.truncate(12)
            assert eq_up_to_unit(a, b, 12)


def _cofactor_poly_det(mat, ring):
    n = len(mat)
    if n == 0:
        return Poly.one(ring)
    if n == 1:
        return mat[0][0]
    total = Poly.zero(ring)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * _cofactor_poly_det(minor, ring)
        total = total - term if j % 2 else total + term
    return total


def test_poly_det_matches_cofactor():
    rng = random.Random(113)
    for ring in [Z9, GAUSS9]:
        for n in [1, 2, 3]:
            for _ in range(6):
                mat = [[Poly(ring, [_rand_elem(rng, ring)
                                    for _ in range(rng.randrange(1, 3))])
                        for _ in range(n)] for _ in range(n)]
                assert poly_det(mat, ring) == _cofactor_poly_det(mat, ring)


def test_det_one_minus_scaled_frozen_curve_factor():
    # companion matrix of x^2 - 2x + 5, the frozen curve count data
    ring = Z9
    A = [[ring.int_embed(0), ring.int_embed(-5)],
         [ring.int_embed(1), ring.int_embed(2)]]
    assert det_one_minus_scaled(ring, A, 1) == Poly.from_ints(ring, [1, -2, 5])
    spread = det_one_minus_scaled(ring, A, 3)
    assert spread == Poly.from_ints(ring, [1, 0, 0, -2, 0, 0, 5])


def test_omega_matrix_solve_and_inverse():
    rng = random.Random(127)
    for ring in [Z9, GAUSS9]:
        for _ in range(10):
            n = rng.randrange(1, 4)
            A = [[_rand_elem(rng, ring) for _ in range(n)] for _ in range(n)]
            x0 = [_rand_elem(rng, ring) for _ in range(n)]
            b = [ring.zero] * n
            for j in range(n):
                for i in range(n):
                    b[j] = ring.add(b[j], ring.mul(x0[i], A[i][j]))
            x = solve_left_omega(ring, A, b)
            assert x is not None
            got = [ring.zero] * n
            for j in range(n):
                for i in range(n):
                    got[j] = ring.add(got[j], ring.mul(x[i], A[i][j]))
            assert got == b
        # invertible by construction: compose elementary row additions
        for _ in range(10):
            n = rng.randrange(1, 4)
            A = mat_identity_omega(ring, n)
            for _ in range(6):
                i, j = rng.randrange(n), rng.randrange(n)
                if i != j:
                    c = _rand_elem(rng, ring)
                    for k in range(n):
                        A[i][k] = ring.add(A[i][k], ring.mul(c, A[j][k]))
            X = mat_inverse_omega(ring, A)
            assert X is not None
            assert mat_mul_omega(ring, A, X) == mat_identity_omega(ring, n)
            assert ring.is_unit(omega_det(ring, A))
    assert mat_inverse_omega(Z9, [[(3,)]]) is None


def test_rational_function_equality_and_expand():
    one = Poly.one(Z9)
    num = Poly.from_ints(Z9, [1, 0, -1])
    den = Poly.from_ints(Z9, [1, -1])
    r = RationalFunction(num, den)
    assert r == RationalFunction(Poly.from_ints(Z9, [1, 1]), one)
    assert r.expand(5) == Series.from_ints(Z9, 5, [1, 1])
    geom = RationalFunction(one, Poly.from_ints(Z9, [1, -1]))
    assert geom.expand(4) == Series.from_ints(Z9, 4, [1, 1, 1, 1])
    with pytest.raises(InvariantViolation):
        RationalFunction(one, Poly.from_ints(Z9, [0, 1]))


def test_rendering():
    assert str(Poly.from_ints(Z9, [1, 1, 1, 1])) == "1 + T + T^2 + T^3"
    assert str(Poly.from_ints(Z9, [0, 2, 0, 1])) == "2*T + T^3"
    assert str(Poly.zero(Z9)) == "0"
    assert render_element(GAUSS9, (1, 2)) == "(1+2*x)"
    assert render_element(GAUSS9, (0, 1)) == "(x)"
    assert render_element(GAUSS9, (5, 0)) == "5"
    p = Poly(GAUSS9, [GAUSS9.zero, GAUSS9.element([1, 1])])
    assert str(p) == "(1+x)*T"
    assert str(Series.from_ints(Z9, 4, [1, 1, 1, 1])) == "1 + T + T^2 + T^3"


def test_flattened_span_respects_x_multiples():
    # the integer row span of a flattened Omega row contains x * row
    ring = GAUSS9
    row = [ring.element([2, 5]), ring.element([0, 1])]
    rows = ring.omega_rows_to_int_rows([row])
    from nclfun.linalg import howell_form, in_span
    H = howell_form(rows, 4, ring.modulus)
    shifted = ring.flatten_vec([ring.mul(ring.gen(), a) for a in row])
    assert in_span(shifted, H, ring.modulus)

"""L-series of a sheaf on a covering instance, two independent ways.

The pointwise route multiplies inverted Euler factors over the listed
closed points.  The cohomological route takes an alternating product of
characteristic determinants of the gamma action.  The package never
merges the two code paths; their agreement on overlapping inputs is a
theorem, and the tests treat it as one.
"""

from collections import namedtuple

from .coeffring import (
    Poly,
    RationalFunction,
    Series,
    det_one_minus_scaled,
    series_invert,
)
from .covering import CohomologySpec
from .errors import InvariantViolation
from .linalg import split_components


def euler_product(cov, rho, prec):
    """Product over the points of det(I - T^deg rho(Frob))^{-1}, as a
    series at the requested precision.

    rho is any representation of the covering group (typically the
    sheaf, or the sheaf tensored with a twisting representation).
    """
    if rho.group != cov.group:
        raise InvariantViolation("representation lives on a different group")
    ring = rho.ring
    acc = Series.one(ring, prec)
    for pt in cov.points:
        mat = rho.of(pt.frobenius())
        factor = det_one_minus_scaled(ring, mat, pt.degree)
        acc = acc * series_invert(factor.truncate(prec))
    return acc


def det_one_minus_matrix(ring, Phi):
    """det(I - T*Phi) as a Poly, split along the connectivity pattern of
    Phi first so direct sums cost what their blocks cost."""
    n = len(Phi)
    if n == 0:
        return Poly.one(ring)
    comps = split_components(n, lambda i, j: not ring.is_zero(Phi[i][j]))
    out = Poly.one(ring)
    for comp in comps:
        sub = [[Phi[i][j] for j in comp] for i in comp]
        out = out * det_one_minus_scaled(ring, sub, 1)
    return out


def trace_formula_rational(coh):
    """The alternating determinant product as an exact rational function:
    odd degrees in the numerator, even degrees in the denominator."""
    ring = coh.ring
    num = Poly.one(ring)
    den = Poly.one(ring)
    for d, mat in zip(coh.degrees, coh.matrices):
        f = det_one_minus_matrix(ring, [list(r) for r in mat])
        if d % 2:
            num = num * f
        else:
            den = den * f
    return RationalFunction(num, den)


def trace_formula_L(coh, prec):
    """Series expansion of the cohomological L-function."""
    return trace_formula_rational(coh).expand(prec)


def cohomology_from_points(cov, rho):
    """A degree-0 cohomology presentation whose trace formula equals the
    Euler product of rho over the points.

    Each point of degree d contributes a cyclic block of size d*r: the
    identity on the subdiagonal and rho(Frob) in the upper corner, so
    that det(I - T*block) = det(I - T^d rho(Frob)).  Blocks are direct
    summed in point order.
    """
    if rho.group != cov.group:
        raise InvariantViolation("representation lives on a different group")
    ring = rho.ring
    r = rho.dim
    blocks = []
    for pt in cov.points:
        d = pt.degree
        A = rho.of(pt.frobenius())
        size = d * r
        B = [[ring.zero] * size for _ in range(size)]
        for u in range(1, d):
            for t in range(r):
                B[u * r + t][(u - 1) * r + t] = ring.one
        for i in range(r):
            for j in range(r):
                B[i][(d - 1) * r + j] = A[i][j]
        blocks.append(B)
    total = sum(len(B) for B in blocks)
    big = [[ring.zero] * total for _ in range(total)]
    off = 0
    for B in blocks:
        s = len(B)
        for i in range(s):
            for j in range(s):
                big[off + i][off + j] = B[i][j]
        off += s
    return CohomologySpec(ring, [0], [big])


SeriesComparison = namedtuple("SeriesComparison",
                              ["equal", "prec", "first_diff"])


def compare_series(s1, s2):
    """Coefficientwise comparison through the smaller precision.

    Returns (equal, prec compared, index of first mismatch or None).
    """
    if s1.ring != s2.ring:
        raise InvariantViolation("series over different rings")
    n = min(s1.prec, s2.prec)
    for k in range(n):
        if s1.coeffs[k] != s2.coeffs[k]:
            return SeriesComparison(False, n, k)
    return SeriesComparison(True, n, None)


def series_spread(s, c, prec):
    """The series s(T^c), truncated to prec.

    Valid whenever the input precision covers every index below prec
    that is divisible by c; raises otherwise rather than guessing."""
    if c < 1:
        raise InvariantViolation("spread step must be positive")
    ring = s.ring
    need = (prec - 1) // c + 1
    if s.prec < need:
        raise InvariantViolation(
            f"need {need} coefficients to spread to precision {prec}")
    out = [ring.zero] * prec
    for k in range(need):
        if c * k < prec:
            out[c * k] = s.coeffs[k]
    return Series(ring, prec, out)

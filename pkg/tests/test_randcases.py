import random

from nclfun.coeffring import CoeffRing, is_in_S, poly_det
from nclfun.covering import render_instance, Instance
from nclfun.groupalg import group_validate
from nclfun.lfun import compare_series, euler_product, trace_formula_L, \
    cohomology_from_points
from nclfun.randcases import (
    group_catalog,
    random_instance,
    random_phi,
    random_poly,
    random_rep,
    random_ring,
    random_s_poly_matrix,
    unit_roots,
)

Z9 = CoeffRing(3, 2)


# ---------------------------------------------------------------------------

def test_catalog_groups_all_validate():
    for ell in (3, 5):
        for entry in group_catalog(ell):
            gd = entry.build()
            group_validate(gd, ell)


def test_unit_roots_frozen_values():
    assert unit_roots(Z9, 3) == [1, 4, 7]
    assert unit_roots(Z9, 6) == [1, 2, 4, 5, 7, 8]
    assert unit_roots(Z9, 9, fix_u=4) == [1, 4, 7]
    assert unit_roots(CoeffRing(5, 1), 4) == [1, 2, 3, 4]
    # C7 under mult-2 admits only the trivial character value
    assert unit_roots(Z9, 7, fix_u=2) == [1]


def test_random_rep_always_passes_validation():
    """Rep runs its structural checks on construction, so surviving the
    constructor across the whole catalog is the assertion."""
    rng = random.Random(1724)
    for ell in (3, 5):
        for entry in group_catalog(ell):
            gd = entry.build()
            for _ in range(6):
                ring = random_ring(rng, ell=ell)
                rep = random_rep(rng, ring, gd, entry)
                assert 1 <= rep.dim <= 3


def test_random_instance_shapes_and_determinism():
    rng1 = random.Random(55)
    rng2 = random.Random(55)
    cov1, sh1 = random_instance(rng1, 3)
    cov2, sh2 = random_instance(rng2, 3)
    assert cov1.q == cov2.q
    assert cov1.group.table == cov2.group.table
    assert [(p.degree, p.h) for p in cov1.points] == \
        [(p.degree, p.h) for p in cov2.points]
    assert sh1.rep.h_images == sh2.rep.h_images
    assert sh1.rep.gamma == sh2.rep.gamma
    inst = Instance(cov1, sh1, {}, {}, None)
    text = render_instance(inst)
    assert text == render_instance(Instance(cov2, sh2, {}, {}, None))


def test_random_instance_euler_trace_smoke():
    rng = random.Random(77)
    for ell in (3, 5):
        cov, sheaf = random_instance(rng, ell, max_points=3, max_degree=3)
        left = euler_product(cov, sheaf.rep, 12)
        right = trace_formula_L(cohomology_from_points(cov, sheaf.rep), 12)
        assert compare_series(left, right).equal


def test_random_phi_and_poly_bounds():
    rng = random.Random(3)
    for _ in range(20):
        ring = random_ring(rng)
        Phi = random_phi(rng, ring, 4)
        assert 1 <= len(Phi) <= 4
        assert all(len(r) == len(Phi) for r in Phi)
        p = random_poly(rng, ring, 5)
        assert p.degree <= 5


def test_random_s_matrix_det_lands_in_s():
    rng = random.Random(88)
    for _ in range(10):
        ring = rng.choice((Z9, CoeffRing(5, 2)))
        mat = random_s_poly_matrix(rng, ring, 3, 2)
        assert is_in_S(poly_det(mat, ring))

import pytest

from nclfun.covering import (
    CohomologySpec,
    CoveringSpec,
    Point,
    instance_digest,
    parse_instance,
    push_covering_quotient,
    render_instance,
    subcover_points,
)
from nclfun.coeffring import CoeffRing
from nclfun.errors import (
    InvalidGroup,
    InvariantViolation,
    NotASubgroup,
    ParseError,
)
from nclfun.groupalg import GroupData, OpenSubgroup

GOOD = """\
# a small covering instance used by the parser tests
format = covering-instance-v1
q = 5
ell = 3
m = 2

group.order = 2
group.table = [[0, 1], [1, 0]]
group.action = [0, 1]
group.action_order = 1
points = [[1, 0, 1], [1, 1, 1], [2, 1, 2]]
sheaf.rank = 1
sheaf.h_images = [[[1]], [[1]]]
sheaf.gamma = [[1]]
rep.sign = ...
subgroup.whole.h_members = [0, 1]
subgroup.whole.c = 3
subgroup.gammaonly.h_members = [0]
subgroup.gammaonly.c = 1
"""

GOOD = GOOD.replace(
    "rep.sign = ...",
    "rep.sign.rank = 1\n"
    "rep.sign.h_images = [[[1]], [[-1]]]\n"
    "rep.sign.gamma = [[1]]",
)


def test_parse_good_instance():
    inst = parse_instance(GOOD)
    cov = inst.covering
    assert cov.q == 5 and cov.ell == 3 and cov.m == 2
    assert cov.group.order == 2
    assert [p.degree for p in cov.points] == [1, 1, 2]
    assert inst.sheaf.rank == 1
    assert set(inst.reps) == {"sign"}
    assert inst.reps["sign"].h_images[1] == (((8,),),)
    assert set(inst.subgroups) == {"whole", "gammaonly"}
    assert inst.subgroups["whole"].index == 3
    assert inst.subgroups["gammaonly"].index == 2
    assert inst.cohomology is None


def test_render_is_canonical_and_stable():
    inst = parse_instance(GOOD)
    text = render_instance(inst)
    assert "#" not in text
    assert text.index("subgroup.gammaonly") < text.index("subgroup.whole")
    inst2 = parse_instance(text)
    assert render_instance(inst2) == text
    assert instance_digest(inst) == instance_digest(inst2)
    assert len(instance_digest(inst)) == 64
    # negative residues were reduced
    assert "[[-1]]" not in text and "[[8]]" in text


def test_parse_admissibility_rejection():
    bad = GOOD.replace("[2, 1, 2]", "[2, 1, 1]")
    with pytest.raises(ParseError, match="admissibility"):
        parse_instance(bad)


def test_parse_error_catalogue():
    with pytest.raises(ParseError, match="missing required key 'q'"):
        parse_instance(GOOD.replace("q = 5\n", ""))
    with pytest.raises(ParseError, match="duplicate"):
        parse_instance(GOOD + "q = 5\n")
    with pytest.raises(ParseError, match="unknown key"):
        parse_instance(GOOD + "flavour = 3\n")
    with pytest.raises(ParseError, match="cannot parse"):
        parse_instance(GOOD.replace("q = 5", "q = five"))
    with pytest.raises(ParseError, match="expected 'key = value'"):
        parse_instance(GOOD + "just some words\n")
    with pytest.raises(ParseError, match="matrix"):
        parse_instance(GOOD.replace("sheaf.gamma = [[1]]",
                                    "sheaf.gamma = [[1, 0]]"))
    with pytest.raises(ParseError, match="format"):
        parse_instance("format = covering-instance-v2\n")
    with pytest.raises(ParseError, match="out of range"):
        parse_instance(GOOD.replace("[1, 0, 1]", "[1, 7, 1]"))


def test_semantic_errors_keep_their_types():
    with pytest.raises(InvalidGroup):
        parse_instance(GOOD.replace("group.table = [[0, 1], [1, 0]]",
                                    "group.table = [[0, 1], [1, 1]]"))
    with pytest.raises(NotASubgroup):
        parse_instance(GOOD.replace(
            "subgroup.gammaonly.h_members = [0]",
            "subgroup.gammaonly.h_members = [1]"))
    with pytest.raises(InvariantViolation):
        parse_instance(GOOD.replace("q = 5", "q = 6"))   # 3 divides 6


def test_point_invariants():
    with pytest.raises(InvariantViolation):
        Point(0, 0, 0)
    with pytest.raises(InvariantViolation):
        Point(2, 0, 1)
    p = Point(3, 1, 3)
    assert p.frobenius().a == 3


def test_extension_entries_roundtrip():
    text = GOOD + (
        "rep.tw.rank = 1\n"
        "rep.tw.minpoly = [1, 0, 1]\n"
        "rep.tw.h_images = [[[[1, 0]]], [[[1, 0]]]]\n"
        "rep.tw.gamma = [[[0, 1]]]\n"
    )
    inst = parse_instance(text)
    tw = inst.reps["tw"]
    assert tw.ring.deg == 2
    assert tw.gamma == (((0, 1),),)
    out = render_instance(inst)
    assert "rep.tw.minpoly = [1, 0, 1]" in out
    assert parse_instance(out).reps["tw"].gamma == tw.gamma


def _s3_group():
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (2, 1, 0), (0, 2, 1)]

    def comp(p, q):
        return tuple(p[q[i]] for i in range(3))

    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[comp(p, q)] for q in perms] for p in perms]
    action = [idx[comp(comp(perms[1], p), perms[2])] for p in perms]
    return GroupData(6, table, action, 3)


def test_subcover_through_gamma_index():
    # trivial H, index 2 in the gamma direction: degree-1 points become
    # inert, degree-2 points split
    gd = GroupData(1, [[0]], [0], 1)
    ring = CoeffRing(3, 2)
    cov = CoveringSpec(5, 3, 2, ring, gd, [Point(1, 0, 1), Point(2, 0, 2)])
    U = OpenSubgroup(gd, [0], 2)
    sub, loc = subcover_points(cov, U)
    assert sub.q == 25
    assert [p.degree for p in sub.points] == [1, 1, 1]
    assert loc == [0]


def test_subcover_s3_worked_case():
    gd = _s3_group()
    ring = CoeffRing(3, 2)
    U = OpenSubgroup(gd, [0, 1, 2], 1)
    # a transposition Frobenius merges the two cosets: one inert point
    cov = CoveringSpec(7, 3, 2, ring, gd, [Point(1, 3, 1)])
    sub, _ = subcover_points(cov, U)
    assert [(p.degree, p.h) for p in sub.points] == [(2, 1)]
    # a 3-cycle Frobenius fixes both cosets: two split points, with
    # local Frobenius parts (123) and the identity
    cov2 = CoveringSpec(7, 3, 2, ring, gd, [Point(1, 1, 1)])
    sub2, _ = subcover_points(cov2, U)
    assert [(p.degree, p.h) for p in sub2.points] == [(1, 1), (1, 0)]


def test_subcover_mass_formula():
    gd = _s3_group()
    ring = CoeffRing(3, 2)
    pts = [Point(1, 4, 1), Point(2, 1, 2), Point(3, 5, 3), Point(1, 0, 1)]
    cov = CoveringSpec(7, 3, 2, ring, gd, pts)
    for members, c in [([0, 1, 2], 1), ([0, 1, 2], 3), ([0], 1),
                       ([0, 3], 3), (list(range(6)), 3)]:
        U = OpenSubgroup(gd, members, c)
        sub, _ = subcover_points(cov, U)
        out = list(sub.points)
        for pt in pts:
            share = 0
            take = []
            while out and share < U.index * pt.degree:
                p = out.pop(0)
                take.append(p)
                share += p.degree * c
            assert share == U.index * pt.degree, (members, c, pt)
        assert not out


def test_push_covering_quotient():
    gd = _s3_group()
    ring = CoeffRing(3, 2)
    cov = CoveringSpec(7, 3, 2, ring, gd,
                       [Point(1, 1, 1), Point(2, 4, 2)])
    pushed, proj = push_covering_quotient(cov, [0, 1, 2])
    assert pushed.group.order == 2
    assert [(p.degree, p.h) for p in pushed.points] == [(1, 0), (2, 1)]


def test_cohomology_spec_validation():
    ring = CoeffRing(3, 2)
    CohomologySpec(ring, [0, 1], [[[(1,)]], [[(2,)]]])
    with pytest.raises(InvariantViolation):
        CohomologySpec(ring, [0, 0], [[[(1,)]], [[(2,)]]])
    with pytest.raises(InvariantViolation):
        CohomologySpec(ring, [1, 0], [[[(1,)]], [[(2,)]]])
    with pytest.raises(InvariantViolation):
        CohomologySpec(ring, [0], [[[(1,), (2,)]]])


def test_parse_cohomology_section():
    text = GOOD + (
        "cohomology.degrees = [0, 1]\n"
        "cohomology.matrices = [[[1]], [[0, 7], [1, 2]]]\n"
    )
    inst = parse_instance(text)
    assert inst.cohomology.degrees == (0, 1)
    assert inst.cohomology.matrix(1) == [[(0,), (7,)], [(1,), (2,)]]
    out = render_instance(inst)
    assert "cohomology.degrees = [0, 1]" in out
    assert parse_instance(out).cohomology.matrices == inst.cohomology.matrices

"""Covering instances: the finite data describing a tower chop over a
finite field, its closed points, the coefficient sheaf, and optional
named representations, open subgroups and cohomology presentations.

The on-disk grammar is line based: `key = value` with `#` comments and
blank lines permitted, values either a decimal integer or a nested
bracket list of integers.  Entries of matrices over an extension ring
are coefficient lists (ascending powers of x); over a degree-1 ring
they are bare integers.  The canonical rendering fixes section order,
sorts named sections, drops comments, and reduces every residue, so
equal instances render to byte-identical text.
"""

import ast
import hashlib
from dataclasses import dataclass
from math import gcd

from .coeffring import CoeffRing
from .errors import InvariantViolation, ParseError
from .groupalg import (
    GElement,
    GroupData,
    OpenSubgroup,
    Rep,
    group_validate,
    quotient_by_normal,
    restrict_rep,
    subgroup_group_data,
)

FORMAT_TAG = "covering-instance-v1"


@dataclass(frozen=True)
class Point:
    """Closed point of the base: degree, the H-part of its Frobenius,
    and the gamma exponent, which admissibility forces to equal the
    degree."""
    degree: int
    h: int
    gamma_exp: int

    def __post_init__(self):
        if self.degree < 1:
            raise InvariantViolation("point degree must be positive")
        if self.gamma_exp != self.degree:
            raise InvariantViolation(
                f"gamma exponent {self.gamma_exp} must match degree {self.degree}")

    def frobenius(self) -> GElement:
        return GElement(self.h, self.gamma_exp)


class CoveringSpec:
    """Base field size, coefficient ring, group chop, and closed points."""

    def __init__(self, q, ell, m, ring, group, points):
        self.q = int(q)
        self.ell = int(ell)
        self.m = int(m)
        self.ring = ring
        self.group = group
        self.points = tuple(points)
        if self.q < 2:
            raise InvariantViolation("base field size must be at least 2")
        if gcd(self.q, self.ell) != 1:
            raise InvariantViolation(
                "coefficient prime must be invertible in the base field")
        if (ring.ell, ring.m) != (self.ell, self.m):
            raise InvariantViolation("ring modulus disagrees with ell, m")
        group_validate(group, ell)
        for p in self.points:
            if not 0 <= p.h < group.order:
                raise InvariantViolation(f"point H-part {p.h} out of range")

    def __repr__(self):
        return (f"CoveringSpec(q={self.q}, ell={self.ell}, m={self.m}, "
                f"|H|={self.group.order}, points={len(self.points)})")


@dataclass
class SheafSpec:
    """The coefficient sheaf: a representation of the covering group."""
    rep: Rep

    @property
    def rank(self):
        return self.rep.dim


class CohomologySpec:
    """Finitely generated gamma-modules in a run of degrees: one square
    matrix per degree giving the gamma action on a free carrier."""

    def __init__(self, ring, degrees, matrices):
        self.ring = ring
        self.degrees = tuple(int(d) for d in degrees)
        if len(self.degrees) != len(set(self.degrees)):
            raise InvariantViolation("cohomology degrees repeat")
        if list(self.degrees) != sorted(self.degrees):
            raise InvariantViolation("cohomology degrees must be ascending")
        mats = []
        for mat in matrices:
            mat = [[ring.element(c) if not isinstance(c, tuple) else c
                    for c in row] for row in mat]
            if any(len(row) != len(mat) for row in mat):
                raise InvariantViolation("cohomology matrix is not square")
            mats.append(tuple(tuple(row) for row in mat))
        if len(mats) != len(self.degrees):
            raise InvariantViolation("one matrix per degree required")
        self.matrices = tuple(mats)

    def matrix(self, degree):
        return [list(row) for row in self.matrices[self.degrees.index(degree)]]


@dataclass
class Instance:
    """Everything a single instance file describes."""
    covering: CoveringSpec
    sheaf: SheafSpec
    reps: dict
    subgroups: dict
    cohomology: object            # CohomologySpec or None


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _parse_value(raw, lineno):
    raw = raw.strip()
    try:
        val = ast.literal_eval(raw)
    except (ValueError, SyntaxError):
        raise ParseError(f"line {lineno}: cannot parse value {raw!r}")
    def ok(v):
        if isinstance(v, int):
            return True
        if isinstance(v, list):
            return all(ok(x) for x in v)
        return False
    if not ok(val):
        raise ParseError(f"line {lineno}: only integers and bracket lists allowed")
    return val


def _collect(text):
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError(f"line {lineno}: expected 'key = value'")
        key, raw = stripped.split("=", 1)
        key = key.strip()
        if not key:
            raise ParseError(f"line {lineno}: empty key")
        if key in out:
            raise ParseError(f"line {lineno}: duplicate key {key!r}")
        if key == "format":
            out[key] = (lineno, raw.strip())
        else:
            out[key] = (lineno, _parse_value(raw, lineno))
    return out


def _take(fields, key, required=True, default=None):
    if key in fields:
        return fields.pop(key)[1]
    if required:
        raise ParseError(f"missing required key {key!r}")
    return default


def _entry_to_elem(ring, v, context):
    if ring.deg == 1:
        if not isinstance(v, int):
            raise ParseError(f"{context}: expected a bare integer entry")
        return ring.int_embed(v)
    if not isinstance(v, list) or not all(isinstance(c, int) for c in v):
        raise ParseError(f"{context}: expected a coefficient list entry")
    if len(v) > ring.deg:
        raise ParseError(f"{context}: entry has more than {ring.deg} coefficients")
    return ring.element(v + [0] * (ring.deg - len(v)))


def _matrix(ring, v, size, context):
    if (not isinstance(v, list) or len(v) != size
            or any(not isinstance(row, list) or len(row) != size for row in v)):
        raise ParseError(f"{context}: expected a {size}x{size} matrix")
    return [[_entry_to_elem(ring, c, context) for c in row] for row in v]


def _build_rep(fields, prefix, base_ring, ell, m, group):
    rank = _take(fields, f"{prefix}.rank")
    if not isinstance(rank, int) or rank < 1:
        raise ParseError(f"{prefix}.rank must be a positive integer")
    minpoly = _take(fields, f"{prefix}.minpoly", required=False)
    if minpoly is None:
        ring = base_ring
    else:
        ring = CoeffRing(ell, m, minpoly)
    h_raw = _take(fields, f"{prefix}.h_images")
    if not isinstance(h_raw, list) or len(h_raw) != group.order:
        raise ParseError(
            f"{prefix}.h_images: expected one matrix per group element")
    hs = [_matrix(ring, mat, rank, f"{prefix}.h_images[{i}]")
          for i, mat in enumerate(h_raw)]
    gam = _matrix(ring, _take(fields, f"{prefix}.gamma"), rank,
                  f"{prefix}.gamma")
    return Rep(ring, group, rank, hs, gam)


def parse_instance(text):
    """Parse and validate one instance file; returns an Instance.

    Grammar problems raise ParseError with a line reference where one
    exists; semantic violations raise their own exception types
    (InvalidGroup, NotASubgroup, InvariantViolation).
    """
    fields = _collect(text)
    fmt = _take(fields, "format")
    if fmt != FORMAT_TAG:
        raise ParseError(f"unsupported format {fmt!r}")
    q = _take(fields, "q")
    ell = _take(fields, "ell")
    m = _take(fields, "m")
    for name, v in (("q", q), ("ell", ell), ("m", m)):
        if not isinstance(v, int):
            raise ParseError(f"{name} must be an integer")
    minpoly = _take(fields, "omega.minpoly", required=False, default=[0, 1])
    ring = CoeffRing(ell, m, minpoly)

    order = _take(fields, "group.order")
    table = _take(fields, "group.table")
    action = _take(fields, "group.action")
    action_order = _take(fields, "group.action_order")
    group = GroupData(order, table, action, action_order)

    pts_raw = _take(fields, "points")
    if not isinstance(pts_raw, list):
        raise ParseError("points must be a list of [degree, h, gamma_exp]")
    points = []
    for i, trip in enumerate(pts_raw):
        if (not isinstance(trip, list) or len(trip) != 3
                or not all(isinstance(x, int) for x in trip)):
            raise ParseError(
                f"points[{i}]: expected a [degree, h, gamma_exp] triple")
        d, h, a = trip
        if d < 1:
            raise ParseError(f"points[{i}]: degree must be positive")
        if a != d:
            raise ParseError(
                f"points[{i}]: gamma exponent {a} violates admissibility; "
                f"it must equal the degree {d}")
        if not 0 <= h < group.order:
            raise ParseError(f"points[{i}]: H-part {h} out of range")
        points.append(Point(d, h, a))

    covering = CoveringSpec(q, ell, m, ring, group, points)
    sheaf = SheafSpec(_build_rep(fields, "sheaf", ring, ell, m, group))

    coh = None
    if "cohomology.degrees" in fields or "cohomology.matrices" in fields:
        degs = _take(fields, "cohomology.degrees")
        mats_raw = _take(fields, "cohomology.matrices")
        if not isinstance(degs, list) or not isinstance(mats_raw, list):
            raise ParseError("cohomology sections must be lists")
        if len(degs) != len(mats_raw):
            raise ParseError("cohomology.matrices must align with degrees")
        mats = []
        for d, mraw in zip(degs, mats_raw):
            if not isinstance(mraw, list) or any(not isinstance(r, list)
                                                 for r in mraw):
                raise ParseError(f"cohomology matrix for degree {d} malformed")
            size = len(mraw)
            mats.append(_matrix(ring, mraw, size, f"cohomology[{d}]"))
        coh = CohomologySpec(ring, degs, mats)

    rep_names = sorted({k.split(".", 2)[1] for k in fields
                        if k.startswith("rep.")})
    reps = {}
    for name in rep_names:
        if not name.isidentifier():
            raise ParseError(f"rep name {name!r} is not an identifier")
        reps[name] = _build_rep(fields, f"rep.{name}", ring, ell, m, group)

    sub_names = sorted({k.split(".", 2)[1] for k in fields
                        if k.startswith("subgroup.")})
    subgroups = {}
    for name in sub_names:
        if not name.isidentifier():
            raise ParseError(f"subgroup name {name!r} is not an identifier")
        members = _take(fields, f"subgroup.{name}.h_members")
        c = _take(fields, f"subgroup.{name}.c")
        if not isinstance(members, list) or not isinstance(c, int):
            raise ParseError(f"subgroup.{name}: h_members list and integer c required")
        subgroups[name] = OpenSubgroup(group, members, c)

    if fields:
        stray = sorted(fields)[0]
        raise ParseError(f"line {fields[stray][0]}: unknown key {stray!r}")

    return Instance(covering, sheaf, reps, subgroups, coh)


# ---------------------------------------------------------------------------
# canonical rendering
# ---------------------------------------------------------------------------

def _render_entry(ring, elem):
    if ring.deg == 1:
        return elem[0]
    return list(elem)


def _render_matrix(ring, mat):
    return [[_render_entry(ring, c) for c in row] for row in mat]


def _fmt(v):
    return repr(v)


def render_instance(inst):
    """Canonical text form; parse . render is idempotent."""
    cov = inst.covering
    ring = cov.ring
    lines = [
        f"format = {FORMAT_TAG}",
        f"q = {cov.q}",
        f"ell = {cov.ell}",
        f"m = {cov.m}",
        f"omega.minpoly = {_fmt(list(ring.minpoly))}",
        f"group.order = {cov.group.order}",
        f"group.table = {_fmt([list(r) for r in cov.group.table])}",
        f"group.action = {_fmt(list(cov.group.action))}",
        f"group.action_order = {cov.group.action_order}",
        f"points = {_fmt([[p.degree, p.h, p.gamma_exp] for p in cov.points])}",
    ]

    def rep_lines(prefix, rep):
        out = [f"{prefix}.rank = {rep.dim}"]
        if rep.ring != ring:
            out.append(f"{prefix}.minpoly = {_fmt(list(rep.ring.minpoly))}")
        out.append(f"{prefix}.h_images = "
                   f"{_fmt([_render_matrix(rep.ring, m) for m in rep.h_images])}")
        out.append(f"{prefix}.gamma = {_fmt(_render_matrix(rep.ring, rep.gamma))}")
        return out

    lines.extend(rep_lines("sheaf", inst.sheaf.rep))
    if inst.cohomology is not None:
        coh = inst.cohomology
        lines.append(f"cohomology.degrees = {_fmt(list(coh.degrees))}")
        lines.append(f"cohomology.matrices = "
                     f"{_fmt([_render_matrix(coh.ring, [list(r) for r in m]) for m in coh.matrices])}")
    for name in sorted(inst.reps):
        lines.extend(rep_lines(f"rep.{name}", inst.reps[name]))
    for name in sorted(inst.subgroups):
        U = inst.subgroups[name]
        lines.append(f"subgroup.{name}.h_members = {_fmt(list(U.h_members))}")
        lines.append(f"subgroup.{name}.c = {U.c}")
    return "\n".join(lines) + "\n"


def instance_digest(inst):
    return hashlib.sha256(render_instance(inst).encode()).hexdigest()


# ---------------------------------------------------------------------------
# passage to an open subgroup: points of the pulled-back covering
# ---------------------------------------------------------------------------

def subcover_points(cov: CoveringSpec, U: OpenSubgroup):
    """The covering seen from an open subgroup U.

    Right cosets of U are labelled (b, k) with b the gamma exponent mod
    c and k the smallest member of the H-coset; the Frobenius of each
    input point permutes the labels, each orbit of size s contributing
    one point of the subcovering, of local degree s*d/c, whose local
    Frobenius is the return map of the orbit read in U-coordinates.

    Returns the new CoveringSpec (base field enlarged to q^c, local
    group data) together with the local-to-ambient H index map.
    """
    gd = cov.group
    sub_gd, loc_to_amb = subgroup_group_data(U)
    amb_to_loc = {h: i for i, h in enumerate(loc_to_amb)}
    c = U.c
    members = set(U.h_members)

    def coset_min(h):
        return min(gd.table[u][h] for u in members)

    labels = []
    for b in range(c):
        seen = set()
        for h in range(gd.order):
            k = coset_min(h)
            if k not in seen:
                seen.add(k)
                labels.append((b, k))
    if len(labels) != U.index:
        raise InvariantViolation("coset census disagrees with the index")

    def step(lab, sigma):
        b, k = lab
        a2 = b + sigma.a
        b2 = a2 % c
        # H-part of the moved coset: alpha^{b2-a2}(k * alpha^{b}(h_sigma))
        moved = gd.table[k][gd.act(b, sigma.h)]
        moved = gd.act(b2 - a2, moved)
        return (b2, coset_min(moved))

    new_points = []
    for pt in cov.points:
        sigma = pt.frobenius()
        visited = set()
        orbits = []
        for start in labels:
            if start in visited:
                continue
            orbit = [start]
            visited.add(start)
            cur = step(start, sigma)
            while cur != start:
                orbit.append(cur)
                visited.add(cur)
                cur = step(cur, sigma)
            orbits.append(orbit)
        for orbit in orbits:
            base = min(orbit)
            s = len(orbit)
            total = s * pt.degree
            if total % c != 0:
                raise InvariantViolation(
                    "orbit length times degree escaped the gamma index")
            b0, k0 = base
            g0 = GElement(k0, b0)
            sig_pow = GElement(0, 0)
            for _ in range(s):
                sig_pow = gd.g_mul(sig_pow, sigma)
            u = gd.g_mul(gd.g_mul(g0, sig_pow), gd.g_inv(g0))
            if u.a != total or u.h not in amb_to_loc or u.a % c != 0:
                raise InvariantViolation("orbit return map left the subgroup")
            local_deg = total // c
            new_points.append(Point(local_deg, amb_to_loc[u.h], local_deg))

    sub_cov = CoveringSpec(cov.q ** c, cov.ell, cov.m, cov.ring,
                           sub_gd, new_points)
    return sub_cov, loc_to_amb


def restrict_sheaf(sheaf: SheafSpec, U: OpenSubgroup) -> SheafSpec:
    return SheafSpec(restrict_rep(sheaf.rep, U))


def push_covering_quotient(cov: CoveringSpec, members):
    """Covering data for the quotient group chop: same points, H-parts
    projected along the quotient map."""
    qd, proj = quotient_by_normal(cov.group, members)
    pts = [Point(p.degree, proj[p.h], p.gamma_exp) for p in cov.points]
    out = CoveringSpec(cov.q, cov.ell, cov.m, cov.ring, qd, pts)
    return out, proj

"""Hyperbolic plane primitives.

Internally everything lives in the upper half-plane: points are complex
numbers with positive imaginary part, geodesics are vertical lines or
half-circles centered on the real axis, and orientation-preserving
isometries are real Moebius transformations.  The model never leaks
through the public contracts: callers only see distances, angles and
areas.

Tolerances follow a three-level hierarchy: 1e-12 for representation
checks, 1e-9 for closed-form identities, 1e-6 for iterative solvers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (ConvergenceError, DegenerateInputError, DomainError,
                     InvariantViolation, PreconditionError)

REP_TOL = 1e-12
IDENT_TOL = 1e-9
SOLVER_TOL = 1e-6

TWO_THIRDS_PI = 2.0 * math.pi / 3.0


def validate_point(z: complex) -> complex:
    z = complex(z)
    if not (z.imag > REP_TOL) or not math.isfinite(z.real) or not math.isfinite(z.imag):
        raise DomainError(f"not a valid half-plane point: {z!r}")
    return z


def dist(p: complex, q: complex) -> float:
    """Hyperbolic distance between two points."""
    p = validate_point(p)
    q = validate_point(q)
    d2 = (p.real - q.real) ** 2 + (p.imag - q.imag) ** 2
    return math.acosh(1.0 + d2 / (2.0 * p.imag * q.imag))


def dist_array(p, q):
    """Vectorized distance; p, q broadcastable complex arrays."""
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    d2 = (p.real - q.real) ** 2 + (p.imag - q.imag) ** 2
    return np.arccosh(1.0 + d2 / (2.0 * p.imag * q.imag))


# ---------------------------------------------------------------------------
# hyperboloid coordinates: used for vectorized interpolation and the
# circumcenter linear solve; (X0, X1, X2) with X0^2 - X1^2 - X2^2 = 1.

def to_hyperboloid(z):
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    s = x * x + y * y
    return np.stack([(s + 1.0) / (2.0 * y), (s - 1.0) / (2.0 * y), -x / y], axis=-1)


def from_hyperboloid(X):
    X = np.asarray(X, dtype=float)
    denom = X[..., 0] - X[..., 1]
    y = 1.0 / denom
    x = -X[..., 2] * y
    return x + 1j * y


def interp(p, q, t):
    """Point(s) at parameter t in [0, 1] along the geodesic from p to q."""
    P = to_hyperboloid(p)
    Q = to_hyperboloid(q)
    inner = P[..., 0] * Q[..., 0] - P[..., 1] * Q[..., 1] - P[..., 2] * Q[..., 2]
    d = np.arccosh(np.clip(inner, 1.0, None))
    t = np.asarray(t, dtype=float)
    small = d < 1e-9
    sd = np.where(small, 1.0, np.sinh(d))
    w0 = np.where(small, 1.0 - t, np.sinh((1.0 - t) * d) / sd)
    w1 = np.where(small, t, np.sinh(t * d) / sd)
    X = w0[..., None] * P + w1[..., None] * Q
    return from_hyperboloid(X)


def midpoint(p: complex, q: complex) -> complex:
    return complex(interp(p, q, 0.5))


# ---------------------------------------------------------------------------
# isometries

class Isometry:
    """Orientation-preserving isometry as a real 2x2 matrix, det = +1.

    Acts on points by z -> (az + b) / (cz + d).  The matrix sign is
    normalized so the first nonzero entry is positive, making equality
    checks meaningful.
    """

    __slots__ = ("m",)

    def __init__(self, m):
        m = np.asarray(m, dtype=float)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if det <= 0:
            raise DomainError("isometry matrix must have positive determinant")
        m = m / math.sqrt(det)
        flat = m.ravel()
        for v in flat:
            if abs(v) > REP_TOL:
                if v < 0:
                    m = -m
                break
        self.m = m

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(np.eye(2))

    @classmethod
    def axis_translation(cls, d: float) -> "Isometry":
        """Translation by distance d along the imaginary axis (z -> e^d z)."""
        return cls(np.array([[math.exp(d / 2.0), 0.0], [0.0, math.exp(-d / 2.0)]]))

    @classmethod
    def rotation_about_i(cls, theta: float) -> "Isometry":
        c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
        return cls(np.array([[c, s], [-s, c]]))

    @classmethod
    def point_to_i(cls, p: complex) -> "Isometry":
        p = validate_point(p)
        return cls(np.array([[1.0, -p.real], [0.0, p.imag]]))

    @classmethod
    def rotation_about(cls, p: complex, theta: float) -> "Isometry":
        t = cls.point_to_i(p)
        return t.inverse() * cls.rotation_about_i(theta) * t

    def apply(self, z: complex) -> complex:
        a, b, c, d = self.m[0, 0], self.m[0, 1], self.m[1, 0], self.m[1, 1]
        return (a * z + b) / (c * z + d)

    def apply_array(self, z):
        z = np.asarray(z, dtype=complex)
        a, b, c, d = self.m[0, 0], self.m[0, 1], self.m[1, 0], self.m[1, 1]
        return (a * z + b) / (c * z + d)

    def apply_boundary(self, x: float) -> float:
        """Action on a boundary point (real number or math.inf)."""
        a, b, c, d = self.m[0, 0], self.m[0, 1], self.m[1, 0], self.m[1, 1]
        if math.isinf(x):
            return a / c if abs(c) > REP_TOL else math.inf
        denom = c * x + d
        if abs(denom) < REP_TOL:
            return math.inf
        return (a * x + b) / denom

    def direction_shift(self, z: complex) -> float:
        """Rotation applied to tangent directions at z (conformal factor arg)."""
        c, d = self.m[1, 0], self.m[1, 1]
        return -2.0 * cmath.phase(c * z + d)

    def inverse(self) -> "Isometry":
        a, b, c, d = self.m[0, 0], self.m[0, 1], self.m[1, 0], self.m[1, 1]
        return Isometry(np.array([[d, -b], [-c, a]]))

    def __mul__(self, other: "Isometry") -> "Isometry":
        return Isometry(self.m @ other.m)

    def almost_equal(self, other: "Isometry", tol: float = IDENT_TOL) -> bool:
        return bool(np.all(np.abs(self.m - other.m) < tol))

    def key(self, digits: int = 7) -> tuple:
        """Hashable rounded form, for deduplicating developed charts."""
        return tuple(np.round(self.m.ravel(), digits))

    def __repr__(self):
        return f"Isometry({self.m.tolist()})"


def pq_to_axis(p: complex, q: complex) -> Isometry:
    """Isometry sending p to i and q up the imaginary axis above i."""
    t = Isometry.point_to_i(p)
    w = t.apply(q)
    theta = direction(1j, w)
    return Isometry.rotation_about_i(math.pi / 2.0 - theta) * t


def two_point_map(p1: complex, q1: complex, p2: complex, q2: complex) -> Isometry:
    """The isometry carrying p1 -> p2 and q1 -> q2 (distances must agree)."""
    if abs(dist(p1, q1) - dist(p2, q2)) > IDENT_TOL:
        raise PreconditionError("two_point_map requires equal distances")
    return pq_to_axis(p2, q2).inverse() * pq_to_axis(p1, q1)


# ---------------------------------------------------------------------------
# directions and angles

def direction(p: complex, q: complex) -> float:
    """Euclidean angle of the initial tangent at p of the geodesic toward q.

    The half-plane metric is conformal, so hyperbolic angles between
    directions equal Euclidean angles between these tangents.
    """
    p = validate_point(p)
    q = validate_point(q)
    if abs(p - q) < REP_TOL:
        raise DegenerateInputError("direction undefined for coincident points")
    if abs(p.real - q.real) < REP_TOL * max(1.0, abs(p)):
        return math.pi / 2.0 if q.imag > p.imag else -math.pi / 2.0
    c = center_on_axis(p, q)
    radial = cmath.phase(p - c)
    # tangent perpendicular to the radius, oriented toward q
    cand = radial + math.pi / 2.0
    tangent = cmath.exp(1j * cand)
    if (tangent.real * (q.real - p.real)) < 0:
        cand = radial - math.pi / 2.0
    return math.atan2(math.sin(cand), math.cos(cand))


def center_on_axis(p: complex, q: complex) -> float:
    """Real center of the circle through p, q orthogonal to the real axis."""
    denom = 2.0 * (q.real - p.real)
    return (abs(q) ** 2 - abs(p) ** 2) / denom


def angle(vertex: complex, a: complex, b: complex) -> float:
    """Angle at `vertex` between the geodesic rays toward a and b, in [0, pi]."""
    ta = direction(vertex, a)
    tb = direction(vertex, b)
    d = abs(ta - tb) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def point_at(p: complex, theta: float, d: float) -> complex:
    """Geodesic flow: start at p with tangent angle theta, travel distance d."""
    p = validate_point(p)
    t = Isometry.point_to_i(p)
    shift = t.direction_shift(p)
    rot = Isometry.rotation_about_i(math.pi / 2.0 - (theta + shift))
    g = (t.inverse() * rot.inverse())
    return g.apply(1j * math.exp(d))


def angle_gap_ccw(a: float, b: float) -> float:
    """Counterclockwise angle from direction a to direction b, in [0, 2pi)."""
    return (b - a) % (2.0 * math.pi)


# ---------------------------------------------------------------------------
# geodesics as Euclidean objects (for intersections and tracing)

@dataclass(frozen=True)
class Geodesic:
    """Full geodesic: vertical line x = x0 (r = inf) or circle (c, r)."""

    vertical: bool
    x0: float = 0.0
    c: float = 0.0
    r: float = 0.0

    @classmethod
    def through(cls, p: complex, q: complex) -> "Geodesic":
        if abs(p - q) < REP_TOL:
            raise DegenerateInputError("geodesic through coincident points")
        if abs(p.real - q.real) < REP_TOL * max(1.0, abs(p), abs(q)):
            return cls(vertical=True, x0=0.5 * (p.real + q.real))
        c = center_on_axis(p, q)
        return cls(vertical=False, c=c, r=abs(p - c))

    @classmethod
    def from_direction(cls, p: complex, theta: float) -> "Geodesic":
        ct = math.cos(theta)
        if abs(ct) < 1e-15:
            return cls(vertical=True, x0=p.real)
        c = p.real + p.imag * math.tan(theta)
        return cls(vertical=False, c=c, r=abs(p - c))

    def side(self, z: complex) -> float:
        """Signed side indicator; 0 on the geodesic."""
        if self.vertical:
            return z.real - self.x0
        return abs(z - self.c) - self.r

    def contains(self, z: complex, tol: float = IDENT_TOL) -> bool:
        return abs(self.side(z)) < tol * max(1.0, abs(z))


def geodesic_intersections(g1: Geodesic, g2: Geodesic) -> list[complex]:
    """Intersection points of two full geodesics inside the half-plane."""
    if g1.vertical and g2.vertical:
        return []
    if g1.vertical or g2.vertical:
        v, circ = (g1, g2) if g1.vertical else (g2, g1)
        dx = v.x0 - circ.c
        h2 = circ.r ** 2 - dx ** 2
        if h2 <= REP_TOL ** 2:
            return []
        return [complex(v.x0, math.sqrt(h2))]
    d = abs(g2.c - g1.c)
    if d < REP_TOL:
        return []
    # circles centered on the real axis: intersection x is where the radical
    # line crosses
    x = (g1.c + g2.c) / 2.0 + (g1.r ** 2 - g2.r ** 2) / (2.0 * (g2.c - g1.c))
    h2 = g1.r ** 2 - (x - g1.c) ** 2
    if h2 <= REP_TOL ** 2:
        return []
    return [complex(x, math.sqrt(h2))]


def segment_contains(a: complex, b: complex, z: complex, tol: float = IDENT_TOL) -> bool:
    """Whether z lies on the geodesic segment [a, b] (z assumed on the line)."""
    g = Geodesic.through(a, b)
    if g.vertical:
        lo, hi = sorted((a.imag, b.imag))
        return lo - tol <= z.imag <= hi + tol
    ta = math.atan2(a.imag, a.real - g.c)
    tb = math.atan2(b.imag, b.real - g.c)
    tz = math.atan2(z.imag, z.real - g.c)
    lo, hi = sorted((ta, tb))
    eps = tol / max(g.r, tol)
    return lo - eps <= tz <= hi + eps


def segment_intersection(a1: complex, b1: complex, a2: complex, b2: complex,
                         tol: float = IDENT_TOL):
    """Transversal intersection point of segments [a1,b1], [a2,b2], or None.

    Intersections at shared endpoints are not reported.
    """
    g1 = Geodesic.through(a1, b1)
    g2 = Geodesic.through(a2, b2)
    for z in geodesic_intersections(g1, g2):
        if not (segment_contains(a1, b1, z, tol) and segment_contains(a2, b2, z, tol)):
            continue
        if min(abs(z - a1), abs(z - b1), abs(z - a2), abs(z - b2)) < tol:
            continue
        return z
    return None


# ---------------------------------------------------------------------------
# triangles

@dataclass(frozen=True)
class HTriangle:
    """Geodesic triangle given by its three vertices in ccw order."""

    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        for v in (self.a, self.b, self.c):
            validate_point(v)
        if min(dist(self.a, self.b), dist(self.b, self.c), dist(self.c, self.a)) < 1e-10:
            raise DegenerateInputError("triangle vertices not pairwise distinct")
        if self.area() <= 0:
            raise DegenerateInputError("degenerate (collinear) triangle")

    @property
    def vertices(self):
        return (self.a, self.b, self.c)

    def angles(self):
        a, b, c = self.vertices
        return (angle(a, b, c), angle(b, c, a), angle(c, a, b))

    def side_lengths(self):
        a, b, c = self.vertices
        return (dist(a, b), dist(b, c), dist(c, a))

    def perimeter(self) -> float:
        return sum(self.side_lengths())

    def area(self) -> float:
        a, b, c = self.vertices
        try:
            s = angle(a, b, c) + angle(b, c, a) + angle(c, a, b)
        except DegenerateInputError:
            return 0.0
        return math.pi - s


def triangle_area(t: HTriangle) -> float:
    """Angle-defect area; always in (0, pi) for a nondegenerate triangle."""
    area = t.area()
    if not (0.0 < area < math.pi):
        raise DegenerateInputError(f"triangle area {area} outside (0, pi)")
    return area


def side_lengths_from_angles(alpha: float, beta: float, gamma: float):
    """Side lengths (opposite each angle) of the triangle with given angles."""
    if min(alpha, beta, gamma) <= 0 or alpha + beta + gamma >= math.pi:
        raise DomainError("angles must be positive with sum < pi")

    def opp(x, y, z):
        return math.acosh((math.cos(x) + math.cos(y) * math.cos(z)) /
                          (math.sin(y) * math.sin(z)))

    return (opp(alpha, beta, gamma), opp(beta, gamma, alpha), opp(gamma, alpha, beta))


def triangle_with_angles(alpha: float, beta: float, gamma: float) -> HTriangle:
    """Embedded ccw triangle with the prescribed interior angles."""
    la, lb, lc = side_lengths_from_angles(alpha, beta, gamma)
    # lc = |AB| is opposite gamma, lb = |CA| opposite beta
    a = 1j
    b = 1j * math.exp(lc)
    c = point_at(a, math.pi / 2.0 + alpha, lb)
    return HTriangle(a, b, c)


def equilateral_triangle(alpha: float) -> HTriangle:
    return triangle_with_angles(alpha, alpha, alpha)


def point_in_triangle(t: HTriangle, p: complex, tol: float = IDENT_TOL) -> bool:
    """Whether p lies strictly inside t."""
    verts = t.vertices
    for k in range(3):
        g = Geodesic.through(verts[k], verts[(k + 1) % 3])
        inner = g.side(verts[(k + 2) % 3])
        s = g.side(p)
        if s * math.copysign(1.0, inner) <= tol:
            return False
    return True


def incenter(t: HTriangle) -> complex:
    """Intersection of the interior angle bisectors."""

    def bisector(v, x, y):
        tx = direction(v, x)
        gap = angle_gap_ccw(tx, direction(v, y))
        if gap > math.pi:
            gap -= 2.0 * math.pi
        return tx + gap / 2.0

    a, b, c = t.vertices
    g1 = Geodesic.from_direction(a, bisector(a, b, c))
    g2 = Geodesic.from_direction(b, bisector(b, c, a))
    for z in geodesic_intersections(g1, g2):
        if point_in_triangle(t, z, tol=0.0):
            return z
    # near-degenerate bisector data: any interior point serves as a seed
    m = midpoint(a, b)
    return complex(interp(m, c, 1.0 / 3.0))


def fermat_point(t: HTriangle, grad_tol: float = 1e-10, max_iter: int = 10000):
    """Point minimizing the sum of distances to the triangle's vertices.

    Returns (point, "interior") with all three star angles 2pi/3 when every
    interior angle is below 2pi/3, else (vertex, "at-vertex").  Uses damped
    tangent-sum descent from the incenter.
    """
    angs = t.angles()
    verts = t.vertices
    worst = max(range(3), key=lambda k: angs[k])
    if angs[worst] >= TWO_THIRDS_PI:
        return verts[worst], "at-vertex"

    def objective(p):
        return sum(dist(p, v) for v in verts)

    p = incenter(t)
    val = objective(p)
    for _ in range(max_iter):
        s = 0.0 + 0.0j
        h_bound = 0.0
        for v in verts:
            s += cmath.exp(1j * direction(p, v))
            h_bound += 1.0 / math.tanh(dist(p, v))
        gnorm = abs(s)
        if gnorm < grad_tol:
            return p, "interior"
        step = gnorm / h_bound
        theta = cmath.phase(s)
        while step > 1e-18:
            cand = point_at(p, theta, step)
            cval = objective(cand)
            if cval < val:
                p, val = cand, cval
                break
            step *= 0.5
        else:
            # objective flat at float resolution; accept current point
            if gnorm < 1e-8:
                return p, "interior"
            break
    raise ConvergenceError("fermat descent did not converge",
                           last_iterate=p, residual=gnorm)


def fermat_tangent_residual(p: complex, verts) -> float:
    """Norm of the summed unit tangents from p toward the three vertices."""
    s = sum(cmath.exp(1j * direction(p, v)) for v in verts)
    return abs(s)


def circumcenter(a: complex, b: complex, c: complex) -> complex:
    """Point equidistant from a, b, c (solved linearly on the hyperboloid)."""
    A, B, C = to_hyperboloid(a), to_hyperboloid(b), to_hyperboloid(c)
    J = np.diag([1.0, -1.0, -1.0])
    M = np.stack([(A - B) @ J, (A - C) @ J])
    ns = _nullspace_1d(M)
    norm2 = ns @ J @ ns
    if norm2 <= 0:
        raise DegenerateInputError("circumcenter does not exist (ultraparallel)")
    X = ns / math.sqrt(norm2)
    if X[0] < 0:
        X = -X
    return complex(from_hyperboloid(X))


def _nullspace_1d(M):
    _, _, vt = np.linalg.svd(M)
    return vt[-1]


def circumcenter_sector_acute(o: complex, a: complex, b: complex, c: complex,
                              tol: float = IDENT_TOL) -> bool:
    """Check the acuteness criterion for concyclic points.

    a, b, c must lie on a common circle about o (ccw order not assumed; the
    three ccw rotation gaps between the radii are measured as given: OA->OB,
    OB->OC, OC->OA).  Returns True iff all three gaps are <= pi; in that
    case the triangle abc is verified acute as a side check.
    """
    ra, rb, rc = dist(o, a), dist(o, b), dist(o, c)
    if max(ra, rb, rc) - min(ra, rb, rc) > tol:
        raise PreconditionError("points not concyclic about o")
    da, db, dc = direction(o, a), direction(o, b), direction(o, c)
    gaps = (angle_gap_ccw(da, db), angle_gap_ccw(db, dc), angle_gap_ccw(dc, da))
    ok = all(g <= math.pi + tol for g in gaps)
    if ok:
        t = HTriangle(a, b, c)
        if max(t.angles()) >= math.pi / 2.0 + IDENT_TOL:
            raise InvariantViolation("sector condition held but triangle not acute")
    return ok


def collar_half_width(l: float) -> float:
    """Half-width of the embedded collar around a geodesic of length l.

    Strictly decreasing in l; behaves like log(1/l) + 1.5 log 2 as l -> 0.
    """
    if l <= 0:
        raise DomainError("length must be positive")
    return math.asinh(1.0 / math.sinh(l / 2.0)) - 0.5 * math.log(2.0)


def f_bounds_check(x: float):
    """Sandwich log(1/x) <= f(x) <= upper, upper = 2 or 3 log(1/x).

    Returns (lower, value, upper) and asserts the sandwich.
    """
    if x <= 0:
        raise DomainError("x must be positive")
    lower = math.log(1.0 / x)
    value = collar_half_width(x)
    upper = 2.0 if x > 0.5 else 3.0 * math.log(1.0 / x)
    if not (lower <= value <= upper):
        raise DomainError(f"sandwich violated at x={x}: {lower} {value} {upper}")
    return lower, value, upper


def perimeter_vs_fermat_sum(t: HTriangle, p: complex):
    """Perimeter of t and twice the distance-sum from an interior point p.

    The perimeter is always strictly smaller (three triangle inequalities).
    """
    if not point_in_triangle(t, p):
        raise PreconditionError("p must lie strictly inside the triangle")
    perim = t.perimeter()
    doubled = 2.0 * sum(dist(p, v) for v in t.vertices)
    if not perim < doubled:
        raise InvariantViolation(f"perimeter {perim} not below doubled star sum {doubled}")
    return perim, doubled

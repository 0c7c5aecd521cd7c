"""Map germs (C^2,0)->(C^3,0) and their one-parameter unfoldings.

A germ is three polynomials in (x, y) vanishing at the origin; an
unfolding adds the parameter t and must keep the origin fixed for
every t.  Corank, the cross-cap count and quasi-homogeneity detection
live here; everything downstream (double points, Fitting ideals)
consumes these objects.
"""

from fractions import Fraction
from math import gcd

from .errors import DegenerateSampleError, ParseError
from .groebner import local_quotient_dim
from .poly import Polynomial, Ring, parse_polynomial

SOURCE_RING = Ring(("x", "y"))
TARGET_RING = Ring(("X", "Y", "Z"))
UNFOLDING_RING = Ring(("x", "y", "t"))


class MapGerm:
    """Polynomial map germ f = (f1, f2, f3) from (C^2,0) to (C^3,0)."""

    __slots__ = ("components", "ring")

    def __init__(self, components):
        comps = tuple(components)
        if len(comps) != 3:
            raise ValueError("a map germ needs exactly three components")
        ring = comps[0].ring
        if tuple(ring.vars) != SOURCE_RING.vars:
            comps = tuple(c.in_ring(SOURCE_RING) for c in comps)
            ring = SOURCE_RING
        if any(c.ring is not ring for c in comps):
            raise ValueError("components live in different rings")
        if any(c.constant_term for c in comps):
            raise ValueError("components must vanish at the origin")
        if all(c.is_zero for c in comps):
            raise ValueError("the zero map is not a germ onto (C^3,0)")
        self.components = comps
        self.ring = ring

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other):
        return (
            isinstance(other, MapGerm) and self.components == other.components
        )

    def __hash__(self):
        return hash(tuple(tuple(sorted(c.terms.items())) for c in self))

    def __repr__(self):
        body = ", ".join(str(c) for c in self.components)
        return f"({body})"

    def jacobian(self):
        """3x2 matrix of first partials, rows indexed by component."""
        return [
            [c.derivative("x"), c.derivative("y")] for c in self.components
        ]

    def pullback(self, g):
        """g(f1, f2, f3) for g a polynomial in the target variables."""
        images = dict(zip(g.ring.vars, self.components))
        return g.substitute(images, self.ring)


class Unfolding:
    """Origin-preserving family F = (f_t, t), components in (x, y, t)."""

    __slots__ = ("components", "ring")

    def __init__(self, components):
        comps = tuple(components)
        if len(comps) != 3:
            raise ValueError("an unfolding needs exactly three components")
        comps = tuple(c.in_ring(UNFOLDING_RING) for c in comps)
        zero = UNFOLDING_RING.zero()
        for c in comps:
            at0 = c.substitute({"x": zero, "y": zero})
            if not at0.is_zero:
                raise ValueError(
                    "unfolding is not origin preserving: "
                    f"F(0,0,t) = {at0} is nonzero"
                )
        self.components = comps
        self.ring = UNFOLDING_RING

    def __iter__(self):
        return iter(self.components)

    def __repr__(self):
        body = ", ".join(str(c) for c in self.components)
        return f"({body})"


class WeightData:
    """Weights and weighted degrees certifying quasi-homogeneity."""

    __slots__ = ("weights", "degrees")

    def __init__(self, weights, degrees):
        self.weights = tuple(weights)
        self.degrees = tuple(degrees)

    def __eq__(self, other):
        return (
            isinstance(other, WeightData)
            and self.weights == other.weights
            and self.degrees == other.degrees
        )

    def __repr__(self):
        return f"WeightData(weights={self.weights}, degrees={self.degrees})"


def corank(f: MapGerm) -> int:
    """2 minus the rank of the differential at the origin."""
    rows = []
    for c in f.components:
        rows.append((c.coeff((1, 0)), c.coeff((0, 1))))
    # rank of a 3x2 rational matrix by hand
    rank = 0
    nonzero = [r for r in rows if r != (Fraction(0), Fraction(0))]
    if nonzero:
        rank = 1
        r0 = nonzero[0]
        for r in nonzero[1:]:
            if r0[0] * r[1] - r0[1] * r[0] != 0:
                rank = 2
                break
    return 2 - rank


def ramification_ideal(f: MapGerm):
    """The three 2x2 minors of the Jacobian of f."""
    J = f.jacobian()
    out = []
    for i in range(3):
        for j in range(i + 1, 3):
            out.append(J[i][0] * J[j][1] - J[j][0] * J[i][1])
    return out


def crosscap_count(f: MapGerm, limits=None):
    """Number of cross-caps of a stabilization: colength of the
    ramification ideal.  INFINITE when the germ is not finitely
    determined (or has a non-isolated singular set)."""
    return local_quotient_dim(ramification_ideal(f), limits)


def detect_quasihomogeneous(f: MapGerm):
    """Smallest positive integer weights making every component
    weighted-homogeneous, or None.

    Solves the exact linear system on the exponents: for each component,
    all terms must share one weighted degree.  Zero components admit any
    weight, so the germ is rejected (the closed-form formulas that
    consume WeightData assume a finite germ).
    """
    if any(c.is_zero for c in f.components):
        return None
    # difference vectors of exponents within each component
    diffs = []
    for c in f.components:
        exps = sorted(c.terms)
        a0, b0 = exps[0]
        for a, b in exps[1:]:
            diffs.append((a - a0, b - b0))
    diffs = [d for d in diffs if d != (0, 0)]
    if not diffs:
        w = (1, 1)
    else:
        da, db = diffs[0]
        # solution ray of da*w1 + db*w2 = 0
        g = gcd(abs(da), abs(db))
        w = (abs(db) // g if g else 0, abs(da) // g if g else 0)
        if da * db > 0 or min(w) <= 0:
            return None
        for da2, db2 in diffs[1:]:
            if da2 * w[0] + db2 * w[1] != 0:
                return None
    degs = []
    for c in f.components:
        a, b = next(iter(sorted(c.terms)))
        degs.append(a * w[0] + b * w[1])
    return WeightData(w, degs)


def specialize(F: Unfolding, t0) -> MapGerm:
    """The member germ f_{t0}; degenerate members are rejected."""
    t0 = Fraction(t0)
    const = SOURCE_RING.constant(t0)
    comps = []
    for c in F.components:
        comps.append(c.substitute({"t": const}, SOURCE_RING))
    for orig, spec in zip(F.components, comps):
        if spec.is_zero and not orig.is_zero:
            raise DegenerateSampleError(
                f"component {orig} vanishes identically at t = {t0}"
            )
    return MapGerm(comps)


def _split_triple(text):
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError("germ must be written as (f1, f2, f3)")
    body = s[1:-1]
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced parentheses")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError("unbalanced parentheses")
    parts.append("".join(cur))
    if len(parts) != 3:
        raise ParseError(f"expected 3 components, got {len(parts)}")
    return parts


def parse_germ(text: str) -> MapGerm:
    parts = _split_triple(text)
    try:
        return MapGerm(parse_polynomial(p, SOURCE_RING) for p in parts)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def parse_unfolding(text: str) -> Unfolding:
    parts = _split_triple(text)
    try:
        return Unfolding(parse_polynomial(p, UNFOLDING_RING) for p in parts)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc

"""The numerical invariant vector of a finitely determined germ.

Three quantities are measured directly (Milnor number of the double
curve, cross-cap count, triple-point count), two more come from generic
plane sections, and the rest are derived through the classical
identities tying them together.  Every halving asserts integrality: a
fractional value always signals an upstream inconsistency, never a
roundable error.
"""

import random
from fractions import Fraction

from .doublepoint import dpc_equation
from .errors import (GenericityError, IntegrityError, NonPrincipalError,
                     NotFinitelyDetermined)
from .fitting import image_equation, presentation_for, triple_point_count
from .germs import MapGerm, SOURCE_RING, WeightData, corank, crosscap_count
from .groebner import INFINITE, milnor_number
from .poly import Ring

REPORT_FIELDS = (
    "mu_D", "C", "T", "mu_D2", "mu_D2_mod_S2", "mu_fD",
    "m0_image", "m1_image", "mu_Ytilde", "mu1", "m0_fD", "J",
)

_SECTION_RINGS = {
    "X": Ring(("Y", "Z")),
    "Y": Ring(("X", "Z")),
    "Z": Ring(("X", "Y")),
}


class PlaneSample:
    """One plane H = V(aX + bY + cZ) and the two section Milnor numbers."""

    __slots__ = ("coefficients", "mu_Ytilde", "mu_Y")

    def __init__(self, coefficients, mu_Ytilde, mu_Y):
        self.coefficients = tuple(coefficients)
        self.mu_Ytilde = mu_Ytilde
        self.mu_Y = mu_Y

    def __repr__(self):
        a, b, c = self.coefficients
        return (f"PlaneSample({a}*X + {b}*Y + {c}*Z, "
                f"mu_Ytilde={self.mu_Ytilde}, mu_Y={self.mu_Y})")


class InvariantReport:
    """Invariant vector, field names matching the serialized keys."""

    __slots__ = tuple(REPORT_FIELDS) + ("provenance", "plane_samples")

    def __init__(self, values, provenance, plane_samples=()):
        for name in REPORT_FIELDS:
            setattr(self, name, values[name])
        self.provenance = dict(provenance)
        self.plane_samples = tuple(plane_samples)

    def as_dict(self):
        return {name: getattr(self, name) for name in REPORT_FIELDS}

    def __repr__(self):
        body = ", ".join(f"{k}={v}" for k, v in self.as_dict().items())
        return f"InvariantReport({body})"


def _exact_int(value, what):
    q = Fraction(value)
    if q.denominator != 1:
        raise IntegrityError(f"{what} is not an integer: {q}")
    return int(q)


def _halve(value, what):
    q = Fraction(value, 2)
    if q.denominator != 1:
        raise IntegrityError(f"{what} = {value}/2 is not an integer")
    return int(q)


def _plane_triples(rng, count):
    out = []
    while len(out) < count:
        triple = tuple(Fraction(rng.randint(-9, 9)) for _ in range(3))
        if any(triple) and triple not in out:
            out.append(triple)
    return out


def _section_of(poly, a, b, c):
    """Restrict a target polynomial to the plane aX + bY + cZ = 0.

    The variable with the largest nonzero coefficient is solved for, and
    the result lands in the two remaining variables.
    """
    coeffs = dict(zip(("X", "Y", "Z"), (a, b, c)))
    pivot = max((v for v in coeffs if coeffs[v] != 0),
                key=lambda v: (abs(coeffs[v]), v))
    ring = _SECTION_RINGS[pivot]
    others = [v for v in ("X", "Y", "Z") if v != pivot]
    image = ring.zero()
    for v in others:
        image = image - ring.var(v) * ring.constant(coeffs[v] / coeffs[pivot])
    sub = {pivot: image}
    for v in others:
        sub[v] = ring.var(v)
    return poly.substitute(sub, ring)


def _stable_minimum(values):
    """The minimum when it is attained at least twice, else None."""
    finite = [v for v in values if v != INFINITE]
    if not finite:
        return None
    low = min(finite)
    if finite.count(low) < 2:
        return None
    return low


def generic_plane_sections(f: MapGerm, seed=0, n_samples=5, limits=None,
                           image=None):
    """Milnor numbers of generic plane sections, upstairs and downstairs.

    For each sampled plane H: mu(section upstairs) is the Milnor number
    of the pullback a*f1 + b*f2 + c*f3, and mu(section downstairs) that
    of the image equation restricted to H.  Semicontinuity makes the
    generic value the minimum over samples; it must be attained at least
    twice, with one resampling round before giving up.
    """
    if n_samples < 2:
        raise ValueError("need at least two plane samples")
    if image is None:
        image = image_equation(f, limits)
    rng = random.Random(seed)
    samples = []

    def measure(count):
        for a, b, c in _plane_triples(rng, count):
            pulled = (f.components[0] * SOURCE_RING.constant(a)
                      + f.components[1] * SOURCE_RING.constant(b)
                      + f.components[2] * SOURCE_RING.constant(c))
            mu_up = milnor_number(pulled, limits)
            mu_down = milnor_number(_section_of(image, a, b, c), limits)
            samples.append(PlaneSample((a, b, c), mu_up, mu_down))

    measure(n_samples)
    mu_up = _stable_minimum([s.mu_Ytilde for s in samples])
    mu_down = _stable_minimum([s.mu_Y for s in samples])
    if mu_up is None or mu_down is None:
        measure(n_samples)
        mu_up = _stable_minimum([s.mu_Ytilde for s in samples])
        mu_down = _stable_minimum([s.mu_Y for s in samples])
    if mu_up is None or mu_down is None:
        raise GenericityError(
            "genericity unresolved: no plane-section minimum was attained "
            f"twice within {len(samples)} samples")
    return int(mu_up), int(mu_down), samples


def invariant_report(f: MapGerm, seed=0, n_samples=5,
                     limits=None) -> InvariantReport:
    """Assemble the full invariant vector of a finitely determined germ.

    Directly measured: mu_D, C, T, m0_image, mu_Ytilde, mu1.  Derived by
    identity: the Milnor numbers of the double point space and its
    quotient, the image double curve data, and the tacnode count J.

    Finite determinacy is certified along the way: the double curve must
    be principal with finite Milnor number, and the cross-cap and triple
    point counts must be finite.
    """
    if corank(f) == 0:
        raise ValueError("immersive germ: the double point space is "
                         "empty and the invariant chain does not apply")
    try:
        curve = dpc_equation(f, limits)
    except NonPrincipalError as ex:
        raise NotFinitelyDetermined(str(ex)) from ex
    mu_D = milnor_number(curve.equation, limits)
    C = crosscap_count(f, limits)
    if mu_D == INFINITE:
        raise NotFinitelyDetermined("double point curve is not reduced")
    if C == INFINITE:
        raise NotFinitelyDetermined("cross-caps are not isolated")
    mu_D = int(mu_D)
    C = int(C)
    P = presentation_for(f, limits)
    image = image_equation(f, limits, presentation=P)
    T = triple_point_count(f, limits, presentation=P)
    if T == INFINITE:
        raise NotFinitelyDetermined("triple points are not isolated")
    T = int(T)
    mu_Ytilde, mu1, samples = generic_plane_sections(
        f, seed=seed, n_samples=n_samples, limits=limits, image=image)

    mu_D2 = mu_D - 6 * T
    mu_D2_mod_S2 = _halve(mu_D2 - C + 1, "mu_D2_mod_S2")
    mu_fD = _halve(mu_D - C + 2 * T + 1, "mu_fD")
    m0_image = image.order_at_origin()
    m1_image = mu_Ytilde + m0_image - 1
    m0_fD = _halve(mu1 - mu_Ytilde, "m0_fD")
    J = _halve(mu_D + 2 * m0_fD - 1 - C - 6 * T, "J")

    values = {
        "mu_D": mu_D, "C": C, "T": T, "mu_D2": mu_D2,
        "mu_D2_mod_S2": mu_D2_mod_S2, "mu_fD": mu_fD,
        "m0_image": m0_image, "m1_image": m1_image,
        "mu_Ytilde": mu_Ytilde, "mu1": mu1, "m0_fD": m0_fD, "J": J,
    }
    for name, v in values.items():
        if v < 0:
            raise IntegrityError(f"invariant {name} is negative: {v}")
    provenance = {
        "mu_D": "direct", "C": "direct", "T": "direct",
        "mu_D2": "identity", "mu_D2_mod_S2": "identity",
        "mu_fD": "identity", "m0_image": "direct",
        "m1_image": "identity", "mu_Ytilde": "direct", "mu1": "direct",
        "m0_fD": "identity", "J": "identity",
    }
    return InvariantReport(values, provenance, samples)


def mond_formulas(w: WeightData):
    """(C, T, mu_D) of a quasi-homogeneous germ in closed form."""
    w1, w2 = (Fraction(v) for v in w.weights)
    d1, d2, d3 = (Fraction(v) for v in w.degrees)
    if w1 <= 0 or w2 <= 0:
        raise ValueError("weights must be positive")
    eps = d1 + d2 + d3 - w1 - w2
    delta = d1 * d2 * d3 / (w1 * w2)
    C = ((d2 - w1) * (d3 - w2) + (d1 - w2) * (d3 - w2)
         + (d1 - w1) * (d2 - w1)) / (w1 * w2)
    T = (delta - eps) * (delta - 2 * eps) / (6 * w1 * w2) + C / 3
    mu_D = (delta - eps - w1) * (delta - eps - w2) / (w1 * w2)
    return (_exact_int(C, "closed-form C"),
            _exact_int(T, "closed-form T"),
            _exact_int(mu_D, "closed-form mu_D"))


def homogeneous_corank1_closed_forms(n, m):
    """Closed forms for homogeneous corank-1 germs (x, p_n, q_m).

    Returns (d, m0_fD, mu1, J, case_tag) where d is the number of smooth
    branches of the double curve.  With n, m both even the double curve
    keeps one fold branch ("fold" case); otherwise every branch is an
    identification branch ("identification" case).
    """
    if not (2 <= n <= m):
        raise ValueError("need 2 <= n <= m")
    d = n * m - n - m + 1
    if n % 2 == 0 and m % 2 == 0:
        case = "fold"
        m0_fD = _halve(n * m - m, "m0_fD closed form")
        mu1 = n * m - m
        J = _halve(m * m * n + m * n * n - m * m - 7 * m * n - n * n
                   + 6 * m + 7 * n - 6, "J closed form")
    else:
        case = "identification"
        m0_fD = _halve(d, "m0_fD closed form")
        mu1 = d
        J = _halve(m * m * n + m * n * n - m * m - 7 * m * n - n * n
                   + 6 * m + 6 * n - 5, "J closed form")
    return d, m0_fD, mu1, J, case


def coprime_family_closed_forms(n, m, k):
    """Closed forms for the family (x^n, y^m, (x+y)^k), pairwise coprime.

    Returns (d, m0_fD, mu1, mu_Ytilde_0, mu_Ytilde_t): branch count of
    the double curve, image double-curve multiplicity, generic section
    Milnor number of the image, and the section Milnor numbers upstairs
    at the central and deformed (x^n + t y^n) members.
    """
    from math import gcd

    if not (2 <= n < m < k):
        raise ValueError("need 2 <= n < m < k")
    if gcd(n, m) != 1 or gcd(n, k) != 1 or gcd(m, k) != 1:
        raise ValueError("n, m, k must be pairwise coprime")
    d = n * m * k - n - m - k + 2
    m0_fD = _halve(d * n, "m0_fD closed form")
    mu1 = (n - 1) * (m - 1) + d * n
    return d, m0_fD, mu1, (n - 1) * (m - 1), (n - 1) ** 2

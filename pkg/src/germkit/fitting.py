"""Presentation matrices of push-forwards and their Fitting ideals.

A finite map germ makes the source ring a finite module over the target
ring; a relation matrix for a monomial generating set presents that
module.  The Fitting ideals of the presentation cut out the image (F0),
the image of the double point curve (F1), and the triple points (F2),
independently of the matrix chosen.
"""

from .errors import IntegrityError, NotFinitelyDetermined, ResourceCapExceeded
from .germs import MapGerm, SOURCE_RING, TARGET_RING
from .groebner import (
    INFINITE,
    eliminate,
    groebner_basis,
    local_quotient_dim,
    local_staircase,
    module_kernel,
    reduce_poly,
)
from .poly import DEGREVLEX, PolyMatrix, Ring, equal_up_to_unit, gcd_many

_MINOR_CAP = 200_000


class PresentationMatrix:
    """Relation matrix (rows) for a module over the target ring.

    Rows are relations, columns follow ``generator_labels`` (monomials
    of the source ring).  ``images`` are the target-variable images in
    the source ring; ``source_ideal`` generators are identified with
    zero in the module.
    """

    __slots__ = ("matrix", "generator_labels", "images", "source_ideal")

    def __init__(self, matrix, generator_labels, images, source_ideal=()):
        self.matrix = matrix
        self.generator_labels = tuple(generator_labels)
        self.images = tuple(images)
        self.source_ideal = tuple(source_ideal)
        if matrix.ncols != len(self.generator_labels):
            raise ValueError("one column per generator required")

    @property
    def target_ring(self):
        return self.matrix.ring

    @property
    def source_ring(self):
        return self.generator_labels[0].ring

    def defining_relations_hold(self, limits=None):
        """Each row, pulled back and paired with the generators, is 0.

        With a nonempty source ideal the pullbacks only need to lie in
        it; membership is checked against a degrevlex basis.
        """
        src = self.source_ring
        sub = {v: img for v, img in zip(self.target_ring.vars, self.images)}
        gb = None
        if self.source_ideal:
            gb = groebner_basis(list(self.source_ideal), DEGREVLEX, limits)
        for row in self.matrix.rows:
            acc = src.zero()
            for entry, gen in zip(row, self.generator_labels):
                if entry.is_zero:
                    continue
                acc = acc + entry.substitute(sub, src) * gen
            if acc.is_zero:
                continue
            if gb is None or not reduce_poly(acc, gb, DEGREVLEX).is_zero:
                return False
        return True


class FittingIdeal:
    __slots__ = ("k", "generators")

    def __init__(self, k, generators):
        self.k = k
        self.generators = tuple(generators)

    def __repr__(self):
        return f"FittingIdeal(k={self.k}, {len(self.generators)} generators)"


def _pure_power(p, var_index):
    """Exponent a when p is exactly the monomial var^a (coeff 1)."""
    if len(p.terms) != 1:
        return None
    (e, c), = p.terms.items()
    if c != 1:
        return None
    if any(x and i != var_index for i, x in enumerate(e)):
        return None
    a = e[var_index]
    return a if a > 0 else None


def presentation_monomial(f: MapGerm) -> PresentationMatrix:
    """Z*Id - M(q) for germs of the shape (x^a, y^b, q).

    The source ring is free over the first two components with monomial
    basis {x^i y^j : i < a, j < b}; M(q) is multiplication by the third
    component in that basis, with x^a rewritten as X and y^b as Y.
    Covers (x, y^n, q) with a = 1 and the graph case a = b = 1.
    """
    a = _pure_power(f.components[0], 0)
    b = _pure_power(f.components[1], 1)
    if a is None or b is None:
        raise ValueError(
            "shape mismatch: components must be (x^a, y^b, q), got "
            f"({f.components[0]}, {f.components[1]}, ...)")
    q = f.components[2]
    basis = sorted(((i, j) for i in range(a) for j in range(b)),
                   key=lambda e: (sum(e), e))
    index = {e: pos for pos, e in enumerate(basis)}
    g = len(basis)
    zero = TARGET_RING.zero()
    cols = [[zero] * g for _ in range(g)]
    for jpos, (bi, bj) in enumerate(basis):
        prod = q * SOURCE_RING.monomial((bi, bj))
        for (u, v), c in prod.terms.items():
            qa, ra = divmod(u, a)
            qb, rb = divmod(v, b)
            rpos = index[(ra, rb)]
            cols[jpos][rpos] = cols[jpos][rpos] + TARGET_RING.monomial(
                (qa, qb, 0), c)
    zvar = TARGET_RING.var("Z")
    # relation j: Z*e_j - sum_r M[r][j] e_r, one row per basis element
    rows = [[(zvar if r == j else zero) - cols[j][r] for r in range(g)]
            for j in range(g)]
    labels = [SOURCE_RING.monomial(e) for e in basis]
    return PresentationMatrix(PolyMatrix(TARGET_RING, rows), labels,
                              f.components)


def presentation_general(source_ideal, images, target_ring,
                         limits=None) -> PresentationMatrix:
    """Present the pushforward of source-ring/ideal along a finite map.

    Generators are the staircase monomials of the source algebra modulo
    the ideal plus the pulled-back target maximal ideal; relations come
    from the kernel of the induced map out of a free target module.
    """
    source_ideal = [p for p in source_ideal if not p.is_zero]
    gens = source_ideal + list(images)
    dim = local_quotient_dim(gens, limits)
    if dim == INFINITE:
        raise NotFinitelyDetermined("map is not finite over the target")
    stairs = local_staircase(gens, limits)
    src = images[0].ring
    labels = [src.monomial(e) for e in stairs]
    rows = module_kernel(labels, list(images), target_ring, limits,
                         source_ideal=source_ideal)
    rows = _prune_rows(rows, len(labels))
    return PresentationMatrix(PolyMatrix(target_ring, rows), labels,
                              images, source_ideal)


def _prune_rows(rows, g):
    """Deterministic ordering with zero rows and duplicates dropped.

    Redundant relations are harmless (Fitting ideals do not see them),
    so no deeper minimality pass is attempted here.
    """
    def lead(row):
        for j in range(g):
            if not row[j].is_zero:
                return j
        return g

    rows = sorted(rows, key=lambda r: (lead(r), sum(len(p.terms) for p in r),
                                       tuple(str(p) for p in r)))
    kept = []
    seen = set()
    for row in rows:
        if all(p.is_zero for p in row):
            continue
        sig = tuple(tuple(sorted(p.terms.items())) for p in row)
        if sig in seen:
            continue
        seen.add(sig)
        kept.append(row)
    return kept


def fitting_ideal(P: PresentationMatrix, k, limits=None) -> FittingIdeal:
    """Ideal of the (g-k) x (g-k) minors, g the generator count.

    k at or above the generator count yields the unit ideal (empty
    minors have determinant 1).
    """
    if k < 0:
        raise ValueError("negative Fitting index")
    g = len(P.generator_labels)
    size = g - k
    if size <= 0:
        return FittingIdeal(k, (P.target_ring.one(),))
    if size > P.matrix.nrows:
        return FittingIdeal(k, (P.target_ring.zero(),))
    out = []
    seen = set()
    try:
        for _, m in P.matrix.minors(size, cap=_MINOR_CAP):
            if m.is_zero:
                continue
            m = m.normalized()
            key = tuple(sorted(m.terms.items()))
            if key not in seen:
                seen.add(key)
                out.append(m)
    except ValueError as exc:
        raise ResourceCapExceeded(str(exc)) from exc
    if not out:
        return FittingIdeal(k, (P.target_ring.zero(),))
    if len(out) <= 300:
        out = _interreduce(out, limits)
    else:
        # huge minor sets gain nothing from reduction; keep them raw
        out.sort(key=lambda p: (p.total_degree(), len(p.terms), str(p)))
    return FittingIdeal(k, out)


def _interreduce(polys, limits=None):
    """Keep only generators not reducible to zero by the ones kept.

    Each discarded polynomial reduces to zero against the kept list, so
    the ideal is unchanged.  Survivors keep their original form: minors
    are short products, which downstream local computations handle far
    better than their dense degrevlex remainders.
    """
    polys = sorted(polys, key=lambda p: (p.total_degree(), len(p.terms),
                                         str(p)))
    kept = []
    for p in polys:
        if kept and reduce_poly(p, kept, DEGREVLEX, limits).is_zero:
            continue
        kept.append(p.normalized())
    return kept


def _plain_variable_of(p):
    """Name of the source variable p equals, or None."""
    if len(p.terms) != 1:
        return None
    (expo, coeff), = p.terms.items()
    if coeff != 1 or sum(expo) != 1:
        return None
    return p.ring.vars[expo.index(1)]


def _graph_eliminate(f, limits=None):
    """Eliminate the source variables from the graph ideal of f.

    Components that are plain coordinates get substituted away first, so
    a germ of the shape (x, p, q) only ever eliminates y.  That keeps
    the block-order basis small for the corank one normal forms.
    """
    pairs = list(zip(TARGET_RING.vars, f.components))
    solved = {}
    for v, c in pairs:
        s = _plain_variable_of(c)
        if s is not None and s not in solved:
            solved[s] = v
    keep = [s for s in SOURCE_RING.vars if s not in solved]
    big = Ring(tuple(keep) + tuple(TARGET_RING.vars))
    sub = {s: big.var(solved.get(s, s)) for s in SOURCE_RING.vars}
    gens = []
    for v, c in pairs:
        s = _plain_variable_of(c)
        if s is not None and solved.get(s) == v:
            continue
        gens.append(big.var(v) - c.substitute(sub, big))
    out = eliminate(gens, keep, limits) if keep else gens
    return [p.in_ring(TARGET_RING) for p in out]


_PLANE_RING = Ring(("u", "v"))


def double_curve_presentation(f: MapGerm, limits=None) -> PresentationMatrix:
    """Present the double-point coordinate ring over the source plane.

    The double points upstairs live in four variables; pushing their
    coordinate ring forward along the first projection presents it over
    a plane ring, whose F0 recovers the plane double-curve equation with
    its full multiplicity structure.
    """
    from .doublepoint import PAIR_RING, double_point_ideal

    ideal = double_point_ideal(f)
    images = [PAIR_RING.var("x"), PAIR_RING.var("y")]
    return presentation_general(list(ideal.generators), images,
                                _PLANE_RING, limits)


def double_curve_equation_via_fitting(f: MapGerm, limits=None):
    """F0 generator of the pushed-forward double-curve module, in (x, y).

    The module is maximal Cohen-Macaulay of codimension one, so F0 is
    principal; with several computed minors the generator is their gcd.
    """
    from .poly import Polynomial

    P = double_curve_presentation(f, limits)
    F0 = fitting_ideal(P, 0, limits)
    gens = [p for p in F0.generators if not p.is_zero]
    if not gens:
        raise NotFinitelyDetermined(
            "zero Fitting ideal: double points are not a curve")
    g = gcd_many(gens) if len(gens) > 1 else gens[0]
    return Polynomial(SOURCE_RING, dict(g.terms)).normalized()


def _squarefree(p):
    """Squarefree part over Q.

    The gradient-gcd route suffers from coefficient swell on trivariate
    determinants, so the extraction is delegated to sympy's sqf_part and
    converted back exactly.
    """
    import sympy
    from fractions import Fraction

    from .poly import Polynomial

    if p.is_zero or p.is_constant():
        return p.normalized()
    syms = sympy.symbols(list(p.ring.vars))
    expr_dict = {e: sympy.Rational(c.numerator, c.denominator)
                 for e, c in p.terms.items()}
    sq = sympy.Poly.from_dict(expr_dict, *syms, domain="QQ").sqf_part()
    terms = {}
    for e, c in sq.as_dict().items():
        cc = Fraction(int(sympy.numer(c)), int(sympy.denom(c)))
        terms[tuple(int(v) for v in e)] = cc
    return Polynomial(p.ring, terms).normalized()


def presentation_for(f: MapGerm, limits=None) -> PresentationMatrix:
    """Monomial fast path when the shape allows, else the general one."""
    try:
        return presentation_monomial(f)
    except ValueError:
        return presentation_general([], list(f.components), TARGET_RING,
                                    limits)


def image_equation(f: MapGerm, limits=None, presentation=None):
    """Reduced equation of the image surface, computed two ways.

    The primary route takes the order-0 Fitting ideal of a presentation
    (a determinant in the square case); the cross-check eliminates the
    source variables from the graph ideal.  When both routes finish
    within the caps their squarefree parts must agree up to unit;
    disagreement raises IntegrityError.  A route that hits a cap is
    treated as unavailable, and only if both are unavailable does the
    cap propagate.  A precomputed presentation may be passed to avoid
    recomputing it.
    """
    det_val = None
    det_err = None
    try:
        P = presentation if presentation is not None else \
            presentation_for(f, limits)
        F0 = fitting_ideal(P, 0, limits)
        gens = [p for p in F0.generators if not p.is_zero]
        if not gens:
            raise NotFinitelyDetermined(
                "zero Fitting ideal: image is not a hypersurface")
        det_val = gcd_many(gens).normalized() if len(gens) > 1 else gens[0]
    except ResourceCapExceeded as exc:
        det_err = exc
    elim_val = None
    elim_err = None
    try:
        gens = _graph_eliminate(f, limits)
        gens = [p for p in gens if not p.is_zero]
        if not gens:
            raise NotFinitelyDetermined(
                "graph elimination is zero: image is not a hypersurface")
        elim_val = gcd_many(gens).normalized() if len(gens) > 1 else gens[0]
    except ResourceCapExceeded as exc:
        elim_err = exc
    if det_val is None and elim_val is None:
        raise det_err or elim_err
    if det_val is not None and elim_val is not None:
        agree = equal_up_to_unit(det_val, elim_val) or equal_up_to_unit(
            _squarefree(det_val), _squarefree(elim_val))
        if not agree:
            raise IntegrityError(
                "image equation routes disagree: determinant gives "
                f"{det_val}, elimination gives {elim_val}")
    return (det_val if det_val is not None else elim_val).normalized()


def triple_point_count(f: MapGerm, limits=None, presentation=None):
    """Colength of the second Fitting ideal at the target origin."""
    P = presentation if presentation is not None else \
        presentation_for(f, limits)
    F2 = fitting_ideal(P, 2, limits)
    gens = [p for p in F2.generators if not p.is_zero]
    if not gens:
        return INFINITE
    return local_quotient_dim(gens, limits)

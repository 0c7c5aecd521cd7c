"""Sparse multivariate polynomials over Q with exact arithmetic.

A polynomial is a dict from exponent tuples to nonzero Fractions, tied to
a fixed Ring (an ordered tuple of variable names).  Everything here is
exact: no floats anywhere, divisions either succeed exactly or raise.

The module also carries the shared text grammar (integers, rationals
``p/q``, variables, ``+ - * ^``, parentheses, ``*`` optional before
variables and parentheses), term orders, gcd, and determinants of
polynomial matrices.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd as int_gcd

from .errors import ParseError

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Ring:
    """An ordered list of variable names, fixing exponent-tuple layout."""

    __slots__ = ("vars", "index")

    def __init__(self, variables):
        vs = tuple(variables)
        if not vs:
            raise ValueError("a ring needs at least one variable")
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate variable in %r" % (vs,))
        self.vars = vs
        self.index = {v: i for i, v in enumerate(vs)}

    def __eq__(self, other):
        return isinstance(other, Ring) and self.vars == other.vars

    def __hash__(self):
        return hash(self.vars)

    def __repr__(self):
        return "QQ[%s]" % ", ".join(self.vars)

    def __contains__(self, name):
        return name in self.index

    @property
    def nvars(self):
        return len(self.vars)

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.constant(1)

    def constant(self, c):
        c = Fraction(c)
        if c == 0:
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name):
        if name not in self.index:
            raise ValueError("variable %r not in %r" % (name, self))
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return Polynomial(self, {tuple(e): _ONE})

    def gens(self):
        return tuple(self.var(v) for v in self.vars)

    def monomial(self, exps, coeff=1):
        exps = tuple(exps)
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            raise ValueError("bad exponent tuple %r" % (exps,))
        c = Fraction(coeff)
        return Polynomial(self, {exps: c} if c else {})

    def drop(self, names):
        """The subring without the given variables."""
        gone = set(names)
        keep = tuple(v for v in self.vars if v not in gone)
        return Ring(keep)

    def parse(self, text):
        return parse_polynomial(text, self)


#############################################################################
# term orders
#############################################################################


class TermOrder:
    """Base class; subclasses provide a sort key over exponent tuples.

    Keys compare so that larger key means larger monomial.  ``is_global``
    distinguishes well-orders (Buchberger) from local orders (Mora).
    """

    name = "?"
    is_global = True

    def key(self, ring):
        raise NotImplementedError

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return type(self) is type(other) and self._params() == other._params()

    def __hash__(self):
        return hash((type(self).__name__, self._params()))

    def _params(self):
        return ()


class DegRevLex(TermOrder):
    name = "degrevlex"

    def key(self, ring):
        def k(e):
            return (sum(e), tuple(-x for x in reversed(e)))

        return k


class Lex(TermOrder):
    """Lexicographic with priority by ring variable order."""

    name = "lex"

    def key(self, ring):
        return tuple


class NegDegRevLex(TermOrder):
    """Local order: smaller total degree wins, degrevlex tie-break."""

    name = "negdegrevlex"
    is_global = False

    def key(self, ring):
        def k(e):
            return (-sum(e), tuple(-x for x in reversed(e)))

        return k


class BlockOrder(TermOrder):
    """Eliminate the front block: degrevlex on it, then degrevlex behind."""

    name = "block"

    def __init__(self, front_vars):
        self.front = tuple(front_vars)

    def _params(self):
        return self.front

    def __repr__(self):
        return "block(%s)" % ",".join(self.front)

    def key(self, ring):
        for v in self.front:
            if v not in ring:
                raise ValueError("front variable %r not in %r" % (v, ring))
        fi = [ring.index[v] for v in self.front]
        ri = [i for i in range(ring.nvars) if i not in set(fi)]
        fr = list(reversed(fi))
        rr = list(reversed(ri))

        def k(e):
            return (
                sum(e[i] for i in fi),
                tuple(-e[i] for i in fr),
                sum(e[i] for i in ri),
                tuple(-e[i] for i in rr),
            )

        return k


DEGREVLEX = DegRevLex()
LEX = Lex()
NEGDEGREVLEX = NegDegRevLex()


#############################################################################
# polynomials
#############################################################################


class Polynomial:
    __slots__ = ("ring", "terms", "_degree")

    def __init__(self, ring, terms):
        self.ring = ring
        clean = {}
        for e, c in terms.items():
            if not isinstance(c, Fraction):
                c = Fraction(c)
            if c:
                clean[e] = c
        self.terms = clean
        self._degree = None

    @classmethod
    def _raw(cls, ring, terms):
        # internal constructor: terms must already be zero-free Fractions
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._degree = None
        return p

    # -- predicates and basic data --------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def total_degree(self):
        """Max total degree, or -1 for the zero polynomial."""
        if self._degree is None:
            self._degree = max((sum(e) for e in self.terms), default=-1)
        return self._degree

    def order_at_origin(self):
        """Smallest total degree of a term (the m-adic order)."""
        if not self.terms:
            raise ValueError("the zero polynomial has no order at the origin")
        return min(sum(e) for e in self.terms)

    def coeff(self, exps):
        return self.terms.get(tuple(exps), _ZERO)

    @property
    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, _ZERO)

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def is_homogeneous(self):
        degrees = {sum(e) for e in self.terms}
        return len(degrees) <= 1

    def weighted_degrees(self, weights):
        ws = tuple(weights)
        return {sum(w * x for w, x in zip(ws, e)) for e in self.terms}

    def is_weighted_homogeneous(self, weights):
        return len(self.weighted_degrees(weights)) <= 1

    def degree_in(self, name):
        i = self.ring.index[name]
        return max((e[i] for e in self.terms), default=-1)

    def variables_present(self):
        seen = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    seen.add(self.ring.vars[i])
        return seen

    def leading(self, order=DEGREVLEX):
        """Leading ``(exponents, coefficient)`` under the given order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        k = order.key(self.ring)
        e = max(self.terms, key=k)
        return e, self.terms[e]

    def terms_sorted(self, order=DEGREVLEX, reverse=True):
        k = order.key(self.ring)
        return sorted(self.terms.items(), key=lambda t: k(t[0]), reverse=reverse)

    # -- arithmetic ------------------------------------------------------

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise ValueError("mixed rings: %r vs %r" % (self.ring, other.ring))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        self._check_ring(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, _ZERO) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return self.ring.zero()
            return Polynomial._raw(
                self.ring, {e: c * v for e, v in self.terms.items()}
            )
        self._check_ring(other)
        if not self.terms or not other.terms:
            return self.ring.zero()
        out = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = get(e, _ZERO) + c1 * c2
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        c = Fraction(scalar)
        if not c:
            raise ZeroDivisionError("division of polynomial by zero scalar")
        return self * (1 / c)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- calculus and maps ----------------------------------------------

    def derivative(self, name):
        i = self.ring.index[name]
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = c * e[i]
        return Polynomial._raw(self.ring, out)

    def substitute(self, images, ring=None):
        """Map variables to polynomials or constants.

        ``images`` maps variable names to Polynomial / Fraction / int.
        The target ring is taken from the first polynomial image unless
        given explicitly; unmapped variables must exist there by name.
        """
        target = ring
        for v in images.values():
            if isinstance(v, Polynomial):
                if target is None:
                    target = v.ring
                elif v.ring != target:
                    raise ValueError("substitution images in mixed rings")
        if target is None:
            target = self.ring
        fixed = {}
        for name, img in images.items():
            if name not in self.ring:
                raise ValueError("substituted variable %r not in %r" % (name, self.ring))
            if not isinstance(img, Polynomial):
                img = target.constant(img)
            fixed[self.ring.index[name]] = img
        passthrough = {}
        for i, name in enumerate(self.ring.vars):
            if i not in fixed:
                if name not in target:
                    # fine as long as the variable never actually occurs
                    passthrough[i] = None
                else:
                    passthrough[i] = target.var(name)
        powers = {i: {0: target.one()} for i in range(self.ring.nvars)}

        def power(i, n):
            cache = powers[i]
            if n not in cache:
                base = fixed.get(i)
                if base is None:
                    base = passthrough[i]
                    if base is None:
                        raise ValueError(
                            "variable %r has no image and is not in %r"
                            % (self.ring.vars[i], target)
                        )
                m = max(k for k in cache)
                acc = cache[m]
                for k in range(m + 1, n + 1):
                    acc = acc * base
                    cache[k] = acc
            return cache[n]

        total = target.zero()
        for e, c in self.terms.items():
            part = target.constant(c)
            for i, x in enumerate(e):
                if x:
                    part = part * power(i, x)
            total = total + part
        return total

    def in_ring(self, target):
        """Re-express in another ring, matching variables by name."""
        pos = []
        for i, name in enumerate(self.ring.vars):
            pos.append(target.index.get(name))
        out = {}
        for e, c in self.terms.items():
            ne = [0] * target.nvars
            for i, x in enumerate(e):
                if x:
                    if pos[i] is None:
                        raise ValueError(
                            "variable %r occurs but is missing from %r"
                            % (self.ring.vars[i], target)
                        )
                    ne[pos[i]] = x
            out[tuple(ne)] = c
        return Polynomial(target, out)

    # -- normalization ---------------------------------------------------

    def content(self):
        """Positive rational c with self/c primitive over Z (0 for zero)."""
        if not self.terms:
            return _ZERO
        num = 0
        den = 1
        for c in self.terms.values():
            num = int_gcd(num, c.numerator)
            den = den * c.denominator // int_gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self):
        c = self.content()
        if not c:
            return _ZERO, self
        return c, self * (1 / c)

    def normalized(self, order=DEGREVLEX):
        """Unit-normal form: primitive, positive leading coefficient."""
        if not self.terms:
            return self
        _, p = self.primitive()
        if p.leading(order)[1] < 0:
            p = -p
        return p

    # -- division ---------------------------------------------------------

    def exact_div(self, divisor):
        """Exact quotient; raises ValueError when it does not divide."""
        if isinstance(divisor, (int, Fraction)):
            return self / divisor
        self._check_ring(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero:
            return self
        key = DEGREVLEX.key(self.ring)
        de, dc = divisor.leading(DEGREVLEX)
        rest = dict(self.terms)
        out = {}
        while rest:
            e = max(rest, key=key)
            c = rest[e]
            q = tuple(a - b for a, b in zip(e, de))
            if any(x < 0 for x in q):
                raise ValueError("not exactly divisible")
            qc = c / dc
            out[q] = qc
            for e2, c2 in divisor.terms.items():
                m = tuple(a + b for a, b in zip(q, e2))
                s = rest.get(m, _ZERO) - qc * c2
                if s:
                    rest[m] = s
                elif m in rest:
                    del rest[m]
        return Polynomial._raw(self.ring, out)

    def divides(self, other):
        try:
            other.exact_div(self)
            return True
        except (ValueError, ZeroDivisionError):
            return False

    # -- rendering ---------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms_sorted():
            factors = []
            for name, x in zip(self.ring.vars, e):
                if x == 1:
                    factors.append(name)
                elif x > 1:
                    factors.append("%s^%d" % (name, x))
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return "<poly %s over %r>" % (self, self.ring)


def equal_up_to_unit(p, q, order=DEGREVLEX):
    """True when p and q agree up to a nonzero rational factor."""
    if p.is_zero or q.is_zero:
        return p.is_zero and q.is_zero
    return p.normalized(order) == q.normalized(order)


#############################################################################
# parsing
#############################################################################

_OPS = set("+-*^()/,")


def _tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", int(text[i:j])))
            i = j
        elif c.isalpha():
            name = c
            if i + 1 < n and text[i + 1] == "'":
                name += "'"
                i += 1
            tokens.append(("var", name))
            i += 1
        elif c in _OPS:
            tokens.append((c, c))
            i += 1
        else:
            raise ParseError("unexpected character %r at position %d" % (c, i))
    return tokens


class _Parser:
    def __init__(self, tokens, ring):
        self.toks = tokens
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.pos][0] if self.pos < len(self.toks) else None

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expression(self):
        if self.peek() in ("+", "-"):
            sign = -1 if self.next()[0] == "-" else 1
            node = self.term() * sign
        else:
            node = self.term()
        while self.peek() in ("+", "-"):
            op = self.next()[0]
            rhs = self.term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def term(self):
        node = self.factor()
        while True:
            nxt = self.peek()
            if nxt == "*":
                self.next()
                node = node * self.factor()
            elif nxt in ("var", "("):
                node = node * self.factor()
            else:
                return node

    def factor(self):
        node = self.atom()
        while self.peek() == "^":
            self.next()
            kind, val = self.next() if self.pos < len(self.toks) else (None, None)
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer")
            node = node ** val
        return node

    def atom(self):
        if self.pos >= len(self.toks):
            raise ParseError("unexpected end of input")
        kind, val = self.next()
        if kind == "num":
            if self.peek() == "/":
                self.next()
                k2, v2 = self.next() if self.pos < len(self.toks) else (None, None)
                if k2 != "num":
                    raise ParseError("malformed rational literal")
                if v2 == 0:
                    raise ParseError("zero denominator in rational literal")
                return self.ring.constant(Fraction(val, v2))
            return self.ring.constant(val)
        if kind == "var":
            if val not in self.ring:
                raise ParseError("variable %r not in %r" % (val, self.ring))
            return self.ring.var(val)
        if kind == "(":
            node = self.expression()
            if self.peek() != ")":
                raise ParseError("missing closing parenthesis")
            self.next()
            return node
        if kind == "-":
            return -self.atom()
        raise ParseError("unexpected token %r" % (val,))


def parse_polynomial(text, ring):
    """Parse the shared polynomial grammar into the given ring."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial")
    p = _Parser(tokens, ring)
    poly = p.expression()
    if p.pos != len(tokens):
        raise ParseError("trailing input at token %d" % p.pos)
    return poly


#############################################################################
# gcd
#############################################################################


def _univar_coeffs(p, vi):
    """View p as univariate in variable index vi: degree -> coefficient poly."""
    out = {}
    for e, c in p.terms.items():
        d = e[vi]
        rest = list(e)
        rest[vi] = 0
        key = tuple(rest)
        bucket = out.setdefault(d, {})
        bucket[key] = bucket.get(key, _ZERO) + c
    return {
        d: Polynomial(p.ring, terms)
        for d, terms in out.items()
        if any(terms.values())
    }


def _from_univar(ring, vi, coeffs):
    out = {}
    for d, poly in coeffs.items():
        for e, c in poly.terms.items():
            ne = list(e)
            ne[vi] += d
            out[tuple(ne)] = c
    return Polynomial(ring, out)


def _univar_int_gcd(p, q, vi):
    """Plain subresultant-style gcd for polynomials in one variable."""

    def to_list(poly):
        d = poly.degree_in(poly.ring.vars[vi])
        cs = [0] * (d + 1)
        den = 1
        for e, c in poly.terms.items():
            den = den * c.denominator // int_gcd(den, c.denominator)
        for e, c in poly.terms.items():
            cs[e[vi]] = int(c * den)
        g = 0
        for c in cs:
            g = int_gcd(g, c)
        return [c // g for c in cs] if g else cs

    def deg(a):
        return len(a) - 1

    def strip(a):
        while a and a[-1] == 0:
            a.pop()
        return a

    def prim(a):
        g = 0
        for c in a:
            g = int_gcd(g, c)
        return [c // g for c in a] if g > 1 else a

    a, b = to_list(p), to_list(q)
    if deg(a) < deg(b):
        a, b = b, a
    while b:
        # pseudo-remainder of a by b
        r = list(a)
        lb = b[-1]
        while len(r) >= len(b) and strip(r):
            if r[-1] == 0:
                r.pop()
                continue
            lr = r[-1]
            shift = len(r) - len(b)
            r = [c * lb for c in r]
            for i, c in enumerate(b):
                r[i + shift] -= lr * c
            strip(r)
        a, b = b, prim(strip(r))
    a = prim(a)
    if a and a[-1] < 0:
        a = [-c for c in a]
    ring = p.ring
    out = {}
    for d, c in enumerate(a):
        if c:
            e = [0] * ring.nvars
            e[vi] = d
            out[tuple(e)] = Fraction(c)
    return Polynomial(ring, out)


def _monomial_gcd_split(p):
    """Extract the largest monomial dividing p: returns (exps, cofactor)."""
    mins = None
    for e in p.terms:
        if mins is None:
            mins = list(e)
        else:
            mins = [min(a, b) for a, b in zip(mins, e)]
    if mins is None or not any(mins):
        return (0,) * p.ring.nvars, p
    out = {
        tuple(a - b for a, b in zip(e, mins)): c for e, c in p.terms.items()
    }
    return tuple(mins), Polynomial._raw(p.ring, out)


def _prem(a, b, vi):
    """Pseudo-remainder of a by b, both univariate in vi over the ring."""
    ca = _univar_coeffs(a, vi)
    cb = _univar_coeffs(b, vi)
    db = max(cb)
    lb = cb[db]
    while ca:
        da = max(ca)
        if da < db:
            break
        la = ca[da]
        # ca := lb*ca - la*x^(da-db)*cb
        new = {}
        for d, c in ca.items():
            new[d] = c * lb
        for d, c in cb.items():
            shifted = d + da - db
            new[shifted] = new.get(shifted, a.ring.zero()) - la * c
        ca = {d: c for d, c in new.items() if not c.is_zero}
    return _from_univar(a.ring, vi, ca)


def _content_wrt(p, vi):
    coeffs = list(_univar_coeffs(p, vi).values())
    g = coeffs[0]
    for c in coeffs[1:]:
        g = poly_gcd(g, c)
        if g.is_constant():
            break
    return g


def poly_gcd(p, q):
    """Greatest common divisor, unit-normalized (primitive, positive lead)."""
    if p.is_zero:
        return q.normalized()
    if q.is_zero:
        return p.normalized()
    if p.ring != q.ring:
        raise ValueError("gcd of polynomials in different rings")
    ring = p.ring
    if p.is_constant() or q.is_constant():
        return ring.one()

    me, p1 = _monomial_gcd_split(p)
    ne, q1 = _monomial_gcd_split(q)
    shared = tuple(min(a, b) for a, b in zip(me, ne))

    vars_p = p1.variables_present()
    vars_q = q1.variables_present()
    active = sorted(vars_p | vars_q, key=ring.index.get)

    if not active:
        g = ring.one()
    elif len(active) == 1:
        vi = ring.index[active[0]]
        if not (vars_p and vars_q):
            g = ring.one()
        else:
            g = _univar_int_gcd(p1, q1, vi)
    elif (
        len(active) == 2
        and p1.is_homogeneous()
        and q1.is_homogeneous()
    ):
        # dehomogenize to one variable, gcd there, homogenize back
        vi, vj = (ring.index[v] for v in active)

        def dehom(poly):
            out = {}
            for e, c in poly.terms.items():
                ne = list(e)
                ne[vj] = 0
                out[tuple(ne)] = c
            return Polynomial(ring, out)

        gu = _univar_int_gcd(dehom(p1), dehom(q1), vi)
        du = gu.degree_in(active[0])
        out = {}
        for e, c in gu.terms.items():
            ne = list(e)
            ne[vj] = du - e[vi]
            out[tuple(ne)] = c
        g = Polynomial(ring, out)
        # the homogeneous gcd candidate must actually divide both
        if not (g.divides(p1) and g.divides(q1)):
            g = _gcd_prs(p1, q1, ring.index[active[0]])
    else:
        # main variable: smallest combined degree keeps the PRS short
        best = min(
            (v for v in active),
            key=lambda v: (
                max(p1.degree_in(v), 0) + max(q1.degree_in(v), 0),
                ring.index[v],
            ),
        )
        if p1.degree_in(best) < 0 or q1.degree_in(best) < 0:
            g = ring.one()
        else:
            g = _gcd_prs(p1, q1, ring.index[best])

    if any(shared):
        g = g * ring.monomial(shared)
    return g.normalized()


def _gcd_prs(p, q, vi):
    """Primitive polynomial remainder sequence in variable index vi."""
    cp = _content_wrt(p, vi)
    cq = _content_wrt(q, vi)
    cont = poly_gcd(cp, cq)
    a = p.exact_div(cp)
    b = q.exact_div(cq)
    name = p.ring.vars[vi]
    if a.degree_in(name) < b.degree_in(name):
        a, b = b, a
    while not b.is_zero:
        r = _prem(a, b, vi)
        if r.is_zero:
            a = b
            break
        if r.degree_in(name) == 0:
            a = p.ring.one()
            break
        c = _content_wrt(r, vi)
        a, b = b, r.exact_div(c)
    g = a if not a.is_constant() else p.ring.one()
    return (cont * g).normalized()


def gcd_many(polys):
    g = None
    for p in polys:
        g = p.normalized() if g is None else poly_gcd(g, p)
        if g is not None and g.is_constant() and not g.is_zero:
            return g.ring.one()
    if g is None:
        raise ValueError("gcd of empty list")
    return g


def is_squarefree(p):
    """Squarefree test in characteristic zero via gcd with the gradient."""
    if p.is_zero:
        return False
    g = p
    for v in sorted(p.variables_present(), key=p.ring.index.get):
        g = poly_gcd(g, p.derivative(v))
        if g.is_constant():
            return True
    return g.is_constant()


#############################################################################
# matrices and determinants
#############################################################################


class PolyMatrix:
    """Immutable rectangular matrix of polynomials over one ring."""

    __slots__ = ("ring", "rows", "_minor_memo")

    def __init__(self, ring, rows):
        self.ring = ring
        packed = []
        width = None
        for row in rows:
            r = tuple(row)
            if width is None:
                width = len(r)
            elif len(r) != width:
                raise ValueError("ragged matrix")
            for p in r:
                if not isinstance(p, Polynomial) or p.ring != ring:
                    raise ValueError("matrix entry not a polynomial over %r" % ring)
            packed.append(r)
        if not packed or width == 0:
            raise ValueError("empty matrix")
        self.rows = tuple(packed)
        self._minor_memo = {}

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self):
        return PolyMatrix(self.ring, list(zip(*self.rows)))

    def submatrix(self, row_idx, col_idx):
        return PolyMatrix(
            self.ring,
            [[self.rows[i][j] for j in col_idx] for i in row_idx],
        )

    def __repr__(self):
        return "<%dx%d matrix over %r>" % (self.nrows, self.ncols, self.ring)

    # -- determinants ----------------------------------------------------

    def det(self, method="auto"):
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if method == "auto":
            nonzero = sum(
                1 for row in self.rows for p in row if not p.is_zero
            )
            density = nonzero / (n * n)
            method = "bareiss" if (n <= 6 and density > 0.5) else "laplace"
        if method == "bareiss":
            return self._det_bareiss()
        if method == "laplace":
            return self.minor_det(tuple(range(n)), tuple(range(n)))
        raise ValueError("unknown determinant method %r" % method)

    def _det_bareiss(self):
        n = self.nrows
        m = [list(row) for row in self.rows]
        sign = 1
        prev = self.ring.one()
        for k in range(n - 1):
            if m[k][k].is_zero:
                for i in range(k + 1, n):
                    if not m[i][k].is_zero:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return self.ring.zero()
            pivot = m[k][k]
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = pivot * m[i][j] - m[i][k] * m[k][j]
                    m[i][j] = num.exact_div(prev) if not num.is_zero else num
                m[i][k] = self.ring.zero()
            prev = pivot
        return m[n - 1][n - 1] * sign

    def minor_det(self, row_idx, col_idx):
        """Determinant of the given square submatrix, memoized.

        The memo is shared across all minors of this matrix, so sweeps
        over many overlapping minors (Fitting ideals) reuse subtrees.
        """
        rows = tuple(row_idx)
        cols = tuple(col_idx)
        if len(rows) != len(cols):
            raise ValueError("minor of a non-square selection")
        return self._minor(rows, cols)

    def _minor(self, rows, cols):
        if not rows:
            return self.ring.one()
        memo = self._minor_memo
        got = memo.get((rows, cols))
        if got is not None:
            return got
        if len(rows) == 1:
            val = self.rows[rows[0]][cols[0]]
            memo[(rows, cols)] = val
            return val
        # expand along the sparsest line
        best_row, best_row_count = None, None
        for pos, i in enumerate(rows):
            cnt = sum(1 for j in cols if not self.rows[i][j].is_zero)
            if best_row_count is None or cnt < best_row_count:
                best_row, best_row_count = pos, cnt
        best_col, best_col_count = None, None
        for pos, j in enumerate(cols):
            cnt = sum(1 for i in rows if not self.rows[i][j].is_zero)
            if best_col_count is None or cnt < best_col_count:
                best_col, best_col_count = pos, cnt
        total = self.ring.zero()
        if best_row_count <= best_col_count:
            pos = best_row
            i = rows[pos]
            sub_rows = rows[:pos] + rows[pos + 1 :]
            for cpos, j in enumerate(cols):
                a = self.rows[i][j]
                if a.is_zero:
                    continue
                sub = self._minor(sub_rows, cols[:cpos] + cols[cpos + 1 :])
                term = a * sub
                total = total + (term if (pos + cpos) % 2 == 0 else -term)
        else:
            pos = best_col
            j = cols[pos]
            sub_cols = cols[:pos] + cols[pos + 1 :]
            for rpos, i in enumerate(rows):
                a = self.rows[i][j]
                if a.is_zero:
                    continue
                sub = self._minor(rows[:rpos] + rows[rpos + 1 :], sub_cols)
                term = a * sub
                total = total + (term if (rpos + pos) % 2 == 0 else -term)
        memo[(rows, cols)] = total
        return total

    def minors(self, size, cap=None):
        """Yield ((rows, cols), det) over all size x size minors."""
        count = 0
        for rows in combinations(range(self.nrows), size):
            for cols in combinations(range(self.ncols), size):
                count += 1
                if cap is not None and count > cap:
                    raise ValueError("minor enumeration exceeded cap %d" % cap)
                yield (rows, cols), self.minor_det(rows, cols)

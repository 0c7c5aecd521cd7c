"""Buchberger and Mora engines over packed integer monomials.

Ideals in Q[x1..xn] under global orders (Buchberger, Gebauer-Moeller
pair pruning) and local orders (Mora weak normal form with ecart
selection, optional degree truncation), plus a module-level Buchberger
used for relation (kernel) computations.

Internals: a monomial is one int, exponent i in a 16-bit field at shift
16*i with the total degree on top.  Divisibility is a guard-bit trick,
and every term order in use is encoded as a second int (the "code")
that compares like the order and is additive under multiplication, so
the inner reduction loop touches nothing but ints.  Coefficients are
cleared to integers and content-stripped as they grow.
"""

from __future__ import annotations

import time
from bisect import insort
from fractions import Fraction
from heapq import heappop, heappush
from math import gcd as int_gcd

from .errors import ResourceCapExceeded
from .poly import (
    BlockOrder,
    DEGREVLEX,
    DegRevLex,
    Lex,
    NEGDEGREVLEX,
    NegDegRevLex,
    Polynomial,
    Ring,
)

INFINITE = float("inf")

_FIELD = 16
_FMASK = (1 << _FIELD) - 1
_EMAX = 1 << 14  # exponents stay well under the guard bit


class ResourceLimits:
    """Caps for the engine; hitting one raises ResourceCapExceeded."""

    __slots__ = ("max_pairs", "max_basis", "max_steps", "max_seconds", "max_trunc")

    def __init__(
        self,
        max_pairs=200_000,
        max_basis=4_000,
        max_steps=30_000_000,
        max_seconds=None,
        max_trunc=512,
    ):
        self.max_pairs = max_pairs
        self.max_basis = max_basis
        self.max_steps = max_steps
        self.max_seconds = max_seconds
        self.max_trunc = max_trunc


DEFAULT_LIMITS = ResourceLimits()


class _Deadline:
    __slots__ = ("t_end",)

    def __init__(self, limits):
        self.t_end = (
            time.monotonic() + limits.max_seconds if limits.max_seconds else None
        )

    def check(self):
        if self.t_end is not None and time.monotonic() > self.t_end:
            raise ResourceCapExceeded("time budget exhausted")


class _Ctx:
    """Packing and order-code context for one (ring, order) pair."""

    __slots__ = ("ring", "order", "n", "deg_shift", "guard", "rows", "offset")

    def __init__(self, ring, order):
        self.ring = ring
        self.order = order
        n = ring.nvars
        self.n = n
        self.deg_shift = _FIELD * n
        self.guard = sum(1 << (_FIELD * i + (_FIELD - 1)) for i in range(n))
        # order as rows (kind, data, shift) most significant first;
        # "sum" rows get 24 bits, single-exponent rows 16
        if isinstance(order, DegRevLex):
            rows = [("sum", tuple(range(n)))]
            rows += [("neg", i) for i in range(n - 1, -1, -1)]
        elif isinstance(order, Lex):
            rows = [("pos", i) for i in range(n)]
        elif isinstance(order, NegDegRevLex):
            rows = [("negsum", tuple(range(n)))]
            rows += [("neg", i) for i in range(n - 1, -1, -1)]
        elif isinstance(order, BlockOrder):
            fi = [ring.index[v] for v in order.front]
            rest = [i for i in range(n) if i not in set(fi)]
            rows = [("sum", tuple(fi))]
            rows += [("neg", i) for i in reversed(fi)]
            rows += [("sum", tuple(rest))]
            rows += [("neg", i) for i in reversed(rest)]
        else:
            raise ValueError("unsupported term order %r" % (order,))
        shift = 0
        placed = []
        for kind, data in reversed(rows):
            width = 24 if kind in ("sum", "negsum") else _FIELD
            placed.append((kind, data, shift))
            shift += width
        self.rows = tuple(reversed(placed))
        self.offset = self.code((0,) * n)

    def pack(self, e):
        m = 0
        deg = 0
        for i, x in enumerate(e):
            if x >= _EMAX:
                raise ResourceCapExceeded("exponent %d overflows packing" % x)
            m |= x << (_FIELD * i)
            deg += x
        return m | (deg << self.deg_shift)

    def unpack(self, m):
        return tuple((m >> (_FIELD * i)) & _FMASK for i in range(self.n))

    def code(self, e):
        acc = 0
        for kind, data, shift in self.rows:
            if kind == "sum":
                v = sum(e[i] for i in data)
            elif kind == "negsum":
                v = (1 << 24) - 1 - sum(e[i] for i in data)
            elif kind == "pos":
                v = e[data]
            else:  # neg
                v = _FMASK - e[data]
            acc |= v << shift
        return acc

    def code_of_packed(self, m):
        return self.code(self.unpack(m))

    def divides(self, d, m):
        g = self.guard
        return ((m | g) - d) & g == g

    def lcm(self, m1, m2):
        e = tuple(
            max((m1 >> (_FIELD * i)) & _FMASK, (m2 >> (_FIELD * i)) & _FMASK)
            for i in range(self.n)
        )
        return sum(x << (_FIELD * i) for i, x in enumerate(e)) | (
            sum(e) << self.deg_shift
        )


_ctx_cache = {}


def _ctx_for(ring, order):
    key = (ring, order)
    ctx = _ctx_cache.get(key)
    if ctx is None:
        ctx = _Ctx(ring, order)
        _ctx_cache[key] = ctx
    return ctx


#############################################################################
# engine polynomials: parallel dicts {code: packed} / {code: int coeff}
#############################################################################


def _to_engine(ctx, poly, trunc=None):
    den = 1
    for c in poly.terms.values():
        den = den * c.denominator // int_gcd(den, c.denominator)
    pk = {}
    cf = {}
    for e, c in poly.terms.items():
        if trunc is not None and sum(e) >= trunc:
            continue
        code = ctx.code(e)
        pk[code] = ctx.pack(e)
        cf[code] = int(c * den)
    _strip(pk, cf)
    return pk, cf


def _strip(pk, cf):
    """Divide out integer content and make the leading coefficient positive."""
    if not cf:
        return
    g = 0
    for v in cf.values():
        g = int_gcd(g, v)
        if g == 1:
            break
    lead = max(cf)
    if cf[lead] < 0:
        g = -g
    if g != 1:
        for k in cf:
            cf[k] //= g


def _from_engine(ctx, pk, cf):
    ring = ctx.ring
    return Polynomial(
        ring, {ctx.unpack(pk[k]): Fraction(cf[k]) for k in pk}
    )


class _Red:
    """A basis element prepared for use as a reducer."""

    __slots__ = (
        "idx",
        "lead_code",
        "lead_packed",
        "lead_coeff",
        "tail",
        "ecart",
        "nterms",
        "alive",
    )

    def __init__(self, ctx, pk, cf, idx):
        lead = max(cf)
        self.idx = idx
        self.lead_code = lead
        self.lead_packed = pk[lead]
        self.lead_coeff = cf[lead]
        self.tail = tuple((k, pk[k], cf[k]) for k in cf if k != lead)
        ds = ctx.deg_shift
        maxdeg = max(p >> ds for p in pk.values())
        self.ecart = maxdeg - (pk[lead] >> ds)
        self.nterms = len(cf)
        self.alive = True

    def poly_dicts(self):
        pk = {self.lead_code: self.lead_packed}
        cf = {self.lead_code: self.lead_coeff}
        for k, p, c in self.tail:
            pk[k] = p
            cf[k] = c
        return pk, cf


#############################################################################
# normal forms
#############################################################################


def _nf_global(ctx, pk, cf, scan, limits, deadline, trunc=None):
    """Full normal form under a global order; scan is sorted by lead code."""
    heap = [-k for k in cf]
    heap.sort()
    out_pk = {}
    out_cf = {}
    ds = ctx.deg_shift
    steps = 0
    while heap:
        c = -heappop(heap)
        if c not in cf:
            continue
        packed = pk[c]
        red = None
        for r in scan:
            if r.lead_code > c:
                break
            if r.alive and ctx.divides(r.lead_packed, packed):
                red = r
                break
        if red is None:
            out_pk[c] = packed
            prev = out_cf.get(c)
            s = cf[c] if prev is None else prev + cf[c]
            if s:
                out_cf[c] = s
            else:
                del out_pk[c]
                out_cf.pop(c, None)
            del pk[c], cf[c]
            continue
        coeff = cf[c]
        d = int_gcd(coeff, red.lead_coeff)
        a = red.lead_coeff // d
        b = coeff // d
        if a != 1:
            for k in cf:
                cf[k] *= a
            for k in out_cf:
                out_cf[k] *= a
        del pk[c], cf[c]
        mdelta = c - red.lead_code
        mono = packed - red.lead_packed
        for tc, tp, tcf in red.tail:
            nc = tc + mdelta
            cur = cf.get(nc)
            if cur is None:
                np = tp + mono
                if trunc is not None and (np >> ds) >= trunc:
                    continue
                pk[nc] = np
                cf[nc] = -b * tcf
                heappush(heap, -nc)
            else:
                s = cur - b * tcf
                if s:
                    cf[nc] = s
                else:
                    del cf[nc], pk[nc]
        steps += 1
        if steps & 255 == 0:
            deadline.check()
            if steps > limits.max_steps:
                raise ResourceCapExceeded("reduction step cap hit")
            _strip_pair(out_pk, out_cf, pk, cf)
    _strip_pair(out_pk, out_cf, pk=None, cf=None)
    return out_pk, out_cf


def _strip_pair(out_pk, out_cf, pk, cf):
    """Joint content strip across remainder and work dicts."""
    g = 0
    for v in out_cf.values():
        g = int_gcd(g, v)
        if g == 1:
            return
    if cf is not None:
        for v in cf.values():
            g = int_gcd(g, v)
            if g == 1:
                return
    if g > 1:
        for k in out_cf:
            out_cf[k] //= g
        if cf is not None:
            for k in cf:
                cf[k] //= g


def _nf_local(ctx, pk, cf, scan, limits, deadline, trunc=None):
    """Mora weak normal form; scan is sorted by lead code descending."""
    heap = [-k for k in cf]
    heap.sort()
    ds = ctx.deg_shift
    steps = 0
    extra = []  # intermediate results usable as reducers (Mora's T)
    while heap:
        c = -heappop(heap)
        if c not in cf:
            continue
        packed = pk[c]
        best = None
        for r in scan:
            if r.lead_code < c:
                break
            if r.alive and ctx.divides(r.lead_packed, packed):
                if best is None or r.ecart < best.ecart:
                    best = r
                    if best.ecart == 0:
                        break
        if best is None or best.ecart > 0:
            for r in extra:
                if ctx.divides(r.lead_packed, packed):
                    if best is None or r.ecart < best.ecart:
                        best = r
                        if best.ecart == 0:
                            break
        if best is None:
            return pk, cf
        if best.ecart > 0:
            ecart_h = max(p >> ds for p in pk.values()) - (packed >> ds)
            if best.ecart > ecart_h:
                snap_pk = dict(pk)
                snap_cf = dict(cf)
                extra.append(_Red(ctx, snap_pk, snap_cf, -1))
        coeff = cf[c]
        d = int_gcd(coeff, best.lead_coeff)
        a = best.lead_coeff // d
        b = coeff // d
        if a != 1:
            for k in cf:
                cf[k] *= a
        del pk[c], cf[c]
        mdelta = c - best.lead_code
        mono = packed - best.lead_packed
        for tc, tp, tcf in best.tail:
            nc = tc + mdelta
            cur = cf.get(nc)
            if cur is None:
                np = tp + mono
                if trunc is not None and (np >> ds) >= trunc:
                    continue
                pk[nc] = np
                cf[nc] = -b * tcf
                heappush(heap, -nc)
            else:
                s = cur - b * tcf
                if s:
                    cf[nc] = s
                else:
                    del cf[nc], pk[nc]
        steps += 1
        if steps & 255 == 0:
            deadline.check()
            if steps > limits.max_steps:
                raise ResourceCapExceeded("reduction step cap hit")
            _strip(pk, cf)
    return pk, cf


#############################################################################
# Buchberger driver (scalar case)
#############################################################################


def _spoly(ctx, ri, rj, trunc=None):
    u = ctx.lcm(ri.lead_packed, rj.lead_packed)
    ucode = ctx.code_of_packed(u)
    di = ucode - ri.lead_code
    dj = ucode - rj.lead_code
    mi = u - ri.lead_packed
    mj = u - rj.lead_packed
    d = int_gcd(ri.lead_coeff, rj.lead_coeff)
    a = rj.lead_coeff // d
    b = ri.lead_coeff // d
    ds = ctx.deg_shift
    pk = {}
    cf = {}
    for tc, tp, tcf in ri.tail:
        np = tp + mi
        if trunc is not None and (np >> ds) >= trunc:
            continue
        nc = tc + di
        pk[nc] = np
        cf[nc] = a * tcf
    for tc, tp, tcf in rj.tail:
        nc = tc + dj
        cur = cf.get(nc)
        if cur is None:
            np = tp + mj
            if trunc is not None and (np >> ds) >= trunc:
                continue
            pk[nc] = np
            cf[nc] = -b * tcf
        else:
            s = cur - b * tcf
            if s:
                cf[nc] = s
            else:
                del cf[nc], pk[nc]
    return pk, cf


def _update(ctx, reds, pairs, heap, new_red, *, product_criterion, select_sign):
    """Gebauer-Moeller pair update for a freshly added basis element."""
    t = new_red.idx
    ltp = new_red.lead_packed
    cand = []
    for g in reds:
        if not g.alive:
            continue
        u = ctx.lcm(g.lead_packed, ltp)
        cand.append((g.idx, u, u == g.lead_packed + ltp))
    kept = []
    for pos, (gi, u, cop) in enumerate(cand):
        if product_criterion and cop:
            kept.append((gi, u, cop))
            continue
        dominated = any(ctx.divides(u2, u) for _, u2, _ in kept) or any(
            ctx.divides(later[1], u) for later in cand[pos + 1 :]
        )
        if not dominated:
            kept.append((gi, u, cop))
    new_pairs = [
        (gi, u) for gi, u, cop in kept if not (product_criterion and cop)
    ]
    # prune old pairs whose lcm the new lead strictly refines
    for (i, j), u in list(pairs.items()):
        if ctx.divides(ltp, u):
            if (
                ctx.lcm(reds[i].lead_packed, ltp) != u
                and ctx.lcm(reds[j].lead_packed, ltp) != u
            ):
                del pairs[(i, j)]
    for g in reds:
        if g.alive and ctx.divides(ltp, g.lead_packed):
            g.alive = False
    reds.append(new_red)
    for gi, u in new_pairs:
        key = select_sign * ctx.code_of_packed(u)
        pairs[(gi, t)] = u
        heappush(heap, (key, gi, t))


def _buchberger(ctx, eng_polys, *, local, trunc, limits, product_criterion):
    deadline = _Deadline(limits)
    reds = []
    pairs = {}
    heap = []
    select_sign = -1 if local else 1
    scan = []  # alive reducers sorted by lead code (asc global, desc local)

    def rescan():
        scan.sort(key=lambda r: r.lead_code, reverse=local)

    seed = sorted(
        (pair for pair in eng_polys if pair[1]),
        key=lambda pair: tuple(sorted(pair[1].items())),
    )
    for pk, cf in seed:
        red = _Red(ctx, pk, cf, len(reds))
        _update(
            ctx,
            reds,
            pairs,
            heap,
            red,
            product_criterion=product_criterion,
            select_sign=select_sign,
        )
        scan.append(red)
    rescan()

    nf = _nf_local if local else _nf_global
    done = 0
    while heap:
        key, i, j = heappop(heap)
        if (i, j) not in pairs:
            continue
        del pairs[(i, j)]
        done += 1
        if done > limits.max_pairs:
            raise ResourceCapExceeded("s-pair cap hit (%d)" % limits.max_pairs)
        deadline.check()
        spk, scf = _spoly(ctx, reds[i], reds[j], trunc)
        if not scf:
            continue
        rpk, rcf = nf(ctx, spk, scf, scan, limits, deadline, trunc)
        if not rcf:
            continue
        _strip(rpk, rcf)
        red = _Red(ctx, rpk, rcf, len(reds))
        if len(reds) >= limits.max_basis:
            raise ResourceCapExceeded("basis size cap hit")
        _update(
            ctx,
            reds,
            pairs,
            heap,
            red,
            product_criterion=product_criterion,
            select_sign=select_sign,
        )
        insort(scan, red, key=lambda r: -r.lead_code if local else r.lead_code)

    # minimal basis: drop anything whose lead another kept lead divides
    alive = [r for r in reds if r.alive]
    alive.sort(key=lambda r: (r.lead_code if not local else -r.lead_code, r.idx))
    kept = []
    for r in alive:
        if not any(ctx.divides(k.lead_packed, r.lead_packed) for k in kept):
            kept.append(r)
    if local:
        return [r.poly_dicts() for r in kept]
    # reduced basis: tail-reduce each element against the others
    out = []
    for r in kept:
        others = [k for k in kept if k is not r]
        pk, cf = r.poly_dicts()
        rpk, rcf = _nf_global(ctx, pk, cf, others, limits, deadline, trunc)
        _strip(rpk, rcf)
        out.append((rpk, rcf))
    out.sort(key=lambda pair: max(pair[1]), reverse=True)
    return out


#############################################################################
# public scalar API
#############################################################################

_gb_cache = {}
_sb_cache = {}


def groebner_basis(gens, order=DEGREVLEX, limits=None):
    """Reduced Groebner basis (unit-normalized, canonical) for a global order."""
    if not order.is_global:
        raise ValueError("groebner_basis needs a global order; see standard_basis")
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return []
    ring = gens[0].ring
    key = (ring, order, frozenset(gens))
    hit = _gb_cache.get(key)
    if hit is not None:
        return list(hit)
    limits = limits or DEFAULT_LIMITS
    ctx = _ctx_for(ring, order)
    eng = [_to_engine(ctx, g) for g in gens]
    basis = _buchberger(
        ctx, eng, local=False, trunc=None, limits=limits, product_criterion=True
    )
    polys = [_from_engine(ctx, pk, cf) for pk, cf in basis]
    _gb_cache[key] = tuple(polys)
    return polys


def standard_basis(gens, limits=None, trunc=None):
    """Minimal standard basis under the local order (Mora's algorithm).

    With ``trunc=K`` all computations are done modulo terms of degree
    >= K, i.e. in the quotient by the K-th power of the maximal ideal.
    """
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return []
    ring = gens[0].ring
    key = (ring, frozenset(gens), trunc)
    hit = _sb_cache.get(key)
    if hit is not None:
        return list(hit)
    limits = limits or DEFAULT_LIMITS
    ctx = _ctx_for(ring, NEGDEGREVLEX)
    eng = [_to_engine(ctx, g, trunc) for g in gens]
    basis = _buchberger(
        ctx, eng, local=True, trunc=trunc, limits=limits, product_criterion=False
    )
    polys = [_from_engine(ctx, pk, cf) for pk, cf in basis]
    _sb_cache[key] = tuple(polys)
    return polys


def reduce_poly(f, basis, order=DEGREVLEX, limits=None):
    """Normal form of f against a basis (weak normal form when local)."""
    limits = limits or DEFAULT_LIMITS
    if f.is_zero or not basis:
        return f
    ctx = _ctx_for(f.ring, order)
    deadline = _Deadline(limits)
    pk, cf = _to_engine(ctx, f)
    reds = []
    for i, g in enumerate(basis):
        gpk, gcf = _to_engine(ctx, g)
        if gcf:
            reds.append(_Red(ctx, gpk, gcf, i))
    local = not order.is_global
    reds.sort(key=lambda r: r.lead_code, reverse=local)
    nf = _nf_local if local else _nf_global
    rpk, rcf = nf(ctx, pk, cf, reds, limits, deadline, None)
    _strip(rpk, rcf)
    return _from_engine(ctx, rpk, rcf)


def ideal_contains(f, basis, order=DEGREVLEX, limits=None):
    return reduce_poly(f, basis, order, limits).is_zero


def ideal_equal(gens_a, gens_b, order=DEGREVLEX, limits=None):
    """Equality of ideals via canonical reduced Groebner bases."""
    return groebner_basis(list(gens_a), order, limits) == groebner_basis(
        list(gens_b), order, limits
    )


def eliminate(gens, drop, limits=None):
    """Generators of the ideal's contraction to the ring without ``drop``.

    Generators of the shape c*v + (terms without v), c a nonzero
    constant and v a dropped variable, are substituted away first; the
    rest goes through a block-order basis.  Returns polynomials in the
    smaller ring, unit-normalized and deterministically sorted.
    """
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return []
    ring = gens[0].ring
    drop = [v for v in drop]
    for v in drop:
        if v not in ring:
            raise ValueError("cannot eliminate %r: not in %r" % (v, ring))
    work = list(gens)
    active = set(drop)

    progress = True
    while progress and active:
        progress = False
        for g in work:
            hit = None
            for v in sorted(active, key=ring.index.get):
                i = ring.index[v]
                if g.degree_in(v) != 1:
                    continue
                vterms = [(e, c) for e, c in g.terms.items() if e[i] >= 1]
                if len(vterms) == 1 and sum(vterms[0][0]) == 1:
                    hit = (v, vterms[0][1])
                    break
            if hit is None:
                continue
            v, c = hit
            image = (c * ring.var(v) - g) / c
            work = [
                h.substitute({v: image})
                for h in work
                if h is not g
            ]
            work = [h for h in work if not h.is_zero]
            active.discard(v)
            progress = True
            break

    target = ring.drop(drop)
    if active:
        order = BlockOrder(tuple(sorted(active, key=ring.index.get)))
        basis = groebner_basis(work, order, limits)
        keep = [
            g for g in basis if not (g.variables_present() & active)
        ]
    else:
        keep = work
    out = []
    seen = set()
    for g in keep:
        q = g.in_ring(target).normalized()
        if q not in seen:
            seen.add(q)
            out.append(q)
    out.sort(key=lambda p: (p.total_degree(), str(p)))
    return out


#############################################################################
# staircases and quotient dimensions
#############################################################################


def _leads_packed(ctx, polys):
    out = []
    for p in polys:
        e, _ = p.leading(ctx.order)
        out.append(ctx.pack(e))
    return out


def _pure_power_box(ctx, leads):
    """Per-variable bound from pure-power leads, or None when one is missing."""
    caps = [None] * ctx.n
    for m in leads:
        e = ctx.unpack(m)
        nz = [i for i, x in enumerate(e) if x]
        if len(nz) == 1:
            i = nz[0]
            if caps[i] is None or e[i] < caps[i]:
                caps[i] = e[i]
        elif not nz:
            return [0] * ctx.n  # a unit: everything is in the ideal
    if any(c is None for c in caps):
        return None
    return caps


def _staircase_count(ctx, leads, caps, deg_bound=None, collect=None):
    """Count monomials under the staircase; also return their max degree."""
    n = ctx.n
    count = 0
    maxdeg = -1
    visited = 0
    e = [0] * n

    def rec(i, deg):
        nonlocal count, maxdeg, visited
        if i == n:
            visited += 1
            if visited > 4_000_000:
                raise ResourceCapExceeded("staircase enumeration too large")
            m = sum(x << (_FIELD * j) for j, x in enumerate(e)) | (
                deg << ctx.deg_shift
            )
            if not any(ctx.divides(l, m) for l in leads):
                count += 1
                if deg > maxdeg:
                    maxdeg = deg
                if collect is not None:
                    collect.append(tuple(e))
            return
        for x in range(caps[i]):
            if deg_bound is not None and deg + x >= deg_bound:
                break
            e[i] = x
            rec(i + 1, deg + x)
        e[i] = 0

    rec(0, 0)
    return count, maxdeg


def local_quotient_dim(gens, limits=None):
    """Dimension over Q of the local ring modulo the ideal (INFINITE if not).

    Works with truncated Mora bases and raises the truncation degree
    until the staircase certifies itself (its top sits at least two
    below the truncation); falls back to a full basis to decide the
    infinite case.  The ladder grows by roughly a quarter per rung:
    rungs below the certification point are cheap, while overshooting
    it can be very expensive on dense curves, so small steps win.
    """
    limits = limits or DEFAULT_LIMITS
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return INFINITE
    if any(g.constant_term for g in gens):
        return 0
    ring = gens[0].ring
    ctx = _ctx_for(ring, NEGDEGREVLEX)
    k = max(6, 2 * max(g.order_at_origin() for g in gens))
    while k <= limits.max_trunc:
        sb = standard_basis(gens, limits, trunc=k)
        leads = _leads_packed(ctx, sb)
        caps = [k] * ctx.n
        box = _pure_power_box(ctx, leads)
        if box is not None:
            caps = [min(k, c) for c in box]
        count, maxdeg = _staircase_count(ctx, leads, caps, deg_bound=k)
        if maxdeg <= k - 2:
            return count
        k += max(4, k // 4)
        if box is not None:
            # a finite box already names the target: go straight there
            k = max(k, maxdeg + 2)
    sb = standard_basis(gens, limits, trunc=None)
    leads = _leads_packed(ctx, sb)
    box = _pure_power_box(ctx, leads)
    if box is None:
        return INFINITE
    count, _ = _staircase_count(ctx, leads, box)
    return count


def local_staircase(gens, limits=None):
    """Standard monomials of the local quotient, sorted by (degree, lex).

    Exponent tuples of the monomials outside the leading ideal under the
    local order; None when the colength is infinite, [] for the unit
    ideal.  Same truncation ladder as local_quotient_dim.
    """
    limits = limits or DEFAULT_LIMITS
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return None
    if any(g.constant_term for g in gens):
        return []
    ring = gens[0].ring
    ctx = _ctx_for(ring, NEGDEGREVLEX)
    k = max(6, 2 * max(g.order_at_origin() for g in gens))
    while k <= limits.max_trunc:
        sb = standard_basis(gens, limits, trunc=k)
        leads = _leads_packed(ctx, sb)
        caps = [k] * ctx.n
        box = _pure_power_box(ctx, leads)
        if box is not None:
            caps = [min(k, c) for c in box]
        mons = []
        _, maxdeg = _staircase_count(ctx, leads, caps, deg_bound=k, collect=mons)
        if maxdeg <= k - 2:
            return sorted(mons, key=lambda e: (sum(e), e))
        k += max(4, k // 4)
        if box is not None:
            k = max(k, maxdeg + 2)
    sb = standard_basis(gens, limits, trunc=None)
    leads = _leads_packed(ctx, sb)
    box = _pure_power_box(ctx, leads)
    if box is None:
        return None
    mons = []
    _staircase_count(ctx, leads, box, collect=mons)
    return sorted(mons, key=lambda e: (sum(e), e))


def global_quotient_dim(gens, limits=None):
    """Dimension over Q of the polynomial ring modulo the ideal."""
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return INFINITE
    ring = gens[0].ring
    ctx = _ctx_for(ring, DEGREVLEX)
    gb = groebner_basis(gens, DEGREVLEX, limits)
    if not gb:
        return INFINITE
    if any(g.is_constant() for g in gb):
        return 0
    leads = _leads_packed(ctx, gb)
    box = _pure_power_box(ctx, leads)
    if box is None:
        return INFINITE
    count, _ = _staircase_count(ctx, leads, box)
    return count


def milnor_number(f, limits=None):
    """Milnor number at the origin of the hypersurface germ f = 0."""
    if f.is_zero:
        return INFINITE
    jac = [f.derivative(v) for v in f.ring.vars]
    return local_quotient_dim(jac, limits)


#############################################################################
# module engine: kernels of maps to a ring extension
#############################################################################

_CBITS = 16


class _VCtx:
    """Vector extension of _Ctx: terms carry a component index.

    Component 0 outranks everything (it is what gets eliminated), the
    ring code decides next, low bits break ties between components.
    """

    __slots__ = ("ctx", "ncomp", "flag_shift")

    def __init__(self, ctx, ncomp):
        self.ctx = ctx
        self.ncomp = ncomp
        top = max(shift + (24 if kind in ("sum", "negsum") else _FIELD)
                  for kind, _, shift in ctx.rows)
        self.flag_shift = top + _CBITS

    def vcode(self, comp, code):
        flag = 1 if comp == 0 else 0
        return (flag << self.flag_shift) | (code << _CBITS) | (self.ncomp - comp)

    def mul_delta(self, mono_code):
        return (mono_code - self.ctx.offset) << _CBITS


def _vec_to_engine(vctx, row, trunc=None):
    ctx = vctx.ctx
    den = 1
    for p in row:
        for c in p.terms.values():
            den = den * c.denominator // int_gcd(den, c.denominator)
    pk = {}
    cf = {}
    comps = {}
    for comp, p in enumerate(row):
        for e, c in p.terms.items():
            if trunc is not None and sum(e) >= trunc:
                continue
            vc = vctx.vcode(comp, ctx.code(e))
            pk[vc] = ctx.pack(e)
            cf[vc] = int(c * den)
            comps[vc] = comp
    _strip(pk, cf)
    return pk, cf, comps


class _VRed:
    __slots__ = (
        "idx",
        "lead_code",
        "lead_packed",
        "lead_coeff",
        "lead_comp",
        "tail",
        "alive",
        "graph",
    )

    def __init__(self, pk, cf, comps, idx, graph=False):
        lead = max(cf)
        self.idx = idx
        self.lead_code = lead
        self.lead_packed = pk[lead]
        self.lead_coeff = cf[lead]
        self.lead_comp = comps[lead]
        self.tail = tuple((k, pk[k], cf[k], comps[k]) for k in cf if k != lead)
        self.alive = True
        self.graph = graph

    def dicts(self):
        pk = {self.lead_code: self.lead_packed}
        cf = {self.lead_code: self.lead_coeff}
        comps = {self.lead_code: self.lead_comp}
        for k, p, c, cm in self.tail:
            pk[k] = p
            cf[k] = c
            comps[k] = cm
        return pk, cf, comps


def _vnf(vctx, pk, cf, comps, buckets, limits, deadline):
    """Top reduction only: stop at the first irreducible lead."""
    ctx = vctx.ctx
    heap = [-k for k in cf]
    heap.sort()
    steps = 0
    while heap:
        c = -heappop(heap)
        if c not in cf:
            continue
        packed = pk[c]
        comp = comps[c]
        red = None
        for r in buckets.get(comp, ()):
            if r.alive and ctx.divides(r.lead_packed, packed):
                red = r
                break
        if red is None:
            return pk, cf, comps
        coeff = cf[c]
        d = int_gcd(coeff, red.lead_coeff)
        a = red.lead_coeff // d
        b = coeff // d
        if a != 1:
            for k in cf:
                cf[k] *= a
        del pk[c], cf[c], comps[c]
        mono = packed - red.lead_packed
        # same component, so the vector-code delta is the plain ring delta
        mdelta = c - red.lead_code
        for tc, tp, tcf, tcm in red.tail:
            nc = tc + mdelta
            cur = cf.get(nc)
            if cur is None:
                pk[nc] = tp + mono
                cf[nc] = -b * tcf
                comps[nc] = tcm
                heappush(heap, -nc)
            else:
                s = cur - b * tcf
                if s:
                    cf[nc] = s
                else:
                    del cf[nc], pk[nc], comps[nc]
        steps += 1
        if steps & 255 == 0:
            deadline.check()
            if steps > limits.max_steps:
                raise ResourceCapExceeded("module reduction step cap hit")
            _strip(pk, cf)
    return pk, cf, comps


def _vspoly(vctx, ri, rj):
    ctx = vctx.ctx
    u = ctx.lcm(ri.lead_packed, rj.lead_packed)
    mi = u - ri.lead_packed
    mj = u - rj.lead_packed
    di = vctx.mul_delta(ctx.code_of_packed(mi))
    dj = vctx.mul_delta(ctx.code_of_packed(mj))
    d = int_gcd(ri.lead_coeff, rj.lead_coeff)
    a = rj.lead_coeff // d
    b = ri.lead_coeff // d
    pk = {}
    cf = {}
    comps = {}
    for tc, tp, tcf, tcm in ri.tail:
        nc = tc + di
        pk[nc] = tp + mi
        cf[nc] = a * tcf
        comps[nc] = tcm
    for tc, tp, tcf, tcm in rj.tail:
        nc = tc + dj
        cur = cf.get(nc)
        if cur is None:
            pk[nc] = tp + mj
            cf[nc] = -b * tcf
            comps[nc] = tcm
        else:
            s = cur - b * tcf
            if s:
                cf[nc] = s
            else:
                del cf[nc], pk[nc], comps[nc]
    return pk, cf, comps


def _vupdate(vctx, reds, pairs, heap, new_red, buckets):
    ctx = vctx.ctx
    t = new_red.idx
    ltp = new_red.lead_packed
    comp = new_red.lead_comp
    cand = []
    for g in reds:
        if not g.alive or g.idx == t or g.lead_comp != comp:
            continue
        if new_red.graph and g.graph:
            continue
        u = ctx.lcm(g.lead_packed, ltp)
        cand.append((g.idx, u))
    kept = []
    for pos, (gi, u) in enumerate(cand):
        dominated = any(ctx.divides(u2, u) for _, u2 in kept) or any(
            ctx.divides(u2, u) for _, u2 in cand[pos + 1 :]
        )
        if not dominated:
            kept.append((gi, u))
    for (i, j), u in list(pairs.items()):
        if reds[i].lead_comp != comp:
            continue
        if ctx.divides(ltp, u):
            if (
                ctx.lcm(reds[i].lead_packed, ltp) != u
                and ctx.lcm(reds[j].lead_packed, ltp) != u
            ):
                del pairs[(i, j)]
    for g in reds:
        if (
            g.alive
            and g.lead_comp == comp
            and ctx.divides(ltp, g.lead_packed)
        ):
            g.alive = False
            bucket = buckets.get(comp)
            if bucket is not None and g in bucket:
                bucket.remove(g)
    reds.append(new_red)
    buckets.setdefault(comp, []).append(new_red)
    buckets[comp].sort(key=lambda r: -r.lead_code)
    for gi, u in kept:
        pairs[(gi, t)] = u
        heappush(heap, (ctx.code_of_packed(u), gi, t))


def module_kernel(module_gens, images, target_ring, limits=None, source_ideal=()):
    """Relations over the target ring among module generators.

    ``module_gens`` are polynomials in the source ring; the target
    variables act on them through ``images`` (one source polynomial per
    target variable).  ``source_ideal`` generators are treated as zero in
    the module (the module is source-ring/ideal).  Returns rows (a_1..a_g)
    with sum a_i(images) * module_gens[i] = 0 mod source_ideal, generating
    all relations.
    """
    limits = limits or DEFAULT_LIMITS
    deadline = _Deadline(limits)
    src = module_gens[0].ring
    if len(images) != target_ring.nvars:
        raise ValueError("need one image per target variable")
    big = Ring(tuple(src.vars) + tuple(target_ring.vars))
    order = BlockOrder(tuple(src.vars))
    ctx = _ctx_for(big, order)
    graph = [
        big.var(v) - images[j].in_ring(big)
        for j, v in enumerate(target_ring.vars)
    ]
    graph += [p.in_ring(big) for p in source_ideal if not p.is_zero]
    graph_gb = groebner_basis(graph, order, limits)
    g = len(module_gens)
    vctx = _VCtx(ctx, g + 1)
    rows = []
    zero = big.zero()
    for i, m in enumerate(module_gens):
        row = [zero] * (g + 1)
        row[0] = m.in_ring(big)
        row[i + 1] = big.one()
        rows.append((row, False))
    for q in graph_gb:
        row = [zero] * (g + 1)
        row[0] = q
        rows.append((row, True))

    reds = []
    pairs = {}
    heap = []
    buckets = {}
    seed = []
    for row, is_graph in rows:
        pk, cf, comps = _vec_to_engine(vctx, row)
        if cf:
            seed.append((pk, cf, comps, is_graph))
    seed.sort(key=lambda s: tuple(sorted(s[1].items())))
    for pk, cf, comps, is_graph in seed:
        _vupdate(
            vctx, reds, pairs, heap, _VRed(pk, cf, comps, len(reds), is_graph), buckets
        )
    done = 0
    while heap:
        key, i, j = heappop(heap)
        if (i, j) not in pairs:
            continue
        del pairs[(i, j)]
        done += 1
        if done > limits.max_pairs:
            raise ResourceCapExceeded("module s-pair cap hit")
        deadline.check()
        spk, scf, scm = _vspoly(vctx, reds[i], reds[j])
        if not scf:
            continue
        rpk, rcf, rcm = _vnf(vctx, spk, scf, scm, buckets, limits, deadline)
        if not rcf:
            continue
        _strip(rpk, rcf)
        if len(reds) >= limits.max_basis:
            raise ResourceCapExceeded("module basis size cap hit")
        _vupdate(
            vctx, reds, pairs, heap, _VRed(rpk, rcf, rcm, len(reds)), buckets
        )

    # extract rows with no component-0 part and no source variables
    src_mask = 0
    for i, v in enumerate(big.vars):
        if v in src.index:
            src_mask |= _FMASK << (_FIELD * i)
    out = []
    seen = set()
    for r in reds:
        if not r.alive:
            continue
        pk, cf, comps = r.dicts()
        if any(c == 0 for c in comps.values()):
            continue
        if any(p & src_mask for p in pk.values()):
            continue
        cols = [dict() for _ in range(g)]
        for k in pk:
            e = ctx.unpack(pk[k])
            te = tuple(e[big.index[v]] for v in target_ring.vars)
            cols[comps[k] - 1][te] = Fraction(cf[k])
        row = tuple(Polynomial(target_ring, c) for c in cols)
        sig = tuple(tuple(sorted(p.terms.items())) for p in row)
        if sig not in seen:
            seen.add(sig)
            out.append(row)
    out.sort(
        key=lambda row: tuple(tuple(sorted(p.terms.items())) for p in row)
    )
    return out

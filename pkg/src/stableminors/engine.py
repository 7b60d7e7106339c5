"""Groebner engine over free modules.

Elements are tuples of terms (exps, pos, coeff) sorted strictly decreasing
in term-over-position order: monomials compared by the ambient order, ties
broken by position index ascending.  Ideals are the rank-1 case (pos = 0).

Buchberger runs with the sugar selection strategy and, for ideals, the
product criterion plus a conservative chain criterion.  When cofactors are
tracked (for syzygies and lifts) the criteria are disabled so that zero
reductions of the critical pairs generate the full syzygy module.
"""

from __future__ import annotations

import heapq

from .order import mono_div, mono_divides, mono_gcd_is_one, mono_lcm, mono_mul


# ---------------------------------------------------------------------------
# element primitives
# ---------------------------------------------------------------------------


def to_element(poly, pos=0):
    return tuple((m, pos, c) for m, c in poly.terms)


def from_element(ring, elt):
    from .poly import Polynomial

    terms = []
    for m, pos, c in elt:
        if pos != 0:
            raise ValueError("element does not live in a rank-1 module")
        terms.append((m, c))
    return Polynomial(ring, terms, _canonical=True)


def vector_to_element(coords):
    """Element from a list of per-position Polynomials (None allowed)."""
    terms = []
    ring = None
    for pos, p in enumerate(coords):
        if p is None or p.is_zero():
            continue
        ring = p.ring
        terms.extend((m, pos, c) for m, c in p.terms)
    if ring is None:
        return ()
    key = ring.order.key
    terms.sort(key=lambda t: key(t[0]) + (-t[1],), reverse=True)
    return tuple(terms)


def element_to_vector(ring, elt, rank):
    from .poly import Polynomial

    buckets = [[] for _ in range(rank)]
    for m, pos, c in elt:
        buckets[pos].append((m, c))
    return [Polynomial(ring, b, _canonical=True) for b in buckets]


def elt_degree(order, shifts, elt):
    """Max shifted weighted degree over terms; None for zero."""
    if not elt:
        return None
    deg = order.degree
    if shifts is None:
        return max(deg(m) for m, _, _ in elt)
    return max(deg(m) + shifts[pos] for m, pos, _ in elt)


def elt_is_homogeneous(order, shifts, elt):
    if not elt:
        return True
    deg = order.degree
    vals = {deg(m) + (shifts[pos] if shifts is not None else 0) for m, pos, _ in elt}
    return len(vals) == 1


def _axpy(field, order, a, g, mono, coeff):
    """a - coeff * x^mono * g, both canonical elements."""
    key = order.key
    fmul, fsub, fneg, fzero = field.mul, field.sub, field.neg, field.zero
    gb = [(mono_mul(m, mono), pos, fmul(c, coeff)) for m, pos, c in g]
    out = []
    i = j = 0
    na, nb = len(a), len(gb)
    while i < na and j < nb:
        ma, pa, ca = a[i]
        mb, pb, cb = gb[j]
        if ma == mb and pa == pb:
            c = fsub(ca, cb)
            if c != fzero:
                out.append((ma, pa, c))
            i += 1
            j += 1
        elif key(ma) + (-pa,) > key(mb) + (-pb,):
            out.append((ma, pa, ca))
            i += 1
        else:
            out.append((mb, pb, fneg(cb)))
            j += 1
    out.extend(a[i:])
    out.extend((m, p, fneg(c)) for m, p, c in gb[j:])
    return tuple(out)


def elt_add(field, order, a, b):
    key = order.key
    fadd, fzero = field.add, field.zero
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        ma, pa, ca = a[i]
        mb, pb, cb = b[j]
        if ma == mb and pa == pb:
            c = fadd(ca, cb)
            if c != fzero:
                out.append((ma, pa, c))
            i += 1
            j += 1
        elif key(ma) + (-pa,) > key(mb) + (-pb,):
            out.append((ma, pa, ca))
            i += 1
        else:
            out.append((mb, pb, cb))
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def elt_scale(field, elt, c):
    if c == field.zero:
        return ()
    fmul = field.mul
    return tuple((m, p, fmul(cc, c)) for m, p, cc in elt)


def elt_term_mul(field, elt, mono, c):
    fmul = field.mul
    return tuple((mono_mul(m, mono), p, fmul(cc, c)) for m, p, cc in elt)


def elt_neg(field, elt):
    fneg = field.neg
    return tuple((m, p, fneg(c)) for m, p, c in elt)


def elt_mul_poly(field, order, elt, poly):
    out = ()
    for m, c in poly.terms:
        out = elt_add(field, order, out, elt_term_mul(field, elt, m, c))
    return out


# ---------------------------------------------------------------------------
# normal form
# ---------------------------------------------------------------------------


class _Basis:
    """Bucket a basis by leading position for divisor scans."""

    __slots__ = ("elements", "coords", "buckets")

    def __init__(self, elements=(), coords=None):
        self.elements = []
        self.coords = [] if coords is not None else None
        self.buckets = {}
        if coords is not None:
            for g, c in zip(elements, coords):
                self.add(g, c)
        else:
            for g in elements:
                self.add(g)

    def add(self, g, coord=None):
        idx = len(self.elements)
        self.elements.append(g)
        if self.coords is not None:
            self.coords.append(coord)
        if g:
            self.buckets.setdefault(g[0][1], []).append(idx)
        return idx

    def find_divisor(self, mono, pos):
        for idx in self.buckets.get(pos, ()):
            if mono_divides(self.elements[idx][0][0], mono):
                return idx
        return None


def normal_form(ring, elt, basis, *, track=False):
    """Full normal form of `elt` against `basis`.

    With track=True also returns the reduction steps (basis index, mono,
    coeff) so that elt = remainder + sum coeff * x^mono * basis[idx].
    """
    field, order = ring.field, ring.order
    if not isinstance(basis, _Basis):
        basis = _Basis(basis)
    work = elt
    remainder = []
    steps = [] if track else None
    while work:
        m, pos, c = work[0]
        idx = basis.find_divisor(m, pos)
        if idx is None:
            remainder.append(work[0])
            work = work[1:]
            continue
        g = basis.elements[idx]
        q = mono_div(m, g[0][0])
        coeff = field.div(c, g[0][2])
        work = _axpy(field, order, work, g, q, coeff)
        if track:
            steps.append((idx, q, coeff))
    rem = tuple(remainder)
    if track:
        return rem, steps
    return rem


# ---------------------------------------------------------------------------
# Buchberger completion
# ---------------------------------------------------------------------------


def buchberger(
    ring,
    elements,
    *,
    shifts=None,
    max_deg=None,
    track=False,
    collect_syzygies=False,
    reduce_full=True,
):
    """Reduced Groebner basis of the submodule generated by `elements`.

    Returns the basis, or (basis, coords) when track=True, or
    (basis, coords, syzygies) when collect_syzygies=True.  Coordinates
    express each basis element in the input generators.  With max_deg the
    basis is complete only up to that shifted degree (valid for
    homogeneous input).
    """
    state = GBState(ring, shifts=shifts, track=track, collect_syzygies=collect_syzygies)
    for g in elements:
        state.add_generator(g)
    state.complete(max_deg=max_deg)
    result, coords = state.basis.elements, state.basis.coords
    if reduce_full:
        result, coords = _interreduce(ring, result, coords)
    if collect_syzygies:
        return result, coords, state.syzygies
    if track:
        return result, coords
    return result


class GBState:
    """Incremental Buchberger state supporting degree-bounded completion."""

    def __init__(self, ring, *, shifts=None, track=False, collect_syzygies=False):
        self.ring = ring
        self.shifts = shifts
        self.track = track or collect_syzygies
        self.collect_syzygies = collect_syzygies
        self.use_criteria = not self.track
        self.basis = _Basis(coords=[] if self.track else None)
        self.sugars = []
        self.pairs = []
        self.syzygies = []
        self.ngens = 0
        self._npushed = 0
        self._done = set()
        self._is_ideal = True

    def add_generator(self, g):
        """Register an input generator (tracked as unit vector ngens)."""
        k = self.ngens
        self.ngens += 1
        coord = ((self.ring.zero_mono, k, self.ring.field.one),) if self.track else None
        if not g:
            if self.collect_syzygies and coord:
                self.syzygies.append(coord)
            return
        if any(t[1] != 0 for t in g):
            self._is_ideal = False
        self._push_element(g, coord)

    def _push_element(self, g, coord):
        order = self.ring.order
        sugar = elt_degree(order, self.shifts, g) or 0
        idx = self.basis.add(g, coord)
        self.sugars.append(sugar)
        pos = g[0][1]
        for k in self.basis.buckets.get(pos, ()):
            if k == idx:
                continue
            gk = self.basis.elements[k]
            lcm = mono_lcm(gk[0][0], g[0][0])
            sug = max(
                self.sugars[k] + order.degree(mono_div(lcm, gk[0][0])),
                sugar + order.degree(mono_div(lcm, g[0][0])),
            )
            heapq.heappush(self.pairs, (sug, order.key(lcm), k, idx, self._npushed))
            self._npushed += 1
        return idx

    def _criteria_skip(self, i, j, lcm, pos):
        if not self.use_criteria:
            return False
        gi, gj = self.basis.elements[i], self.basis.elements[j]
        if self._is_ideal and mono_gcd_is_one(gi[0][0], gj[0][0]):
            self._done.add((i, j))
            return True
        # chain criterion, conservative: companions must be genuinely done
        for k in self.basis.buckets.get(pos, ()):
            if k == i or k == j:
                continue
            if not mono_divides(self.basis.elements[k][0][0], lcm):
                continue
            a = (i, k) if i < k else (k, i)
            b = (j, k) if j < k else (k, j)
            if a in self._done and b in self._done:
                return True
        return False

    def complete(self, max_deg=None):
        # heap is keyed by sugar first, so stopping at the top is exact
        field, order = self.ring.field, self.ring.order
        while self.pairs and (max_deg is None or self.pairs[0][0] <= max_deg):
            entry = heapq.heappop(self.pairs)
            sugar, _, i, j, _ = entry
            gi, gj = self.basis.elements[i], self.basis.elements[j]
            lcm = mono_lcm(gi[0][0], gj[0][0])
            pos = gi[0][1]
            if self._criteria_skip(i, j, lcm, pos):
                continue
            ui = mono_div(lcm, gi[0][0])
            uj = mono_div(lcm, gj[0][0])
            s = _axpy(
                field,
                order,
                elt_term_mul(field, gi, ui, field.inv(gi[0][2])),
                gj,
                uj,
                field.inv(gj[0][2]),
            )
            coord = None
            if self.track:
                coord = _axpy(
                    field,
                    order,
                    elt_term_mul(field, self.basis.coords[i], ui, field.inv(gi[0][2])),
                    self.basis.coords[j],
                    uj,
                    field.inv(gj[0][2]),
                )
            while s:
                m, p, c = s[0]
                idx = self.basis.find_divisor(m, p)
                if idx is None:
                    break
                g = self.basis.elements[idx]
                q = mono_div(m, g[0][0])
                coeff = field.div(c, g[0][2])
                s = _axpy(field, order, s, g, q, coeff)
                if self.track:
                    coord = _axpy(field, order, coord, self.basis.coords[idx], q, coeff)
            self._done.add((i, j))
            if not s:
                if self.collect_syzygies and coord:
                    self.syzygies.append(coord)
                continue
            self._push_element(s, coord)

    def normal_form(self, elt, max_deg=None, track=False):
        deg = elt_degree(self.ring.order, self.shifts, elt)
        self.complete(max_deg=max_deg if max_deg is not None else deg)
        return normal_form(self.ring, elt, self.basis, track=track)


def _interreduce(ring, elements, coords=None):
    """Minimalize and tail-reduce a Groebner basis; outputs sorted and monic."""
    field, order = ring.field, ring.order
    key = order.key

    def lead_key(g):
        return key(g[0][0]) + (-g[0][1],)

    idxs = [i for i, g in enumerate(elements) if g]
    idxs.sort(key=lambda i: lead_key(elements[i]))
    kept = []
    for i in idxs:
        m, p, _ = elements[i][0]
        if any(
            elements[j][0][1] == p and mono_divides(elements[j][0][0], m) for j in kept
        ):
            continue
        kept.append(i)
    out, out_coords = [], []
    for i in kept:
        other_ids = [j for j in kept if j != i]
        others = _Basis([elements[j] for j in other_ids])
        red = elements[i]
        coord = coords[i] if coords is not None else None
        head, work = red[:1], red[1:]
        new_tail = []
        while work:
            m, pos, c = work[0]
            idx = others.find_divisor(m, pos)
            if idx is None:
                new_tail.append(work[0])
                work = work[1:]
                continue
            g = others.elements[idx]
            q = mono_div(m, g[0][0])
            coeff = field.div(c, g[0][2])
            work = _axpy(field, order, work, g, q, coeff)
            if coord is not None:
                coord = _axpy(field, order, coord, coords[other_ids[idx]], q, coeff)
        red = head + tuple(new_tail)
        lc = field.inv(red[0][2])
        out.append(elt_scale(field, red, lc))
        out_coords.append(elt_scale(field, coord, lc) if coord is not None else None)
    order_idx = sorted(range(len(out)), key=lambda k: lead_key(out[k]))
    out = [out[k] for k in order_idx]
    out_coords = [out_coords[k] for k in order_idx]
    return out, (out_coords if coords is not None else None)

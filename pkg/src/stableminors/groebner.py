"""Ideals, module elements, syzygies and the ideal calculus.

Quotient-ring arithmetic is ambient arithmetic plus normal form against the
relation basis: every ideal computation over R = S/I silently adjoins the
ring relations, and every submodule computation adjoins relation multiples
of the free generators.
"""

from __future__ import annotations

from .engine import (
    GBState,
    buchberger,
    element_to_vector,
    elt_add,
    elt_degree,
    elt_term_mul,
    from_element,
    normal_form,
    to_element,
    vector_to_element,
)
from .order import BlockElimOrder
from .poly import Polynomial


class NotInImage(ValueError):
    pass


# ---------------------------------------------------------------------------
# ideals
# ---------------------------------------------------------------------------


class Ideal:
    """An ideal of a RingSpec, with a cached reduced Groebner basis.

    In quotient mode the cached basis is that of the generators together
    with the ring relations, so equality of cached bases is equality of
    ideals in the quotient.
    """

    def __init__(self, ring, gens):
        self.ring = ring
        polys = []
        seen = set()
        for g in gens:
            if isinstance(g, str):
                g = ring.parse(g)
            g = ring.reduce(g)
            if g.is_zero():
                continue
            key = g.monic().terms
            if key in seen:
                continue
            seen.add(key)
            polys.append(g)
        self.gens = tuple(polys)
        self._gb = None

    # basis -----------------------------------------------------------------

    def gb_elements(self):
        if self._gb is None:
            gens = [to_element(g) for g in self.gens]
            gens.extend(to_element(r) for r in self.ring.relations)
            self._gb = tuple(buchberger(self.ring, gens))
        return self._gb

    def groebner_basis(self):
        """Reduced Groebner basis as polynomials (relations adjoined)."""
        return [from_element(self.ring, g) for g in self.gb_elements()]

    def reduced_generators(self):
        """Canonical display generators: basis elements nonzero in the quotient."""
        out = []
        seen = set()
        for g in self.gb_elements():
            p = self.ring.reduce(from_element(self.ring, g))
            if not p.is_zero() and p.terms not in seen:
                seen.add(p.terms)
                out.append(p)
        return out

    # predicates ------------------------------------------------------------

    def contains_poly(self, f):
        if isinstance(f, str):
            f = self.ring.parse(f)
        return not normal_form(self.ring, to_element(f), list(self.gb_elements()))

    def contains(self, other):
        return all(self.contains_poly(g) for g in other.gens)

    def is_zero(self):
        return not self.reduced_generators()

    def is_unit(self):
        return any(len(g) == 1 and not any(g[0][0]) for g in self.gb_elements())

    def normal_form(self, f):
        if isinstance(f, str):
            f = self.ring.parse(f)
        return from_element(
            self.ring, normal_form(self.ring, to_element(f), list(self.gb_elements()))
        )

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        if self.ring.signature != other.ring.signature:
            return False
        return self.gb_elements() == other.gb_elements()

    def __hash__(self):
        return hash((self.ring.signature, self.gb_elements()))

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.reduced_generators()) or "0"
        return f"({gens})"

    # arithmetic ------------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other):
        self._check(other)
        prods = [a * b for a in self.gens for b in other.gens]
        return Ideal(self.ring, Ideal(self.ring, prods).reduced_generators())

    def power(self, n):
        if n < 0:
            raise ValueError("negative ideal power")
        result = Ideal(self.ring, [self.ring.one()])
        for _ in range(n):
            result = result * self
        return result

    def intersect(self, other):
        """Intersection via the  t*A + (1-t)*B  elimination construction."""
        self._check(other)
        ring = self.ring
        ext = ring.extend(("_t",), (1,))
        ext.order = BlockElimOrder(ext.weights, nelim=1)
        t = ext.var(ext.nvars - 1)
        one = ext.one()
        gens = []
        for g in list(self.gens) + list(ring.relations):
            gens.append(t * ext.map_poly(g))
        for g in list(other.gens) + list(ring.relations):
            gens.append((one - t) * ext.map_poly(g))
        gb = buchberger(ext, [to_element(g) for g in gens])
        out = []
        for e in gb:
            p = from_element(ext, e)
            if all(m[-1] == 0 for m, _ in p.terms):
                out.append(Polynomial(ring, [(m[:-1], c) for m, c in p.terms]))
        return Ideal(ring, out)

    def colon_poly(self, f):
        """(self : f) computed in the ambient ring, image taken in R."""
        if isinstance(f, str):
            f = self.ring.parse(f)
        ring = self.ring
        if ring.reduce(f).is_zero():
            return unit_ideal(ring)
        ambient = ring.ambient()
        amb_gens = [_reinterpret(ambient, g) for g in list(self.gens) + list(ring.relations)]
        af = _reinterpret(ambient, f)
        inter = Ideal(ambient, amb_gens).intersect(Ideal(ambient, [af]))
        out = []
        for g in inter.gens:
            out.append(_reinterpret(ring, _exact_divide(g, af)))
        return Ideal(ring, out)

    def colon(self, other):
        if isinstance(other, (Polynomial, str)):
            return self.colon_poly(other)
        result = None
        for f in other.gens:
            c = self.colon_poly(f)
            result = c if result is None else result.intersect(c)
        if result is None:
            raise ValueError("colon by the zero ideal")
        return result

    def _check(self, other):
        if self.ring.signature != other.ring.signature or self.ring.relations != other.ring.relations:
            raise ValueError("ideals over different rings")


def ideal_ops(a, b, op, n=None):
    """Dispatch for the binary ideal calculus; `b` may be None for power."""
    if op == "sum":
        return a + b
    if op == "product":
        return a * b
    if op == "power":
        return a.power(n)
    if op == "intersection":
        return a.intersect(b)
    if op == "colon":
        return a.colon(b)
    if op == "equality":
        return a == b
    if op == "containment":
        return a.contains(b)
    raise ValueError(f"unknown ideal op {op!r}")


def _reinterpret(ring, p):
    """Move a polynomial between rings sharing variable names and weights."""
    return Polynomial(ring, list(p.terms))


def _exact_divide(g, f):
    """g / f in a polynomial ring, raising if the division is not exact."""
    ring = g.ring
    rem, steps = normal_form(ring, to_element(g), [to_element(f)], track=True)
    if rem:
        raise ValueError("division is not exact")
    return Polynomial(ring, [(mono, coeff) for _, mono, coeff in steps])


def unit_ideal(ring):
    return Ideal(ring, [ring.one()])


def zero_ideal(ring):
    return Ideal(ring, [])


def maximal_ideal(ring):
    """The irrelevant maximal ideal (all variables)."""
    return Ideal(ring, ring.gens())


def radical_membership(f, ideal):
    """Rabinowitsch trick: f lies in rad(ideal) iff 1 in (ideal, f*w - 1)."""
    ring = ideal.ring
    if isinstance(f, str):
        f = ring.parse(f)
    if ring.reduce(f).is_zero():
        return True
    ext = ring.extend(("_w",), (1,))
    gens = [ext.map_poly(g) for g in list(ideal.gens) + list(ring.relations)]
    gens.append(ext.map_poly(f) * ext.var(ext.nvars - 1) - ext.one())
    gb = buchberger(ext, [to_element(g) for g in gens])
    return any(len(g) == 1 and not any(g[0][0]) for g in gb)


# ---------------------------------------------------------------------------
# module elements, syzygies, lifting
# ---------------------------------------------------------------------------


def _relation_columns(ring, rank):
    out = []
    for pos in range(rank):
        for r in ring.relations:
            out.append(to_element(r, pos))
    return out


def reduce_element_mod_relations(ring, elt):
    """Normal form of every positional coordinate against the ring relations.

    Works position by position on small rank-1 elements, so it stays cheap
    on vectors in free modules of very large rank.
    """
    if not ring.relations or not elt:
        return elt
    rel_gb = list(ring.relation_gb())
    buckets = {}
    for m, pos, c in elt:
        buckets.setdefault(pos, []).append((m, 0, c))
    out = []
    for pos, terms in buckets.items():
        red = normal_form(ring, tuple(terms), rel_gb)
        out.extend((m, pos, c) for m, _, c in red)
    key = ring.order.key
    out.sort(key=lambda t: key(t[0]) + (-t[1],), reverse=True)
    return tuple(out)


def module_gb(ring, columns, shifts=None, max_deg=None):
    """Reduced Groebner basis of a submodule of a free module over R.

    `columns` are engine elements; ring relations are adjoined at every
    position, so equality of outputs is equality of submodules over the
    quotient.
    """
    rank = len(shifts) if shifts is not None else 1 + max(
        (t[1] for col in columns for t in col), default=-1
    )
    gens = list(columns) + _relation_columns(ring, rank)
    return buchberger(ring, gens, shifts=shifts, max_deg=max_deg)


def module_contains(ring, gb, elt):
    return not normal_form(ring, elt, list(gb))


def syzygy_module(ring, columns, target_shifts=None, minimalize=True):
    """Generators of the kernel of the map defined by `columns` over R.

    Columns are engine elements of a free module with the given shifts.
    Relation multiples are adjoined internally and projected away, so the
    result is a generating set of syzygies over the quotient ring.
    """
    ncols = len(columns)
    rank = len(target_shifts) if target_shifts is not None else 1 + max(
        (t[1] for col in columns for t in col), default=-1
    )
    gens = list(columns) + _relation_columns(ring, rank)
    _, _, raw = buchberger(
        ring,
        gens,
        shifts=target_shifts,
        collect_syzygies=True,
        reduce_full=False,
    )
    out = []
    seen = set()
    for syz in raw:
        proj = tuple(t for t in syz if t[1] < ncols)
        proj = reduce_element_mod_relations(ring, proj)
        if proj and proj not in seen:
            seen.add(proj)
            out.append(proj)
    if minimalize:
        source_shifts = _column_degrees(ring, columns, target_shifts)
        out = minimal_generators(ring, out, source_shifts)
    return out


def _column_degrees(ring, columns, target_shifts):
    degs = []
    for col in columns:
        d = elt_degree(ring.order, target_shifts, col)
        degs.append(d if d is not None else 0)
    return degs


def minimal_generators(ring, elements, shifts=None):
    """Prune to a minimal generating set (graded greedy by degree)."""
    order = ring.order
    rank = len(shifts) if shifts is not None else 1 + max(
        (t[1] for e in elements for t in e), default=-1
    )
    state = GBState(ring, shifts=shifts)
    for rel_col in _relation_columns(ring, rank):
        state.add_generator(rel_col)

    def sort_key(idx):
        e = elements[idx]
        d = elt_degree(order, shifts, e)
        lead = e[0]
        return (d if d is not None else 0, len(e), order.key(lead[0]) + (-lead[1],), idx)

    kept = []
    for idx in sorted((i for i in range(len(elements)) if elements[i]), key=sort_key):
        e = elements[idx]
        d = elt_degree(order, shifts, e)
        homogeneous = all(
            order.degree(m) + (shifts[pos] if shifts else 0) == d for m, pos, _ in e
        )
        rem = state.normal_form(e, max_deg=d if homogeneous else None)
        if rem:
            kept.append(e)
            state.add_generator(e)
    return kept


def lift_through(ring, target, columns, target_shifts=None):
    """Solve M * w = target over R, M given by columns of a free module.

    Returns w as an engine element over the column indices.  Raises
    NotInImage when the normal form of the target is nonzero.
    """
    ncols = len(columns)
    if not target:
        return ()
    rank = len(target_shifts) if target_shifts is not None else 1 + max(
        (t[1] for col in list(columns) + [target] for t in col), default=-1
    )
    gens = list(columns) + _relation_columns(ring, rank)
    gb, coords = buchberger(ring, gens, shifts=target_shifts, track=True)
    rem, steps = normal_form(ring, target, list(gb), track=True)
    if rem:
        raise NotInImage("vector is not in the image of the matrix")
    field, order = ring.field, ring.order
    acc = ()
    for idx, mono, coeff in steps:
        acc = elt_add(field, order, acc, elt_term_mul(field, coords[idx], mono, coeff))
    proj = tuple(t for t in acc if t[1] < ncols)
    return reduce_element_mod_relations(ring, proj)


def is_regular_sequence(ambient_ring, polys):
    """Koszul H_1 check: all syzygies of the sequence are Koszul syzygies."""
    if any(p.is_zero() for p in polys):
        return False
    if ambient_ring.relations:
        raise ValueError("regular-sequence check runs in the ambient ring")
    cols = [to_element(p) for p in polys]
    syz = syzygy_module(ambient_ring, cols, minimalize=False)
    n = len(polys)
    koszul = []
    for i in range(n):
        for j in range(i + 1, n):
            vec = [ambient_ring.zero()] * n
            vec[i] = polys[j]
            vec[j] = -polys[i]
            koszul.append(vector_to_element(vec))
    gb = buchberger(ambient_ring, koszul) if koszul else []
    return all(not normal_form(ambient_ring, s, gb) for s in syz)

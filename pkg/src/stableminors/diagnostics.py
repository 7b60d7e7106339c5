"""Ring and module diagnostics for graded quotient rings.

Socle, Loewy length and order apply to Artinian quotients; the conductor is
computed for numerical-semigroup (monomial curve) presentations from the
Frobenius number; the Jacobian ideal is the ideal of height-sized minors of
the Jacobian matrix of the relations.
"""

from __future__ import annotations

import heapq
from itertools import combinations

from . import linalg
from .complexes import FreeMap
from .groebner import Ideal, maximal_ideal, unit_ideal, zero_ideal
from .minors import ideal_of_minors
from .poly import Polynomial
from .ring import RingSpec


class NotApplicable(ValueError):
    pass


# ---------------------------------------------------------------------------
# dimension / Artinian detection
# ---------------------------------------------------------------------------


def _supported_in(mono, subset):
    return all(e == 0 or i in subset for i, e in enumerate(mono))


def krull_dimension(ring):
    if not ring.relations:
        return ring.nvars
    leads = [g[0][0] for g in ring.relation_gb()]
    n = ring.nvars
    best = 0
    for size in range(n, 0, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if not any(_supported_in(lt, s) for lt in leads):
                return size
    return best


def is_artinian(ring):
    return krull_dimension(ring) == 0


def artinian_socle_degree_bound(ring):
    """Least D with R_d = 0 for all d > D, found by a vanishing-window scan."""
    if not is_artinian(ring):
        raise NotApplicable("ring is not Artinian")
    w_max = max(ring.weights)
    d = 0
    last_nonzero = 0
    empty_run = 0
    while empty_run < w_max:
        d += 1
        if linalg.slice_dimension(ring, d):
            last_nonzero = d
            empty_run = 0
        else:
            empty_run += 1
        if d > 10000:
            raise AssertionError("runaway Artinian degree scan")
    return last_nonzero


# ---------------------------------------------------------------------------
# socle / Loewy / order
# ---------------------------------------------------------------------------


def socle(ring):
    """soc(R) = (0 : m), computed as an intersection of variable colons."""
    if not is_artinian(ring):
        raise NotApplicable("socle requires an Artinian quotient")
    return zero_ideal(ring).colon(maximal_ideal(ring))


def loewy_length(ring):
    """Least l with m^l = 0."""
    if not is_artinian(ring):
        raise NotApplicable("Loewy length requires an Artinian quotient")
    m = maximal_ideal(ring)
    power = unit_ideal(ring)
    l = 0
    cap = sum(linalg.slice_dimension(ring, d) for d in range(artinian_socle_degree_bound(ring) + 1))
    while not power.is_zero():
        power = power * m
        l += 1
        if l > cap + 1:
            raise AssertionError("Loewy scan exceeded the length of the ring")
    return l


def order_in_maximal_ideal(ideal):
    """ord(I): the largest k with I inside m^k; None for the zero ideal."""
    ring = ideal.ring
    if ideal.is_zero():
        return None
    m = maximal_ideal(ring)
    gens = ideal.reduced_generators()
    min_w = min(ring.weights)
    cap = max(g.weighted_degree() for g in gens) // min_w + 1
    k = 0
    power = unit_ideal(ring)
    while k <= cap:
        nxt = power * m
        if all(nxt.contains_poly(g) for g in gens):
            power = nxt
            k += 1
        else:
            break
    return k


# ---------------------------------------------------------------------------
# Jacobian ideal
# ---------------------------------------------------------------------------


def jacobian_ideal(ring, height=None):
    """Ideal of c x c minors of the Jacobian of the relations, c = height."""
    if not ring.relations:
        return unit_ideal(ring)
    c = height if height is not None else ring.nvars - krull_dimension(ring)
    if c < 1:
        return unit_ideal(ring)
    ambient = ring.ambient()
    rels = [Polynomial(ambient, list(r.terms)) for r in ring.relations]
    cells = {}
    for i, r in enumerate(rels):
        for j in range(ambient.nvars):
            d = r.derivative(j)
            if not d.is_zero():
                cells[(i, j)] = d
    tshifts = tuple(-r.homogeneous_degree() for r in rels)
    sshifts = tuple(-w for w in ambient.weights)
    jac = FreeMap(ambient, cells, tshifts, sshifts, reduce=False)
    minors = ideal_of_minors(jac, c, exhaustive=True)
    return Ideal(ring, [Polynomial(ring, list(g.terms)) for g in minors.gens])


# ---------------------------------------------------------------------------
# conductor of a monomial curve
# ---------------------------------------------------------------------------


def _is_monomial_curve(ring):
    if not ring.relations:
        return ring.nvars == 1
    if krull_dimension(ring) != 1:
        return False
    t_ring = RingSpec(ring.field, ("t",), (1,))
    images = [t_ring.var(0, w) for w in ring.weights]
    return all(r.substitute(images).is_zero() for r in ring.relations)


def frobenius_number(generators):
    """Largest integer not in the numerical semigroup (gcd must be 1)."""
    import math

    gens = sorted(set(generators))
    if math.gcd(*gens) != 1 if len(gens) > 1 else gens[0] != 1:
        raise NotApplicable("semigroup generators are not coprime")
    a0 = gens[0]
    if a0 == 1:
        return -1
    # Apery set by Dijkstra on residues mod a0
    INF = None
    dist = [INF] * a0
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        d, r = heapq.heappop(heap)
        if dist[r] is not None and d > dist[r]:
            continue
        for a in gens[1:]:
            nd = d + a
            nr = nd % a0
            if dist[nr] is None or nd < dist[nr]:
                dist[nr] = nd
                heapq.heappush(heap, (nd, nr))
    if any(d is None for d in dist):
        raise NotApplicable("semigroup generators are not coprime")
    return max(dist) - a0


def conductor_ideal(ring):
    """Conductor of a numerical-semigroup ring k[t^{a_1}, ..., t^{a_n}].

    Generated by the monomials of semigroup degree F+1 .. F+max(a_i), with
    F the Frobenius number of the weights.
    """
    if not _is_monomial_curve(ring):
        raise NotApplicable("conductor is computed for monomial curves only")
    F = frobenius_number(ring.weights)
    if F < 0:
        return unit_ideal(ring)
    gens = []
    for d in range(F + 1, F + max(ring.weights) + 1):
        for mono in ring.monomials_of_degree(d):
            gens.append(Polynomial.monomial(ring, mono))
    return Ideal(ring, gens)


# ---------------------------------------------------------------------------
# Koh-Lee s-invariant of a module
# ---------------------------------------------------------------------------


def s_invariant(presentation):
    """s(N) = inf{t >= 1 : soc(N) not inside m^t N} for N = coker(presentation).

    Computed degreewise on graded slices; None when the socle lies in every
    power (s = infinity), which for nonzero finite-length N cannot happen.
    """
    ring = presentation.ring
    if not is_artinian(ring):
        raise NotApplicable("s-invariant implemented for finite-length modules")
    bound = artinian_socle_degree_bound(ring)
    shifts = presentation.target_shifts
    lo_d = min(shifts) if shifts else 0
    hi_d = max(shifts) + bound if shifts else 0
    degrees = range(lo_d, hi_d + 1)
    field = ring.field

    slice_cache = {}

    def slice_basis(d):
        if d not in slice_cache:
            slice_cache[d] = linalg.module_slice_basis(ring, shifts, d)
        return slice_cache[d]

    def image_rows(d):
        return linalg.map_slice_rows(presentation, d, source_basis=None, target_basis=slice_basis(d))

    # socle vectors per degree: v with x_i v in im(d1) for all i
    t = 1
    while t <= bound + 1:
        contained = True
        for d in degrees:
            basis = slice_basis(d)
            if not basis:
                continue
            soc = _socle_vectors(ring, presentation, d, slice_basis)
            if not soc:
                continue
            span = _power_span_rows(ring, presentation, d, t, slice_basis)
            span.extend(image_rows(d))
            base_rank = linalg.matrix_rank(span, field)
            aug = span + soc
            if linalg.matrix_rank(aug, field) != base_rank:
                contained = False
                break
        if not contained:
            return t
        t += 1
    return None


def _socle_vectors(ring, presentation, d, slice_basis):
    field = ring.field
    basis = slice_basis(d)
    index = {bm: k for k, bm in enumerate(basis)}
    rows = []
    # stack multiplication-by-variable maps into the quotient slices
    blocks = []
    offset = 0
    for i in range(ring.nvars):
        target_d = d + ring.weights[i]
        tbasis = slice_basis(target_d)
        tindex = {bm: k for k, bm in enumerate(tbasis)}
        img = linalg.map_slice_rows(presentation, target_d, target_basis=tbasis)
        img_rank_rows = [dict(r) for r in img]
        blocks.append((i, target_d, tbasis, tindex, img_rank_rows))
        offset += len(tbasis)
    # vector space of candidates: solve for v with x_i v in image for all i
    # build the quotient maps: x_i action then reduce mod image via elimination
    candidates = []
    for k, (pos, mono) in enumerate(basis):
        candidates.append(k)
    # represent constraint matrix: for each block, rows = image basis + x_i*v coords
    # compute kernel of composite map v -> (x_i v mod im)_i by rank arguments
    # build combined matrix [A | b_k] style: use linear algebra over columns = candidates
    ncand = len(basis)
    constraint_rows = []
    col_offset = 0
    for i, target_d, tbasis, tindex, img_rows in blocks:
        # eliminate image inside target slice: projection via row reduction
        proj_rows = [dict(r) for r in img_rows]
        rank, pivots = linalg.row_reduce(proj_rows, field)
        pivot_set = set(pivots)
        # map each candidate basis vector through x_i, reduce by image pivots
        reduced_cols = []
        for k, (pos, mono) in enumerate(basis):
            from .order import mono_mul

            var_mono = tuple(1 if v == i else 0 for v in range(ring.nvars))
            prod = Polynomial.monomial(ring, mono_mul(mono, var_mono))
            prod = ring.reduce(prod)
            vec = {}
            for m, c in prod.terms:
                idx = tindex.get((pos, m))
                if idx is not None:
                    vec[idx] = c
            # reduce against image rows
            for prow in proj_rows:
                if not prow:
                    continue
                piv = min(prow)
                c = vec.get(piv)
                if c is not None:
                    for kk, vv in prow.items():
                        nv = field.sub(vec.get(kk, field.zero), field.mul(c, vv))
                        if nv == field.zero:
                            vec.pop(kk, None)
                        else:
                            vec[kk] = nv
            reduced_cols.append(vec)
        # constraints: reduced image of v must vanish: rows indexed by target coords
        nrows = len(tbasis)
        for ridx in range(nrows):
            row = {}
            for k, vec in enumerate(reduced_cols):
                c = vec.get(ridx)
                if c is not None:
                    row[k] = c
            if row:
                constraint_rows.append(row)
    kernel = linalg.kernel_basis(constraint_rows, ncand, field)
    return [dict(v) for v in kernel]


def _power_span_rows(ring, presentation, d, t, slice_basis):
    """Rows spanning (m^t * F0)_d inside the degree-d slice coordinates."""
    from .order import monomials_up_to_degree

    field = ring.field
    basis = slice_basis(d)
    index = {bm: k for k, bm in enumerate(basis)}
    rows = []
    # monomials with exponent sum exactly t
    monos = [m for m in _monomials_expsum(ring, t)]
    shifts = presentation.target_shifts
    for mono in monos:
        w = ring.order.degree(mono)
        src_d = d - w
        for pos, s in enumerate(shifts):
            for m0 in linalg.standard_monomials(ring, src_d - s):
                from .order import mono_mul

                prod = ring.reduce(Polynomial.monomial(ring, mono_mul(m0, mono)))
                row = {}
                for m, c in prod.terms:
                    idx = index.get((pos, m))
                    if idx is not None:
                        row[idx] = c
                if row:
                    rows.append(row)
    return rows


def _monomials_expsum(ring, t):
    """All exponent tuples with total exponent sum exactly t."""
    n = ring.nvars
    out = []

    def rec(i, rem, acc):
        if i == n - 1:
            out.append(tuple(acc + [rem]))
            return
        for e in range(rem + 1):
            rec(i + 1, rem - e, acc + [e])

    rec(0, t, [])
    return out


def ring_diagnostics(ring, ideal=None, module_presentation=None, height=None):
    """Bundle of the standard diagnostics; inapplicable entries come back None."""
    out = {}
    artinian = is_artinian(ring)
    out["dimension"] = krull_dimension(ring)
    out["artinian"] = artinian
    if artinian:
        out["socle"] = socle(ring)
        out["loewy_length"] = loewy_length(ring)
    else:
        out["socle"] = None
        out["loewy_length"] = None
    out["jacobian_ideal"] = jacobian_ideal(ring, height=height) if ring.relations else unit_ideal(ring)
    try:
        out["conductor"] = conductor_ideal(ring)
    except NotApplicable:
        out["conductor"] = None
    out["ord"] = order_in_maximal_ideal(ideal) if ideal is not None else None
    if module_presentation is not None and artinian:
        out["s_invariant"] = s_invariant(module_presentation)
    else:
        out["s_invariant"] = None
    return out

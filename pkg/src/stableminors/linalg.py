"""Exact sparse linear algebra on graded slices.

A weighted-graded quotient ring has finite-dimensional graded pieces; maps
of free modules restrict to finite matrices on each slice.  These routines
provide the independent dense-slice oracle used to cross-check Groebner
computations: ranks, kernels, and degreewise homology.
"""

from __future__ import annotations

from .engine import normal_form, to_element
from .order import mono_divides, monomials_of_degree


def row_reduce(rows, field):
    """In-place sparse Gauss elimination; returns (rank, pivot columns).

    Rows are dicts column -> coefficient.  Pivots are chosen in ascending
    column order from the sparsest available row.
    """
    rank = 0
    pivots = []
    active = [r for r in rows if r]
    while active:
        col = min(min(r) for r in active)
        candidates = [r for r in active if col in r]
        pivot_row = min(candidates, key=len)
        pivots.append(col)
        rank += 1
        pc = pivot_row[col]
        inv = field.inv(pc)
        for k in list(pivot_row):
            pivot_row[k] = field.mul(pivot_row[k], inv)
        nxt = []
        for r in active:
            if r is pivot_row:
                continue
            c = r.get(col)
            if c is not None:
                for k, v in pivot_row.items():
                    nv = field.sub(r.get(k, field.zero), field.mul(c, v))
                    if nv == field.zero:
                        r.pop(k, None)
                    else:
                        r[k] = nv
            if r:
                nxt.append(r)
        active = nxt
    return rank, pivots


def matrix_rank(rows, field):
    return row_reduce([dict(r) for r in rows], field)[0]


def kernel_basis(rows, ncols, field):
    """Right kernel of the matrix given by sparse rows, as sparse vectors."""
    work = [dict(r) for r in rows if r]
    # full RREF with back substitution
    reduced = []
    for col in range(ncols):
        pivot = None
        for r in work:
            if r and min(r) == col:
                pivot = r
                break
        if pivot is None:
            continue
        inv = field.inv(pivot[col])
        for k in list(pivot):
            pivot[k] = field.mul(pivot[k], inv)
        for r in work:
            if r is pivot:
                continue
            c = r.get(col)
            if c is None:
                continue
            for k, v in pivot.items():
                nv = field.sub(r.get(k, field.zero), field.mul(c, v))
                if nv == field.zero:
                    r.pop(k, None)
                else:
                    r[k] = nv
        reduced.append(pivot)
        work = [r for r in work if r]
    pivot_cols = {min(r): r for r in reduced}
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        vec = {fc: field.one}
        for pc, prow in pivot_cols.items():
            c = prow.get(fc)
            if c is not None:
                vec[pc] = field.neg(c)
        basis.append(vec)
    return basis


def standard_monomials(ring, degree):
    """Monomials spanning the degree-d slice of the quotient ring."""
    lead = [g[0][0] for g in ring.relation_gb()] if ring.relations else []
    out = []
    for m in monomials_of_degree(ring.weights, degree):
        if not any(mono_divides(lt, m) for lt in lead):
            out.append(m)
    return out


def slice_dimension(ring, degree):
    return len(standard_monomials(ring, degree))


def module_slice_basis(ring, shifts, degree):
    """Basis of the degree-d slice of a free module with the given shifts."""
    out = []
    for pos, s in enumerate(shifts):
        for m in standard_monomials(ring, degree - s):
            out.append((pos, m))
    return out


def poly_slice_coords(ring, p, basis_index):
    """Coordinates of a (reduced) polynomial on a standard-monomial index."""
    coords = {}
    for m, c in p.terms:
        coords[basis_index[m]] = c
    return coords


def map_slice_rows(freemap, degree, source_basis=None, target_basis=None):
    """The slice of a FreeMap in a fixed degree, as sparse rows.

    Rows are indexed by the source slice basis (so this is the transpose of
    the usual matrix-acting-on-columns picture; only ranks and kernels are
    consumed downstream, computed accordingly).
    """
    ring = freemap.ring
    if source_basis is None:
        source_basis = module_slice_basis(ring, freemap.source_shifts, degree)
    if target_basis is None:
        target_basis = module_slice_basis(ring, freemap.target_shifts, degree)
    target_index = {pm: i for i, pm in enumerate(target_basis)}
    rel_gb = list(ring.relation_gb()) if ring.relations else []
    by_col = freemap.by_column()
    rows = []
    for (spos, smono) in source_basis:
        row = {}
        for tpos, entry in by_col.get(spos, ()):
            shifted = entry.term_mul(smono, ring.field.one)
            if rel_gb:
                shifted_elt = normal_form(ring, to_element(shifted), rel_gb)
                items = [(m, c) for m, _, c in shifted_elt]
            else:
                items = list(shifted.terms)
            for m, c in items:
                j = target_index.get((tpos, m))
                if j is None:
                    raise AssertionError("slice image leaves the expected degree")
                prev = row.get(j)
                row[j] = c if prev is None else ring.field.add(prev, c)
                if row[j] == ring.field.zero:
                    del row[j]
        rows.append(row)
    return rows


def slice_image_rank(freemap, degree):
    rows = map_slice_rows(freemap, degree)
    return matrix_rank(rows, freemap.ring.field)


def slice_kernel_dimension(freemap, degree):
    source_basis = module_slice_basis(freemap.ring, freemap.source_shifts, degree)
    rows = map_slice_rows(freemap, degree, source_basis=source_basis)
    return len(source_basis) - matrix_rank(rows, freemap.ring.field)


def slice_kernel_vectors(freemap, degree):
    """Kernel of the degree-d slice, as module vectors of polynomials."""
    from .poly import Polynomial

    ring = freemap.ring
    source_basis = module_slice_basis(ring, freemap.source_shifts, degree)
    rows = map_slice_rows(freemap, degree, source_basis=source_basis)
    # transpose: rows indexed by target coordinates, columns by source ones
    ncols = len(source_basis)
    nrows = 0
    for row in rows:
        for j in row:
            nrows = max(nrows, j + 1)
    matrix = [dict() for _ in range(nrows)]
    for i, row in enumerate(rows):
        for j, c in row.items():
            matrix[j][i] = c
    kern = kernel_basis(matrix, ncols, ring.field)
    out = []
    for vec in kern:
        coords = [[] for _ in range(freemap.source_rank)]
        for idx, c in vec.items():
            pos, mono = source_basis[idx]
            coords[pos].append((mono, c))
        out.append([Polynomial(ring, terms) for terms in coords])
    return out


def homology_dimension(d_i, d_next, degree):
    """dim of (ker d_i / im d_next) in one slice degree; maps must compose."""
    ker = slice_kernel_dimension(d_i, degree)
    img = slice_image_rank(d_next, degree)
    return ker - img

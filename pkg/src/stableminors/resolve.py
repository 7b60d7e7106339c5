"""Minimal graded free resolutions by iterated syzygies.

resolve() accepts a homogeneous presentation (FreeMap or Ideal), minimalizes
it by unit-pivot splitting and redundant-column pruning, then repeatedly
takes syzygies, pruning each generating set to a minimal one.  Every
differential of the output has entries in the irrelevant maximal ideal and
consecutive differentials compose to zero exactly.
"""

from __future__ import annotations

from .complexes import ChainComplex, FreeMap, HomogeneityError
from .engine import elt_degree
from .groebner import Ideal, minimal_generators, syzygy_module
from .poly import Polynomial


def presentation_of_cyclic(ring, gens):
    """Presentation of R/(gens): a single row of the generators."""
    gens = [ring.parse(g) if isinstance(g, str) else ring.reduce(g) for g in gens]
    gens = [g for g in gens if not g.is_zero()]
    cells = {(0, j): g for j, g in enumerate(gens)}
    shifts = tuple(_degree_of(g) for g in gens)
    return FreeMap(ring, cells, (0,), shifts, reduce=False)


def presentation_of_ideal_module(ring, gens):
    """Presentation of the ideal (gens) viewed as a module: its syzygy matrix."""
    gens = [ring.parse(g) if isinstance(g, str) else ring.reduce(g) for g in gens]
    gens = [g for g in gens if not g.is_zero()]
    row = presentation_of_cyclic(ring, gens)
    cols = row.columns_as_elements()
    syz = syzygy_module(ring, cols, target_shifts=row.target_shifts)
    return FreeMap.from_columns(ring, syz, row.source_shifts)


def _degree_of(p):
    d = p.homogeneous_degree()
    if d is None:
        raise HomogeneityError(f"{p} is not homogeneous")
    return d


def minimalize_presentation(fm):
    """Split unit pivots and drop redundant columns; cokernel is unchanged."""
    ring = fm.ring
    rows = fm.dense_rows()
    tshifts = list(fm.target_shifts)
    sshifts = list(fm.source_shifts)
    zero = ring.field.zero
    changed = True
    while changed:
        changed = False
        pivot = None
        for i, row in enumerate(rows):
            for j, e in enumerate(row):
                if not e.is_zero() and e.is_constant() and e.constant_coefficient() != zero:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        pi, pj = pivot
        u = rows[pi][pj].constant_coefficient()
        ncols = len(sshifts)
        for j in range(ncols):
            if j == pj:
                continue
            factor = rows[pi][j]
            if factor.is_zero():
                continue
            scale = factor.scale(ring.field.div(ring.field.one, u))
            for i in range(len(rows)):
                rows[i][j] = ring.reduce(rows[i][j] - rows[i][pj] * scale)
        rows = [r for i, r in enumerate(rows) if i != pi]
        tshifts.pop(pi)
        for i in range(len(rows)):
            rows[i].pop(pj)
        sshifts.pop(pj)
        changed = True
    cleaned = FreeMap(ring, rows, tuple(tshifts), tuple(sshifts), reduce=False)
    if cleaned.source_rank == 0:
        return cleaned
    cols = cleaned.columns_as_elements()
    keep_elts = minimal_generators(ring, [c for c in cols if c], shifts=tuple(tshifts))
    return FreeMap.from_columns(ring, keep_elts, tuple(tshifts))


def resolve(presentation, ring=None, cutoff=10):
    """Minimal free resolution of coker(presentation) out to homological cutoff.

    Accepts a FreeMap, an Ideal (resolving R/I), or a list of generator
    polynomials (also resolving the cyclic quotient).  The result is a
    ChainComplex on [0, cutoff] with F_0 the minimal cover of the module.
    """
    if isinstance(presentation, Ideal):
        ring = presentation.ring
        fm = presentation_of_cyclic(ring, presentation.gens)
    elif isinstance(presentation, FreeMap):
        ring = presentation.ring
        fm = presentation
    else:
        if ring is None:
            raise ValueError("ring required when passing raw generators")
        fm = presentation_of_cyclic(ring, list(presentation))
    fm.check_homogeneous()
    fm = minimalize_presentation(fm)
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")

    shifts = {0: tuple(fm.target_shifts)}
    maps = {}
    if cutoff >= 1 and fm.source_rank:
        maps[1] = fm
        shifts[1] = tuple(fm.source_shifts)
        current = fm
        for i in range(2, cutoff + 1):
            cols = current.columns_as_elements()
            syz = syzygy_module(ring, cols, target_shifts=current.target_shifts)
            if not syz:
                shifts[i] = ()
                break
            nxt = FreeMap.from_columns(ring, syz, current.source_shifts)
            if not nxt.is_minimal():
                raise AssertionError("syzygy step produced a non-minimal differential")
            maps[i] = nxt
            shifts[i] = tuple(nxt.source_shifts)
            current = nxt
    for i in range(0, cutoff + 1):
        shifts.setdefault(i, ())
    return ChainComplex(ring, 0, shifts, maps, check=False)


def betti_and_poincare(complex_, cutoff=None):
    """Betti table and truncated Poincare polynomial of a minimal complex."""
    if not complex_.is_minimal():
        raise ValueError("complex is not minimal")
    hi = complex_.hi if cutoff is None else min(cutoff, complex_.hi)
    betti = {i: complex_.rank(i) for i in range(complex_.lo, hi + 1)}
    graded = {}
    for i in range(complex_.lo, hi + 1):
        counts = {}
        for s in complex_.shifts.get(i, ()):
            counts[s] = counts.get(s, 0) + 1
        graded[i] = dict(sorted(counts.items()))
    poincare = " + ".join(
        (f"{b}" if i == 0 else (f"t^{i}" if b == 1 else f"{b}*t^{i}"))
        for i, b in betti.items()
        if b
    )
    return {"betti": betti, "graded_betti": graded, "poincare": poincare or "0"}


def koszul_h1_dim(ring):
    """Minimal number of generators of the relation ideal (= dim_k H_1 of the
    Koszul complex on the variables)."""
    if not ring.relations:
        return 0
    from .engine import to_element

    ambient = ring.ambient()
    from .groebner import _reinterpret

    elems = [to_element(_reinterpret(ambient, r)) for r in ring.relations]
    return len(minimal_generators(ambient, elems))

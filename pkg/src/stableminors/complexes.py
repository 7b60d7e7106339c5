"""Graded maps of free modules and chain complexes.

Homological indexing: a ChainComplex stores free modules C_i for lo <= i <= hi
and differentials d_i : C_i -> C_{i-1} for lo < i <= hi.  Shifting by one
negates the differential.  A map is homogeneous when entry (i, j) is zero or
homogeneous of degree source_shift[j] - target_shift[i].

FreeMap stores nonzero cells sparsely; resolutions over short Artinian rings
reach ranks in the tens of thousands with only a couple of entries per column.
"""

from __future__ import annotations

from . import linalg
from .engine import vector_to_element
from .poly import Polynomial


class HomogeneityError(ValueError):
    pass


class FreeMap:
    """A sparse matrix over a RingSpec between free modules with degree shifts."""

    def __init__(self, ring, entries, target_shifts=None, source_shifts=None, reduce=True):
        """`entries` is either a dense row-of-rows or a dict (i, j) -> entry."""
        self.ring = ring
        cells = {}
        if isinstance(entries, dict):
            nrows = ncols = 0
            for (i, j), e in entries.items():
                e = self._coerce(e, reduce)
                nrows = max(nrows, i + 1)
                ncols = max(ncols, j + 1)
                if not e.is_zero():
                    cells[(i, j)] = e
            self._nrows_hint = nrows
            self._ncols_hint = ncols
        else:
            rows = [list(r) for r in entries]
            self._nrows_hint = len(rows)
            self._ncols_hint = len(rows[0]) if rows else 0
            for r in rows:
                if len(r) != self._ncols_hint:
                    raise ValueError("ragged matrix")
            for i, row in enumerate(rows):
                for j, e in enumerate(row):
                    e = self._coerce(e, reduce)
                    if not e.is_zero():
                        cells[(i, j)] = e
        self.cells = cells
        if target_shifts is None:
            target_shifts = (0,) * self._nrows_hint
        if source_shifts is None:
            source_shifts = self._infer_source_shifts(target_shifts)
        self.target_shifts = tuple(target_shifts)
        self.source_shifts = tuple(source_shifts)
        self.target_rank = len(self.target_shifts)
        self.source_rank = len(self.source_shifts)
        for (i, j) in self.cells:
            if i >= self.target_rank or j >= self.source_rank:
                raise ValueError("cell outside the declared ranks")
        self._zero = ring.zero()
        self._by_col = None
        self._by_row = None

    def _coerce(self, e, reduce):
        if isinstance(e, str):
            e = self.ring.parse(e)
        elif not isinstance(e, Polynomial):
            e = Polynomial.constant(self.ring, e)
        return self.ring.reduce(e) if reduce else e

    def _infer_source_shifts(self, target_shifts):
        ncols = self._ncols_hint
        shifts = [None] * ncols
        for (i, j), e in self.cells.items():
            if shifts[j] is not None:
                continue
            d = e.homogeneous_degree()
            if d is None:
                raise HomogeneityError(f"entry ({i},{j}) = {e} is not homogeneous")
            shifts[j] = d + target_shifts[i]
        return tuple(s if s is not None else 0 for s in shifts)

    # structure -------------------------------------------------------------

    def entry(self, i, j):
        return self.cells.get((i, j), self._zero)

    def by_column(self):
        if self._by_col is None:
            cols = {}
            for (i, j), e in self.cells.items():
                cols.setdefault(j, []).append((i, e))
            for lst in cols.values():
                lst.sort(key=lambda t: t[0])
            self._by_col = cols
        return self._by_col

    def by_row(self):
        if self._by_row is None:
            rows = {}
            for (i, j), e in self.cells.items():
                rows.setdefault(i, []).append((j, e))
            for lst in rows.values():
                lst.sort(key=lambda t: t[0])
            self._by_row = rows
        return self._by_row

    def column(self, j):
        col = [self._zero] * self.target_rank
        for i, e in self.by_column().get(j, ()):
            col[i] = e
        return col

    def columns_as_elements(self):
        key = self.ring.order.key
        out = []
        for j in range(self.source_rank):
            terms = []
            for i, e in self.by_column().get(j, ()):
                terms.extend((m, i, c) for m, c in e.terms)
            terms.sort(key=lambda t: key(t[0]) + (-t[1],), reverse=True)
            out.append(tuple(terms))
        return out

    def dense_rows(self):
        return [[self.entry(i, j) for j in range(self.source_rank)] for i in range(self.target_rank)]

    def is_zero(self):
        return not self.cells

    def is_minimal(self):
        """No unit entries: every entry has zero constant term."""
        zero = self.ring.field.zero
        return all(e.constant_coefficient() == zero for e in self.cells.values())

    def check_homogeneous(self):
        for (i, j), e in self.cells.items():
            d = e.homogeneous_degree()
            want = self.source_shifts[j] - self.target_shifts[i]
            if d is None or d != want:
                raise HomogeneityError(f"entry ({i},{j}) = {e} has degree {d}, expected {want}")
        return True

    # algebra ---------------------------------------------------------------

    def compose(self, other):
        """self o other, for other mapping into self's source."""
        if other.target_rank != self.source_rank:
            raise ValueError("rank mismatch in composition")
        ring = self.ring
        acc = {}
        for (k, j), b in other.cells.items():
            for i, a in self._col_of_source(k):
                key = (i, j)
                prod = a * b
                prev = acc.get(key)
                acc[key] = prod if prev is None else prev + prod
        cells = {}
        for key, val in acc.items():
            val = ring.reduce(val)
            if not val.is_zero():
                cells[key] = val
        return FreeMap(ring, cells, self.target_shifts, other.source_shifts, reduce=False)

    def _col_of_source(self, k):
        return self.by_column().get(k, ())

    def transpose(self):
        cells = {(j, i): e for (i, j), e in self.cells.items()}
        return FreeMap(
            self.ring,
            cells,
            tuple(-s for s in self.source_shifts),
            tuple(-s for s in self.target_shifts),
            reduce=False,
        )

    def negate(self):
        cells = {k: -e for k, e in self.cells.items()}
        return FreeMap(self.ring, cells, self.target_shifts, self.source_shifts, reduce=False)

    def twist(self, k):
        """Shift all internal degrees by k (entries unchanged)."""
        return FreeMap(
            self.ring,
            dict(self.cells),
            tuple(s + k for s in self.target_shifts),
            tuple(s + k for s in self.source_shifts),
            reduce=False,
        )

    def scale(self, c):
        cells = {k: e.scale(c) for k, e in self.cells.items()}
        return FreeMap(self.ring, cells, self.target_shifts, self.source_shifts, reduce=False)

    def add(self, other):
        cells = dict(self.cells)
        for k, e in other.cells.items():
            cells[k] = cells[k] + e if k in cells else e
        cells = {k: v for k, v in cells.items() if not self.ring.reduce(v).is_zero()}
        return FreeMap(self.ring, cells, self.target_shifts, self.source_shifts, reduce=True)

    def apply(self, coords):
        """Image of a source vector (list of Polynomials)."""
        ring = self.ring
        out = [ring.zero()] * self.target_rank
        for (i, j), e in self.cells.items():
            c = coords[j]
            if not c.is_zero():
                out[i] = out[i] + e * c
        return [ring.reduce(p) for p in out]

    @staticmethod
    def identity(ring, shifts):
        one = Polynomial.constant(ring, 1)
        cells = {(i, i): one for i in range(len(shifts))}
        return FreeMap(ring, cells, shifts, shifts, reduce=False)

    @staticmethod
    def zero_map(ring, target_shifts, source_shifts):
        return FreeMap(ring, {}, target_shifts, source_shifts, reduce=False)

    @staticmethod
    def from_columns(ring, columns, target_shifts, source_shifts=None):
        """Build a map whose columns are the given engine elements."""
        cells = {}
        for j, col in enumerate(columns):
            buckets = {}
            for m, pos, c in col:
                buckets.setdefault(pos, []).append((m, c))
            for pos, terms in buckets.items():
                cells[(pos, j)] = Polynomial(ring, terms)
        if source_shifts is None:
            from .engine import elt_degree

            source_shifts = tuple(
                elt_degree(ring.order, target_shifts, col) or 0 for col in columns
            )
        return FreeMap(ring, cells, target_shifts, source_shifts, reduce=False)

    def __eq__(self, other):
        return (
            isinstance(other, FreeMap)
            and self.cells == other.cells
            and self.target_shifts == other.target_shifts
            and self.source_shifts == other.source_shifts
        )

    def __repr__(self):
        body = "; ".join(
            ", ".join(str(self.entry(i, j)) for j in range(self.source_rank))
            for i in range(self.target_rank)
        )
        return f"[{body}]"


class ChainComplex:
    """Free complex on a homological window [lo, hi]."""

    def __init__(self, ring, lo, shifts_by_index, maps_by_index, check=True):
        self.ring = ring
        self.lo = lo
        self.shifts = {i: tuple(s) for i, s in shifts_by_index.items()}
        self.maps = dict(maps_by_index)
        if self.shifts:
            self.hi = max(self.shifts)
            if min(self.shifts) != lo:
                raise ValueError("shift table does not start at lo")
        else:
            self.hi = lo - 1
        if check:
            self.validate()

    def validate(self):
        for i, d in self.maps.items():
            if i - 1 not in self.shifts or i not in self.shifts:
                raise ValueError(f"map d_{i} outside the window")
            if d.target_shifts != self.shifts[i - 1] or d.source_shifts != self.shifts[i]:
                raise ValueError(f"d_{i} shifts disagree with the complex")
            d.check_homogeneous()
        if not self.verify_d_squared():
            raise ValueError("differential does not square to zero")

    # basic data --------------------------------------------------------------

    def rank(self, i):
        return len(self.shifts.get(i, ()))

    def ranks(self):
        return {i: len(s) for i, s in sorted(self.shifts.items())}

    def differential(self, i):
        d = self.maps.get(i)
        if d is None:
            d = FreeMap.zero_map(self.ring, self.shifts.get(i - 1, ()), self.shifts.get(i, ()))
        return d

    def is_minimal(self):
        return all(d.is_minimal() for d in self.maps.values())

    # operations ----------------------------------------------------------------

    def smart_truncate(self, n):
        """F_{>= n}: keep degrees n..hi with their maps above n."""
        if n < self.lo:
            n = self.lo
        shifts = {i: s for i, s in self.shifts.items() if i >= n}
        maps = {i: d for i, d in self.maps.items() if i > n}
        return ChainComplex(self.ring, n, shifts, maps, check=False)

    def brutal_truncate(self, lo, hi):
        shifts = {i: s for i, s in self.shifts.items() if lo <= i <= hi}
        maps = {i: d for i, d in self.maps.items() if lo < i <= hi}
        return ChainComplex(self.ring, max(lo, self.lo), shifts, maps, check=False)

    def shift(self, k):
        """C[k]: degree j holds C_{j+k}; odd shifts negate differentials."""
        shifts = {i - k: s for i, s in self.shifts.items()}
        maps = {}
        for i, d in self.maps.items():
            maps[i - k] = d.negate() if k % 2 else d
        return ChainComplex(self.ring, self.lo - k, shifts, maps, check=False)

    def dualize(self):
        """Hom(-, R): transposed maps, negated degrees and gradings."""
        shifts = {-i: tuple(-s for s in sh) for i, sh in self.shifts.items()}
        maps = {}
        for i, d in self.maps.items():
            maps[-(i - 1)] = d.transpose()
        return ChainComplex(self.ring, -self.hi, shifts, maps, check=False)

    def twist(self, k):
        """Shift every internal degree by k."""
        shifts = {i: tuple(s + k for s in sh) for i, sh in self.shifts.items()}
        maps = {i: d.twist(k) for i, d in self.maps.items()}
        return ChainComplex(self.ring, self.lo, shifts, maps, check=False)

    def betti_numbers(self):
        return [self.rank(i) for i in range(self.lo, self.hi + 1)]

    def verify_d_squared(self):
        for i in self.maps:
            if i + 1 in self.maps:
                if not self.maps[i].compose(self.maps[i + 1]).is_zero():
                    return False
        return True

    def exactness_report(self, index_range=None, max_degree=None, max_slice_dim=2000):
        """Degreewise homology dimensions; empty "homology" means exact.

        Slices with dimension above max_slice_dim are skipped and listed
        under "skipped".  Returns {"homology": {(i, d): dim}, "skipped": [...]}.
        """
        if index_range is None:
            index_range = range(self.lo + 1, self.hi)
        homology = {}
        skipped = []
        for i in index_range:
            if i not in self.shifts or i + 1 not in self.shifts or i - 1 not in self.shifts:
                continue
            d_i = self.differential(i)
            d_next = self.differential(i + 1)
            for d in self._slice_degrees(i, max_degree):
                dim = len(linalg.module_slice_basis(self.ring, self.shifts[i], d))
                if dim == 0:
                    continue
                if dim > max_slice_dim:
                    skipped.append((i, d, dim))
                    continue
                h = linalg.homology_dimension(d_i, d_next, d)
                if h:
                    homology[(i, d)] = h
        return {"homology": homology, "skipped": skipped}

    def _slice_degrees(self, i, max_degree):
        shifts = self.shifts[i]
        if not shifts:
            return []
        lo_d = min(shifts)
        hi_d = max_degree if max_degree is not None else max(shifts) + 2 * max(self.ring.weights)
        return range(lo_d, hi_d + 1)

    def __repr__(self):
        ranks = " ".join(f"{i}:{self.rank(i)}" for i in range(self.lo, self.hi + 1))
        return f"<complex [{self.lo},{self.hi}] ranks {ranks}>"


def cone(phi_components, source, target):
    """Mapping cone of a chain map phi: source -> target.

    phi_components maps homological index i to a FreeMap source_i -> target_i
    (missing indices are zero).  cone_i = source_{i-1} (+) target_i with
    differential (x, y) -> (-d_X x, phi(x) + d_Y y).
    """
    ring = target.ring
    lo = min(source.lo + 1, target.lo)
    hi = max(source.hi + 1, target.hi)
    shifts = {}
    for i in range(lo, hi + 1):
        shifts[i] = tuple(source.shifts.get(i - 1, ())) + tuple(target.shifts.get(i, ()))
    maps = {}
    for i in range(lo + 1, hi + 1):
        src = shifts[i]
        tgt = shifts[i - 1]
        if not src or not tgt:
            continue
        s_rank_x = len(source.shifts.get(i - 1, ()))
        t_rank_x = len(source.shifts.get(i - 2, ()))
        cells = {}
        dx = source.maps.get(i - 1)
        if dx is not None:
            for (a, b), e in dx.cells.items():
                cells[(a, b)] = -e
        ph = phi_components.get(i - 1)
        if ph is not None:
            for (a, b), e in ph.cells.items():
                cells[(t_rank_x + a, b)] = e
        dy = target.maps.get(i)
        if dy is not None:
            for (a, b), e in dy.cells.items():
                cells[(t_rank_x + a, s_rank_x + b)] = e
        maps[i] = FreeMap(ring, cells, tgt, src, reduce=False)
    return ChainComplex(ring, lo, shifts, maps, check=False)


def complex_ops(complex_, op, **kwargs):
    """Dispatcher mirroring the public operation surface."""
    if op == "smart_truncate":
        return complex_.smart_truncate(kwargs["n"])
    if op == "brutal_truncate":
        return complex_.brutal_truncate(kwargs["lo"], kwargs["hi"])
    if op == "dualize":
        return complex_.dualize()
    if op == "cone":
        return cone(kwargs["phi"], kwargs["source"], complex_)
    if op == "verify_exactness":
        return complex_.exactness_report(
            kwargs.get("index_range"),
            kwargs.get("max_degree"),
            kwargs.get("max_slice_dim", 2000),
        )
    raise ValueError(f"unknown complex op {op!r}")

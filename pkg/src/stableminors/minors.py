"""Ideals of minors of differentials and the periodicity analytics.

Determinants are computed by exact cofactor expansion, memoized on the
(row-set, column-set) pair so overlapping minors share work.  Minor values
are deduplicated up to scalar before any Groebner reduction.  Conventions
for degenerate ranks: r greater than either rank gives the zero ideal; a
map into or out of the zero module has unit ideal of minors.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from .groebner import Ideal, maximal_ideal, syzygy_module, unit_ideal, zero_ideal
from .complexes import FreeMap


def _det_memo(fm, memo, rows, cols):
    """Exact determinant of the submatrix on (rows, cols), cofactor expansion."""
    key = (rows, cols)
    cached = memo.get(key)
    if cached is not None:
        return cached
    ring = fm.ring
    n = len(rows)
    if n == 1:
        val = fm.entry(rows[0], cols[0])
        memo[key] = val
        return val
    # expand along the column with the fewest nonzero entries in the block
    best_j, best_nonzero = 0, None
    for jj, j in enumerate(cols):
        nz = sum(1 for i in rows if not fm.entry(i, j).is_zero())
        if best_nonzero is None or nz < best_nonzero:
            best_j, best_nonzero = jj, nz
        if nz == 0:
            break
    j = cols[best_j]
    rest_cols = cols[:best_j] + cols[best_j + 1 :]
    acc = ring.zero()
    for ii, i in enumerate(rows):
        e = fm.entry(i, j)
        if e.is_zero():
            continue
        sub = _det_memo(fm, memo, rows[:ii] + rows[ii + 1 :], rest_cols)
        if sub.is_zero():
            continue
        term = e * sub
        acc = acc - term if (ii + best_j) % 2 else acc + term
    val = ring.reduce(acc)
    memo[key] = val
    return val


def _power_is_zero(ring, r, _cache={}):
    key = (ring.signature, tuple(str(p) for p in ring.relations), r)
    if key not in _cache:
        _cache[key] = maximal_ideal(ring).power(r).is_zero()
    return _cache[key]


def ideal_of_minors(fm, r, exhaustive=False):
    """The ideal generated by the r x r minors of a map of free modules."""
    if r < 1:
        raise ValueError("minor rank must be >= 1")
    ring = fm.ring
    if fm.source_rank == 0 or fm.target_rank == 0:
        return unit_ideal(ring)
    if r > fm.source_rank or r > fm.target_rank:
        return zero_ideal(ring)
    if r == 1:
        return Ideal(ring, list(fm.cells.values()))
    # every minor of a minimal matrix lies in m^r; nothing to enumerate if that vanishes
    if not exhaustive and fm.is_minimal() and _power_is_zero(ring, r):
        return zero_ideal(ring)

    by_col = fm.by_column()
    col_rows = {j: frozenset(i for i, _ in by_col.get(j, ())) for j in range(fm.source_rank)}
    nonzero_cols = sorted(j for j in range(fm.source_rank) if col_rows[j])
    if len(nonzero_cols) < r:
        return zero_ideal(ring)

    memo = {}
    seen = set()
    gens = []
    running = None
    bound = _entry_ideal_power_bound(fm, r) if not exhaustive else None
    for cols in combinations(nonzero_cols, r):
        rows_avail = frozenset().union(*(col_rows[j] for j in cols))
        if len(rows_avail) < r:
            continue
        if any(not (col_rows[j] & rows_avail) for j in cols):
            continue
        for rows in combinations(sorted(rows_avail), r):
            rowset = set(rows)
            if any(not (col_rows[j] & rowset) for j in cols):
                continue
            val = _det_memo(fm, memo, tuple(rows), tuple(cols))
            if val.is_zero():
                continue
            canon = val.monic()
            if canon.terms in seen:
                continue
            seen.add(canon.terms)
            if running is not None and running.contains_poly(canon):
                continue
            gens.append(canon)
            running = Ideal(ring, gens)
        if bound is not None and running is not None and running == bound:
            # the running ideal already contains every possible minor
            break
    return running if running is not None else zero_ideal(ring)


def _entry_ideal_power_bound(fm, r):
    """E^r for E the ideal of all entries, when small enough to be useful.

    Every r x r minor lies in E^r, so reaching it ends the enumeration early.
    """
    distinct = {e.monic().terms: e for e in fm.cells.values()}
    if len(distinct) > 12:
        return None
    entries = Ideal(fm.ring, list(distinct.values()))
    gens = entries.reduced_generators()
    if len(gens) > 6:
        return None
    return Ideal(fm.ring, gens).power(r)


# ---------------------------------------------------------------------------
# series over a complex
# ---------------------------------------------------------------------------


@dataclass
class MinorIdealSeries:
    rank: int
    lo: int
    hi: int
    ideals: dict

    def __getitem__(self, i):
        return self.ideals[i]

    def indices(self):
        return range(self.lo, self.hi + 1)


def minor_series(complex_, r, lo=None, hi=None, exhaustive=False):
    """I^r_i(d_i) for each index in the window [lo, hi]."""
    lo = complex_.lo + 1 if lo is None else lo
    hi = complex_.hi if hi is None else hi
    idxs = list(range(lo, hi + 1))
    threads = int(os.environ.get("STABLEMINORS_THREADS", "1"))

    def compute(i):
        return i, ideal_of_minors(complex_.differential(i), r, exhaustive=exhaustive)

    if threads > 1 and len(idxs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            ideals = dict(pool.map(compute, idxs))
    else:
        ideals = dict(compute(i) for i in idxs)
    return MinorIdealSeries(rank=r, lo=lo, hi=hi, ideals=ideals)


def total_ideal(complex_, r, from_index=None, series=None):
    """Sum of the minor ideals over the computed window (window-truncated)."""
    lo = complex_.lo + 1 if from_index is None else max(from_index, complex_.lo + 1)
    if series is None:
        series = minor_series(complex_, r, lo=lo)
    acc = zero_ideal(complex_.ring)
    for i in range(max(lo, series.lo), series.hi + 1):
        acc = acc + series[i]
    return Ideal(complex_.ring, acc.reduced_generators())


# ---------------------------------------------------------------------------
# periodicity
# ---------------------------------------------------------------------------


@dataclass
class PeriodicityReport:
    status: str  # "verified-in-window" | "no-period-found"
    period: int | None
    onset: int | None
    verified_repeats: int
    window: tuple
    parity_ideals: list = field(default_factory=list)
    notes: list = field(default_factory=list)


class WindowTooShort(ValueError):
    pass


def detect_periodicity(series, p_max):
    """Smallest period p <= p_max verified on a suffix of the window.

    A claim requires at least 2p verified equalities J_i = J_{i+p}; the
    report never asserts more than the window shows.  Periods whose 2p
    repeats cannot fit in the window are noted as window-limited.
    """
    lo, hi = series.lo, series.hi
    if hi - lo + 1 < 3:
        raise WindowTooShort(f"window [{lo},{hi}] is too short to test periodicity")
    notes = []
    for p in range(1, p_max + 1):
        last_ok = hi - p
        if last_ok < lo:
            notes.append(f"period {p}: window cannot hold a single repeat")
            continue
        onset = None
        i = last_ok
        while i >= lo and series[i] == series[i + p]:
            onset = i
            i -= 1
        if onset is None:
            continue
        repeats = last_ok - onset + 1
        if repeats >= 2 * p:
            parity = []
            for cls in range(p):
                parity.append(series[onset + cls])
            return PeriodicityReport(
                status="verified-in-window",
                period=p,
                onset=onset,
                verified_repeats=repeats,
                window=(lo, hi),
                parity_ideals=parity,
                notes=notes,
            )
        notes.append(f"period {p}: only {repeats} repeats verified (< {2 * p})")
    return PeriodicityReport(
        status="no-period-found",
        period=None,
        onset=None,
        verified_repeats=0,
        window=(lo, hi),
        parity_ideals=[],
        notes=notes,
    )


def stable_ideal_estimate(complex_, r, series=None, p_max=4):
    """Window-verified estimate of the stable ideal of r x r minors.

    With a verified period p starting at n0 the estimate is the sum of one
    full period of minor ideals; otherwise the total ideal of the deepest
    tail still carrying a residual window, flagged unverified.
    """
    if series is None:
        series = minor_series(complex_, r)
    report = detect_periodicity(series, p_max)
    ring = complex_.ring
    if report.status == "verified-in-window":
        acc = zero_ideal(ring)
        for i in range(report.onset, report.onset + report.period):
            acc = acc + series[i]
        return Ideal(ring, acc.reduced_generators()), report, True
    residual = max(3, p_max + 1)
    n = max(series.lo, series.hi - residual + 1)
    acc = zero_ideal(ring)
    for i in range(n, series.hi + 1):
        acc = acc + series[i]
    return Ideal(ring, acc.reduced_generators()), report, False


# ---------------------------------------------------------------------------
# derived ideals
# ---------------------------------------------------------------------------


def trace_ideal(presentation):
    """Trace ideal of coker(presentation) over a quotient ring.

    Homs into the ring are kernel vectors of the transposed presentation;
    the trace is generated by all their entries.
    """
    ring = presentation.ring
    t = presentation.transpose()
    cols = t.columns_as_elements()
    syz = syzygy_module(ring, cols, target_shifts=t.target_shifts)
    gens = []
    for s in syz:
        buckets = {}
        for m, pos, c in s:
            buckets.setdefault(pos, []).append((m, c))
        from .poly import Polynomial

        for terms in buckets.values():
            gens.append(Polynomial(ring, terms, _canonical=True))
    return Ideal(ring, gens)


def fitting_ideal(complex_, i, j):
    """The j-th Fitting ideal in homological degree i: minors of rank
    beta_{i-1} - j + 1 of d_i."""
    if i <= complex_.lo or i > complex_.hi:
        raise ValueError("homological index outside the computed window")
    beta_prev = complex_.rank(i - 1)
    if not 1 <= j <= beta_prev:
        raise ValueError(f"Fitting index {j} outside [1, {beta_prev}]")
    return ideal_of_minors(complex_.differential(i), beta_prev - j + 1)


def top_exterior_power(presentation):
    """Annihilator presentation of the top exterior power: the entries ideal.

    Requires a minimal presentation; two modules have isomorphic top
    exterior powers iff these ideals agree.
    """
    if not presentation.is_minimal():
        raise ValueError("presentation is not minimal (unit entry found)")
    return Ideal(presentation.ring, list(presentation.cells.values()))

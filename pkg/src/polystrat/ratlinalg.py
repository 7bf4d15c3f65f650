"""Exact linear algebra over the rationals for sparse integer matrices.

Matrices are stored column-wise as dicts {row_index: coefficient}.  Rank and
kernel computations use fraction-free column elimination: a column merge
replaces col_j by (b*col_j - a*col_k) followed by division by the content
gcd, so entries stay integers of moderate size and no floating point is ever
involved.  This is the only linear algebra used by the homology engine.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Column = Dict[int, int]


def _normalize(col: Column) -> Column:
    """Divide a column by the gcd of its entries (sign-normalized)."""
    if not col:
        return col
    g = 0
    for v in col.values():
        g = gcd(g, abs(v))
        if g == 1:
            break
    if g > 1:
        col = {r: v // g for r, v in col.items()}
    return col


def _merge(col_j: Column, col_k: Column, a: int, b: int) -> Column:
    """Return b*col_j - a*col_k, dropping zeros."""
    out = {r: b * v for r, v in col_j.items()}
    for r, v in col_k.items():
        s = out.get(r, 0) - a * v
        if s:
            out[r] = s
        else:
            out.pop(r, None)
    return out


def _low(col: Column) -> int:
    return max(col)


def column_reduce(
    columns: Sequence[Column],
    track_kernel: bool = False,
) -> Tuple[int, List[Dict[int, Fraction]]]:
    """Left-to-right column reduction by lowest-one clearing.

    Returns (rank, kernel_basis).  Kernel basis vectors are expressed in the
    original column coordinates and returned as sparse Fraction dicts (only
    populated when ``track_kernel``).
    """
    reduced: List[Optional[Column]] = []
    ops: List[Column] = []  # column-op bookkeeping: v-columns over Z
    low_to_col: Dict[int, int] = {}
    rank = 0
    kernel: List[Dict[int, Fraction]] = []

    for j, original in enumerate(columns):
        col = dict(original)
        v: Column = {j: 1} if track_kernel else {}
        while col:
            low = _low(col)
            k = low_to_col.get(low)
            if k is None:
                break
            other = reduced[k]
            assert other is not None
            a = col[low]
            b = other[low]
            col = _merge(col, other, a=a, b=b)
            # _merge computes b*col - a*other, cancelling row `low`
            if track_kernel:
                # content normalization would break col == sum(v[i]*orig_i)
                v = _merge(v, ops[k], a=a, b=b)
            else:
                col = _normalize(col)
        if col:
            reduced.append(col)
            ops.append(v)
            low_to_col[_low(col)] = len(reduced) - 1
            rank += 1
        else:
            reduced.append(None)
            ops.append({})
            if track_kernel:
                kernel.append({r: Fraction(c) for r, c in v.items()})
    return rank, kernel


def rank(columns: Sequence[Column]) -> int:
    return column_reduce(columns)[0]


def nullspace(columns: Sequence[Column]) -> List[Dict[int, Fraction]]:
    return column_reduce(columns, track_kernel=True)[1]


def columns_from_entries(
    entries: Iterable[Tuple[int, int, int]], ncols: int
) -> List[Column]:
    """Build columns from (row, col, value) triples."""
    cols: List[Column] = [dict() for _ in range(ncols)]
    for r, c, v in entries:
        if v:
            cols[c][r] = cols[c].get(r, 0) + v
    for c in cols:
        for r in [r for r, v in c.items() if v == 0]:
            del c[r]
    return cols


def submatrix_columns(
    columns: Sequence[Column],
    keep_cols: Sequence[int],
    keep_rows: Optional[Sequence[int]] = None,
) -> List[Column]:
    """Select columns (reindexed densely) and optionally restrict rows.

    Row indices are preserved unless ``keep_rows`` is given, in which case
    rows are reindexed by position in ``keep_rows``.
    """
    if keep_rows is None:
        return [dict(columns[c]) for c in keep_cols]
    rowmap = {r: i for i, r in enumerate(keep_rows)}
    out = []
    for c in keep_cols:
        col = {}
        for r, v in columns[c].items():
            i = rowmap.get(r)
            if i is not None:
                col[i] = v
        out.append(col)
    return out


def sparse_matmul(
    a_columns: Sequence[Column], b_columns: Sequence[Column]
) -> List[Column]:
    """Columns of A@B where b_columns hold coefficients over A's columns."""
    out: List[Column] = []
    for bcol in b_columns:
        acc: Dict[int, int] = {}
        for j, w in bcol.items():
            for r, v in a_columns[j].items():
                s = acc.get(r, 0) + w * v
                if s:
                    acc[r] = s
                else:
                    acc.pop(r, None)
        out.append(acc)
    return out


def fraction_columns_to_int(cols: Sequence[Dict[int, Fraction]]) -> List[Column]:
    """Clear denominators columnwise (rank/kernel invariant scaling)."""
    out: List[Column] = []
    for col in cols:
        if not col:
            out.append({})
            continue
        denom = 1
        for v in col.values():
            denom = denom * v.denominator // gcd(denom, v.denominator)
        out.append({r: int(v * denom) for r, v in col.items()})
    return out

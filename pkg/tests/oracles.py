"""Independent brute-force oracles used by the tests.

Everything here recomputes results along a different path from the library:
dense Fraction Gaussian elimination instead of sparse fraction-free integer
columns, Leibniz determinant expansion instead of Bareiss, and a from-first-
principles allowable-chain computation for intersection homology.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from polystrat.complexes import FilteredComplex
from polystrat.polynomials import MultiPoly
from polystrat.strata import Perversity


# ---------------------------------------------------------------------------
# dense exact linear algebra
# ---------------------------------------------------------------------------

def dense_rank(rows: List[List[Fraction]]) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = Fraction(1, 1) / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(nrows):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


def dense_nullspace(rows: List[List[Fraction]]) -> List[List[Fraction]]:
    """Basis of the right kernel of the matrix given by rows."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    m = [list(map(Fraction, r)) for r in rows]
    pivots: List[int] = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = Fraction(1, 1) / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(nrows):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


def boundary_matrix_dense(K: FilteredComplex, d: int) -> List[List[Fraction]]:
    """Rows = (d-1)-cells, columns = d-cells."""
    rows = [[Fraction(0)] * K.n_cells(d) for _ in range(K.n_cells(d - 1))]
    if 0 < d <= K.dim:
        for (r, c), v in K.boundary[d].items():
            rows[r][c] += v
    return rows


def oracle_homology(K: FilteredComplex) -> Tuple[int, ...]:
    m = K.dim
    ranks = [0] * (m + 2)
    for d in range(1, m + 1):
        if K.n_cells(d - 1) and K.n_cells(d):
            ranks[d] = dense_rank(boundary_matrix_dense(K, d))
    betti = []
    for i in range(m + 1):
        betti.append(K.n_cells(i) - ranks[i] - ranks[i + 1])
    return tuple(betti)


# ---------------------------------------------------------------------------
# exhaustive intersection homology
# ---------------------------------------------------------------------------

def _closure(K: FilteredComplex, d: int, k: int) -> List[Tuple[int, int]]:
    seen = {(d, k)}
    stack = [(d, k)]
    while stack:
        dd, kk = stack.pop()
        if dd == 0:
            continue
        for (r, c), v in K.boundary[dd].items():
            if c == kk and v and (dd - 1, r) not in seen:
                seen.add((dd - 1, r))
                stack.append((dd - 1, r))
    return sorted(seen)


def _cell_allowable(K: FilteredComplex, d: int, k: int, p: Perversity,
                    i: int) -> bool:
    clo = _closure(K, d, k)
    m = K.dim
    for codim in range(2, m + 1):
        j = m - codim
        dims = [dd for dd, kk in clo
                if K.levels[K.cells[dd][kk]] <= j]
        inter = max(dims) if dims else None
        if inter is not None and inter > i - codim + p[codim]:
            return False
    return True


def oracle_ih(K: FilteredComplex, p: Perversity) -> Tuple[int, ...]:
    """Exhaustive allowable-chain computation with dense linear algebra."""
    m = K.dim
    allow = [
        [k for k in range(K.n_cells(i)) if _cell_allowable(K, i, k, p, i)]
        for i in range(m + 1)
    ]
    bases: List[List[List[Fraction]]] = []  # per degree: vectors over C_i
    for i in range(m + 1):
        if not allow[i]:
            bases.append([])
            continue
        if i == 0:
            bases.append([[Fraction(1 if c == k else 0)
                           for c in range(K.n_cells(0))] for k in allow[0]])
            continue
        D = boundary_matrix_dense(K, i)
        bad = [r for r in range(K.n_cells(i - 1))
               if not _cell_allowable(K, i - 1, r, p, i - 1)]
        sub = [[D[r][c] for c in allow[i]] for r in bad]
        if not bad:
            kernel = [[Fraction(1 if j == t else 0)
                       for j in range(len(allow[i]))]
                      for t in range(len(allow[i]))]
        else:
            kernel = dense_nullspace(sub)
        vecs = []
        for vec in kernel:
            full = [Fraction(0)] * K.n_cells(i)
            for j, c in enumerate(allow[i]):
                full[c] = vec[j]
            vecs.append(full)
        bases.append(vecs)
    betti = []
    for i in range(m + 1):
        dim_ic = len(bases[i])
        if dim_ic == 0:
            rank_d_i = 0
        else:
            D = boundary_matrix_dense(K, i) if i >= 1 else []
            if i == 0 or not D:
                rank_d_i = 0
            else:
                cols = [[sum(D[r][c] * v[c] for c in range(K.n_cells(i)))
                         for v in bases[i]] for r in range(K.n_cells(i - 1))]
                rank_d_i = dense_rank(cols) if cols else 0
        if i + 1 <= m and bases[i + 1]:
            D1 = boundary_matrix_dense(K, i + 1)
            cols1 = [[sum(D1[r][c] * v[c] for c in range(K.n_cells(i + 1)))
                      for v in bases[i + 1]] for r in range(K.n_cells(i))]
            rank_d_next = dense_rank(cols1) if cols1 else 0
        else:
            rank_d_next = 0
        betti.append(dim_ic - rank_d_i - rank_d_next)
    return tuple(betti)


# ---------------------------------------------------------------------------
# Leibniz determinant for the resultant oracle
# ---------------------------------------------------------------------------

def leibniz_det(matrix: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    n = len(matrix)
    ring = matrix[0][0].variables
    total = MultiPoly.zero(ring)
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        # count inversions for the signature
        inv = sum(1 for a in range(n) for b in range(a + 1, n)
                  if seen[a] > seen[b])
        sign = -1 if inv % 2 else 1
        term = matrix[0][perm[0]]
        for r in range(1, n):
            term = term * matrix[r][perm[r]]
        total = total + (term if sign > 0 else -term)
    return total

"""Finite filtered chain complexes and a small corpus of builders.

A :class:`FilteredComplex` stores cells per dimension, sparse integer
boundary matrices, a filtration level per cell (the smallest filtration
index whose piece contains the cell; the cells with level <= j form the
closed subcomplex X_j), and optionally a marked boundary subcomplex and the
underlying simplicial structure.  Builders produce the standard corpus:
spheres, the 7-vertex torus, a pinched torus, suspensions, disks, and
staircase products of simplicial complexes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .ratlinalg import Column, sparse_matmul


class ComplexError(ValueError):
    pass


@dataclass
class FilteredComplex:
    """Chain complex with filtration levels; cells are identified by ids."""

    dim: int
    cells: List[List[str]]                      # per dimension 0..dim
    boundary: List[Dict[Tuple[int, int], int]]  # boundary[d]: (row, col) -> coeff
    levels: Dict[str, int]
    boundary_ids: Optional[FrozenSet[str]] = None
    simplices: Optional[List[List[Tuple]]] = None  # vertex tuples per dim

    def __post_init__(self):
        if len(self.cells) != self.dim + 1:
            raise ComplexError("cells must list every dimension 0..m")
        if len(self.boundary) != self.dim + 1:
            raise ComplexError("boundary must list every dimension 0..m")
        self._index: List[Dict[str, int]] = [
            {cid: k for k, cid in enumerate(layer)} for layer in self.cells
        ]
        self._faces_cache: Optional[List[List[List[int]]]] = None
        self._dims_cache: Dict[Tuple[int, int], List[Optional[int]]] = {}

    # -- indexing -------------------------------------------------------

    def n_cells(self, d: int) -> int:
        return len(self.cells[d]) if 0 <= d <= self.dim else 0

    def cell_dim(self, cid: str) -> int:
        for d, idx in enumerate(self._index):
            if cid in idx:
                return d
        raise ComplexError(f"unknown cell {cid!r}")

    def level(self, cid: str) -> int:
        return self.levels[cid]

    def boundary_columns(self, d: int) -> List[Column]:
        """Sparse columns of the boundary map C_d -> C_{d-1}."""
        cols: List[Column] = [dict() for _ in range(self.n_cells(d))]
        if 0 < d <= self.dim:
            for (r, c), v in self.boundary[d].items():
                if v:
                    cols[c][r] = v
        return cols

    def faces(self, d: int, k: int) -> List[int]:
        """Indices of (d-1)-cells on the boundary of cell (d, k)."""
        if d == 0:
            return []
        if self._faces_cache is None:
            cache: List[List[List[int]]] = [
                [[] for _ in layer] for layer in self.cells
            ]
            for dd in range(1, self.dim + 1):
                for (r, c), v in self.boundary[dd].items():
                    if v:
                        cache[dd][c].append(r)
            self._faces_cache = cache
        return self._faces_cache[d][k]

    # -- validation -----------------------------------------------------

    def validate(self) -> None:
        """Check boundary-of-boundary, level closure, and level/dim bounds."""
        for d in range(self.dim + 1):
            for cid in self.cells[d]:
                if cid not in self.levels:
                    raise ComplexError(f"cell {cid!r} has no filtration level")
                lv = self.levels[cid]
                if lv < d:
                    raise ComplexError(
                        f"cell {cid!r} of dimension {d} has level {lv} < {d}")
                if lv > self.dim:
                    raise ComplexError(f"cell {cid!r} level exceeds dimension")
        # faces stay within each X_j
        for d in range(1, self.dim + 1):
            for (r, c), v in self.boundary[d].items():
                if not v:
                    continue
                if self.levels[self.cells[d - 1][r]] > self.levels[self.cells[d][c]]:
                    raise ComplexError(
                        "closure condition fails: face level exceeds cell level "
                        f"({self.cells[d-1][r]!r} over {self.cells[d][c]!r})")
        # boundary of boundary
        for d in range(2, self.dim + 1):
            prod = sparse_matmul(self.boundary_columns(d - 1),
                                 self.boundary_columns(d))
            for col in prod:
                if col:
                    raise ComplexError(f"boundary squared nonzero in degree {d}")
        if self.boundary_ids is not None:
            known = {cid for layer in self.cells for cid in layer}
            missing = self.boundary_ids - known
            if missing:
                raise ComplexError(f"boundary subcomplex has unknown cells {missing}")
            # subcomplex closure
            for d in range(1, self.dim + 1):
                for (r, c), v in self.boundary[d].items():
                    if v and self.cells[d][c] in self.boundary_ids:
                        if self.cells[d - 1][r] not in self.boundary_ids:
                            raise ComplexError(
                                "marked boundary is not closed under faces")

    # -- filtration geometry ---------------------------------------------

    def closure_indices(self, d: int, k: int) -> Set[Tuple[int, int]]:
        """All (dim, index) pairs of cells in the closure of cell (d, k)."""
        out = {(d, k)}
        frontier = [(d, k)]
        while frontier:
            dd, kk = frontier.pop()
            if dd == 0:
                continue
            for r in self.faces(dd, kk):
                if (dd - 1, r) not in out:
                    out.add((dd - 1, r))
                    frontier.append((dd - 1, r))
        return out

    def intersection_dims(self, d: int, k: int) -> List[Optional[int]]:
        """For each level j, max dimension of closure cells at level <= j.

        Entry j is None when the closed cell misses X_j entirely.  This is
        the combinatorial reading of dim(cell intersect X_j); it is exact on
        filtration-compatible (full) triangulations.
        """
        cached = self._dims_cache.get((d, k))
        if cached is not None:
            return cached
        clo = self.closure_indices(d, k)
        out: List[Optional[int]] = []
        for j in range(self.dim + 1):
            best: Optional[int] = None
            for dd, kk in clo:
                if self.levels[self.cells[dd][kk]] <= j:
                    if best is None or dd > best:
                        best = dd
            out.append(best)
        self._dims_cache[(d, k)] = out
        return out

    def top_level_cells(self, j: int) -> List[str]:
        return [cid for layer in self.cells for cid in layer
                if self.levels[cid] <= j]

    # -- serialization ----------------------------------------------------

    def to_json(self) -> Dict:
        entries = []
        for d in range(1, self.dim + 1):
            for (r, c), v in sorted(self.boundary[d].items()):
                if v:
                    entries.append([self.cells[d][c], self.cells[d - 1][r], v])
        return {
            "dimension": self.dim,
            "cells": {str(d): list(self.cells[d]) for d in range(self.dim + 1)},
            "boundary": entries,
            "levels": {cid: self.levels[cid]
                       for layer in self.cells for cid in layer},
            "boundary_subcomplex": (sorted(self.boundary_ids)
                                    if self.boundary_ids is not None else None),
        }

    @staticmethod
    def from_json(doc: Mapping) -> "FilteredComplex":
        m = int(doc["dimension"])
        cells = [list(doc["cells"].get(str(d), [])) for d in range(m + 1)]
        index = [{cid: k for k, cid in enumerate(layer)} for layer in cells]
        dim_of = {cid: d for d, layer in enumerate(cells) for cid in layer}
        boundary: List[Dict[Tuple[int, int], int]] = [dict() for _ in range(m + 1)]
        for cell, face, coeff in doc["boundary"]:
            if cell not in dim_of or face not in dim_of:
                raise ComplexError(f"boundary entry references unknown cell")
            d = dim_of[cell]
            if dim_of[face] != d - 1:
                raise ComplexError(
                    f"face {face!r} is not one dimension below {cell!r}")
            boundary[d][(index[d - 1][face], index[d][cell])] = int(coeff)
        levels = {cid: int(lv) for cid, lv in doc.get("levels", {}).items()}
        for d, layer in enumerate(cells):
            for cid in layer:
                levels.setdefault(cid, m)
        bnd = doc.get("boundary_subcomplex")
        return FilteredComplex(m, cells, boundary, levels,
                               frozenset(bnd) if bnd is not None else None)

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)

    @staticmethod
    def load(path: str) -> "FilteredComplex":
        with open(path, "r", encoding="utf-8") as fh:
            return FilteredComplex.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# simplicial construction
# ---------------------------------------------------------------------------

def _simplex_id(vertices: Tuple) -> str:
    return "|".join(str(v) for v in vertices)


def from_simplices(
    top_simplices: Sequence[Sequence],
    dim: Optional[int] = None,
    levels: Optional[Mapping[Tuple, int]] = None,
    level_default: Optional[int] = None,
    boundary_vertices: Optional[Iterable] = None,
    boundary_simplices: Optional[Iterable[Tuple]] = None,
) -> FilteredComplex:
    """Build a filtered complex from maximal simplices.

    Vertices may be any sortable hashable objects.  ``levels`` assigns
    levels to specific simplices (given as sorted vertex tuples); unassigned
    cells get ``level_default`` (the complex dimension when omitted).  The
    marked boundary consists of all simplices whose vertices all lie in
    ``boundary_vertices`` or which are listed in ``boundary_simplices``
    (closed under faces automatically for the vertex form).
    """
    # collect all faces
    by_dim: Dict[int, Set[Tuple]] = {}
    for s in top_simplices:
        vs = tuple(sorted(s))
        if len(set(vs)) != len(vs):
            raise ComplexError(f"repeated vertex in simplex {s}")
        for k in range(1, len(vs) + 1):
            for face in itertools.combinations(vs, k):
                by_dim.setdefault(k - 1, set()).add(face)
    m = dim if dim is not None else max(by_dim)
    if level_default is None:
        level_default = m
    cells: List[List[str]] = []
    simplices: List[List[Tuple]] = []
    for d in range(m + 1):
        layer = sorted(by_dim.get(d, set()))
        simplices.append(list(layer))
        cells.append([_simplex_id(s) for s in layer])
    index = [{s: k for k, s in enumerate(simplices[d])} for d in range(m + 1)]
    boundary: List[Dict[Tuple[int, int], int]] = [dict() for _ in range(m + 1)]
    for d in range(1, m + 1):
        for k, s in enumerate(simplices[d]):
            for drop in range(len(s)):
                face = s[:drop] + s[drop + 1:]
                boundary[d][(index[d - 1][face], k)] = (-1) ** drop
    level_map: Dict[str, int] = {}
    for d in range(m + 1):
        for s, cid in zip(simplices[d], cells[d]):
            lv = None
            if levels is not None:
                lv = levels.get(s)
            level_map[cid] = lv if lv is not None else max(level_default, d)
    bset: Optional[FrozenSet[str]] = None
    if boundary_vertices is not None or boundary_simplices is not None:
        bv = set(boundary_vertices or ())
        bs = {tuple(sorted(s)) for s in (boundary_simplices or ())}
        chosen = set()
        for d in range(m + 1):
            for s, cid in zip(simplices[d], cells[d]):
                if (bv and all(v in bv for v in s)) or s in bs:
                    chosen.add(cid)
        bset = frozenset(chosen)
    K = FilteredComplex(m, cells, boundary, level_map, bset, simplices)
    K.validate()
    return K


def mark_levels(K: FilteredComplex,
                assignment: Mapping[str, int]) -> FilteredComplex:
    """Copy of K with some cell levels overridden (validated)."""
    levels = dict(K.levels)
    levels.update(assignment)
    out = FilteredComplex(K.dim, [list(l) for l in K.cells],
                          [dict(b) for b in K.boundary], levels,
                          K.boundary_ids,
                          [list(s) for s in K.simplices] if K.simplices else None)
    out.validate()
    return out


# ---------------------------------------------------------------------------
# corpus builders
# ---------------------------------------------------------------------------

def sphere(n: int) -> FilteredComplex:
    """Boundary of the (n+1)-simplex."""
    verts = [f"v{k}" for k in range(n + 2)]
    tops = list(itertools.combinations(verts, n + 1))
    return from_simplices(tops)


def torus() -> FilteredComplex:
    """Minimal 7-vertex triangulated torus."""
    v = [f"t{k}" for k in range(7)]
    tops = []
    for i in range(7):
        tops.append((v[i % 7], v[(i + 1) % 7], v[(i + 3) % 7]))
        tops.append((v[i % 7], v[(i + 2) % 7], v[(i + 3) % 7]))
    return from_simplices(tops)


def pinched_torus() -> FilteredComplex:
    """Torus with one meridian collapsed: an annulus with both rims coned
    to a single vertex.  The pinch vertex is the only deeper stratum."""
    v = "p"
    a = [f"a{i}" for i in range(6)]
    b = [f"b{i}" for i in range(6)]
    tops: List[Tuple] = []
    for i in range(6):
        j = (i + 1) % 6
        tops.append((a[i], a[j], b[i]))
        tops.append((a[j], b[i], b[j]))
        tops.append((v, a[i], a[j]))
        tops.append((v, b[i], b[j]))
    levels = {(v,): 0}
    return from_simplices(tops, levels=levels)


def disk() -> FilteredComplex:
    """Cone over a hexagon; the hexagon is the marked boundary."""
    c = "c"
    h = [f"h{i}" for i in range(6)]
    tops = [(c, h[i], h[(i + 1) % 6]) for i in range(6)]
    return from_simplices(tops, boundary_vertices=h)


def suspension(K: FilteredComplex, pole_level: Optional[int] = None,
               pole_names: Tuple[str, str] = ("N", "S")) -> FilteredComplex:
    """Simplicial suspension; requires simplicial structure.

    Cells coming from the old top stratum move to the new top; old cells
    at deeper levels keep their levels, and the two poles get
    ``pole_level`` (default 0).  Callers needing a finer singular marking
    should apply :func:`mark_levels` afterwards.
    """
    if K.simplices is None:
        raise ComplexError("suspension needs simplicial structure")
    m = K.dim + 1
    npole, spole = pole_names
    tops: List[Tuple] = []
    for s in K.simplices[K.dim]:
        tops.append(tuple(sorted(s + (npole,))))
        tops.append(tuple(sorted(s + (spole,))))
    levels: Dict[Tuple, int] = {(npole,): pole_level if pole_level is not None else 0,
                                (spole,): pole_level if pole_level is not None else 0}
    out = from_simplices(tops, levels=levels)
    # carry over deeper strata of K: a cell of the equator keeps its old
    # level when it was below the old top
    relabel: Dict[str, int] = {}
    for d in range(K.dim + 1):
        for s, cid in zip(K.simplices[d], K.cells[d]):
            if K.levels[cid] < K.dim:
                relabel[_simplex_id(s)] = K.levels[cid]
    return mark_levels(out, relabel) if relabel else out


def suspension_of_torus() -> FilteredComplex:
    return suspension(torus())


def double_suspension_of_torus() -> FilteredComplex:
    """Hand-built 4-dimensional pseudomanifold: suspend the suspended torus.

    The singular set is the circle through the four suspension points; all
    of its cells sit at filtration level 1.
    """
    st = suspension(torus(), pole_names=("N1", "S1"))
    out = suspension(st, pole_names=("N2", "S2"))
    circle_vertices = {"N1", "S1", "N2", "S2"}
    assignment = {}
    assert out.simplices is not None
    for d in range(out.dim + 1):
        for s, cid in zip(out.simplices[d], out.cells[d]):
            if all(v in circle_vertices for v in s):
                assignment[cid] = 1
    return mark_levels(out, assignment)


# ---------------------------------------------------------------------------
# products and subdivision
# ---------------------------------------------------------------------------

def simplicial_product(K: FilteredComplex, L: FilteredComplex,
                       level_rule: Optional[Callable[[Tuple, Tuple], int]] = None
                       ) -> FilteredComplex:
    """Staircase triangulation of the product of two simplicial complexes.

    Cells are monotone chains in the product vertex order; this is the
    standard simplicial product, compatible across faces.  ``level_rule``
    maps (K-vertex-set, L-vertex-set) of a product cell to its level.
    """
    if K.simplices is None or L.simplices is None:
        raise ComplexError("product needs simplicial structures")
    ku = sorted({v for layer in K.simplices for s in layer for v in s})
    lu = sorted({v for layer in L.simplices for s in layer for v in s})
    krank = {v: i for i, v in enumerate(ku)}
    lrank = {v: i for i, v in enumerate(lu)}

    tops: Set[Tuple] = set()
    for sk in K.simplices[K.dim]:
        for sl in L.simplices[L.dim]:
            p = len(sk) - 1
            q = len(sl) - 1
            # staircase paths from (0,0) to (p,q)
            for moves in itertools.combinations(range(p + q), p):
                path = [(0, 0)]
                for step in range(p + q):
                    i, j = path[-1]
                    path.append((i + 1, j) if step in moves else (i, j + 1))
                chain = tuple(
                    (krank[sk[i]], lrank[sl[j]], sk[i], sl[j]) for i, j in path
                )
                tops.add(tuple((u, w) for (_, _, u, w) in
                               sorted(chain, key=lambda t: (t[0], t[1]))))
    out = from_simplices(sorted(tops))
    if level_rule is not None:
        assert out.simplices is not None
        assignment = {}
        for d in range(out.dim + 1):
            for s, cid in zip(out.simplices[d], out.cells[d]):
                kset = tuple(sorted({u for (u, w) in s}))
                lset = tuple(sorted({w for (u, w) in s}))
                assignment[cid] = level_rule(kset, lset)
        out = mark_levels(out, assignment)
    return out


def barycentric_subdivision(K: FilteredComplex) -> FilteredComplex:
    """Barycentric subdivision with inherited filtration levels.

    New vertices are the cells of K; new simplices are chains of the face
    poset.  Maximal chains are the prefix flags of vertex permutations of
    the maximal cells.  A chain inherits the level of its largest cell and
    lies in the subdivided marked boundary iff its largest cell does.
    Requires a pure simplicial complex.
    """
    if K.simplices is None:
        raise ComplexError("subdivision needs simplicial structure")
    info: Dict[Tuple, str] = {}
    for d in range(K.dim + 1):
        for s, cid in zip(K.simplices[d], K.cells[d]):
            info[s] = cid
    # pure check: every cell is a face of a top cell
    tops_old = set(K.simplices[K.dim])
    for d in range(K.dim):
        for s in K.simplices[d]:
            if not any(set(s) <= set(t) for t in tops_old):
                raise ComplexError("subdivision requires a pure complex")
    maximal_flags: Set[Tuple[str, ...]] = set()
    for t in tops_old:
        for perm in itertools.permutations(t):
            chain = tuple(info[tuple(sorted(perm[:k]))]
                          for k in range(1, len(perm) + 1))
            maximal_flags.add(chain)
    out = from_simplices(sorted(maximal_flags))
    assert out.simplices is not None
    id_to_old = {cid: s for s, cid in info.items()}
    level_assign: Dict[str, int] = {}
    bnd: Set[str] = set()
    for d in range(out.dim + 1):
        for s, cid in zip(out.simplices[d], out.cells[d]):
            biggest = max((id_to_old[oc] for oc in s), key=len)
            level_assign[cid] = K.levels[info[biggest]]
            if K.boundary_ids is not None and info[biggest] in K.boundary_ids:
                bnd.add(cid)
    out = mark_levels(out, level_assign)
    if K.boundary_ids is not None:
        out = FilteredComplex(out.dim, out.cells, out.boundary, out.levels,
                              frozenset(bnd), out.simplices)
        out.validate()
    return out

"""Intersection homology of finite filtered complexes.

Chains use rational coefficients (exact; betti numbers over any field of
characteristic zero agree).  A cell is allowable in chain degree i when its
combinatorial intersection dimension with each filtration piece X_{m-k}
stays within the perversity budget i - k + p_k; the perversity-i chain
space is then the span of allowable i-cells whose boundaries stay allowable
in degree i-1.  Betti numbers come from ranks of coordinate submatrices of
the boundary maps; only the relative (marked-boundary quotient) variant
needs explicit kernel bases.  All linear algebra is exact integer
elimination; this module contains no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Set, Tuple

from .complexes import (ComplexError, FilteredComplex, barycentric_subdivision,
                        from_simplices)
from .ratlinalg import (Column, column_reduce, fraction_columns_to_int,
                        sparse_matmul)
from .strata import Perversity, make_perversity


class IHError(ValueError):
    pass


# ---------------------------------------------------------------------------
# allowability
# ---------------------------------------------------------------------------

def allowable(dims_by_codim: Mapping[int, Optional[int]], p: Perversity,
              i: int) -> bool:
    """Perversity allowability of a support with known intersection dims.

    ``dims_by_codim[k]`` is dim(Y intersect X_{m-k}) for k = 2..m, with None
    meaning the intersection is empty (dimension -infinity).  True iff
    dim <= i - k + p_k for every k >= 2.
    """
    for k in range(2, p.m + 1):
        d = dims_by_codim.get(k)
        if d is None:
            continue
        if d > i - k + p[k]:
            return False
    return True


def cell_dims_by_codim(K: FilteredComplex, d: int, k: int) -> Dict[int, Optional[int]]:
    dims = K.intersection_dims(d, k)
    return {codim: dims[K.dim - codim] for codim in range(2, K.dim + 1)}


def _allowable_cells(K: FilteredComplex, p: Perversity, degree: int,
                     cell_dim: int, within: Optional[Set[str]] = None
                     ) -> List[int]:
    """Indices of ``cell_dim``-cells allowable in chain degree ``degree``."""
    out = []
    for k in range(K.n_cells(cell_dim)):
        cid = K.cells[cell_dim][k]
        if within is not None and cid not in within:
            continue
        if allowable(cell_dims_by_codim(K, cell_dim, k), p, degree):
            out.append(k)
    return out


# ---------------------------------------------------------------------------
# rank bookkeeping
# ---------------------------------------------------------------------------

def _restrict_columns(cols: Sequence[Column], keep_cols: Sequence[int],
                      drop_rows: Optional[Set[int]] = None) -> List[Column]:
    out = []
    for c in keep_cols:
        col = cols[c]
        if drop_rows:
            col = {r: v for r, v in col.items() if r not in drop_rows}
        out.append(dict(col))
    return out


@dataclass(frozen=True)
class ChainComplexInfo:
    """Dimensions and boundary ranks of a perversity chain complex."""

    m: int
    allowable_counts: Tuple[int, ...]
    chain_dims: Tuple[int, ...]
    betti: Tuple[int, ...]


def intersection_chain_complex(K: FilteredComplex, p: Perversity
                               ) -> ChainComplexInfo:
    """Chain-space dimensions and betti numbers for one perversity."""
    betti, chain_dims, acounts = _ih_closed(K, p)
    return ChainComplexInfo(K.dim, tuple(acounts), tuple(chain_dims),
                            tuple(betti))


def _ih_closed(K: FilteredComplex, p: Perversity
               ) -> Tuple[List[int], List[int], List[int]]:
    m = K.dim
    if p.m != m:
        raise IHError(f"perversity is for dimension {p.m}, complex has {m}")
    allow: List[List[int]] = []
    allow_sets: List[Set[int]] = []
    for i in range(m + 1):
        idx = _allowable_cells(K, p, i, i)
        allow.append(idx)
        allow_sets.append(set(idx))
    rank_full = [0] * (m + 2)
    rank_bad = [0] * (m + 2)
    for i in range(1, m + 1):
        cols = K.boundary_columns(i)
        sub = _restrict_columns(cols, allow[i])
        rank_full[i] = column_reduce(sub)[0]
        # rows that are NOT allowable in degree i-1
        bad_rows = {r for r in range(K.n_cells(i - 1))
                    if r not in allow_sets[i - 1]}
        if bad_rows:
            sub_bad = [
                {r: v for r, v in col.items() if r in bad_rows} for col in sub
            ]
            rank_bad[i] = column_reduce(sub_bad)[0]
    chain_dims = [len(allow[i]) - rank_bad[i] for i in range(m + 1)]
    betti = []
    for i in range(m + 1):
        ker = len(allow[i]) - rank_full[i]
        img = rank_full[i + 1] - rank_bad[i + 1] if i + 1 <= m else 0
        betti.append(ker - img)
    return betti, chain_dims, [len(a) for a in allow]


def _ic_basis(K: FilteredComplex, p: Optional[Perversity], i: int,
              within: Optional[Set[str]] = None) -> List[Column]:
    """Explicit basis of the degree-i perversity chain space.

    Returns sparse integer columns over the full cell index set of C_i.
    ``p=None`` means ordinary chains (no allowability conditions).
    ``within`` restricts to a subcomplex given by cell ids.
    """
    if p is None:
        keep = [k for k in range(K.n_cells(i))
                if within is None or K.cells[i][k] in within]
        bad_rows: Set[int] = set()
    else:
        keep = _allowable_cells(K, p, i, i, within)
        prev_ok = set(_allowable_cells(K, p, i - 1, i - 1)) if i > 0 else set()
        bad_rows = {r for r in range(K.n_cells(i - 1)) if r not in prev_ok}
    if i == 0 or not bad_rows:
        return [{k: 1} for k in keep]
    cols = K.boundary_columns(i)
    sub = [
        {r: v for r, v in cols[c].items() if r in bad_rows} for c in keep
    ]
    _, kernel = column_reduce(sub, track_kernel=True)
    kernel_int = fraction_columns_to_int(kernel)
    return [
        {keep[j]: v for j, v in vec.items()} for vec in kernel_int
    ]


def _quotient_betti(K: FilteredComplex, p: Optional[Perversity],
                    sub_ids: Set[str]) -> List[int]:
    """Betti of IC(K)/IC(sub) via explicit bases (small complexes)."""
    m = K.dim
    bases = [_ic_basis(K, p, i) for i in range(m + 1)]
    subbases = [_ic_basis(K, p, i, within=sub_ids) for i in range(m + 1)]
    q_dims = [len(b) - len(s) for b, s in zip(bases, subbases)]

    def image_cols(i: int) -> List[Column]:
        # boundary images of IC_i(K) basis vectors, as columns over C_{i-1}
        if i < 1 or i > m:
            return []
        return sparse_matmul(K.boundary_columns(i), bases[i])

    rbar = [0] * (m + 2)
    for i in range(1, m + 1):
        imgs = image_cols(i)
        s_prev = subbases[i - 1]
        combined = imgs + s_prev
        rbar[i] = column_reduce(combined)[0] - column_reduce(s_prev)[0]
    betti = []
    for i in range(m + 1):
        ker = q_dims[i] - rbar[i]
        img = rbar[i + 1] if i + 1 <= m else 0
        betti.append(ker - img)
    return betti


# ---------------------------------------------------------------------------
# public results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IHResult:
    perversity: Optional[Perversity]
    betti: Tuple[int, ...]
    chain_dims: Tuple[int, ...]
    variant: str  # closed | relative

    def __str__(self) -> str:
        name = self.perversity.name() if self.perversity else "ordinary"
        return f"{name} [{self.variant}]: {self.betti}"


def homology(K: FilteredComplex, variant: str = "closed") -> IHResult:
    """Ordinary homology betti numbers (exact rational ranks)."""
    m = K.dim
    if variant == "closed":
        rank_full = [0] * (m + 2)
        for i in range(1, m + 1):
            rank_full[i] = column_reduce(K.boundary_columns(i))[0]
        betti = []
        for i in range(m + 1):
            ker = K.n_cells(i) - rank_full[i]
            img = rank_full[i + 1] if i + 1 <= m else 0
            betti.append(ker - img)
        dims = tuple(K.n_cells(i) for i in range(m + 1))
        return IHResult(None, tuple(betti), dims, "closed")
    if variant == "relative":
        if K.boundary_ids is None:
            raise IHError("relative variant needs a marked boundary")
        betti = _quotient_betti(K, None, set(K.boundary_ids))
        dims = tuple(K.n_cells(i) - sum(1 for c in K.cells[i]
                                        if c in K.boundary_ids)
                     for i in range(m + 1))
        return IHResult(None, tuple(betti), dims, "relative")
    raise IHError(f"unknown variant {variant!r}")


def ih_betti(K: FilteredComplex, p: Perversity,
             variant: str = "closed") -> IHResult:
    """Intersection homology betti numbers for one perversity.

    closed: homology of the allowable chain complex.  relative: homology of
    the quotient by the allowable chains of the marked boundary (the
    surrogate for closed-support homology of the compactified model).
    """
    if variant == "closed":
        info = intersection_chain_complex(K, p)
        return IHResult(p, info.betti, info.chain_dims, "closed")
    if variant == "relative":
        if K.boundary_ids is None:
            raise IHError("relative variant needs a marked boundary")
        betti = _quotient_betti(K, p, set(K.boundary_ids))
        info = intersection_chain_complex(K, p)
        return IHResult(p, tuple(betti), info.chain_dims, "relative")
    raise IHError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# pseudomanifold validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PseudomanifoldReport:
    is_pseudomanifold: bool
    top_cells_dense: bool
    singular_cells: Tuple[str, ...]
    singular_codim: Optional[int]
    used_link_checks: bool
    detail: str


def _cofaces_map(K: FilteredComplex, d: int) -> Dict[int, List[int]]:
    out: Dict[int, List[int]] = {}
    if d + 1 <= K.dim:
        for (r, c), v in K.boundary[d + 1].items():
            if v:
                out.setdefault(r, []).append(c)
    return out


def _is_face_of_top(K: FilteredComplex) -> bool:
    reach: List[Set[int]] = [set() for _ in range(K.dim + 1)]
    reach[K.dim] = set(range(K.n_cells(K.dim)))
    for d in range(K.dim, 0, -1):
        for (r, c), v in K.boundary[d].items():
            if v and c in reach[d]:
                reach[d - 1].add(r)
    return all(len(reach[d]) == K.n_cells(d) for d in range(K.dim + 1))


def _link_complex(K: FilteredComplex, s: Tuple) -> Optional[FilteredComplex]:
    assert K.simplices is not None
    sset = set(s)
    tops = []
    for t in K.simplices[K.dim]:
        if sset <= set(t):
            rest = tuple(v for v in t if v not in sset)
            if rest:
                tops.append(rest)
    if not tops:
        return None
    return from_simplices(tops)


def _sphere_betti(d: int) -> Tuple[int, ...]:
    if d == 0:
        return (2,)
    return tuple([1] + [0] * (d - 1) + [1])


def validate_pseudomanifold(K: FilteredComplex) -> PseudomanifoldReport:
    """Density and link checks; reports the singular cells and their codim.

    Codimension-one cells are singular when their top-coface count differs
    from two (one is allowed on the marked boundary).  With simplicial
    structure, deeper cells are also probed by link homology against the
    matching sphere (or point, on the marked boundary).  A pseudomanifold
    needs dense top cells and singular codimension at least 2.
    """
    K.validate()
    m = K.dim
    dense = _is_face_of_top(K)
    singular: List[str] = []
    bnd = K.boundary_ids or frozenset()
    cof = _cofaces_map(K, m - 1) if m >= 1 else {}
    for k in range(K.n_cells(m - 1) if m >= 1 else 0):
        cid = K.cells[m - 1][k]
        count = len(cof.get(k, []))
        expected = 1 if cid in bnd else 2
        if count != expected:
            singular.append(cid)
    used_links = False
    if K.simplices is not None and m >= 2:
        used_links = True
        for d in range(m - 1):
            for s, cid in zip(K.simplices[d], K.cells[d]):
                link = _link_complex(K, s)
                if link is None:
                    continue
                expected_dim = m - d - 1
                if link.dim != expected_dim:
                    singular.append(cid)
                    continue
                b = homology(link).betti
                if cid in bnd:
                    ok = b == tuple([1] + [0] * link.dim)
                else:
                    ok = b == _sphere_betti(link.dim)
                if not ok:
                    singular.append(cid)
    singular_unique = tuple(dict.fromkeys(singular))
    codim = None
    if singular_unique:
        sdim = max(K.cell_dim(c) for c in singular_unique)
        codim = m - sdim
    is_pm = dense and (codim is None or codim >= 2)
    detail = (f"singular cells: {len(singular_unique)}, codim {codim}"
              if singular_unique else "no singular cells detected")
    return PseudomanifoldReport(is_pm, dense, singular_unique, codim,
                                used_links, detail)


# ---------------------------------------------------------------------------
# orientation, duality, invariance
# ---------------------------------------------------------------------------

def orientation_signs(K: FilteredComplex) -> Optional[Dict[str, int]]:
    """Top-cell signs making the total top boundary vanish off the marked
    boundary; None when no consistent assignment exists."""
    m = K.dim
    ntop = K.n_cells(m)
    if ntop == 0:
        return None
    cof = _cofaces_map(K, m - 1)
    incid: Dict[Tuple[int, int], int] = {}
    for (r, c), v in K.boundary[m].items():
        if v:
            incid[(r, c)] = v
    faces_of: Dict[int, List[int]] = {}
    for (r, c), v in K.boundary[m].items():
        if v:
            faces_of.setdefault(c, []).append(r)
    signs: Dict[int, int] = {}
    for start in range(ntop):
        if start in signs:
            continue
        signs[start] = 1
        stack = [start]
        while stack:
            c0 = stack.pop()
            for r in faces_of.get(c0, []):
                cs = cof.get(r, [])
                if len(cs) != 2:
                    continue
                c1 = cs[0] if cs[1] == c0 else cs[1]
                want = -signs[c0] * incid[(r, c0)] * incid[(r, c1)]
                # incidences are +-1 for regular complexes; bail otherwise
                if abs(incid[(r, c0)]) != 1 or abs(incid[(r, c1)]) != 1:
                    return None
                if c1 in signs:
                    if signs[c1] != want:
                        return None
                else:
                    signs[c1] = want
                    stack.append(c1)
    # verify: total boundary supported on the marked boundary only
    bnd = K.boundary_ids or frozenset()
    total: Dict[int, int] = {}
    for (r, c), v in K.boundary[m].items():
        total[r] = total.get(r, 0) + signs[c] * v
    for r, v in total.items():
        if v != 0 and K.cells[m - 1][r] not in bnd:
            return None
    return {K.cells[m][c]: s for c, s in signs.items()}


@dataclass(frozen=True)
class DualityReport:
    passed: bool
    p: Perversity
    q: Perversity
    left: Tuple[int, ...]
    right: Tuple[int, ...]
    variant_right: str
    detail: str


def duality_check(K: FilteredComplex, p: Perversity, q: Perversity
                  ) -> DualityReport:
    """Compare IH^p_k against IH^q_{m-k} for complementary perversities.

    The complex must be orientable (consistent top-cell signs).  When a
    boundary is marked, the right-hand side uses the relative variant as
    the closed-support surrogate.
    """
    if not p.is_complementary(q):
        raise IHError("perversities are not complementary")
    if orientation_signs(K) is None:
        raise IHError("complex is not orientable (or has unmarked boundary)")
    m = K.dim
    left = ih_betti(K, p, "closed").betti
    variant_right = "relative" if K.boundary_ids else "closed"
    right = ih_betti(K, q, variant_right).betti
    pairs_ok = all(left[k] == right[m - k] for k in range(m + 1))
    detail = "; ".join(
        f"IH_{k}^p={left[k]} vs IH_{m - k}^q={right[m - k]}"
        for k in range(m + 1))
    return DualityReport(pairs_ok, p, q, tuple(left), tuple(right),
                         variant_right, detail)


@dataclass(frozen=True)
class InvarianceReport:
    passed: bool
    base: Tuple[int, ...]
    subdivided: Optional[Tuple[int, ...]]
    alternative: Optional[Tuple[int, ...]]
    detail: str


def invariance_check(K: FilteredComplex, p: Perversity,
                     alternative: Optional[FilteredComplex] = None,
                     subdivide: bool = True) -> InvarianceReport:
    """Recompute IH after a barycentric subdivision and/or an alternative
    admissible filtration; PASS iff all betti vectors agree."""
    base = ih_betti(K, p, "closed").betti
    sd_betti = None
    if subdivide:
        sd = barycentric_subdivision(K)
        sd_betti = ih_betti(sd, p, "closed").betti
    alt_betti = None
    if alternative is not None:
        alternative.validate()
        alt_betti = ih_betti(alternative, p, "closed").betti
    passed = all(b is None or tuple(b) == tuple(base)
                 for b in (sd_betti, alt_betti))
    return InvarianceReport(passed, tuple(base), sd_betti, alt_betti,
                            f"base {base}, subdivided {sd_betti}, "
                            f"alternative {alt_betti}")


def euler_characteristic(K: FilteredComplex) -> int:
    return sum((-1) ** d * K.n_cells(d) for d in range(K.dim + 1))

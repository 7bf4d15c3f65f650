"""Combinatorial sheet models of the variety glued from map sheets.

Away from the critical-value and non-properness curves a generically finite
plane map is a covering; the model keeps one abstract sheet per fiber point
over each region of the target, records how sheets meet along the curves
(root merging at critical values, escape to infinity over the
non-properness set), and compactifies to a filtered complex whose
(intersection) homology feeds the equivalence harness.

Three families are supported: proper maps with empty singular locus (a
plain cell model of the target), the built-in real family (x, x^k q(y))
with q quadratic, and complex product-structured maps (x, a(x) y + b(x)).
Everything else raises ModelError with a clear message.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .gaussian import gr
from .polynomials import MultiPoly, PolyMap
from .varieties import AlgebraicSet
from .asymptotics import (AnalysisError, MapAnalysis, analyze_map,
                          fiber_count, solve_fiber_numeric, TARGET_VARS)
from .complexes import FilteredComplex, from_simplices, mark_levels, simplicial_product
from .ih import homology, ih_betti, validate_pseudomanifold
from .strata import Perversity, standard_perversities


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Region:
    name: str
    description: str
    sample_point: Tuple[complex, complex]
    sheet_count: int
    sheets: Tuple[str, ...]


@dataclass(frozen=True)
class GluingRecord:
    curve: str
    kind: str                      # merge | escape
    sheets: Tuple[str, ...]        # all sheets attached along the curve
    pairs: Tuple[Tuple[str, str], ...]  # same-region sheet pairs

    def to_json(self) -> Dict:
        return {
            "curve": self.curve,
            "kind": self.kind,
            "sheets": list(self.sheets),
            "pairs": [list(p) for p in self.pairs],
        }


@dataclass(frozen=True)
class SheetModel:
    map: PolyMap
    kind: str                      # proper-cell | real-family | complex-product
    regions: Tuple[Region, ...]
    gluing: Tuple[GluingRecord, ...]
    curves: Dict[str, AlgebraicSet]
    analysis: MapAnalysis
    radius: float

    @property
    def total_sheets(self) -> int:
        return sum(r.sheet_count for r in self.regions)

    def gluing_pairs(self) -> Tuple[Tuple[str, str], ...]:
        pairs: List[Tuple[str, str]] = []
        for g in self.gluing:
            for p in g.pairs:
                if p not in pairs:
                    pairs.append(p)
        return tuple(sorted(pairs))

    def to_json(self) -> Dict:
        return {
            "kind": self.kind,
            "radius": self.radius,
            "regions": [
                {
                    "name": r.name,
                    "description": r.description,
                    "sample_point": [[r.sample_point[0].real,
                                      r.sample_point[0].imag],
                                     [r.sample_point[1].real,
                                      r.sample_point[1].imag]],
                    "sheet_count": r.sheet_count,
                    "sheets": list(r.sheets),
                }
                for r in self.regions
            ],
            "gluing": [g.to_json() for g in self.gluing],
            "curves": {k: v.to_json() for k, v in self.curves.items()},
        }


# ---------------------------------------------------------------------------
# fiber tracking
# ---------------------------------------------------------------------------

def _fiber_points(F: PolyMap, target: Sequence[complex]) -> List[complex]:
    """Second coordinates of the fiber over a target (built-in families)."""
    sols = solve_fiber_numeric(F, list(target))
    return [s[1] for s in sols]


def track_fiber_to_curve(F: PolyMap, start: Sequence[complex],
                         end: Sequence[complex], step: float = 1e-2,
                         tol: float = 1e-6) -> str:
    """Classify what fiber solutions do as the base point reaches a curve.

    Continues the fiber along the straight segment from start to the curve
    point ``end`` with the given step, matching roots greedily between
    consecutive steps, then refines at parameter distances 1e-2, 1e-4, 1e-6
    from the curve.  Returns 'merge' when two tracked roots collapse,
    'escape' when some root norm blows up, else 'regular'.
    """
    start = np.array([complex(c) for c in start])
    end = np.array([complex(c) for c in end])

    def roots_at(t: float) -> List[complex]:
        pt = (1 - t) * start + t * end
        return sorted(_fiber_points(F, list(pt)),
                      key=lambda z: (round(z.real, 9), round(z.imag, 9)))

    base = roots_at(0.0)
    if not base:
        return "regular"
    prev = base
    t = 0.0
    while t < 1.0 - 5 * step:
        t += step
        cur = _fiber_points(F, list((1 - t) * start + t * end))
        if len(cur) < len(prev):
            break
        matched = []
        pool = list(cur)
        for z in prev:
            j = int(np.argmin([abs(z - w) for w in pool]))
            matched.append(pool.pop(j))
        prev = matched
    # refinement scales near the curve
    stats = []
    for eps in (1e-2, 1e-4, 1e-6):
        rts = _fiber_points(F, list((1 - (1 - eps)) * start + (1 - eps) * end))
        if not rts:
            stats.append(("gone", 0.0, 0.0))
            continue
        norms = max(abs(z) for z in rts)
        mind = min((abs(a - b)
                    for i, a in enumerate(rts) for b in rts[i + 1:]),
                   default=float("inf"))
        stats.append(("ok", norms, mind))
    norms_seq = [s[1] for s in stats if s[0] == "ok"]
    dists_seq = [s[2] for s in stats if s[0] == "ok"]
    if len(norms_seq) >= 2 and norms_seq[-1] > 1e2 and \
            all(b > a * 5 for a, b in zip(norms_seq, norms_seq[1:])):
        return "escape"
    if len(dists_seq) >= 2 and dists_seq[-1] < 1e-2 and \
            all(b < a * 0.5 + tol for a, b in zip(dists_seq, dists_seq[1:])):
        return "merge"
    if any(s[0] == "gone" for s in stats):
        return "escape"
    return "regular"


def _classify_with_agreement(F: PolyMap, start, curve_points) -> str:
    """Require the same classification at three sampled curve points."""
    verdicts = {track_fiber_to_curve(F, start, cp) for cp in curve_points}
    if len(verdicts) != 1:
        raise ModelError(f"fiber tracking disagreed across samples: {verdicts}")
    return verdicts.pop()


# ---------------------------------------------------------------------------
# model builders
# ---------------------------------------------------------------------------

def _is_builtin_real_family(F: PolyMap) -> bool:
    from .asymptotics import real_jelonek_builtin
    return real_jelonek_builtin(F) is not None


def _is_complex_product(F: PolyMap) -> bool:
    x, y = F.variables
    f1, f2 = F.components
    if f1 != MultiPoly.var(F.variables, x):
        return False
    if f2.degree_in(y) != 1:
        return False
    lead = f2.coefficients_in(y).get(1)
    return lead is not None and lead.evaluate(
        [gr(0), gr(0)]).is_zero()


def build_sheet_model(F: PolyMap, seed: int = 0) -> SheetModel:
    """Sheet model over the region decomposition of the target plane.

    Regions come from the critical-value and non-properness curves; sheet
    counts from fiber counting at a sample point per region; gluing from
    numeric fiber tracking toward three sampled points of each curve.
    """
    if F.n != 2:
        raise ModelError("sheet models implemented for n = 2 only")
    analysis = analyze_map(F, seed=seed)
    proper = analysis.properness.verdict == "Proper"
    sing_empty = analysis.singular.is_trivially_empty()
    if proper and sing_empty:
        region = Region("all", "whole target", (0j, 0j), 1, ("sheet1",))
        return SheetModel(F, "proper-cell", (region,), (), {
            "S_F": analysis.jelonek_complex,
            "K_0": analysis.critical,
        }, analysis, radius=2.0)
    if _is_builtin_real_family(F):
        return _build_real_family_model(F, analysis, seed)
    if _is_complex_product(F):
        return _build_complex_product_model(F, analysis, seed)
    raise ModelError(
        "unsupported map: no exact region decomposition available "
        "(supported: proper maps with empty singular locus, the real "
        "family (x, c*x^k*(y^2+by+c)), complex products (x, a(x)y+b(x)))")


def _auto_radius(samples: Sequence[complex]) -> float:
    biggest = max([abs(z) for z in samples] + [1.0])
    return 2.0 * float(biggest)


def _build_real_family_model(F: PolyMap, analysis: MapAnalysis,
                             seed: int) -> SheetModel:
    # region samples: right/left of the escape line, above the fold; below
    a_pt = (1 + 0j, 1 + 0j)
    b_pt = (-1 + 0j, 1 + 0j)
    c_pt = (0j, -1 + 0j)
    counts = {}
    for name, pt in (("right", a_pt), ("left", b_pt), ("below", c_pt)):
        counts[name] = fiber_count(
            F, [gr(round(pt[0].real)), gr(round(pt[1].real))], "real")
    sheets_a = tuple(f"sheet{k+1}" for k in range(counts["right"]))
    sheets_b = tuple(f"sheet{k+1+counts['right']}" for k in range(counts["left"]))
    regions = (
        Region("right", "alpha > 0, above the fold curve", a_pt,
               counts["right"], sheets_a),
        Region("left", "alpha < 0, above the fold curve", b_pt,
               counts["left"], sheets_b),
        Region("below", "below the fold curve", c_pt, counts["below"], ()),
    )
    # gluing by tracking: fold curve (critical values) and escape line
    k0 = analysis.critical
    fold_pts_right = [(0.5 + 0j, complex(-0.25 - 1e-12)),
                      (1 + 0j, -1 + 0j), (1.5 + 0j, -2.25 + 0j)]
    fold_pts_left = [(-0.5 + 0j, -0.25 + 0j), (-1 + 0j, -1 + 0j),
                     (-1.5 + 0j, -2.25 + 0j)]
    esc_pts = [(0j, 0.5 + 0j), (0j, 1 + 0j), (0j, 2 + 0j)]
    recs: List[GluingRecord] = []
    kind_fold_r = _classify_with_agreement(F, a_pt, fold_pts_right)
    kind_fold_l = _classify_with_agreement(F, b_pt, fold_pts_left)
    kind_esc_r = _classify_with_agreement(F, a_pt, esc_pts)
    kind_esc_l = _classify_with_agreement(F, b_pt, esc_pts)
    if kind_fold_r == "merge" and len(sheets_a) == 2:
        recs.append(GluingRecord("K_0 (alpha > 0)", "merge", sheets_a,
                                 (sheets_a,)))
    if kind_fold_l == "merge" and len(sheets_b) == 2:
        recs.append(GluingRecord("K_0 (alpha < 0)", "merge", sheets_b,
                                 (sheets_b,)))
    if kind_esc_r == "escape" and kind_esc_l == "escape":
        recs.append(GluingRecord(
            "S_F", "escape", sheets_a + sheets_b,
            tuple(p for p in (sheets_a, sheets_b) if len(p) == 2)))
    samples = [p for rec in (fold_pts_right, fold_pts_left, esc_pts)
               for pt in rec for p in pt]
    return SheetModel(F, "real-family", regions, tuple(recs), {
        "S_F": analysis.jelonek_real or analysis.jelonek_complex,
        "K_0": analysis.critical,
    }, analysis, radius=_auto_radius(samples))


def _build_complex_product_model(F: PolyMap, analysis: MapAnalysis,
                                 seed: int) -> SheetModel:
    gen_pt = (1 + 0j, 1 + 0j)
    count = fiber_count(F, [gr(1), gr(1)], "complex")
    sheets = tuple(f"sheet{k+1}" for k in range(count))
    region = Region("off-line", "complement of the escape line", gen_pt,
                    count, sheets)
    esc_pts = [(0j, 0.5 + 0j), (0j, 1 + 0j), (0j, -1 + 0j)]
    kind = _classify_with_agreement(F, gen_pt, esc_pts)
    recs: List[GluingRecord] = []
    if kind == "escape":
        recs.append(GluingRecord("S_F", "escape", sheets, ()))
    return SheetModel(F, "complex-product", (region,), tuple(recs), {
        "S_F": analysis.jelonek_complex,
        "K_0": analysis.critical,
    }, analysis, radius=_auto_radius([p for pt in esc_pts for p in pt]))


# ---------------------------------------------------------------------------
# triangulation
# ---------------------------------------------------------------------------

def _disk_complex(center: str, rim: List[str]) -> FilteredComplex:
    tops = [(center, rim[i], rim[(i + 1) % len(rim)])
            for i in range(len(rim))]
    return from_simplices(tops, boundary_vertices=rim)


def triangulate_model(model: SheetModel,
                      radius: Optional[float] = None) -> FilteredComplex:
    """Compact filtered complex of the model, boundary marked at the rim.

    proper-cell and complex-product models are 4-dimensional staircase
    products of two disks; the real-family model is the 2-complex of four
    fanned sheets sharing the curve cells.  Filtration levels follow the
    curve strata: curve cells one level below the top, the deeper stratum
    (curve crossings and restricted-escape limit points) at level 0.
    """
    if model.kind == "real-family":
        return _triangulate_real_family(model)
    if model.kind in ("proper-cell", "complex-product"):
        return _triangulate_product(model)
    raise ModelError(f"unknown model kind {model.kind!r}")


def _triangulate_real_family(model: SheetModel) -> FilteredComplex:
    if model.total_sheets != 4:
        raise ModelError("real-family triangulation expects 4 sheets")
    right, left = model.regions[0], model.regions[1]
    verts_curve = ["O", "s1", "sR", "p1p", "pRp", "p1m", "pRm"]
    tops: List[Tuple[str, ...]] = []
    hexagons = {}
    for sheet in right.sheets:
        hexagons[sheet] = ["O", "s1", "sR", f"w_{sheet}", "pRp", "p1p"]
    for sheet in left.sheets:
        hexagons[sheet] = ["O", "s1", "sR", f"w_{sheet}", "pRm", "p1m"]
    for sheet, hexv in hexagons.items():
        center = f"i_{sheet}"
        for i in range(6):
            tops.append((center, hexv[i], hexv[(i + 1) % 6]))
    levels: Dict[Tuple, int] = {("O",): 0}
    for v in verts_curve[1:]:
        levels[(v,)] = 1
    for e in (("O", "s1"), ("s1", "sR"), ("O", "p1p"), ("p1p", "pRp"),
              ("O", "p1m"), ("p1m", "pRm")):
        levels[tuple(sorted(e))] = 1
    boundary_simpl: List[Tuple] = []
    for sheet, hexv in hexagons.items():
        w = f"w_{sheet}"
        outer = "pRp" if sheet in right.sheets else "pRm"
        boundary_simpl += [(w,), tuple(sorted(("sR", w))),
                           tuple(sorted((w, outer)))]
    boundary_simpl += [("sR",), ("pRp",), ("pRm",)]
    K = from_simplices(tops, levels=levels,
                       boundary_simplices=boundary_simpl)
    return K


def _triangulate_product(model: SheetModel) -> FilteredComplex:
    alpha_disk = _disk_complex("c", [f"q{i}" for i in range(4)])
    beta_disk = _disk_complex("d", [f"r{i}" for i in range(4)])

    marked = model.kind == "complex-product"

    def level_rule(kset: Tuple, lset: Tuple) -> int:
        if not marked:
            return 4
        if kset == ("c",) and lset == ("d",):
            return 0
        if kset == ("c",):
            return 2
        return 4

    prod = simplicial_product(alpha_disk, beta_disk, level_rule=level_rule)
    assert prod.simplices is not None
    rim_a = {f"q{i}" for i in range(4)}
    rim_b = {f"r{i}" for i in range(4)}
    bnd: Set[str] = set()
    for d in range(prod.dim + 1):
        for s, cid in zip(prod.simplices[d], prod.cells[d]):
            if all(u in rim_a for (u, w) in s) or \
                    all(w in rim_b for (u, w) in s):
                bnd.add(cid)
    out = FilteredComplex(prod.dim, prod.cells, prod.boundary, prod.levels,
                          frozenset(bnd), prod.simplices)
    out.validate()
    return out


# ---------------------------------------------------------------------------
# equivalence harness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceReport:
    verdict: str
    model_kind: str
    m: int
    rank: int
    rank_condition: bool
    jacobian_nowhere_zero: bool
    h_betti: Tuple[int, ...]
    h2: int
    ih_closed: Dict[str, Tuple[int, ...]]
    ih2: Dict[str, int]
    ih_relative: Dict[str, Tuple[int, ...]]
    ih_relative_top: Dict[str, int]
    consistency: str
    notes: Tuple[str, ...]

    def to_json(self) -> Dict:
        return {
            "verdict": self.verdict,
            "model_kind": self.model_kind,
            "dimension": self.m,
            "leading_rank": self.rank,
            "rank_condition": self.rank_condition,
            "jacobian_nowhere_zero": self.jacobian_nowhere_zero,
            "homology": list(self.h_betti),
            "h2": self.h2,
            "ih_closed": {k: list(v) for k, v in self.ih_closed.items()},
            "ih2": dict(self.ih2),
            "ih_relative": {k: list(v) for k, v in self.ih_relative.items()},
            "ih_relative_top": dict(self.ih_relative_top),
            "consistency": self.consistency,
            "notes": list(self.notes),
        }


def equivalence_harness(F: PolyMap,
                        perversities: Optional[Sequence[Perversity]] = None,
                        seed: int = 0,
                        perversity_kinds: Optional[Sequence[str]] = None,
                        radius: Optional[float] = None
                        ) -> Tuple[EquivalenceReport, SheetModel,
                                   FilteredComplex]:
    """Build the model, compute its (intersection) homology, and check the
    implications that are decidable at desk scale.

    Checked: proper maps must have vanishing H_2 and IH_2 (closed variant);
    a non-proper map with nowhere vanishing Jacobian and leading-form rank
    above n-2 must produce a nonvanishing degree-2 intersection class (this
    premise is vacuous on every known desk example; maps with vanishing
    Jacobian are reported as outside the equivalence hypotheses).
    """
    model = build_sheet_model(F, seed=seed)
    if radius is not None:
        model = SheetModel(model.map, model.kind, model.regions, model.gluing,
                           model.curves, model.analysis, radius=float(radius))
    K = triangulate_model(model)
    K.validate()
    m = K.dim
    if perversities is None and perversity_kinds:
        from .strata import make_perversity
        perversities = []
        for s in perversity_kinds:
            if s.startswith("custom:"):
                vals = [int(v) for v in s[len("custom:"):].split(",") if v]
                perversities.append(make_perversity("custom", m, vals))
            else:
                perversities.append(make_perversity(s, m))
    if perversities is None:
        perversities = standard_perversities(m)
    bad = [p for p in perversities if p.m != m]
    if bad:
        raise ModelError(f"perversity dimension mismatch: {bad[0].m} != {m}")
    h = homology(K)
    h2 = h.betti[2] if m >= 2 else 0
    ih_closed: Dict[str, Tuple[int, ...]] = {}
    ih2: Dict[str, int] = {}
    ih_rel: Dict[str, Tuple[int, ...]] = {}
    ih_rel_top: Dict[str, int] = {}
    for p in perversities:
        name = p.name()
        res = ih_betti(K, p, "closed")
        ih_closed[name] = res.betti
        ih2[name] = res.betti[2] if m >= 2 else 0
        if K.boundary_ids:
            rel = ih_betti(K, p, "relative")
            ih_rel[name] = rel.betti
            top_deg = max(m - 2, 0)
            ih_rel_top[name] = rel.betti[top_deg]
    analysis = model.analysis
    verdict = analysis.properness.verdict
    jac_ok = analysis.singular.is_trivially_empty()
    rank_ok = bool(analysis.leading_rank.condition_holds)
    notes: List[str] = []
    consistent = True
    if verdict == "Proper":
        if h2 != 0 or any(v != 0 for v in ih2.values()):
            consistent = False
            notes.append("proper map with nonvanishing degree-2 classes")
        else:
            notes.append("proper: all degree-2 classes vanish, as required")
    elif verdict == "NonProper":
        if jac_ok and rank_ok:
            if all(v == 0 for v in ih2.values()):
                consistent = False
                notes.append(
                    "non-proper map satisfying the equivalence hypotheses "
                    "with vanishing IH_2")
        else:
            notes.append(
                "outside the equivalence hypotheses (Jacobian vanishes on "
                "a curve); degree-2 numbers are reported without a theorem "
                "verdict")
    else:
        notes.append("properness unknown; no implication checked")
    report = EquivalenceReport(
        verdict=verdict,
        model_kind=model.kind,
        m=m,
        rank=analysis.leading_rank.rank,
        rank_condition=rank_ok,
        jacobian_nowhere_zero=jac_ok,
        h_betti=h.betti,
        h2=h2,
        ih_closed=ih_closed,
        ih2=ih2,
        ih_relative=ih_rel,
        ih_relative_top=ih_rel_top,
        consistency="consistent" if consistent else "inconsistent",
        notes=tuple(notes),
    )
    return report, model, K


def builtin_example() -> Tuple[PolyMap, SheetModel, FilteredComplex]:
    """The worked real example (x, x^2 y (y+2)) with its model and complex."""
    from .polynomials import parse_poly
    F = PolyMap((parse_poly("x", ("x", "y")),
                 parse_poly("x^2*y*(y+2)", ("x", "y"))))
    model = build_sheet_model(F)
    K = triangulate_model(model)
    return F, model, K

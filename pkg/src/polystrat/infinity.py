"""Behaviour of polynomial maps at infinity: top forms, escaping arcs,
limit directions.

The top-degree (leading) form of each component controls which directions a
bounded-image subset can escape along: the limit directions of any escaping
arc with bounded image must annihilate every leading form.  This module
computes the leading map, its generic Jacobian rank at random exact points,
the common zero locus of the leading forms, and limit directions of explicit
arcs.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .gaussian import GaussianRational, gr
from .polynomials import (MultiPoly, PolyMap, PolyError, jacobian_matrix,
                          univariate_gcd)
from .varieties import AlgebraicSet


# ---------------------------------------------------------------------------
# arcs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArcTerm:
    exponent: int
    coeff: complex


@dataclass(frozen=True)
class WitnessArc:
    """Parametric arc t -> (sum_k c_k t^{e_k})_j on a punctured interval (0, eps].

    At least one coordinate must carry a negative exponent with nonzero
    coefficient so the arc escapes to infinity as t -> 0+.
    """

    coords: Tuple[Tuple[ArcTerm, ...], ...]
    t_max: float = 1e-2

    def __post_init__(self):
        if not any(
            term.exponent < 0 and abs(term.coeff) > 1e-12
            for coord in self.coords for term in coord
        ):
            raise ValueError("arc does not escape: no negative exponent term")

    @property
    def n(self) -> int:
        return len(self.coords)

    def evaluate(self, t: float) -> List[complex]:
        return [
            sum(term.coeff * t ** term.exponent for term in coord) if coord else 0j
            for coord in self.coords
        ]

    def leading_exponents(self) -> List[int]:
        return [min((term.exponent for term in coord), default=0)
                for coord in self.coords]

    def describe(self) -> str:
        return "; ".join(
            f"coord_{j + 1}: " + _format_arc_coord(coord)
            for j, coord in enumerate(self.coords)
        )

    def to_json(self) -> Dict:
        return {
            "coords": [
                [{"exponent": term.exponent,
                  "coeff": [term.coeff.real, term.coeff.imag]}
                 for term in coord]
                for coord in self.coords
            ]
        }


def monomial_arc(coeffs: Sequence[complex], exponents: Sequence[int]) -> WitnessArc:
    coords = tuple(
        (ArcTerm(int(e), complex(c)),) if abs(c) > 1e-14 else ()
        for c, e in zip(coeffs, exponents)
    )
    return WitnessArc(coords)


def _format_arc_coord(coord: Tuple[ArcTerm, ...]) -> str:
    if not coord:
        return "0.0+0.0i*t^0"
    return " + ".join(
        f"{t.coeff.real:.12g}{t.coeff.imag:+.12g}i*t^{t.exponent}" for t in coord
    )


_FLOAT = r"[+-]?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?"
_ARC_TERM_RE = _re.compile(
    rf"\s*({_FLOAT})({_FLOAT})i\s*\*\s*t\^(-?\d+)\s*$"
)


def parse_arc_file(text: str) -> WitnessArc:
    """Read an arc from `coord_j: c*t^e + ...` lines, c given as a+bi floats."""
    coords: Dict[int, List[ArcTerm]] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ValueError(f"malformed arc line: {line!r}")
        head, rest = line.split(":", 1)
        m = _re.fullmatch(r"coord_(\d+)", head.strip())
        if not m:
            raise ValueError(f"malformed arc coordinate name: {head!r}")
        j = int(m.group(1)) - 1
        terms: List[ArcTerm] = []
        for piece in rest.split(" + "):
            piece = piece.strip()
            if not piece:
                continue
            tm = _ARC_TERM_RE.match(piece)
            if not tm:
                raise ValueError(f"malformed arc term: {piece!r}")
            re_s, im_s, e_s = tm.groups()
            terms.append(ArcTerm(int(e_s), complex(float(re_s), float(im_s))))
        coords[j] = terms
    n = max(coords) + 1
    return WitnessArc(tuple(tuple(coords.get(j, ())) for j in range(n)))


def format_arc_file(arc: WitnessArc) -> str:
    return "\n".join(
        f"coord_{j + 1}: " + _format_arc_coord(coord)
        for j, coord in enumerate(arc.coords)
    ) + "\n"


# ---------------------------------------------------------------------------
# leading-form analysis
# ---------------------------------------------------------------------------

def leading_map(F: PolyMap) -> PolyMap:
    """Componentwise top-degree form; every component is homogeneous."""
    for k, c in enumerate(F.components):
        if c.is_zero():
            raise PolyError(f"component {k + 1} is zero; no leading form")
    return PolyMap(tuple(c.leading_form() for c in F.components))


def leading_zero_locus(F: PolyMap) -> AlgebraicSet:
    """Common zero locus of all component leading forms."""
    top = leading_map(F)
    return AlgebraicSet(F.variables, tuple(top.components))


@dataclass(frozen=True)
class LeadingRankReport:
    rank: int
    n: int
    trials: int
    condition_holds: bool  # rank > n - 2


def _random_gaussian_rational(rng: np.random.Generator,
                              scale: int = 50) -> GaussianRational:
    def frac() -> Fraction:
        num = int(rng.integers(-scale, scale + 1))
        den = int(rng.integers(1, 12))
        return Fraction(num, den)

    return gr(frac(), frac())


def _exact_rank(matrix: List[List[GaussianRational]]) -> int:
    """Gaussian elimination rank over the exact field Q(i)."""
    m = [row[:] for row in matrix]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, nrows) if not m[r][col].is_zero()),
                     None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = m[row][col].inverse()
        m[row] = [x * inv for x in m[row]]
        for r in range(nrows):
            if r != row and not m[r][col].is_zero():
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


def leading_rank(F: PolyMap, trials: int = 8, seed: int = 0) -> LeadingRankReport:
    """Generic rank of the Jacobian of the leading map.

    Maximum exact rank over random Gaussian-rational points.  If the maximum
    stays below n after ``trials`` evaluations, the trial budget escalates to
    32 before the lower rank is reported.
    """
    top = leading_map(F)
    jac = jacobian_matrix(top)
    n = F.n
    rng = np.random.default_rng(seed)
    best = 0
    total = 0
    budget = trials
    while total < budget:
        point = [_random_gaussian_rational(rng) for _ in range(n)]
        entries = [[p.evaluate(point) for p in row] for row in jac]
        best = max(best, _exact_rank(entries))
        total += 1
        if best == n:
            break
        if total == budget and best < n and budget < 32:
            budget = 32
    return LeadingRankReport(rank=best, n=n, trials=total,
                             condition_holds=best > n - 2)


# ---------------------------------------------------------------------------
# directions at infinity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirectionSet:
    """Unit limit directions in R^{2n} (real/imag interleaved), deduplicated."""

    directions: Tuple[Tuple[float, ...], ...]
    tolerance: float = 1e-4
    rejected: int = 0

    def __len__(self) -> int:
        return len(self.directions)


def _to_real_vector(z: Sequence[complex]) -> np.ndarray:
    out = np.empty(2 * len(z))
    for j, c in enumerate(z):
        out[2 * j] = c.real
        out[2 * j + 1] = c.imag
    return out


def tangent_cone_at_infinity(arcs: Sequence[WitnessArc],
                             tolerance: float = 1e-4) -> DirectionSet:
    """Limit directions gamma(t)/|gamma(t)| over a family of explicit arcs.

    Each arc is evaluated at t in {1e-2, 1e-3, 1e-4}; the two successive
    direction differences must agree within ``tolerance`` (a Richardson-style
    convergence check), otherwise the arc is flagged and skipped.
    """
    if not arcs:
        raise ValueError("empty arc list")
    ts = (1e-2, 1e-3, 1e-4)
    kept: List[Tuple[float, ...]] = []
    rejected = 0
    for arc in arcs:
        dirs = []
        ok = True
        for t in ts:
            v = _to_real_vector(arc.evaluate(t))
            norm = float(np.linalg.norm(v))
            if norm < 1e-9:
                ok = False
                break
            dirs.append(v / norm)
        if not ok:
            rejected += 1
            continue
        # linear-in-t error model: extrapolate the limit from each scale pair
        # and require the two extrapolations to agree
        def extrapolate(d_coarse, d_fine, t_coarse, t_fine):
            return d_fine + (d_fine - d_coarse) * (t_fine / (t_coarse - t_fine))

        la = extrapolate(dirs[0], dirs[1], ts[0], ts[1])
        lb = extrapolate(dirs[1], dirs[2], ts[1], ts[2])
        if float(np.linalg.norm(la - lb)) > tolerance:
            rejected += 1
            continue
        limit = lb / np.linalg.norm(lb)
        cand = tuple(float(x) for x in limit)
        if all(np.linalg.norm(np.array(cand) - np.array(d)) > tolerance
               for d in kept):
            kept.append(cand)
    return DirectionSet(tuple(kept), tolerance, rejected)


def direction_annihilates_leading_forms(F: PolyMap,
                                        direction: Sequence[float],
                                        tol: float = 1e-6) -> bool:
    """Check each leading form vanishes (within tol) at a unit direction."""
    top = leading_map(F)
    z = [complex(direction[2 * j], direction[2 * j + 1]) for j in range(F.n)]
    return all(abs(c.evaluate_complex(z)) <= tol for c in top.components)


# ---------------------------------------------------------------------------
# dimension bound for the leading zero locus (n = 2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DimBoundReport:
    rank: int
    condition_holds: bool
    sphere_points: int
    estimated_local_dim: Optional[int]
    passed: bool
    detail: str


def _unit_sphere_solutions(F: PolyMap, samples_per_line: int = 24
                           ) -> List[List[complex]]:
    """Points of the leading zero locus on the unit sphere, for n = 2.

    The locus is a union of complex lines through the origin; each line is
    found from the dehomogenized univariate gcd, then sampled along its
    phase circle intersection with S^3.
    """
    top = leading_map(F)
    x, y = top.variables
    f1, f2 = top.components
    lines: List[Tuple[complex, complex]] = []

    def gcd_roots(amain: str, aother: str) -> List[complex]:
        sub1 = f1.specialize({amain: gr(1)})
        sub2 = f2.specialize({amain: gr(1)})
        if sub1.is_zero() and sub2.is_zero():
            return []
        try:
            _, c1 = sub1.univariate()
            _, c2 = sub2.univariate()
        except PolyError:
            return []
        if sub1.is_zero():
            g = c2
        elif sub2.is_zero():
            g = c1
        else:
            g = univariate_gcd(c1, c2)
        if len(g) <= 1:
            return []
        dense = [c.to_complex() for c in g]
        return [complex(r) for r in np.roots(dense[::-1])]

    for w in gcd_roots(x, y):
        lines.append((1 + 0j, w))
    # the direction with first coordinate zero
    zdir_vals = [f1.evaluate_complex([0j, 1 + 0j]), f2.evaluate_complex([0j, 1 + 0j])]
    if max(abs(v) for v in zdir_vals) < 1e-12:
        lines.append((0j, 1 + 0j))

    pts: List[List[complex]] = []
    for (a, b) in lines:
        norm = (abs(a) ** 2 + abs(b) ** 2) ** 0.5
        a, b = a / norm, b / norm
        for k in range(samples_per_line):
            phase = np.exp(2j * np.pi * k / samples_per_line)
            pts.append([a * phase, b * phase])
    return pts


def dim_bound_check(F: PolyMap, trials: int = 8, seed: int = 0) -> DimBoundReport:
    """Verify dim(V intersect unit sphere) <= 1 when the rank condition holds.

    V is the common zero locus of the leading forms.  For n = 2 the sphere
    trace is sampled exactly along its phase circles and the local dimension
    is estimated by PCA over small neighbourhoods.
    """
    if F.n != 2:
        raise PolyError("dimension bound check implemented for n = 2 only")
    rr = leading_rank(F, trials=trials, seed=seed)
    pts = _unit_sphere_solutions(F)
    if not pts:
        return DimBoundReport(rr.rank, rr.condition_holds, 0, None, True,
                              "sphere trace empty")
    real_pts = np.array([_to_real_vector(p) for p in pts])
    # local PCA: dimension = number of singular values above scale threshold
    dims = []
    for i in range(len(real_pts)):
        d = np.linalg.norm(real_pts - real_pts[i], axis=1)
        nbrs = real_pts[(d > 1e-12) & (d < 0.6)]
        if len(nbrs) < 2:
            continue
        centered = nbrs - nbrs.mean(axis=0)
        sv = np.linalg.svd(centered, compute_uv=False)
        scale = sv[0] if sv[0] > 0 else 1.0
        dims.append(int((sv / scale > 0.2).sum()))
    est = max(dims) if dims else 0
    passed = (not rr.condition_holds) or est <= 1
    return DimBoundReport(rr.rank, rr.condition_holds, len(real_pts), est,
                          passed, f"local PCA dimension {est}")
